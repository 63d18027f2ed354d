# ruff: noqa: E402

from .core.config_manager import AppConfig

AppConfig.load()

from argparse import ArgumentParser
from asyncio import new_event_loop
from datetime import datetime
from logging import Formatter
from sys import exit as sys_exit
from time import localtime

from pytz import timezone

from . import LOGGER, setup_logging
from .core.config_manager import load_config
from .helper.ext_utils.bot_utils import parse_values
from .modules.presets import preset_lines
from .modules.run import EXIT_ERROR, run
from .modules.sweep import sweep
from .version import get_version


def changetz_factory(name):
    try:
        tz = timezone(name)
    except Exception:
        from pytz import utc

        tz = utc

    def changetz(*args):
        try:
            return datetime.now(tz).timetuple()
        except Exception:
            return localtime()

    return changetz


def build_parser():
    parser = ArgumentParser(
        prog="ptsmc",
        description="Prescribed-time sliding-mode control simulations",
    )
    parser.add_argument("--version", action="version", version=get_version())
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="simulate one scenario or preset")
    sweep_parser = commands.add_parser("sweep", help="repeat a scenario over parameter values")
    for sub in (run_parser, sweep_parser):
        sub.add_argument("--scenario", help="scenario kind or preset name")
        sub.add_argument("--config", help="key = value configuration file")
        sub.add_argument("--out", required=True, help="output directory")
    sweep_parser.add_argument("--key", required=True, help="numeric parameter to vary")
    sweep_parser.add_argument("--values", required=True, help="comma separated values")

    commands.add_parser("presets", help="list the built-in experiment presets")
    return parser


async def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        for line in preset_lines():
            print(line)
        return 0
    try:
        config = load_config(args.config, args.scenario)
    except (OSError, ValueError) as e:
        LOGGER.error(f"Configuration error: {e}")
        return EXIT_ERROR
    if args.command == "run":
        return await run(config, args.out)
    try:
        values = parse_values(args.values)
    except ValueError as e:
        LOGGER.error(f"Bad --values list {args.values!r}: {e}")
        return EXIT_ERROR
    return await sweep(config, args.key, values, args.out)


def cli(argv=None):
    setup_logging(AppConfig.LOG_FILE, AppConfig.LOG_LEVEL)
    Formatter.converter = changetz_factory(AppConfig.TIMEZONE)
    loop = new_event_loop()
    try:
        code = loop.run_until_complete(main(argv))
    finally:
        loop.close()
    sys_exit(code)


if __name__ == "__main__":
    cli()
