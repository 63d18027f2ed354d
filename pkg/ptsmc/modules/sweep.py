from asyncio import Semaphore, gather
from os import path as ospath

from .. import LOGGER
from ..core.config_manager import KEY_TYPES, AppConfig, format_value
from ..helper.ext_utils.files_utils import format_float, write_sweep
from .run import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, execute

STATUS = {EXIT_OK: "ok", EXIT_CHECK_FAILED: "check_failed", EXIT_ERROR: "error"}


def _cell(value):
    return "" if value is None else format_float(value)


async def sweep(base, key, values, out_dir):
    if not values:
        LOGGER.error("Sweep needs at least one value")
        return EXIT_ERROR
    if key not in base.keys or KEY_TYPES[key] not in (float, int):
        LOGGER.error(f"Sweep key {key!r} is not a numeric parameter of {base.scenario}")
        return EXIT_ERROR
    # one output directory per distinct value
    unique = list(dict.fromkeys(float(value) for value in values))
    if len(unique) < len(values):
        LOGGER.warning(f"Sweep drops {len(values) - len(unique)} repeated value(s) of {key}")
    values = unique

    limit = Semaphore(max(1, AppConfig.SWEEP_WORKERS))

    async def one(value):
        config = base.copy()
        try:
            config.set(key, value)
            config.validate()
        except ValueError as e:
            LOGGER.error(f"Sweep {key}={value}: {e}")
            return [key, format_value(float(value)), STATUS[EXIT_ERROR], EXIT_ERROR, "", "", ""]
        label = format_value(config.get(key))
        async with limit:
            LOGGER.info(f"Sweep entry {key}={label}")
            code, results = await execute(config, ospath.join(out_dir, f"{key}_{label}"))
        results = results or {}
        return [
            key,
            label,
            STATUS[code],
            code,
            _cell(results.get("final_error")),
            _cell(results.get("max_abs_u")),
            _cell(results.get("initial_abs_u")),
        ]

    rows = await gather(*(one(value) for value in values))
    await write_sweep(out_dir, rows)
    codes = {row[3] for row in rows}
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    return EXIT_CHECK_FAILED if EXIT_CHECK_FAILED in codes else EXIT_OK
