from time import time

from .. import LOGGER
from ..helper.ext_utils.bot_utils import sync_to_async
from ..helper.ext_utils.files_utils import write_summary, write_trajectory
from ..helper.ext_utils.status_utils import build_summary, failed_checks, get_readable_time
from ..helper.sim_utils.assembly import Scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2


async def execute(config, out_dir):
    """Runs one scenario into out_dir; returns (exit code, results or None)."""
    start = time()
    LOGGER.info(f"Running {config.scenario} (t_f={config.t_f}, eta={config.eta}) into {out_dir}")
    try:
        scenario = Scenario.build(config)
        traj = await sync_to_async(scenario.run)
        results = await sync_to_async(build_summary, scenario, traj)
        await write_trajectory(out_dir, config, traj)
        await write_summary(out_dir, config, results)
    except Exception as e:
        LOGGER.error(f"Run of {config.scenario} failed: {e.__class__.__name__}: {e}")
        return EXIT_ERROR, None
    elapsed = get_readable_time(time() - start)
    failed = failed_checks(results)
    if failed:
        LOGGER.warning(f"Run finished in {elapsed} but checks failed: {', '.join(failed)}")
        return EXIT_CHECK_FAILED, results
    LOGGER.info(f"Run finished in {elapsed}: final_error={results['final_error']:.3e}, max|u|={results['max_abs_u']:.4g}")
    return EXIT_OK, results


async def run(config, out_dir):
    code, _ = await execute(config, out_dir)
    return code
