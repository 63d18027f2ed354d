from concurrent.futures import ThreadPoolExecutor
from logging import (
    INFO,
    WARNING,
    FileHandler,
    StreamHandler,
    basicConfig,
    getLogger,
)
from os import cpu_count

getLogger("asyncio").setLevel(WARNING)

LOGGER = getLogger(__name__)

cpu_no = cpu_count() or 1
workers = max(1, cpu_no // 2)

THREAD_POOL = ThreadPoolExecutor(max_workers=workers)


def setup_logging(log_file="log.txt", level=INFO):
    handlers = [StreamHandler()]
    if log_file:
        handlers.insert(0, FileHandler(log_file))
    basicConfig(
        format="[%(asctime)s] [%(levelname)s] - %(message)s",
        datefmt="%d-%b-%y %I:%M:%S %p",
        handlers=handlers,
        level=level,
        force=True,
    )
