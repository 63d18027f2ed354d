from asyncio import get_running_loop
from functools import partial

from ... import THREAD_POOL


async def sync_to_async(func, *args, **kwargs):
    pfunc = partial(func, *args, **kwargs)
    return await get_running_loop().run_in_executor(THREAD_POOL, pfunc)


def parse_values(text, separator=","):
    """Float list of a `sweep --values` argument."""
    return [float(item) for item in text.split(separator) if item.strip()]
