"""Chunked replicate execution.

Replicates are split in chunks of a fixed size. Each chunk derives its
randomness from (seed, stream, replicate index) only and the chunk results are
merged in chunk order, so a run gives the same output for any thread count.
"""
import logging
from concurrent.futures import ProcessPoolExecutor

from ..const import CHUNK_SIZE

_LOGGER = logging.getLogger(__name__)


def chunk_bounds(total: int, size: int = CHUNK_SIZE, first: int = 0) -> list[tuple[int, int]]:
    """Split ``[first, first + total)`` into consecutive ``(start, stop)`` chunks."""
    return [(start, min(start + size, first + total)) for start in range(first, first + total, size)]


def run_chunks(worker, bounds: list[tuple[int, int]], threads: int, *args) -> list:
    """Evaluate ``worker(start, stop, *args)`` on every chunk.

    Args:
        worker: A module-level function (it is pickled for worker processes).
        bounds (list[tuple[int, int]]): The chunks.
        threads (int): Worker processes; 1 runs inline.
        *args: Extra arguments passed to every call.

    Returns:
        list: One result per chunk, in chunk order.
    """
    _LOGGER.debug("Running %d chunks of %s on %d workers", len(bounds), worker.__name__, threads)
    if threads <= 1 or len(bounds) <= 1:
        return [worker(start, stop, *args) for start, stop in bounds]
    with ProcessPoolExecutor(max_workers=min(threads, len(bounds))) as executor:
        futures = [executor.submit(worker, start, stop, *args) for start, stop in bounds]
        return [future.result() for future in futures]
