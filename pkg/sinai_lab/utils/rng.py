"""Counter-keyed random streams.

Every random quantity in the lab is a pure function of the master seed and
an integer key (site block, stream tag, replicate index). Site streams are
split in blocks of ``BLOCK_SIZE`` consecutive sites; each block owns its own
Philox generator so a window can be extended in either direction without
touching the sites already drawn.
"""
from functools import lru_cache

import numpy as np

from .enums import Streams

BLOCK_SIZE = 1024


def zigzag(value: int) -> int:
    """Map an integer onto a non-negative key (0, -1, 1, -2, ... -> 0, 1, 2, 3, ...)."""
    return 2 * value if value >= 0 else -2 * value - 1


def stream_generator(seed: int, *keys: int) -> np.random.Generator:
    """Return a Philox generator keyed by the seed and the given integers."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def replicate_seed(seed: int, stream: Streams, index: int) -> int:
    """Derive the 64-bit seed of one replicate of a stream.

    Args:
        seed (int): The master seed.
        stream (Streams): The stream tag.
        index (int): The replicate index.

    Returns:
        int: A seed that depends only on the three inputs.
    """
    words = np.random.SeedSequence([seed, stream.value, index]).generate_state(2, dtype=np.uint32)
    return (int(words[0]) << 32) | int(words[1])


@lru_cache(maxsize=8192)
def block_uniforms(master_seed: int, block: int) -> np.ndarray:
    """Uniforms of the sites ``block * BLOCK_SIZE ... (block + 1) * BLOCK_SIZE - 1``."""
    generator = stream_generator(master_seed, Streams.ENVIRONMENT.value, zigzag(block))
    uniforms = generator.random(BLOCK_SIZE)
    uniforms.setflags(write=False)
    return uniforms


def site_uniforms(master_seed: int, lo: int, hi: int) -> np.ndarray:
    """Return the site uniforms for every site of ``[lo, hi]``."""
    first, last = lo // BLOCK_SIZE, hi // BLOCK_SIZE
    blocks = [block_uniforms(master_seed, block) for block in range(first, last + 1)]
    joined = np.concatenate(blocks) if len(blocks) > 1 else blocks[0]
    offset = lo - first * BLOCK_SIZE
    return joined[offset:offset + hi - lo + 1]
