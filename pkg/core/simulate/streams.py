"""
Random Streams
==============
Counter-based generators keyed by (seed, stream, replicate index).

A replicate's draws depend only on its key, so results do not change with
the number of workers or the order in which replicates run.
"""

import numpy as np

REPLICATE_STREAM = 0   # labels and cell counts
DESIGN_STREAM = 1      # designed totals, drawn once per scenario
AUXILIARY_STREAM = 2   # randomisation of discrete p-values


def stream_rng(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    """Philox generator for one (seed, stream, index) key."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream, index])))


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return stream_rng(seed, REPLICATE_STREAM, index)


def design_rng(seed: int) -> np.random.Generator:
    return stream_rng(seed, DESIGN_STREAM)


def auxiliary_rng(seed: int, index: int) -> np.random.Generator:
    return stream_rng(seed, AUXILIARY_STREAM, index)


__all__ = [
    'REPLICATE_STREAM',
    'DESIGN_STREAM',
    'AUXILIARY_STREAM',
    'stream_rng',
    'replicate_rng',
    'design_rng',
    'auxiliary_rng',
]
