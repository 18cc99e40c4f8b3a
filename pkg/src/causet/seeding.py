"""Deterministic substream derivation.

Every stochastic quantity in the package traces back to a single master
seed through ``substream``; results are therefore independent of worker
count and scheduling.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream identified by an integer key path."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)
