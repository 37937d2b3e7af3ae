"""Seeded Poisson draws for obstacle-encounter counts."""

import math

import numpy as np


def _check(lam):
    if not (lam >= 0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be a finite value >= 0, got {lam!r}")


def sample_encounters(lam: float, rng: np.random.Generator) -> int:
    """One Poisson(lam) draw from ``rng``."""
    _check(lam)
    if lam == 0:
        return 0
    return int(rng.poisson(lam))


def sample_encounters_batch(lam: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent Poisson(lam) draws as an int64 array."""
    _check(lam)
    if size < 0:
        raise ValueError(f"size must be >= 0, got {size!r}")
    if lam == 0:
        return np.zeros(size, dtype=np.int64)
    return rng.poisson(lam, size).astype(np.int64)
