"""Monte Carlo cross-check of the closed-form Poisson expectations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from ..analytic import poisson_reciprocal_expectation
from ..sim.poisson import sample_encounters_batch

MIN_SAMPLES = 10_000


@dataclass(frozen=True)
class ValidationRow:
    lam: float
    analytic: float        # E[1/(T+1)] in closed form
    empirical: float       # sample mean of 1/(T+1)
    samples: int
    rel_error: float
    mean_t: float          # sample mean of T
    mean_rel_error: float  # |mean_t - lam| / lam, 0 at lam = 0
    var_t: float           # sample variance of T (n - 1 divisor)


@dataclass(frozen=True)
class ValidationReport:
    seed: int
    rows: List[ValidationRow]


def validate_analytic(lambdas, samples: int = 1_000_000, seed: int = 0) -> ValidationReport:
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}, got {samples}")
    for lam in lambdas:
        if not lam >= 0:
            raise ValueError(f"lambda must be >= 0, got {lam!r}")
    streams = np.random.SeedSequence(seed).spawn(len(lambdas))
    rows = []
    for lam, ss in zip(lambdas, streams):
        lam = float(lam)
        t = sample_encounters_batch(lam, samples, np.random.default_rng(ss))
        analytic = poisson_reciprocal_expectation(lam)
        empirical = float(np.mean(1.0 / (t + 1.0)))
        mean_t = float(np.mean(t))
        rows.append(ValidationRow(
            lam=lam,
            analytic=analytic,
            empirical=empirical,
            samples=samples,
            rel_error=abs(empirical - analytic) / analytic,
            mean_t=mean_t,
            mean_rel_error=abs(mean_t - lam) / lam if lam > 0 else abs(mean_t),
            var_t=float(np.var(t, ddof=1)),
        ))
    return ValidationReport(seed, rows)
