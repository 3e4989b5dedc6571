"""Monte Carlo for random factor sequences eventually meeting the location condition."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..conditions import SLACK
from ..poly import HypothesisError


@dataclass(frozen=True)
class RandomModel:
    """Complex Gaussian: independent ``N(0, stddev^2)`` real and imaginary parts around ``mean``."""

    mean: complex
    stddev: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mean", complex(self.mean))
        if not math.isfinite(self.stddev) or self.stddev < 0:
            raise ValueError("stddev must be finite and non-negative")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        return self.mean + self.stddev * z


@dataclass(frozen=True)
class MonteCarloResult:
    d_max: int
    counts: np.ndarray  # counts[d - 1] = trials whose first admissible d is d
    overflow: int
    trials: int

    @property
    def successes(self) -> int:
        return int(self.counts.sum())

    @property
    def success_fraction(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def histogram(self) -> dict[int, int]:
        return {d + 1: int(c) for d, c in enumerate(self.counts) if c}

    def to_json(self) -> dict:
        return {"trials": self.trials, "d_max": self.d_max, "overflow": self.overflow,
                "success_fraction": self.success_fraction,
                "histogram": {str(k): v for k, v in self.histogram().items()}}


def first_admissible_d(b: np.ndarray, slack: float = SLACK) -> int | None:
    """Smallest ``d0`` such that every prefix ``b[:d]`` with ``d0 <= d <= len(b)`` is admissible.

    Admissible means ``(d-1) mean(Im b)^2 - var(Im b) >= -slack``. A single
    factor is always admissible, so the first-hit reading would be trivially
    ``1``; the tail reading asks for the condition to have settled.
    Returns ``None`` when the last prefix still fails.
    """
    im = np.imag(b)
    d = np.arange(1, im.size + 1)
    s = np.cumsum(im)
    q = np.cumsum(im * im)
    mean = s / d
    var = np.maximum(q / d - mean * mean, 0.0)
    ok = (d - 1) * mean * mean - var >= -slack
    if not ok[-1]:
        return None
    bad = np.flatnonzero(~ok)
    return 1 if bad.size == 0 else int(bad[-1]) + 2


def montecarlo_random_d(model: RandomModel, trials: int, d_max: int) -> MonteCarloResult:
    """Histogram of the first admissible factor count over independent trials.

    Trial ``t`` draws from its own generator spawned from ``model.seed``, so the
    result does not depend on execution order.
    """
    if model.mean.imag == 0:
        raise HypothesisError("the mean must be non-real")
    if trials < 1 or d_max < 1:
        raise ValueError("trials and d_max must be positive")
    counts = np.zeros(d_max, dtype=np.int64)
    overflow = 0
    for child in np.random.SeedSequence(int(model.seed)).spawn(trials):
        b = model.draw(np.random.default_rng(child), d_max)
        d0 = first_admissible_d(b)
        if d0 is None:
            overflow += 1
        else:
            counts[d0 - 1] += 1
    return MonteCarloResult(d_max, counts, overflow, trials)
