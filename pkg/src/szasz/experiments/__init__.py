"""Worked examples, randomized soundness checks, Monte Carlo and grid sweeps."""
from __future__ import annotations

from .cmv import cmv_limit, cmv_sequence, cn_lower_bound_check
from .examples import ExampleReport, run_example
from .fuzz import FuzzReport, fuzz
from .montecarlo import MonteCarloResult, RandomModel, montecarlo_random_d
from .sweep import SweepRow, parse_grid, sweep
