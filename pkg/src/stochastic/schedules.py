"""Iteration-dependent coefficients for the Levy roulette and the best-individual mutation."""
from __future__ import annotations

import math


def _check(t: float, t_max: float) -> None:
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if not 0 <= t <= t_max:
        raise ValueError(f"iteration {t} outside [0, {t_max}]")


def inertia_sigma(t: float, t_max: float) -> float:
    """sigma = 1 - t/T; Levy mutation of a sparrow fires when rand > sigma."""
    _check(t, t_max)
    return 1.0 - t / t_max


def mutation_radius_r(t: float, t_max: float) -> float:
    """r = tanh(2(1 - t/T)); the best individual is tent-mutated when rand < r."""
    _check(t, t_max)
    return math.tanh(2.0 * (1.0 - t / t_max))
