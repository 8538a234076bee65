"""
Levy-flight steps via Mantegna's construction: u / |v|^(1/alpha),
u ~ N(0, sigma_u^2), v ~ N(0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma


@dataclass(frozen=True)
class LevyParams:
    alpha: float = 1.5

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"Levy stability index must be in (0, 2], got {self.alpha}")


def mantegna_sigma(alpha: float) -> float:
    """sigma_u for Mantegna's algorithm. alpha = 2 is the Gaussian limit and returns 1."""
    if alpha == 2.0:
        return 1.0
    num = gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0)
    den = gamma((1.0 + alpha) / 2.0) * alpha * 2.0 ** ((alpha - 1.0) / 2.0)
    return float((num / den) ** (1.0 / alpha))


def levy_steps(params: LevyParams, rng, size: int | tuple[int, ...]) -> np.ndarray:
    if params.alpha == 2.0:
        # sin(pi) kills the Mantegna scale; sample the Gaussian limit directly
        return np.asarray(rng.normal(0.0, 1.0, size), dtype=float)
    sigma_u = mantegna_sigma(params.alpha)
    u = np.asarray(rng.normal(0.0, sigma_u, size), dtype=float)
    v = np.asarray(rng.normal(0.0, 1.0, size), dtype=float)
    return u / np.abs(v) ** (1.0 / params.alpha)


def levy_sample(params: LevyParams, rng) -> float:
    """A single Levy step."""
    return float(levy_steps(params, rng, 1)[0])
