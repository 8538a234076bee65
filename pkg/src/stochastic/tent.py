"""
psi-Tent chaotic map: skew tent map split at a, shifted by a small psi and
wrapped into [0, 1). a = 0.5 with psi = 0 is the plain tent map.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TentParams:
    a: float = 0.7
    # population size N; psi = uniform(0,1) / psi_scale
    psi_scale: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"tent breakpoint a must be in (0, 1), got {self.a}")
        if self.psi_scale < 1:
            raise ValueError(f"psi_scale must be >= 1, got {self.psi_scale}")


def draw_psi(params: TentParams, rng) -> float:
    """psi = rand(0,1) / N, drawn once per initialization."""
    return float(rng.random()) / params.psi_scale


def tent_next(x: float, params: TentParams, psi: float) -> float:
    """One psi-Tent step; result in [0, 1)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"tent map input must be in [0, 1], got {x}")
    if x <= params.a:
        y = x / params.a
    else:
        y = (1.0 - x) / (1.0 - params.a)
    return (y + psi) % 1.0


def tent_map_array(x: np.ndarray, params: TentParams, psi: float) -> np.ndarray:
    """Vectorised tent_next over an array of values in [0, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("tent map input must be in [0, 1]")
    y = np.where(x <= params.a, x / params.a, (1.0 - x) / (1.0 - params.a))
    return np.mod(y + psi, 1.0)


def tent_sequence(x0: float, params: TentParams, psi: float, n: int) -> np.ndarray:
    """n iterates starting after x0: out[0] = tent_next(x0), out[i+1] = tent_next(out[i])."""
    if n < 1:
        raise ValueError(f"sequence length must be >= 1, got {n}")
    out = np.empty(n, dtype=float)
    x = x0
    for i in range(n):
        x = tent_next(x, params, psi)
        out[i] = x
    return out
