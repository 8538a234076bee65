"""
Optimizer data types: objective contract, flock state, hyper-parameters, run record.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Literal

import numpy as np

from ..stochastic import LevyParams, TentParams

Variant = Literal["SSA", "TFSSA"]
VARIANTS: tuple[str, ...] = ("SSA", "TFSSA")
COMPONENTS: tuple[str, ...] = (
    "chaotic_init",
    "adaptive_weight",
    "adaptive_patrollers",
    "levy_mutation",
    "best_mutation",
)


def round_half_up(x: float) -> int:
    """Round with .5 going up (2.5 -> 3), unlike Python's round()."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True, eq=False)
class ObjectiveContract:
    """Box-bounded minimisation problem. evaluate must be deterministic and side-effect free."""

    dim: int
    lower: np.ndarray
    upper: np.ndarray
    evaluate: Callable[[np.ndarray], float]
    name: str = "objective"

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"objective dimension must be >= 1, got {self.dim}")
        lower = np.broadcast_to(np.asarray(self.lower, dtype=float), (self.dim,)).copy()
        upper = np.broadcast_to(np.asarray(self.upper, dtype=float), (self.dim,)).copy()
        if np.any(lower > upper):
            raise ValueError(f"{self.name}: lower bound exceeds upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass
class Flock:
    """N x D positions plus fitness; fitness[i] == evaluate(positions[i]) after every sync."""

    positions: np.ndarray
    fitness: np.ndarray
    eval_count: int = 0
    psi: float = 0.0

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.fitness))

    @property
    def worst_index(self) -> int:
        return int(np.argmax(self.fitness))

    @property
    def best_position(self) -> np.ndarray:
        return self.positions[self.best_index]

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self.best_index])

    @property
    def worst_position(self) -> np.ndarray:
        return self.positions[self.worst_index]

    @property
    def worst_fitness(self) -> float:
        return float(self.fitness[self.worst_index])

    def order(self) -> np.ndarray:
        """Indices sorted by ascending fitness; ties keep index order."""
        return np.argsort(self.fitness, kind="stable")


@dataclass(frozen=True)
class OptimizerConfig:
    """
    SSA / TFSSA hyper-parameters. The five TFSSA components default to the
    variant (all on for TFSSA, all off for SSA); set one explicitly for ablations.
    """

    n_sparrows: int = 7
    t_max: int | None = 100
    max_evaluations: int | None = None
    pd_ratio: float = 0.2
    sd_max_ratio: float = 0.2
    sd_min_ratio: float = 0.1
    st: float = 0.8
    tent: TentParams | None = None
    levy: LevyParams = field(default_factory=LevyParams)
    w0: float = 1.0
    c: float = 0.9
    variant: str = "TFSSA"
    chaotic_init: bool | None = None
    adaptive_weight: bool | None = None
    adaptive_patrollers: bool | None = None
    levy_mutation: bool | None = None
    best_mutation: bool | None = None

    def __post_init__(self) -> None:
        if self.tent is None:
            object.__setattr__(self, "tent", TentParams(a=0.7, psi_scale=max(1, self.n_sparrows)))
        problems = self.problems()
        if problems:
            raise ValueError("invalid optimizer config: " + "; ".join(problems))

    def problems(self) -> list[str]:
        out: list[str] = []
        if self.variant not in VARIANTS:
            out.append(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.n_sparrows < 2:
            out.append(f"n_sparrows must be >= 2, got {self.n_sparrows}")
        if self.t_max is None and self.max_evaluations is None:
            out.append("either t_max or max_evaluations is required")
        if self.t_max is not None and self.t_max < 1:
            out.append(f"t_max must be >= 1, got {self.t_max}")
        if not 0.0 < self.pd_ratio < 1.0:
            out.append(f"pd_ratio must be in (0, 1), got {self.pd_ratio}")
        if not 0.0 <= self.sd_min_ratio <= self.sd_max_ratio <= 0.2:
            out.append(
                f"need 0 <= sd_min_ratio <= sd_max_ratio <= 0.2, got {self.sd_min_ratio}, {self.sd_max_ratio}"
            )
        if not 0.5 <= self.st <= 1.0:
            out.append(f"st must be in [0.5, 1], got {self.st}")
        if self.w0 <= 0.0:
            out.append(f"w0 must be > 0, got {self.w0}")
        if not 0.0 < self.c <= 1.0:
            out.append(f"c must be in (0, 1], got {self.c}")
        if self.variant in VARIANTS and self.max_evaluations is not None and self.n_sparrows >= 2:
            if self.max_evaluations - self.n_sparrows < self.evals_per_iteration():
                out.append(f"max_evaluations {self.max_evaluations} does not cover one iteration")
        return out

    def _flag(self, value: bool | None) -> bool:
        return self.variant == "TFSSA" if value is None else bool(value)

    @property
    def use_chaotic_init(self) -> bool:
        return self._flag(self.chaotic_init)

    @property
    def use_adaptive_weight(self) -> bool:
        return self._flag(self.adaptive_weight)

    @property
    def use_adaptive_patrollers(self) -> bool:
        return self._flag(self.adaptive_patrollers)

    @property
    def use_levy_mutation(self) -> bool:
        return self._flag(self.levy_mutation)

    @property
    def use_best_mutation(self) -> bool:
        return self._flag(self.best_mutation)

    def components(self) -> dict[str, bool]:
        return {name: getattr(self, f"use_{name}") for name in COMPONENTS}

    @property
    def producer_count(self) -> int:
        return min(self.n_sparrows - 1, max(1, round_half_up(self.pd_ratio * self.n_sparrows)))

    @property
    def pn_max(self) -> int:
        return min(self.n_sparrows, round_half_up(self.sd_max_ratio * self.n_sparrows))

    @property
    def pn_min(self) -> int:
        return min(self.pn_max, round_half_up(self.sd_min_ratio * self.n_sparrows))

    def evals_per_iteration(self) -> int:
        """Upper bound on fitness evaluations in one loop iteration."""
        n = self.n_sparrows + self.pn_max
        if self.use_levy_mutation:
            n += self.n_sparrows
        if self.use_best_mutation:
            n += 1
        return n

    @property
    def iterations(self) -> int:
        """Schedule length T used by sigma, r, w and PN; the tighter of t_max and the evaluation budget."""
        limits = []
        if self.t_max is not None:
            limits.append(self.t_max)
        if self.max_evaluations is not None:
            limits.append(max(1, (self.max_evaluations - self.n_sparrows) // self.evals_per_iteration()))
        assert limits
        return min(limits)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "n_sparrows": self.n_sparrows,
            "t_max": self.t_max,
            "max_evaluations": self.max_evaluations,
            "pd_ratio": self.pd_ratio,
            "sd_max_ratio": self.sd_max_ratio,
            "sd_min_ratio": self.sd_min_ratio,
            "st": self.st,
            "tent_a": self.tent.a if self.tent else None,
            "levy_alpha": self.levy.alpha,
            "w0": self.w0,
            "c": self.c,
            **self.components(),
        }


@dataclass
class RunRecord:
    best_position: np.ndarray
    best_fitness: float
    # history[0] is the best after initialisation, then one entry per iteration
    history: list[float]
    evals_used: int
    seed: int
    iterations: int = 0
    variant: str = "TFSSA"

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "variant": self.variant,
            "best_fitness": self.best_fitness,
            "best_position": [float(v) for v in self.best_position],
            "evals_used": self.evals_used,
            "iterations": self.iterations,
            "history": [float(v) for v in self.history],
        }
