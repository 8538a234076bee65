"""
Seeded shifted/rotated test functions over the base families:
f(x) = base(R (x - shift) * scale + offset) + f_star on [-100, 100]^D.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..optimizer import ObjectiveContract
from ..stochastic import SeededRng, derive_seed
from .base import BASE_FUNCTIONS

SEARCH_RANGE = (-100.0, 100.0)
SHIFT_RANGE = 80.0
MAX_DIM = 100


@dataclass(frozen=True)
class _Family:
    f_star: float = 0.0
    scale: float = 1.0
    # base-space point where the base function has its minimum
    optimum: float = 0.0


FAMILIES: dict[str, _Family] = {
    "bent_cigar": _Family(f_star=100.0),
    "schwefel": _Family(f_star=1100.0),
    "lunacek_bi_rastrigin": _Family(f_star=700.0),
    "rosenbrock_griewank": _Family(f_star=1900.0),
    "rastrigin": _Family(),
    "griewank": _Family(scale=6.0),
    "ackley": _Family(),
    "sphere": _Family(),
    "rosenbrock": _Family(scale=0.02048, optimum=1.0),
}


def random_rotation(dim: int, rng: SeededRng) -> np.ndarray:
    """Orthogonal matrix from QR of a Gaussian matrix, columns sign-corrected by diag(R)."""
    q, r = np.linalg.qr(np.asarray(rng.normal(0.0, 1.0, (dim, dim)), dtype=float))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    family: str
    dim: int
    shift: np.ndarray
    rotation: np.ndarray
    f_star: float
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown function family {self.family!r}; known: {sorted(FAMILIES)}")
        if self.shift.shape != (self.dim,) or self.rotation.shape != (self.dim, self.dim):
            raise ValueError(f"shift/rotation shapes do not match dim {self.dim}")
        if np.any(np.abs(self.shift) > SEARCH_RANGE[1]):
            raise ValueError("shift lies outside the search range")
        if not np.allclose(self.rotation.T @ self.rotation, np.eye(self.dim), atol=1e-9):
            raise ValueError("rotation matrix is not orthogonal")

    @property
    def name(self) -> str:
        return f"{self.family}_D{self.dim}"

    def transform(self, x: np.ndarray) -> np.ndarray:
        fam = FAMILIES[self.family]
        return self.rotation @ (np.asarray(x, dtype=float) - self.shift) * fam.scale + fam.optimum

    def evaluate(self, x: np.ndarray) -> float:
        return BASE_FUNCTIONS[self.family](self.transform(x)) + self.f_star

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "dim": self.dim, "seed": self.seed}


def make_spec(family: str, dim: int, seed: int, *, rotate: bool = True, shift: bool = True) -> FunctionSpec:
    if family not in FAMILIES:
        raise ValueError(f"unknown function family {family!r}; known: {sorted(FAMILIES)}")
    if not 2 <= dim <= MAX_DIM:
        raise ValueError(f"dimension must be in [2, {MAX_DIM}], got {dim}")
    rng = SeededRng(derive_seed(seed, "benchfn", family, dim))
    shift_vec = np.asarray(rng.uniform(-SHIFT_RANGE, SHIFT_RANGE, dim), dtype=float) if shift else np.zeros(dim)
    rotation = random_rotation(dim, rng) if rotate else np.eye(dim)
    return FunctionSpec(
        family=family,
        dim=dim,
        shift=shift_vec,
        rotation=rotation,
        f_star=FAMILIES[family].f_star,
        seed=seed,
    )


def as_objective(spec: FunctionSpec) -> ObjectiveContract:
    lo, hi = SEARCH_RANGE
    return ObjectiveContract(
        dim=spec.dim,
        lower=np.full(spec.dim, lo),
        upper=np.full(spec.dim, hi),
        evaluate=spec.evaluate,
        name=spec.name,
    )


def make_function(family: str, dim: int, seed: int, *, rotate: bool = True, shift: bool = True) -> ObjectiveContract:
    """Seeded shifted/rotated objective on [-100, 100]^dim; evaluate(shift) == f_star."""
    return as_objective(make_spec(family, dim, seed, rotate=rotate, shift=shift))
