"""
Base test functions in their CEC closed forms. Every function has its global
minimum 0; rosenbrock at z = (1, ..., 1), all others at z = 0.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

_SCHWEFEL_OPT = 4.209687462275036e002


def bent_cigar(z: np.ndarray) -> float:
    return float(z[0] ** 2 + 1e6 * np.sum(z[1:] ** 2))


def _schwefel_raw(z: np.ndarray) -> float:
    d = len(z)
    z = z * 10.0 + _SCHWEFEL_OPT
    f = 0.0
    for zi in z:
        if zi > 500.0:
            m = 500.0 - np.fmod(zi, 500.0)
            f -= m * np.sin(np.sqrt(m))
            f += ((zi - 500.0) / 100.0) ** 2 / d
        elif zi < -500.0:
            m = np.fmod(np.abs(zi), 500.0)
            f -= (-500.0 + m) * np.sin(np.sqrt(500.0 - m))
            f += ((zi + 500.0) / 100.0) ** 2 / d
        else:
            f -= zi * np.sin(np.sqrt(np.abs(zi)))
    return float(f + 4.189828872724338e002 * d)


def schwefel(z: np.ndarray) -> float:
    """Modified Schwefel, re-zeroed at its optimum so the offset constant's rounding does not leak."""
    return _schwefel_raw(z) - _schwefel_raw(np.zeros_like(z))


def lunacek_bi_rastrigin(z: np.ndarray) -> float:
    d = len(z)
    mu0 = 2.5
    s = 1.0 - 1.0 / (2.0 * np.sqrt(d + 20.0) - 8.2)
    mu1 = -np.sqrt((mu0 ** 2 - 1.0) / s)
    u = 0.2 * z + mu0
    sphere_terms = min(float(np.sum((u - mu0) ** 2)), d + s * float(np.sum((u - mu1) ** 2)))
    return float(sphere_terms + 10.0 * np.sum(1.0 - np.cos(2.0 * np.pi * (u - mu0))))


def rosenbrock_griewank(z: np.ndarray) -> float:
    """Expanded Griewank of Rosenbrock over consecutive pairs, wrapping the last to the first."""
    u = z * 0.05 + 1.0
    nxt = np.roll(u, -1)
    temp = 100.0 * (u * u - nxt) ** 2 + (u - 1.0) ** 2
    return float(np.sum(temp * temp / 4000.0 - np.cos(temp) + 1.0))


def rastrigin(z: np.ndarray) -> float:
    u = z * 0.0512
    return float(np.sum(u ** 2 - 10.0 * np.cos(2.0 * np.pi * u) + 10.0))


def griewank(z: np.ndarray) -> float:
    i = np.arange(1, len(z) + 1)
    return float(np.sum(z ** 2) / 4000.0 - np.prod(np.cos(z / np.sqrt(i))) + 1.0)


def ackley(z: np.ndarray) -> float:
    d = len(z)
    a = np.exp(-0.2 * np.sqrt(np.sum(z ** 2) / d))
    b = np.exp(np.sum(np.cos(2.0 * np.pi * z)) / d)
    # grouped so the optimum evaluates to exactly 0
    return float(20.0 * (1.0 - a) + (np.e - b))


def sphere(z: np.ndarray) -> float:
    return float(np.sum(z ** 2))


def rosenbrock(z: np.ndarray) -> float:
    return float(np.sum(100.0 * (z[:-1] ** 2 - z[1:]) ** 2 + (z[:-1] - 1.0) ** 2))


BASE_FUNCTIONS: dict[str, Callable[[np.ndarray], float]] = {
    "bent_cigar": bent_cigar,
    "schwefel": schwefel,
    "lunacek_bi_rastrigin": lunacek_bi_rastrigin,
    "rosenbrock_griewank": rosenbrock_griewank,
    "rastrigin": rastrigin,
    "griewank": griewank,
    "ackley": ackley,
    "sphere": sphere,
    "rosenbrock": rosenbrock,
}


def base_eval(family: str, z: np.ndarray) -> float:
    """Closed-form value of a named base function."""
    try:
        fn = BASE_FUNCTIONS[family]
    except KeyError:
        raise ValueError(f"unknown function family {family!r}; known: {sorted(BASE_FUNCTIONS)}") from None
    return fn(np.asarray(z, dtype=float))
