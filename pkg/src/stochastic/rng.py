"""
Seeded random streams. One master seed per experiment; every run cell gets its
own generator derived from (master seed, method, problem, run index).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (next_state, output)."""
    state = (state + _GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(master_seed: int, *keys: Any) -> int:
    """64-bit seed from a master seed and any number of labels (order matters)."""
    h = hashlib.sha256()
    h.update(str(int(master_seed) & MASK64).encode("utf-8"))
    for key in keys:
        h.update(b"\x1f")
        h.update(str(key).encode("utf-8"))
    state = int.from_bytes(h.digest()[:8], "little")
    _, out = splitmix64(state)
    return out


@dataclass
class SeededRng:
    """Single-owner random stream; identical seed gives an identical stream."""

    seed: int
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.seed = int(self.seed) & MASK64
        self.generator = np.random.default_rng(self.seed)

    def random(self, size: int | tuple[int, ...] | None = None) -> Any:
        """Uniform in [0, 1)."""
        return self.generator.random(size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size: int | tuple[int, ...] | None = None) -> Any:
        return self.generator.uniform(low, high, size)

    def normal(self, loc: float = 0.0, scale: float = 1.0, size: int | tuple[int, ...] | None = None) -> Any:
        return self.generator.normal(loc, scale, size)

    def integers(self, low: int, high: int | None = None, size: int | tuple[int, ...] | None = None) -> Any:
        return self.generator.integers(low, high, size)

    def signs(self, size: int) -> np.ndarray:
        """Independent +1/-1 entries."""
        return self.generator.integers(0, 2, size) * 2 - 1

    def choice(self, n: int, size: int, replace: bool = False) -> np.ndarray:
        return self.generator.choice(n, size=size, replace=replace)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def spawn(self, n: int) -> list["SeededRng"]:
        """n child streams by splitmix64 jumps from this seed; does not consume this stream."""
        children = []
        state = self.seed
        for _ in range(n):
            state, out = splitmix64(state)
            children.append(SeededRng(out))
        return children
