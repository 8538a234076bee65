"""Binary feature subsets decoded from continuous positions in [-1, 1]^D."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class FeatureMask:
    bits: tuple[int, ...]
    selected_count: int = field(init=False)

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("mask bits must be 0 or 1")
        count = sum(bits)
        if count < 1:
            raise ValueError("mask must select at least one feature")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "selected_count", count)

    @classmethod
    def from_indices(cls, indices: Sequence[int], dim: int) -> "FeatureMask":
        bits = [0] * dim
        for j in indices:
            bits[j] = 1
        return cls(tuple(bits))

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.bits, dtype=bool))

    @property
    def ratio(self) -> float:
        return self.selected_count / len(self.bits)

    def names(self, feature_names: Sequence[str]) -> list[str]:
        return [str(feature_names[j]) for j in self.indices]

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)


def binarize(position: np.ndarray, threshold: float = 0.5) -> FeatureMask:
    """Bit j is set iff (x_j + 1) / 2 > threshold; an empty result keeps the largest coordinate."""
    mapped = (np.asarray(position, dtype=float) + 1.0) / 2.0
    bits = (mapped > threshold).astype(int)
    if not bits.any():
        bits[int(np.argmax(mapped))] = 1
    return FeatureMask(tuple(bits.tolist()))
