"""Benchmark functions: CEC base families with seeded shift and rotation."""
from .base import BASE_FUNCTIONS, base_eval
from .suite import FAMILIES, SEARCH_RANGE, FunctionSpec, as_objective, make_function, make_spec, random_rotation

__all__ = [
    "BASE_FUNCTIONS",
    "base_eval",
    "FAMILIES",
    "SEARCH_RANGE",
    "FunctionSpec",
    "as_objective",
    "make_function",
    "make_spec",
    "random_rotation",
]
