"""Optimizer: sparrow search (SSA) and its Tent-Levy variant (TFSSA)."""
from .types import (
    COMPONENTS,
    VARIANTS,
    Flock,
    ObjectiveContract,
    OptimizerConfig,
    RunRecord,
    round_half_up,
)
from .phases import (
    EPSILON,
    Move,
    adaptive_weight,
    apply_move,
    best_mutation_step,
    evaluate_position,
    init_population,
    levy_mutation_step,
    patroller_count,
    patroller_update,
    producer_update,
    scrounger_update,
)
from .sparrow import run

__all__ = [
    "COMPONENTS",
    "VARIANTS",
    "Flock",
    "ObjectiveContract",
    "OptimizerConfig",
    "RunRecord",
    "round_half_up",
    "EPSILON",
    "Move",
    "adaptive_weight",
    "apply_move",
    "best_mutation_step",
    "evaluate_position",
    "init_population",
    "levy_mutation_step",
    "patroller_count",
    "patroller_update",
    "producer_update",
    "scrounger_update",
    "run",
]
