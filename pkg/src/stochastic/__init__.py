"""Stochastic: seeded streams, psi-Tent chaos, Levy steps, iteration schedules."""
from .rng import SeededRng, derive_seed, splitmix64
from .tent import TentParams, draw_psi, tent_next, tent_map_array, tent_sequence
from .levy import LevyParams, mantegna_sigma, levy_steps, levy_sample
from .schedules import inertia_sigma, mutation_radius_r

__all__ = [
    "SeededRng",
    "derive_seed",
    "splitmix64",
    "TentParams",
    "draw_psi",
    "tent_next",
    "tent_map_array",
    "tent_sequence",
    "LevyParams",
    "mantegna_sigma",
    "levy_steps",
    "levy_sample",
    "inertia_sigma",
    "mutation_radius_r",
]
