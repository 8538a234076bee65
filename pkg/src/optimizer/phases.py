"""
One function per flock update phase. Each phase returns a Move (target
indices plus clamped candidate positions computed from the current flock);
apply_move evaluates the candidates in order and keeps strict improvements.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..stochastic import (
    draw_psi,
    inertia_sigma,
    levy_sample,
    mutation_radius_r,
    tent_map_array,
    tent_sequence,
)
from .types import Flock, ObjectiveContract, OptimizerConfig, round_half_up

logger = logging.getLogger(__name__)

# smallest constant in the patroller step; keeps (f_i - f_w) + EPSILON non-zero
EPSILON = 1e-50


@dataclass
class Move:
    indices: np.ndarray
    candidates: np.ndarray
    phase: str

    @classmethod
    def empty(cls, dim: int, phase: str) -> "Move":
        return cls(np.empty(0, dtype=int), np.empty((0, dim)), phase)

    def __len__(self) -> int:
        return int(len(self.indices))


def evaluate_position(obj: ObjectiveContract, x: np.ndarray, phase: str, index: int) -> float:
    try:
        value = float(obj.evaluate(x))
    except Exception as e:
        raise RuntimeError(
            f"objective evaluation failed in {phase} phase for sparrow {index} of {obj.name}: {e}"
        ) from e
    if not np.isfinite(value):
        raise RuntimeError(
            f"objective returned non-finite value {value} in {phase} phase for sparrow {index} of {obj.name}"
        )
    return value


def apply_move(flock: Flock, obj: ObjectiveContract, move: Move) -> int:
    """Greedy sync: each candidate replaces its target only if strictly better. Returns accepted count."""
    accepted = 0
    for i, cand in zip(move.indices, move.candidates):
        f = evaluate_position(obj, cand, move.phase, int(i))
        flock.eval_count += 1
        if f < flock.fitness[i]:
            flock.positions[i] = cand
            flock.fitness[i] = f
            accepted += 1
    return accepted


def init_population(obj: ObjectiveContract, cfg: OptimizerConfig, rng) -> Flock:
    """
    Chaotic init maps one psi-Tent sequence of length N*D onto the box, row by row;
    otherwise positions are uniform in the box. psi is drawn only when a tent
    component is enabled.
    """
    n, d = cfg.n_sparrows, obj.dim
    assert cfg.tent is not None
    psi = draw_psi(cfg.tent, rng) if (cfg.use_chaotic_init or cfg.use_best_mutation) else 0.0
    if cfg.use_chaotic_init:
        x0 = float(rng.random())
        unit = tent_sequence(x0, cfg.tent, psi, n * d).reshape(n, d)
    else:
        unit = np.asarray(rng.random((n, d)), dtype=float)
    positions = obj.clamp(obj.lower + unit * (obj.upper - obj.lower))
    fitness = np.array([evaluate_position(obj, positions[i], "init", i) for i in range(n)], dtype=float)
    return Flock(positions=positions, fitness=fitness, eval_count=n, psi=psi)


def adaptive_weight(t: int, cfg: OptimizerConfig) -> float:
    """w = w0 * c^t"""
    if t < 0:
        raise ValueError(f"iteration must be >= 0, got {t}")
    return cfg.w0 * cfg.c ** t


def patroller_count(t: int, cfg: OptimizerConfig) -> int:
    """PN_max - Round((PN_max - PN_min) * t / T); hits both endpoints."""
    t_max = cfg.iterations
    if not 0 <= t <= t_max:
        raise ValueError(f"iteration {t} outside [0, {t_max}]")
    return cfg.pn_max - round_half_up((cfg.pn_max - cfg.pn_min) * t / t_max)


def producer_update(
    flock: Flock,
    obj: ObjectiveContract,
    t: int,
    cfg: OptimizerConfig,
    rng,
    order: np.ndarray | None = None,
) -> Move:
    if order is None:
        order = flock.order()
    pd = cfg.producer_count
    idx = order[:pd]
    x = flock.positions[idx]
    # ranks are 1-based so the best producer also contracts
    ranks = np.arange(1, pd + 1, dtype=float)
    r2 = float(rng.random())
    if r2 < cfg.st:
        w = adaptive_weight(t, cfg) if cfg.use_adaptive_weight else 1.0
        lam = 1.0 - np.asarray(rng.random(pd), dtype=float)
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            factor = np.exp(-ranks / (w * lam * cfg.iterations))
        cand = x * factor[:, None]
    else:
        q = np.asarray(rng.normal(0.0, 1.0, pd), dtype=float)
        cand = x + q[:, None]
    return Move(idx.copy(), obj.clamp(cand), "producer")


def scrounger_update(
    flock: Flock,
    obj: ObjectiveContract,
    t: int,
    cfg: OptimizerConfig,
    rng,
    order: np.ndarray | None = None,
) -> Move:
    """Ranks come from the sort taken before the producer phase; X_P is the best producer after its sync."""
    if order is None:
        order = flock.order()
    n, d = flock.size, obj.dim
    pd = cfg.producer_count
    producers = order[:pd]
    x_p = flock.positions[producers[np.argmin(flock.fitness[producers])]].copy()
    x_worst = flock.worst_position.copy()
    idx = order[pd:]
    cands = np.empty((len(idx), d))
    for k, i in enumerate(idx):
        rank = pd + 1 + k
        x = flock.positions[i]
        if rank > n / 2:
            q = np.asarray(rng.normal(0.0, 1.0, d), dtype=float)
            with np.errstate(over="ignore", invalid="ignore"):
                step = q * np.exp((x_worst - x) / rank ** 2)
            cands[k] = np.nan_to_num(step, nan=0.0)
        else:
            cands[k] = x_p + np.abs(x - x_p) * rng.signs(d)
    return Move(idx.copy(), obj.clamp(cands), "scrounger")


def patroller_update(flock: Flock, obj: ObjectiveContract, t: int, cfg: OptimizerConfig, rng) -> Move:
    n, d = flock.size, obj.dim
    pn = patroller_count(t, cfg) if cfg.use_adaptive_patrollers else cfg.pn_max
    if pn <= 0:
        return Move.empty(d, "patroller")
    idx = np.asarray(rng.choice(n, pn, replace=False), dtype=int)
    f_g, f_w = flock.best_fitness, flock.worst_fitness
    x_best = flock.best_position.copy()
    x_worst = flock.worst_position.copy()
    cands = np.empty((pn, d))
    for k, i in enumerate(idx):
        f_i = flock.fitness[i]
        x = flock.positions[i]
        if f_i > f_g:
            beta = float(rng.normal(0.0, 1.0))
            cands[k] = x_best + beta * np.abs(x - x_best)
        else:
            step_k = float(rng.uniform(-1.0, 1.0))
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                step = x + step_k * (x - x_worst) / ((f_i - f_w) + EPSILON)
            cands[k] = np.nan_to_num(step, nan=0.0)
    return Move(idx, obj.clamp(cands), "patroller")


def levy_mutation_step(flock: Flock, obj: ObjectiveContract, t: int, cfg: OptimizerConfig, rng) -> Move:
    """
    Roulette per sparrow: rand > sigma moves x_m by a Levy step relative to X_best;
    otherwise X_best itself gets a multiplicative Levy mutation.

    Every candidate is built from the flock as it stands on entry, so X_best and
    its index are a snapshot taken before any candidate of this move is accepted.
    """
    n, d = flock.size, obj.dim
    sigma = inertia_sigma(t, cfg.iterations)
    b = flock.best_index
    x_best = flock.positions[b].copy()
    idx = np.empty(n, dtype=int)
    cands = np.empty((n, d))
    for m in range(n):
        u = float(rng.random())
        step = levy_sample(cfg.levy, rng)
        if u > sigma:
            x = flock.positions[m]
            idx[m] = m
            cands[m] = x + step * (x - x_best)
        else:
            idx[m] = b
            cands[m] = x_best * (1.0 + step)
    return Move(idx, obj.clamp(cands), "levy")


def best_mutation_step(flock: Flock, obj: ObjectiveContract, t: int, cfg: OptimizerConfig, rng) -> Move:
    """X_best * (1 + psi-Tent(X_best)), with X_best mapped into [0, 1] through the bounds."""
    d = obj.dim
    r = mutation_radius_r(t, cfg.iterations)
    if float(rng.random()) >= r:
        return Move.empty(d, "best_mutation")
    assert cfg.tent is not None
    b = flock.best_index
    x_best = flock.positions[b]
    span = obj.upper - obj.lower
    safe = np.where(span > 0.0, span, 1.0)
    unit = np.clip(np.where(span > 0.0, (x_best - obj.lower) / safe, 0.0), 0.0, 1.0)
    chaos = tent_map_array(unit, cfg.tent, flock.psi)
    cand = x_best * (1.0 + chaos)
    return Move(np.array([b]), obj.clamp(cand[None, :]), "best_mutation")
