"""
Sparrow search main loop (SSA and TFSSA share it; OptimizerConfig switches
the TFSSA components on or off).
"""
from __future__ import annotations

import logging
import time
from typing import Callable

from .phases import (
    apply_move,
    best_mutation_step,
    init_population,
    levy_mutation_step,
    patroller_update,
    producer_update,
    scrounger_update,
)
from .types import Flock, ObjectiveContract, OptimizerConfig, RunRecord

logger = logging.getLogger(__name__)


def run(
    obj: ObjectiveContract,
    cfg: OptimizerConfig,
    rng,
    on_iteration: Callable[[int, Flock], None] | None = None,
) -> RunRecord:
    """
    init -> loop {sort; producers; scroungers; patrollers; [levy roulette]; [best mutation]}.
    Stops after cfg.iterations loops, or earlier when the next loop could exceed
    cfg.max_evaluations.
    """
    t0 = time.perf_counter()
    t_max = cfg.iterations
    per_iteration = cfg.evals_per_iteration()
    flock = init_population(obj, cfg, rng)
    history = [flock.best_fitness]
    t = 0
    while t < t_max:
        if cfg.max_evaluations is not None and flock.eval_count + per_iteration > cfg.max_evaluations:
            break
        order = flock.order()
        apply_move(flock, obj, producer_update(flock, obj, t, cfg, rng, order))
        apply_move(flock, obj, scrounger_update(flock, obj, t, cfg, rng, order))
        apply_move(flock, obj, patroller_update(flock, obj, t, cfg, rng))
        if cfg.use_levy_mutation:
            apply_move(flock, obj, levy_mutation_step(flock, obj, t, cfg, rng))
        if cfg.use_best_mutation:
            apply_move(flock, obj, best_mutation_step(flock, obj, t, cfg, rng))
        t += 1
        history.append(flock.best_fitness)
        logger.debug("%s %s iter %d/%d best=%.6g evals=%d", cfg.variant, obj.name, t, t_max, history[-1], flock.eval_count)
        if on_iteration is not None:
            on_iteration(t, flock)

    logger.debug(
        "%s on %s: best=%.6g after %d iterations, %d evaluations (%.2fs)",
        cfg.variant, obj.name, flock.best_fitness, t, flock.eval_count, time.perf_counter() - t0,
    )
    return RunRecord(
        best_position=flock.best_position.copy(),
        best_fitness=flock.best_fitness,
        history=history,
        evals_used=flock.eval_count,
        seed=int(getattr(rng, "seed", 0)),
        iterations=t,
        variant=cfg.variant,
    )
