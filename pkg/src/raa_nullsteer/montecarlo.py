"""Monte-Carlo comparison of optimized rotation against the fixed-orientation array."""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .beamform import NullSteerProblem, SingularGramError, zf_gain
from .geometry import FOA, TWO_PI
from .optimize import OptimizerConfig, optimize
from .steering import ArrayConfig

MIN_SEPARATION = 1e-6


@dataclass(frozen=True)
class TrialResult:
    k: int
    trial: int
    interferers: tuple[float, ...]
    raa_gain: float
    foa_gain: float


@dataclass(frozen=True)
class MonteCarloRow:
    k: int
    mean_gain_raa: float
    mean_gain_foa: float
    std_raa: float
    std_foa: float
    trials: int


def _wrapped_gap(a, b):
    gap = np.mod(np.subtract(a, b), TWO_PI)
    return np.minimum(gap, TWO_PI - gap)


def draw_interferers(rng: np.random.Generator, k: int, theta0: float) -> np.ndarray:
    """Draw ``k`` directions uniformly on ``[0, 2*pi)``, redrawing near-collisions."""
    out = []
    while len(out) < k:
        t = rng.uniform(0.0, TWO_PI)
        if _wrapped_gap(t, theta0) < MIN_SEPARATION:
            continue
        if out and np.min(_wrapped_gap(t, np.array(out))) < MIN_SEPARATION:
            continue
        out.append(t)
    return np.array(out)


def trial_seeds(base_seed: int, k: int, trial: int) -> tuple[np.random.Generator, int]:
    """Independent draw generator and optimizer seed for one ``(K, trial)`` cell."""
    ss = np.random.SeedSequence([int(base_seed), int(k), int(trial)])
    draw_ss, opt_ss = ss.spawn(2)
    return np.random.default_rng(draw_ss), int(opt_ss.generate_state(1, np.uint64)[0])


def run_trial(array: ArrayConfig, theta0: float, k: int, trial: int, cfg: OptimizerConfig, base_seed: int) -> TrialResult:
    rng, opt_seed = trial_seeds(base_seed, k, trial)
    while True:
        prob = NullSteerProblem(theta0, tuple(draw_interferers(rng, k, theta0)))
        try:
            foa_gain = zf_gain(array, FOA, prob)
        except SingularGramError:
            continue
        break
    result = optimize(array, prob, dataclasses.replace(cfg, seed=opt_seed))
    return TrialResult(k, trial, prob.interferers, result.best_gain, foa_gain)


def _run_trial_args(args):
    return run_trial(*args)


def summarize(results: list[TrialResult]) -> list[MonteCarloRow]:
    rows = []
    for k in sorted({r.k for r in results}):
        raa = np.array([r.raa_gain for r in results if r.k == k])
        foa = np.array([r.foa_gain for r in results if r.k == k])
        ddof = 1 if raa.size > 1 else 0
        rows.append(
            MonteCarloRow(
                k, float(raa.mean()), float(foa.mean()), float(raa.std(ddof=ddof)), float(foa.std(ddof=ddof)), raa.size
            )
        )
    return rows


def monte_carlo(
    array: ArrayConfig,
    k_values,
    trials: int,
    cfg: OptimizerConfig | None = None,
    base_seed: int = 1,
    theta0: float = np.pi / 4,
    n_jobs: int = 1,
) -> tuple[list[MonteCarloRow], list[TrialResult]]:
    """Average RAA and FOA desired gains over random interferer draws for each K.

    Each ``(K, trial)`` cell is seeded from ``(base_seed, K, trial)`` alone, so
    results do not depend on ``n_jobs`` or on which K values are requested.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cfg = cfg or OptimizerConfig()
    tasks = [(array, theta0, int(k), t, cfg, base_seed) for k in k_values for t in range(trials)]
    if n_jobs == 1:
        results = [_run_trial_args(a) for a in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_run_trial_args, tasks, chunksize=max(1, len(tasks) // (4 * n_jobs))))
    return summarize(results), results
