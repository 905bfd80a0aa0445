"""Grid-based sequential update with a Gibbs-sampling exploration phase.

The rotation space ``[0, 2*pi)^3`` is discretised into ``Q`` points per axis and
rotations are handled as integer index triples. Each round sweeps alpha, beta
and gamma in turn (exhaustive 1D argmax), then runs ``T`` Gibbs-sampling
iterations around the result and keeps the best rotation seen.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beamform import NullSteerProblem, SingularGramError, zf_gain_batch, zf_weights
from .geometry import TWO_PI, ArrayRotation
from .steering import ArrayConfig


@dataclass(frozen=True)
class OptimizerConfig:
    q_grid: int = 360
    rounds: int = 5
    gs_iters: int = 50
    candidates: int = 36
    max_shift: int = 3
    mu: float = 1.0
    seed: int = 1
    init: str | tuple[int, int, int] = "foa"

    def __post_init__(self):
        if self.q_grid < 2:
            raise ValueError("q_grid must be at least 2")
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        if self.gs_iters < 0:
            raise ValueError("gs_iters must be non-negative")
        if self.max_shift < 0 or 6 * self.max_shift > self.candidates:
            raise ValueError("need 0 <= 6 * max_shift <= candidates")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if isinstance(self.init, str):
            if self.init not in ("foa", "random"):
                raise ValueError(f"unknown init mode {self.init!r}")
        elif len(self.init) != 3:
            raise ValueError("explicit init must be a grid index triple")

    @property
    def evaluation_budget(self) -> int:
        """Exact number of objective evaluations performed by :func:`optimize`."""
        return self.rounds * (3 * self.q_grid + self.gs_iters * self.candidates) + 2


@dataclass
class TraceRecord:
    round: int
    phase: str
    gain: float


@dataclass
class OptimizerResult:
    best_index: tuple[int, int, int]
    best_arv: ArrayRotation
    best_gain: float
    foa_gain: float
    weights: np.ndarray | None
    trace: list[TraceRecord] = field(default_factory=list)
    evaluations: int = 0


def grid_angle(index: int, q_grid: int) -> float:
    """Angle of grid point ``index`` on a ``q_grid``-point uniform grid over ``[0, 2*pi)``."""
    if not 0 <= index < q_grid:
        raise ValueError(f"grid index {index} outside [0, {q_grid})")
    return TWO_PI * index / q_grid


def grid_rotation(index, q_grid: int) -> ArrayRotation:
    return ArrayRotation(*(grid_angle(int(i), q_grid) for i in index))


class Objective:
    """ZF desired-direction gain over grid index triples, with an evaluation counter."""

    def __init__(self, array: ArrayConfig, prob: NullSteerProblem, q_grid: int):
        self.array = array
        self.prob = prob
        self.q_grid = q_grid
        self.evaluations = 0
        self.singular_hits = 0

    def __call__(self, indices) -> np.ndarray:
        idx = np.atleast_2d(np.asarray(indices, dtype=np.int64))
        angles = TWO_PI * idx / self.q_grid
        gains, singular = zf_gain_batch(self.array, self.prob, angles[:, 0], angles[:, 1], angles[:, 2])
        self.evaluations += idx.shape[0]
        self.singular_hits += int(np.count_nonzero(singular))
        return gains


def _sweep(objective: Objective, point: np.ndarray, axis: int) -> tuple[np.ndarray, float]:
    q = objective.q_grid
    cand = np.repeat(point[None, :], q, axis=0)
    cand[:, axis] = np.arange(q)
    gains = objective(cand)
    best = int(np.argmax(gains))  # first index wins ties
    out = point.copy()
    out[axis] = best
    return out, float(gains[best])


def sequential_update_round(objective: Objective, point) -> tuple[np.ndarray, float]:
    """One round of coordinate-wise exhaustive sweeps (alpha, then beta, then gamma)."""
    point = np.asarray(point, dtype=np.int64)
    gain = None
    for axis in range(3):
        point, gain = _sweep(objective, point, axis)
    return point, gain


def adjacent_candidates(point, max_shift: int, q_grid: int) -> np.ndarray:
    """All single-coordinate shifts by ``j in [-J, J] \\ {0}``, wrapped modulo ``Q``."""
    point = np.asarray(point, dtype=np.int64)
    shifts = np.concatenate([np.arange(-max_shift, 0), np.arange(1, max_shift + 1)])
    out = np.repeat(point[None, :], 3 * shifts.size, axis=0)
    for axis in range(3):
        rows = slice(axis * shifts.size, (axis + 1) * shifts.size)
        out[rows, axis] = (point[axis] + shifts) % q_grid
    return out


def selection_probabilities(gains, mu: float) -> np.ndarray:
    """Softmax of ``mu * gain``, shifted by the maximum for stability."""
    z = mu * (np.asarray(gains, float) - np.max(gains))
    w = np.exp(z)
    return w / w.sum()


def gibbs_phase(
    objective: Objective,
    point,
    gain: float,
    cfg: OptimizerConfig,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float]:
    """Gibbs-sampling exploration started from ``point``; returns the best of the history."""
    current = np.asarray(point, dtype=np.int64)
    best, best_gain = current.copy(), float(gain)
    n_random = cfg.candidates - 6 * cfg.max_shift
    for _ in range(cfg.gs_iters):
        adj = adjacent_candidates(current, cfg.max_shift, cfg.q_grid)
        rnd = rng.integers(0, cfg.q_grid, size=(n_random, 3))
        cand = np.concatenate([adj, rnd])
        gains = objective(cand)
        pick = rng.choice(cand.shape[0], p=selection_probabilities(gains, cfg.mu))
        current = cand[pick]
        if gains[pick] > best_gain:
            best, best_gain = current.copy(), float(gains[pick])
    return best, best_gain


def _initial_point(cfg: OptimizerConfig, rng: np.random.Generator) -> np.ndarray:
    if cfg.init == "foa":
        return np.zeros(3, dtype=np.int64)
    if cfg.init == "random":
        return rng.integers(0, cfg.q_grid, size=3)
    return np.asarray(cfg.init, dtype=np.int64) % cfg.q_grid


def optimize(array: ArrayConfig, prob: NullSteerProblem, cfg: OptimizerConfig | None = None) -> OptimizerResult:
    """Maximise the ZF desired gain over grid rotations.

    The unrotated point is always scored and competes with the initial point,
    so the result never falls below the fixed-orientation gain.

    Raises
    ------
    SingularGramError
        Only when every evaluated rotation had an ill-conditioned Gram matrix.
    """
    cfg = cfg or OptimizerConfig()
    rng = np.random.default_rng(cfg.seed)
    objective = Objective(array, prob, cfg.q_grid)

    start = _initial_point(cfg, rng)
    foa = np.zeros(3, dtype=np.int64)
    start_gain, foa_gain = (float(g) for g in objective(np.stack([start, foa])))
    if foa_gain > start_gain:
        point, gain = foa, foa_gain
    else:
        point, gain = start, start_gain

    trace = [TraceRecord(0, "init", gain)]
    for rnd in range(1, cfg.rounds + 1):
        point, gain = sequential_update_round(objective, point)
        trace.append(TraceRecord(rnd, "SU", gain))
        point, gain = gibbs_phase(objective, point, gain, cfg, rng)
        trace.append(TraceRecord(rnd, "GS", gain))

    if objective.singular_hits == objective.evaluations:
        raise SingularGramError("interference Gram matrix singular at every evaluated rotation")

    best_arv = grid_rotation(point, cfg.q_grid)
    try:
        weights = zf_weights(array, best_arv, prob) if gain > 0 else None
    except ArithmeticError:
        weights = None
    return OptimizerResult(
        best_index=tuple(int(i) for i in point),
        best_arv=best_arv,
        best_gain=gain,
        foa_gain=foa_gain,
        weights=weights,
        trace=trace,
        evaluations=objective.evaluations,
    )
