"""scikit-learn style front end for rotation optimization.

``X`` holds interference directions in radians (one per row, or a flat
vector). ``fit`` finds the array rotation; ``predict`` returns the resulting
beam gain at arbitrary directions.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted, check_scalar, column_or_1d

from .beamform import NullSteerProblem, beam_gain, zf_weights
from .geometry import FOA
from .optimize import OptimizerConfig, optimize
from .steering import ArrayConfig, Cosine, Isotropic


def make_pattern(pattern: str, p: float = 0.5):
    """Build a radiation pattern from its CLI name (``iso`` or ``cos``)."""
    if pattern in ("iso", "isotropic"):
        return Isotropic()
    if pattern in ("cos", "cosine"):
        return Cosine(check_scalar(p, "p", numbers.Real, min_val=0.0, include_boundaries="neither"))
    raise ValueError(f"unknown pattern {pattern!r}; expected 'iso' or 'cos'")


def check_directions(X, name: str = "X") -> np.ndarray:
    """Validate direction input as a finite 1D float array (radians)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    X = column_or_1d(X, warn=False) if X.ndim else X.reshape(1)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite directions")
    return X


class RotatableArrayNullSteerer(BaseEstimator):
    """Optimize the 3D rotation of a ULA for ZF null steering.

    Parameters
    ----------
    desired : float
        Desired direction in radians.
    n_elements, spacing : int, float
        Array size and element spacing in wavelengths.
    pattern : {"iso", "cos"}
        Element radiation pattern; ``p`` is the cosine directivity.
    q_grid, rounds, gs_iters, candidates, max_shift, mu : optimizer settings
    random_state : int
        Seed for the Gibbs-sampling phase.

    Attributes
    ----------
    rotation_ : ArrayRotation
    gain_ : float
        ZF beam gain toward ``desired`` at ``rotation_``.
    foa_gain_ : float
        Same gain for the unrotated array.
    weights_ : ndarray of complex, shape (n_elements,)
    trace_ : list of TraceRecord
    n_evaluations_ : int
    """

    def __init__(
        self,
        desired=np.pi / 4,
        n_elements=8,
        spacing=0.5,
        pattern="iso",
        p=0.5,
        q_grid=360,
        rounds=5,
        gs_iters=50,
        candidates=36,
        max_shift=3,
        mu=1.0,
        random_state=1,
    ):
        self.desired = desired
        self.n_elements = n_elements
        self.spacing = spacing
        self.pattern = pattern
        self.p = p
        self.q_grid = q_grid
        self.rounds = rounds
        self.gs_iters = gs_iters
        self.candidates = candidates
        self.max_shift = max_shift
        self.mu = mu
        self.random_state = random_state

    def _array_config(self) -> ArrayConfig:
        check_scalar(self.n_elements, "n_elements", numbers.Integral, min_val=1)
        check_scalar(self.spacing, "spacing", numbers.Real, min_val=0.0, include_boundaries="neither")
        return ArrayConfig(self.n_elements, self.spacing, make_pattern(self.pattern, self.p))

    def _optimizer_config(self) -> OptimizerConfig:
        check_scalar(self.q_grid, "q_grid", numbers.Integral, min_val=2)
        check_scalar(self.rounds, "rounds", numbers.Integral, min_val=1)
        check_scalar(self.gs_iters, "gs_iters", numbers.Integral, min_val=0)
        check_scalar(self.candidates, "candidates", numbers.Integral, min_val=1)
        check_scalar(self.max_shift, "max_shift", numbers.Integral, min_val=0)
        check_scalar(self.mu, "mu", numbers.Real, min_val=0.0, include_boundaries="neither")
        seed = 0 if self.random_state is None else int(self.random_state)
        return OptimizerConfig(
            self.q_grid, self.rounds, self.gs_iters, self.candidates, self.max_shift, self.mu, seed
        )

    def fit(self, X, y=None):
        """Find the rotation maximizing desired gain while nulling directions ``X``."""
        interferers = check_directions(X) if np.size(X) else np.empty(0)
        self.array_ = self._array_config()
        self.problem_ = NullSteerProblem(float(self.desired), tuple(interferers))
        result = optimize(self.array_, self.problem_, self._optimizer_config())
        self.result_ = result
        self.rotation_ = result.best_arv
        self.gain_ = result.best_gain
        self.foa_gain_ = result.foa_gain
        self.weights_ = result.weights
        self.trace_ = result.trace
        self.n_evaluations_ = result.evaluations
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        """Beam gain of the fitted rotation and ZF weights at directions ``X``."""
        check_is_fitted(self, "rotation_")
        X = check_directions(X)
        if self.weights_ is None:
            return np.zeros_like(X)
        return np.atleast_1d(beam_gain(self.array_, self.rotation_, self.weights_, X))

    def predict_foa(self, X):
        """Beam gain of the unrotated array under its own ZF weights."""
        check_is_fitted(self, "rotation_")
        X = check_directions(X)
        w = zf_weights(self.array_, FOA, self.problem_)
        return np.atleast_1d(beam_gain(self.array_, FOA, w, X))

    def score(self, X=None, y=None):
        """Fitted desired gain as a fraction of the full gain ``N * g0``."""
        check_is_fitted(self, "rotation_")
        return self.gain_ / self.array_.full_gain
