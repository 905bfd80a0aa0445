"""Zero-forcing beamforming under nulling constraints and beam-gain evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ArrayRotation, aod_cos, pattern_cos, wrap_angle
from .steering import ArrayConfig, Isotropic, effective_steering, phase_vectors

# interferers whose element gain is below this fraction of g0 are nulled by the pattern
PATTERN_NULL_RTOL = 1e-12
GRAM_COND_MAX = 1e12
DEGENERATE_RTOL = 1e-12


class NullSteerError(ArithmeticError):
    """Base class for numerical failures of the ZF beamformer."""


class DegenerateDesiredError(NullSteerError):
    """The desired steering vector lies in the interference subspace."""


class SingularGramError(NullSteerError):
    """The interference Gram matrix is numerically singular."""


@dataclass(frozen=True)
class NullSteerProblem:
    """Desired direction and ordered interference directions (radians)."""

    desired: float
    interferers: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "desired", wrap_angle(float(self.desired)))
        object.__setattr__(
            self, "interferers", tuple(wrap_angle(float(t)) for t in np.atleast_1d(self.interferers))
        )

    @classmethod
    def from_degrees(cls, desired: float, interferers=()) -> "NullSteerProblem":
        return cls(np.deg2rad(desired), tuple(np.deg2rad(np.atleast_1d(interferers))))

    @property
    def n_interferers(self) -> int:
        return len(self.interferers)


@dataclass
class ProjectionBatch:
    """ZF projection results for a batch of rotations.

    ``residual`` is the geometric projection ``P_perp a(theta0)`` (shape ``(B, N)``),
    ``desired_gain`` the element gain toward ``theta0``, ``retained`` marks the
    interferers kept in the nulling matrix, ``singular`` marks Gram failures.
    """

    residual: np.ndarray
    desired_gain: np.ndarray
    retained: np.ndarray
    singular: np.ndarray
    peak_gain: float = 1.0

    @property
    def gains(self) -> np.ndarray:
        g = self.desired_gain * np.sum(np.abs(self.residual) ** 2, axis=-1)
        n = self.residual.shape[-1]
        floor = DEGENERATE_RTOL**2 * n * self.peak_gain
        return np.where(self.singular | (g < floor), 0.0, g)


def project_batch(array: ArrayConfig, prob: NullSteerProblem, alpha, beta, gamma) -> ProjectionBatch:
    """Project the desired steering vector off the interference subspace for many rotations.

    The nulling matrix holds geometric steering vectors only; the element-gain
    diagonal cancels out of the projector. Pattern-nulled interferers are
    dropped per rotation by zeroing their columns and padding the Gram diagonal.
    """
    alpha, beta, gamma = np.broadcast_arrays(
        np.atleast_1d(np.asarray(alpha, float)),
        np.atleast_1d(np.asarray(beta, float)),
        np.atleast_1d(np.asarray(gamma, float)),
    )
    n = array.n_elements
    pattern = array.pattern
    g0 = pattern.peak_gain
    theta = np.asarray(prob.interferers, float)
    batch = alpha.shape[0]

    a0 = phase_vectors(n, array.spacing, aod_cos(beta, gamma, prob.desired))
    if isinstance(pattern, Isotropic):
        desired_gain = np.ones(batch)
    else:
        desired_gain = pattern.gain(pattern_cos(alpha, beta, gamma, prob.desired))

    k = theta.size
    if k == 0:
        return ProjectionBatch(a0, desired_gain, np.zeros((batch, 0), bool), np.zeros(batch, bool), g0)

    cos_k = aod_cos(beta[:, None], gamma[:, None], theta[None, :])
    A = np.swapaxes(phase_vectors(n, array.spacing, cos_k), 1, 2)  # (B, N, K)
    if isinstance(pattern, Isotropic):
        retained = np.ones((batch, k), bool)
    else:
        gk = pattern.gain(pattern_cos(alpha[:, None], beta[:, None], gamma[:, None], theta[None, :]))
        retained = gk >= PATTERN_NULL_RTOL * g0
        A = A * retained[:, None, :]

    # thin SVD of A: projecting on its left singular vectors keeps the error at
    # cond(A) * eps, where the normal equations would give cond(A)^2 * eps
    u, sv, _ = np.linalg.svd(A, full_matrices=False)
    rank = retained.sum(axis=1)
    keep = np.arange(k)[None, :] < rank[:, None]
    smin = np.take_along_axis(sv, np.maximum(rank - 1, 0)[:, None], axis=1)[:, 0]
    # cond(A^H A) = (s_max / s_min)^2, compared in the unsquared domain
    ratio = np.where(smin > 0, sv[:, 0] / np.where(smin > 0, smin, 1.0), np.inf)
    singular = (rank > 0) & (ratio > np.sqrt(GRAM_COND_MAX))
    u = u * keep[:, None, :]
    residual = a0
    for _ in range(2):
        residual = residual - (u @ (np.conj(np.swapaxes(u, 1, 2)) @ residual[:, :, None]))[:, :, 0]
    return ProjectionBatch(residual, desired_gain, retained, singular, g0)


def zf_gain_batch(array: ArrayConfig, prob: NullSteerProblem, alpha, beta, gamma) -> tuple[np.ndarray, np.ndarray]:
    """ZF-induced desired gain for arrays of rotation angles.

    Returns ``(gains, singular)``; singular points score 0.
    """
    proj = project_batch(array, prob, alpha, beta, gamma)
    return proj.gains, proj.singular


def _project_one(array, r, prob):
    proj = project_batch(array, prob, r.alpha, r.beta, r.gamma)
    if proj.singular[0]:
        raise SingularGramError(
            f"interference Gram matrix condition number exceeds {GRAM_COND_MAX:g}"
        )
    return proj


def zf_gain(array: ArrayConfig, r: ArrayRotation, prob: NullSteerProblem) -> float:
    """Beam gain at the desired direction under ZF beamforming.

    Equals ``g(eps0) * (N - a0^H A (A^H A)^{-1} A^H a0)``. A desired direction
    inside the interference subspace yields 0 rather than an error.

    Raises
    ------
    SingularGramError
        If the Gram matrix of the retained interferers is ill-conditioned.
    """
    proj = _project_one(array, r, prob)
    return float(proj.gains[0])


def zf_weights(array: ArrayConfig, r: ArrayRotation, prob: NullSteerProblem) -> np.ndarray:
    """Unit-norm ZF beamforming vector for rotation ``r``.

    Raises
    ------
    DegenerateDesiredError
        If the projected desired steering vector vanishes.
    SingularGramError
        If the Gram matrix of the retained interferers is ill-conditioned.
    """
    proj = _project_one(array, r, prob)
    w = np.sqrt(proj.desired_gain[0]) * proj.residual[0]
    norm = np.linalg.norm(w)
    if norm < DEGENERATE_RTOL * np.sqrt(array.full_gain):
        raise DegenerateDesiredError(
            "desired steering vector has no component outside the interference subspace"
        )
    return w / norm


def zf_weights_effective(array: ArrayConfig, r: ArrayRotation, prob: NullSteerProblem) -> np.ndarray:
    """ZF weights from the effective (pattern-scaled) interference matrix.

    Direct form ``[I - A~ (A~^H A~)^{-1} A~^H] a~(theta0)``, normalized. Only valid
    when every interferer has non-negligible element gain; used to cross-check
    the geometric projector in :func:`zf_weights`.
    """
    a0 = effective_steering(array, r, prob.desired)
    if not prob.interferers:
        return a0 / np.linalg.norm(a0)
    At = np.column_stack([effective_steering(array, r, t) for t in prob.interferers])
    # least squares on A~ itself: same projector, without squaring its condition number
    w = a0
    for _ in range(2):
        coef, *_ = np.linalg.lstsq(At, w, rcond=None)
        w = w - At @ coef
    return w / np.linalg.norm(w)


def beam_gain(array: ArrayConfig, r: ArrayRotation, w: np.ndarray, theta) -> float | np.ndarray:
    """Beam gain ``|a~(r, theta)^H w|^2`` at one or more directions."""
    theta = np.asarray(theta, float)
    a = phase_vectors(array.n_elements, array.spacing, aod_cos(r.beta, r.gamma, theta))
    g = array.pattern.gain(pattern_cos(r.alpha, r.beta, r.gamma, theta))
    out = g * np.abs(np.conj(a) @ np.asarray(w)) ** 2
    return float(out) if out.ndim == 0 else out


def beam_pattern(array: ArrayConfig, r: ArrayRotation, w: np.ndarray, grid) -> list[tuple[float, float]]:
    """Beam gain over a grid of directions, as ``(theta, gain)`` pairs in grid order."""
    grid = np.atleast_1d(np.asarray(grid, float))
    if grid.size == 0:
        raise ValueError("direction grid must be non-empty")
    gains = np.atleast_1d(beam_gain(array, r, w, grid))
    return list(zip(grid.tolist(), gains.tolist()))


def retained_interferers(array: ArrayConfig, r: ArrayRotation, prob: NullSteerProblem) -> list[float]:
    """Interferers that need ZF nulling (not already nulled by the element pattern)."""
    proj = project_batch(array, prob, r.alpha, r.beta, r.gamma)
    return [t for t, keep in zip(prob.interferers, proj.retained[0]) if keep]
