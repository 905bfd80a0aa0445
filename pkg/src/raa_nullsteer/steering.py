"""Element radiation patterns and ULA steering vectors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ArrayRotation, aod_cos, pattern_cos


@dataclass(frozen=True)
class Isotropic:
    """Uniform unit gain in every direction."""

    @property
    def peak_gain(self) -> float:
        return 1.0

    def gain(self, cos_eps):
        return np.ones_like(np.asarray(cos_eps, dtype=float))


@dataclass(frozen=True)
class Cosine:
    """Cosine-power pattern ``g0 * cos(eps)**(2p)`` on the front hemisphere.

    ``g0 = 2(2p + 1)`` so that the pattern integrates to ``4*pi`` over the
    sphere. The back hemisphere (``cos eps <= 0``) has zero gain.
    """

    p: float = 0.5

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"directivity p must be positive, got {self.p!r}")

    @property
    def peak_gain(self) -> float:
        return 2.0 * (2.0 * self.p + 1.0)

    def gain(self, cos_eps):
        c = np.asarray(cos_eps, dtype=float)
        front = np.clip(c, 0.0, 1.0)
        return np.where(c > 0.0, self.peak_gain * front ** (2.0 * self.p), 0.0)


RadiationPattern = Isotropic | Cosine


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array: element count, spacing (wavelengths), pattern."""

    n_elements: int = 8
    spacing: float = 0.5
    pattern: RadiationPattern = field(default_factory=Isotropic)

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing!r}")
        object.__setattr__(self, "n_elements", int(self.n_elements))

    @property
    def full_gain(self) -> float:
        """Upper bound ``N * g0`` on the beam gain."""
        return self.n_elements * self.pattern.peak_gain


def pattern_gain(pattern: RadiationPattern, cos_eps):
    """Element gain for the cosine of the boresight offset angle."""
    c = np.asarray(cos_eps, dtype=float)
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise ValueError("cos_eps must lie in [-1, 1]")
    g = pattern.gain(c)
    return float(g) if g.ndim == 0 else g


def phase_vectors(n_elements: int, spacing: float, cos_aod) -> np.ndarray:
    """Geometric steering vectors for an array of AoD cosines, shape ``(..., N)``."""
    n = np.arange(n_elements)
    return np.exp(1j * 2.0 * np.pi * spacing * np.multiply.outer(cos_aod, n))


def geometric_steering(array: ArrayConfig, r: ArrayRotation, theta: float) -> np.ndarray:
    """Unit-modulus array response ``exp(-j 2 pi n d cos(beta) cos(gamma + theta))``."""
    return phase_vectors(array.n_elements, array.spacing, aod_cos(r.beta, r.gamma, theta))


def effective_steering(array: ArrayConfig, r: ArrayRotation, theta: float) -> np.ndarray:
    """Geometric steering vector scaled by the square root of the element gain."""
    a = geometric_steering(array, r, theta)
    if isinstance(array.pattern, Isotropic):
        return a
    g = array.pattern.gain(pattern_cos(r.alpha, r.beta, r.gamma, theta))
    return np.sqrt(g) * a


def steering_inner_product(a: np.ndarray, b: np.ndarray) -> complex:
    """Hermitian inner product ``a^H b``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"steering vectors differ in length: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def dirichlet_kernel(n_elements: int, spacing: float, delta) -> np.ndarray | float:
    """Closed-form ``sum_n exp(j 2 pi d n delta)`` for an AoD-cosine difference.

    At the removable singularity (``sin(pi d delta) ~ 0``) the limit is N times
    the unit phase of the sum.
    """
    delta = np.asarray(delta, dtype=float)
    x = np.pi * spacing * delta
    den = np.sin(x)
    singular = np.abs(den) < 1e-12
    safe = np.where(singular, 1.0, den)
    ratio = np.where(singular, n_elements * np.cos(x) ** (n_elements - 1), np.sin(n_elements * x) / safe)
    out = np.exp(1j * (n_elements - 1) * x) * ratio
    return complex(out) if out.ndim == 0 else out
