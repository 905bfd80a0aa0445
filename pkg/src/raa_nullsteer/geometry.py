"""3D rotation geometry of a rotatable uniform linear array.

The array starts along the x-axis with its boresight along +y. A rotation
vector ``(alpha, beta, gamma)`` rotates about x, then y, then z. Signal
directions lie in the xy-plane: ``s(theta) = [-cos theta, sin theta, 0]``.

All angles are radians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(angle):
    """Wrap an angle (scalar or array) into ``[0, 2*pi)``."""
    wrapped = np.mod(angle, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class ArrayRotation:
    """Array rotation vector (rotation angles about x, y and z)."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, wrap_angle(float(getattr(self, name))))

    @classmethod
    def from_degrees(cls, alpha: float, beta: float, gamma: float) -> "ArrayRotation":
        return cls(np.deg2rad(alpha), np.deg2rad(beta), np.deg2rad(gamma))

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])

    def degrees(self) -> tuple[float, float, float]:
        return tuple(float(np.rad2deg(v)) for v in (self.alpha, self.beta, self.gamma))


FOA = ArrayRotation(0.0, 0.0, 0.0)


def signal_direction(theta) -> np.ndarray:
    """Unit vector of a planar signal direction, shape ``(..., 3)``."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([-np.cos(theta), np.sin(theta), np.zeros_like(theta)], axis=-1)


def rotation_matrix(r: ArrayRotation) -> np.ndarray:
    """Rotation matrix mapping local array coordinates to global ones.

    Composition is ``Rz(gamma) @ Ry(beta) @ Rx(alpha)``, written out entrywise.
    """
    ca, sa = np.cos(r.alpha), np.sin(r.alpha)
    cb, sb = np.cos(r.beta), np.sin(r.beta)
    cg, sg = np.cos(r.gamma), np.sin(r.gamma)
    return np.array(
        [
            [cb * cg, sa * sb * cg - ca * sg, ca * sb * cg + sa * sg],
            [cb * sg, sa * sb * sg + ca * cg, ca * sb * sg - sa * cg],
            [-sb, sa * cb, ca * cb],
        ]
    )


def rotated_positions(r: ArrayRotation, n, spacing: float) -> np.ndarray:
    """Position of element(s) ``n`` after rotation, in wavelengths.

    Returns shape ``(3,)`` for scalar ``n`` and ``(len(n), 3)`` otherwise.
    """
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise ValueError("element index must be non-negative")
    axis = np.array(
        [np.cos(r.beta) * np.cos(r.gamma), np.cos(r.beta) * np.sin(r.gamma), -np.sin(r.beta)]
    )
    return np.multiply.outer(n * spacing, axis)


def boresight(r: ArrayRotation) -> np.ndarray:
    """Element boresight direction after rotation (unit vector)."""
    ca, sa = np.cos(r.alpha), np.sin(r.alpha)
    cb, sb = np.cos(r.beta), np.sin(r.beta)
    cg, sg = np.cos(r.gamma), np.sin(r.gamma)
    return np.array([-ca * sg + sa * sb * cg, ca * cg + sa * sb * sg, sa * cb])


def aod_cos(beta, gamma, theta):
    """Vectorized :func:`rotated_aod_cos` over raw angle arrays."""
    return -np.cos(beta) * np.cos(np.add(gamma, theta))


def pattern_cos(alpha, beta, gamma, theta):
    """Vectorized :func:`element_pattern_cos` over raw angle arrays."""
    phase = np.add(gamma, theta)
    return np.cos(alpha) * np.sin(phase) - np.sin(alpha) * np.sin(beta) * np.cos(phase)


def rotated_aod_cos(r: ArrayRotation, theta) -> float:
    """Cosine of the angle between the rotated array axis and direction ``theta``.

    Independent of ``r.alpha``.
    """
    return aod_cos(r.beta, r.gamma, theta)


def element_pattern_cos(r: ArrayRotation, theta) -> float:
    """Cosine of the angle between the element boresight and direction ``theta``.

    Equal to ``boresight(r) @ signal_direction(theta)``.
    """
    return pattern_cos(r.alpha, r.beta, r.gamma, theta)
