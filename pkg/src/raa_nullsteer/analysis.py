"""Closed-form feasibility tests and constructive solvers for full-gain null steering.

Every solver returns a :class:`FeasibilityReport`. When feasible, the report
carries a witness rotation whose ZF gain has been checked numerically against
the full gain ``N * g0``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .beamform import NullSteerError, NullSteerProblem, zf_gain
from .geometry import TWO_PI, ArrayRotation, wrap_angle
from .steering import ArrayConfig, Cosine, Isotropic, geometric_steering, steering_inner_product

INTERVAL_SLACK = 1e-9
RATIO_TOL = 1e-9
COS_MATCH_TOL = 1e-9
WITNESS_RTOL = 1e-9


class Mechanism(str, enum.Enum):
    GEOMETRIC = "GeometricOrthogonality"
    PATTERN_NULL = "PatternNull"
    BOTH = "Both"
    NONE = "None"


class InfeasibleMError(ValueError):
    """The requested orthogonality integer cannot be realised."""


@dataclass
class CollinearityData:
    """Per-interferer quantities of the multi-interferer isotropic condition.

    Index 0 is the reference interferer; ``m_ratio`` and ``n_ratio`` hold the
    pairs ``(M_1i, N_1i)`` for the remaining interferers.
    """

    e: list[float]
    s: list[float]
    m_ratio: list[float] = field(default_factory=list)
    n_ratio: list[float] = field(default_factory=list)
    eta: float = float("nan")


@dataclass
class BetaSolutionSet:
    kind: str  # "DiscreteCosines" | "FullCircle" | "Empty"
    cos_values: list[float] = field(default_factory=list)

    def intersect(self, other: "BetaSolutionSet") -> "BetaSolutionSet":
        if self.kind == "Empty" or other.kind == "Empty":
            return BetaSolutionSet("Empty")
        if self.kind == "FullCircle":
            return other
        if other.kind == "FullCircle":
            return self
        common = [c for c in self.cos_values if any(abs(c - o) <= COS_MATCH_TOL for o in other.cos_values)]
        return BetaSolutionSet("DiscreteCosines", common) if common else BetaSolutionSet("Empty")

    @property
    def is_empty(self) -> bool:
        return self.kind == "Empty"


@dataclass
class FeasibilityReport:
    feasible: bool
    mechanisms: list[Mechanism]
    integer_sets: list[list[int]]
    witness: ArrayRotation | None = None
    achieved_gain: float | None = None
    solutions: list[tuple[int, ...]] = field(default_factory=list)
    beta_sets: list[BetaSolutionSet] = field(default_factory=list)
    collinearity: CollinearityData | None = None

    def to_dict(self) -> dict:
        out = {
            "feasible": self.feasible,
            "mechanisms": [m.value for m in self.mechanisms],
            "integer_sets": [list(map(int, s)) for s in self.integer_sets],
            "witness_deg": list(self.witness.degrees()) if self.witness is not None else None,
            "achieved_gain": self.achieved_gain,
        }
        if self.solutions:
            out["solutions"] = [list(map(int, t)) for t in self.solutions]
        if self.beta_sets:
            out["beta_sets"] = [{"kind": b.kind, "cos_values": b.cos_values} for b in self.beta_sets]
        return out


def separation(theta0: float, theta1: float) -> float:
    """Angular separation ``theta0 - theta1`` wrapped into ``[0, 2*pi)``."""
    return wrap_angle(theta0 - theta1)


def _in_closed(x: float, lo: float, hi: float) -> bool:
    return lo - INTERVAL_SLACK <= x <= hi + INTERVAL_SLACK


def _valid_ms(bound: float, n_elements: int) -> list[int]:
    top = int(np.floor(bound + INTERVAL_SLACK))
    return [m for m in range(-top, top + 1) if m != 0 and m % n_elements != 0]


def _check_witness(array: ArrayConfig, r: ArrayRotation, prob: NullSteerProblem) -> float | None:
    try:
        gain = zf_gain(array, r, prob)
    except NullSteerError:
        return None
    full = array.full_gain
    return gain if abs(gain - full) <= WITNESS_RTOL * full else None


def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


# -- isotropic, single interferer ---------------------------------------------


def isotropic_threshold(array: ArrayConfig) -> float:
    """Smallest separation admitting full gain for isotropic K=1 (radians)."""
    x = 1.0 / (2.0 * array.n_elements * array.spacing)
    return 2.0 * np.arcsin(x) if x <= 1.0 else np.inf


def prop1_feasible(array: ArrayConfig, theta0: float, theta1: float) -> FeasibilityReport:
    """Feasibility of exact orthogonality with one interferer, isotropic elements."""
    _require(array.n_elements > 1, "analysis requires N > 1")
    _require(isinstance(array.pattern, Isotropic), "prop1 applies to isotropic patterns")
    sep = separation(theta0, theta1)
    thr = isotropic_threshold(array)
    in_range = np.isfinite(thr) and _in_closed(sep, thr, TWO_PI - thr)
    bound = 2.0 * array.n_elements * array.spacing * abs(np.sin(sep / 2.0))
    ms = _valid_ms(bound, array.n_elements) if in_range else []
    report = FeasibilityReport(
        feasible=bool(ms),
        mechanisms=[Mechanism.GEOMETRIC if ms else Mechanism.NONE],
        integer_sets=[ms],
    )
    if ms:
        m = min(ms, key=lambda v: (abs(v), -v))
        report.witness = prop1_solve(array, theta0, theta1, m)
        prob = NullSteerProblem(theta0, (theta1,))
        report.achieved_gain = _check_witness(array, report.witness, prob)
        report.feasible = report.achieved_gain is not None
    return report


def prop1_solve(array: ArrayConfig, theta0: float, theta1: float, m: int) -> ArrayRotation:
    """Rotation making ``a(theta1)`` orthogonal to ``a(theta0)`` at Dirichlet zero ``m``.

    ``gamma`` is fixed where ``|sin(gamma + (theta0 + theta1)/2)| = 1``; ``alpha = 0``.
    """
    n, d = array.n_elements, array.spacing
    if m == 0 or m % n == 0:
        raise InfeasibleMError(f"m={m} is divisible by N={n}")
    half = np.sin((theta0 - theta1) / 2.0)
    gamma = np.pi / 2.0 - (theta0 + theta1) / 2.0
    denom = 2.0 * n * d * np.sin(gamma + (theta0 + theta1) / 2.0) * half
    if abs(denom) < 1e-15 or abs(m / denom) > 1.0 + INTERVAL_SLACK:
        raise InfeasibleMError(f"|cos beta| exceeds 1 for m={m}")
    beta = np.arccos(np.clip(m / denom, -1.0, 1.0))
    r = ArrayRotation(0.0, beta, gamma)
    a0 = geometric_steering(array, r, theta0)
    a1 = geometric_steering(array, r, theta1)
    if abs(steering_inner_product(a1, a0)) > 1e-9 * n:
        raise InfeasibleMError(f"m={m} does not yield orthogonal steering vectors")
    return r


# -- isotropic, several interferers -------------------------------------------


def collinearity_data(theta0: float, interferers, ms) -> CollinearityData:
    e = [(theta0 + t) / 2.0 for t in interferers]
    s = [np.sin((theta0 - t) / 2.0) for t in interferers]
    data = CollinearityData(e=e, s=s)
    for i in range(1, len(interferers)):
        data.m_ratio.append(ms[0] * s[i] * np.cos(e[i]) - ms[i] * s[0] * np.cos(e[0]))
        data.n_ratio.append(ms[0] * s[i] * np.sin(e[i]) - ms[i] * s[0] * np.sin(e[0]))
    nz = [(mm, nn) for mm, nn in zip(data.m_ratio, data.n_ratio) if abs(nn) > RATIO_TOL]
    if nz:
        data.eta = nz[0][0] / nz[0][1]
    return data


def _common_gamma(data: CollinearityData) -> float | None:
    """Rotation about z satisfying ``sin(g) M_1i + cos(g) N_1i = 0`` for every i."""
    pairs = [(mm, nn) for mm, nn in zip(data.m_ratio, data.n_ratio) if np.hypot(mm, nn) > RATIO_TOL]
    if not pairs:
        return np.pi / 2.0 - data.e[0]
    m_ref, n_ref = pairs[0]
    scale = np.hypot(m_ref, n_ref)
    for mm, nn in pairs[1:]:
        if abs(m_ref * nn - n_ref * mm) > RATIO_TOL * scale * np.hypot(mm, nn):
            return None
    return float(np.arctan2(-n_ref, m_ref))


def prop2_solve(array: ArrayConfig, theta0: float, interferers) -> FeasibilityReport:
    """Search integer tuples for a rotation orthogonalising all interferers (isotropic).

    Tuples are enumerated in order of increasing ``sum |m_i|``. Each tuple whose
    collinearity condition holds gives ``gamma`` in closed form and ``cos beta``
    from the reference interferer; the first tuple that verifies numerically
    becomes the witness, and all verified tuples are listed in ``solutions``.
    """
    interferers = [float(t) for t in interferers]
    _require(array.n_elements > 1, "analysis requires N > 1")
    _require(isinstance(array.pattern, Isotropic), "prop2 applies to isotropic patterns")
    _require(len(interferers) >= 2, "prop2 needs at least two interferers; use prop1_feasible")
    n, d = array.n_elements, array.spacing
    theta0 = float(theta0)
    prob = NullSteerProblem(theta0, tuple(interferers))

    sets = []
    for t in interferers:
        bound = min(2.0 * n * d * abs(np.sin((theta0 - t) / 2.0)), 2.0 * n * d)
        sets.append(_valid_ms(bound, n))
    report = FeasibilityReport(False, [Mechanism.NONE] * len(interferers), sets)
    if any(not s for s in sets):
        return report

    tuples = sorted(itertools.product(*sets), key=lambda tup: (sum(map(abs, tup)), tup))
    for ms in tuples:
        data = collinearity_data(theta0, interferers, ms)
        gamma = _common_gamma(data)
        if gamma is None:
            continue
        r = _beta_from_reference(array, theta0, interferers, ms, gamma)
        if r is None:
            continue
        gain = _check_witness(array, r, prob)
        if gain is None:
            continue
        report.solutions.append(tuple(ms))
        if report.witness is None:
            report.witness, report.achieved_gain, report.collinearity = r, gain, data
    if report.witness is not None:
        report.feasible = True
        report.mechanisms = [Mechanism.GEOMETRIC] * len(interferers)
    return report


def _beta_from_reference(array, theta0, interferers, ms, gamma):
    n, d = array.n_elements, array.spacing
    for t, m in zip(interferers, ms):
        denom = 2.0 * n * d * np.sin(gamma + (theta0 + t) / 2.0) * np.sin((theta0 - t) / 2.0)
        if abs(denom) > 1e-12:
            cb = m / denom
            if abs(cb) > 1.0 + INTERVAL_SLACK:
                return None
            return ArrayRotation(0.0, float(np.arccos(np.clip(cb, -1.0, 1.0))), gamma)
    return None


# -- directional elements ------------------------------------------------------


def directional_threshold(array: ArrayConfig) -> float:
    """Smallest separation admitting geometric orthogonality with aligned boresight."""
    x = 1.0 / (array.n_elements * array.spacing)
    return np.arcsin(x) if x <= 1.0 else np.inf


def _geometric_window(sep: float, thr: float) -> bool:
    if not np.isfinite(thr):
        return False
    return _in_closed(sep, thr, np.pi - thr) or _in_closed(sep, np.pi + thr, TWO_PI - thr)


def _pattern_null_window(sep: float) -> bool:
    return _in_closed(sep, np.pi / 2.0, 1.5 * np.pi)


def aligned_rotation(theta0: float, beta: float = 0.0) -> ArrayRotation:
    """Rotation pointing the element boresight at ``theta0`` (``alpha = 0``)."""
    return ArrayRotation(0.0, beta, np.pi / 2.0 - theta0)


def _directional_ms(array: ArrayConfig, theta0: float, theta_k: float) -> list[int]:
    bound = array.n_elements * array.spacing * abs(np.sin(theta0 - theta_k))
    return _valid_ms(bound, array.n_elements)


def _directional_cos_beta(array, theta0, theta_k, m):
    return m / (array.n_elements * array.spacing * np.sin(theta0 - theta_k))


def prop3_solve(array: ArrayConfig, theta0: float, theta1: float) -> FeasibilityReport:
    """Full-gain feasibility for one interferer with cosine-pattern elements."""
    _require(array.n_elements > 1, "analysis requires N > 1")
    _require(isinstance(array.pattern, Cosine), "prop3 applies to cosine patterns")
    sep = separation(theta0, theta1)
    thr = directional_threshold(array)
    geometric = _geometric_window(sep, thr) and abs(np.sin(theta0 - theta1)) > 1e-12
    ms = _directional_ms(array, theta0, theta1) if geometric else []
    geometric = geometric and bool(ms)
    null = _pattern_null_window(sep)
    mech = {
        (True, True): Mechanism.BOTH,
        (True, False): Mechanism.GEOMETRIC,
        (False, True): Mechanism.PATTERN_NULL,
        (False, False): Mechanism.NONE,
    }[(geometric, null)]
    report = FeasibilityReport(False, [mech], [ms])
    if mech is Mechanism.NONE:
        return report

    prob = NullSteerProblem(theta0, (theta1,))
    candidates = []
    if geometric:
        m = min(ms, key=lambda v: (abs(v), -v))
        cb = _directional_cos_beta(array, theta0, theta1, m)
        candidates.append(aligned_rotation(theta0, float(np.arccos(np.clip(cb, -1.0, 1.0)))))
    if null:
        candidates.append(aligned_rotation(theta0, 0.0))
    for r in candidates:
        gain = _check_witness(array, r, prob)
        if gain is not None:
            report.feasible, report.witness, report.achieved_gain = True, r, gain
            break
    return report


def beta_solution_set(array: ArrayConfig, theta0: float, theta_k: float) -> BetaSolutionSet:
    """Admissible ``cos beta`` values for one interferer under boresight alignment."""
    sep = separation(theta0, theta_k)
    if _pattern_null_window(sep):
        return BetaSolutionSet("FullCircle")
    thr = directional_threshold(array)
    if _geometric_window(sep, thr) and abs(np.sin(theta0 - theta_k)) > 1e-12:
        ms = _directional_ms(array, theta0, theta_k)
        values = [float(_directional_cos_beta(array, theta0, theta_k, m)) for m in ms]
        values = [v for v in values if abs(v) <= 1.0 + INTERVAL_SLACK]
        if values:
            return BetaSolutionSet("DiscreteCosines", values)
    return BetaSolutionSet("Empty")


def prop4_intersect(array: ArrayConfig, theta0: float, interferers) -> FeasibilityReport:
    """Full-gain feasibility for several interferers with cosine-pattern elements.

    Feasible iff the per-interferer ``beta`` solution sets intersect.
    """
    interferers = [float(t) for t in interferers]
    _require(isinstance(array.pattern, Cosine), "prop4 applies to cosine patterns")
    _require(len(interferers) >= 2, "prop4 needs at least two interferers; use prop3_solve")
    sets = [beta_solution_set(array, theta0, t) for t in interferers]
    mechanisms = []
    integer_sets = []
    for t, b in zip(interferers, sets):
        if b.kind == "FullCircle":
            mechanisms.append(Mechanism.PATTERN_NULL)
            integer_sets.append([])
        elif b.kind == "DiscreteCosines":
            mechanisms.append(Mechanism.GEOMETRIC)
            integer_sets.append(_directional_ms(array, theta0, t))
        else:
            mechanisms.append(Mechanism.NONE)
            integer_sets.append([])
    report = FeasibilityReport(False, mechanisms, integer_sets, beta_sets=sets)

    common = sets[0]
    for b in sets[1:]:
        common = common.intersect(b)
    if common.is_empty:
        return report

    prob = NullSteerProblem(theta0, tuple(interferers))
    betas = [0.0] if common.kind == "FullCircle" else [
        float(np.arccos(np.clip(c, -1.0, 1.0))) for c in sorted(common.cos_values, key=lambda c: -abs(c))
    ]
    for beta in betas:
        r = aligned_rotation(theta0, beta)
        gain = _check_witness(array, r, prob)
        if gain is not None:
            report.feasible, report.witness, report.achieved_gain = True, r, gain
            break
    return report


def symmetric_pair_solve(array: ArrayConfig, theta0: float, offset: float, m: int = 1) -> ArrayRotation:
    """Rotation nulling the symmetric pair ``theta0 -/+ offset`` with ``m_1 = -m_2 = m``.

    Works for both isotropic and cosine patterns since it also aligns the
    boresight with ``theta0``.
    """
    cb = m / (array.n_elements * array.spacing * np.sin(offset))
    if m % array.n_elements == 0 or abs(cb) > 1.0 + INTERVAL_SLACK:
        raise InfeasibleMError(f"m={m} infeasible for offset {offset!r}")
    return aligned_rotation(theta0, float(np.arccos(np.clip(cb, -1.0, 1.0))))


# -- fixed orientation baseline -----------------------------------------------


def foa_orthogonality_check(array: ArrayConfig, theta0: float, theta1: float) -> tuple[bool, int]:
    """Whether a fixed (unrotated) array already has ``a(theta1) _|_ a(theta0)``.

    Returns ``(orthogonal, m0)`` with ``m0`` the nearest integer to
    ``N d (cos theta0 - cos theta1)``.
    """
    x = array.n_elements * array.spacing * (np.cos(theta0) - np.cos(theta1))
    m0 = int(np.rint(x))
    return bool(abs(x - m0) <= 1e-9 and m0 % array.n_elements != 0), m0


def analyze(array: ArrayConfig, prob: NullSteerProblem) -> FeasibilityReport:
    """Dispatch to the matching closed-form analysis for the pattern and K."""
    k = prob.n_interferers
    if k == 0:
        r = aligned_rotation(prob.desired) if isinstance(array.pattern, Cosine) else ArrayRotation()
        return FeasibilityReport(True, [], [], r, zf_gain(array, r, prob))
    if isinstance(array.pattern, Isotropic):
        if k == 1:
            return prop1_feasible(array, prob.desired, prob.interferers[0])
        return prop2_solve(array, prob.desired, prob.interferers)
    if k == 1:
        return prop3_solve(array, prob.desired, prob.interferers[0])
    return prop4_intersect(array, prob.desired, prob.interferers)
