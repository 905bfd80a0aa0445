"""Null steering with a rotatable uniform linear array."""

__version__ = "0.1.0"

from .analysis import (
    FeasibilityReport,
    Mechanism,
    analyze,
    foa_orthogonality_check,
    prop1_feasible,
    prop1_solve,
    prop2_solve,
    prop3_solve,
    prop4_intersect,
    symmetric_pair_solve,
)
from .beamform import (
    DegenerateDesiredError,
    NullSteerError,
    NullSteerProblem,
    SingularGramError,
    beam_gain,
    beam_pattern,
    zf_gain,
    zf_weights,
)
from .estimator import RotatableArrayNullSteerer
from .geometry import FOA, ArrayRotation, boresight, rotation_matrix
from .montecarlo import monte_carlo
from .optimize import OptimizerConfig, OptimizerResult, optimize
from .steering import ArrayConfig, Cosine, Isotropic, effective_steering, geometric_steering

__all__ = [
    "ArrayConfig",
    "ArrayRotation",
    "Cosine",
    "DegenerateDesiredError",
    "FOA",
    "FeasibilityReport",
    "Isotropic",
    "Mechanism",
    "NullSteerError",
    "NullSteerProblem",
    "OptimizerConfig",
    "OptimizerResult",
    "RotatableArrayNullSteerer",
    "SingularGramError",
    "analyze",
    "beam_gain",
    "beam_pattern",
    "boresight",
    "effective_steering",
    "foa_orthogonality_check",
    "geometric_steering",
    "monte_carlo",
    "optimize",
    "prop1_feasible",
    "prop1_solve",
    "prop2_solve",
    "prop3_solve",
    "prop4_intersect",
    "rotation_matrix",
    "symmetric_pair_solve",
    "zf_gain",
    "zf_weights",
]
