"""Resource accounting for evolution generated by non-Hermitian Hamiltonians.

The package computes the norm action (the time integral of the Hamiltonian
norm), integrates the evolution operator, and evaluates lower bounds on the
action that depend only on the final operator: the forward bound, the
inverse bound, their max and geometric mean, and the eigenvalue bound.
Built-in scenarios with exact closed forms let the whole pipeline be
verified end to end.
"""

from .bounds import (
    BoundReport,
    audit,
    bound_basic,
    bound_eigen,
    bound_geomean,
    bound_inverse,
    bound_max,
    geometric_mean_amplification,
    is_unitary_by_norm,
    mp_tradeoff,
    purely_nonunitary_part,
)
from .errors import (
    BadParam,
    ConfigError,
    NonConvergence,
    NormActError,
    NotDetNormalized,
    OracleMismatch,
    OutOfRange,
    SingularMatrix,
    SingularPropagator,
)
from .hamiltonian import (
    HamiltonianSpec,
    evaluate,
    norm_action,
    traceless,
    window,
)
from .linalg import (
    NormKind,
    SvdTriple,
    as_matrix,
    det,
    frobenius_norm,
    inverse,
    matrix_exp,
    matrix_norm,
    max_abs_entry,
    spectral_norm,
    spectral_radius,
    svd,
)
from .propagation import (
    Propagator,
    liouville_residual,
    marginally_passive,
    normalize_det,
    propagate,
)
from .scenarios import (
    ClosedForms,
    Scenario,
    build_scenario,
    cooling_generator,
    scenario_cooling,
    scenario_decay,
    scenario_exceptional,
    scenario_residuals,
    verify_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "BadParam",
    "BoundReport",
    "ClosedForms",
    "ConfigError",
    "HamiltonianSpec",
    "NonConvergence",
    "NormActError",
    "NormKind",
    "NotDetNormalized",
    "OracleMismatch",
    "OutOfRange",
    "Propagator",
    "Scenario",
    "SingularMatrix",
    "SingularPropagator",
    "SvdTriple",
    "as_matrix",
    "audit",
    "bound_basic",
    "bound_eigen",
    "bound_geomean",
    "bound_inverse",
    "bound_max",
    "build_scenario",
    "cooling_generator",
    "det",
    "evaluate",
    "frobenius_norm",
    "geometric_mean_amplification",
    "inverse",
    "is_unitary_by_norm",
    "liouville_residual",
    "marginally_passive",
    "matrix_exp",
    "matrix_norm",
    "max_abs_entry",
    "norm_action",
    "normalize_det",
    "propagate",
    "purely_nonunitary_part",
    "scenario_cooling",
    "scenario_decay",
    "scenario_exceptional",
    "scenario_residuals",
    "spectral_norm",
    "spectral_radius",
    "svd",
    "traceless",
    "verify_scenario",
    "window",
]
