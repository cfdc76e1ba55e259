"""Lower bounds on the norm action from the final evolution operator alone.

Every bound here is measured relative to the norm of the identity, so a
unitary operator scores zero under either norm kind. For the spectral norm
||I|| = 1 and the bounds reduce to plain logarithms of operator norms; for
the Frobenius norm the ln sqrt(N) offset keeps the inequalities valid (the
underlying derivation integrates d ln||U|| from ||U(0)|| = ||I||).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotDetNormalized, SingularMatrix
from .hamiltonian import HamiltonianSpec, norm_action
from .linalg import (
    NormKind,
    SvdTriple,
    as_matrix,
    det,
    inverse,
    matrix_norm,
    spectral_norm,
    spectral_radius,
    svd,
)
from .propagation import Propagator, liouville_residual, propagate

# Slack below -max(SLACK_MARGIN, 10 tol) marks a bound violation; the margin
# absorbs the quadrature + integrator error stack.
SLACK_MARGIN = 1e-6


def _log_identity_norm(norm: NormKind, dim: int) -> float:
    return 0.5 * np.log(dim) if norm is NormKind.FROBENIUS else 0.0


def bound_basic(u, norm: NormKind = NormKind.SPECTRAL) -> float:
    """ln(||u|| / ||I||): the amplification side of the resource bound."""
    a = as_matrix(u)
    return float(np.log(matrix_norm(a, norm)) - _log_identity_norm(norm, a.shape[0]))


def bound_inverse(u, norm: NormKind = NormKind.SPECTRAL) -> float:
    """ln(||u^-1|| / ||I||): the attenuation side, via the reversed evolution."""
    a = as_matrix(u)
    inv = inverse(a)
    return float(np.log(matrix_norm(inv, norm)) - _log_identity_norm(norm, a.shape[0]))


def bound_max(u, norm: NormKind = NormKind.SPECTRAL) -> float:
    """The strongest bound: max of the forward and inverse bounds."""
    return max(bound_basic(u, norm), bound_inverse(u, norm))


def bound_geomean(u, norm: NormKind = NormKind.SPECTRAL) -> float:
    """ln sqrt(||u|| ||u^-1||): weaker than bound_max but invariant under
    rescaling of u (the two determinant factors cancel)."""
    return 0.5 * (bound_basic(u, norm) + bound_inverse(u, norm))


def bound_eigen(u) -> float:
    """ln of the spectral radius; weaker than bound_basic under the spectral
    norm, and blind to non-diagonalizable (Jordan-block) amplification."""
    return float(np.log(spectral_radius(u)))


def is_unitary_by_norm(u_norm, tol: float = 1e-9) -> bool:
    """Unitarity test for determinant-normalized operators.

    For det = 1 the singular values multiply to one, so a unit spectral norm
    forces all of them to one and the operator is unitary; conversely any
    unitary has unit spectral norm. Requires |det - 1| <= 1e-6 on input,
    otherwise the equivalence is simply false and NotDetNormalized is raised.
    """
    a = as_matrix(u_norm)
    if abs(det(a) - 1.0) > 1e-6:
        raise NotDetNormalized("unitarity-by-norm needs det = 1 input")
    result = abs(spectral_norm(a) - 1.0) <= tol
    if result:
        n = a.shape[0]
        gram_residual = np.linalg.norm(a.conj().T @ a - np.eye(n), "fro")
        assert gram_residual <= 10.0 * n * max(tol, 1e-15), (
            "norm test passed but the operator is not unitary; "
            "det-normalization assumption violated"
        )
    return result


def geometric_mean_amplification(u) -> float:
    """|det u|^(1/N): the geometric mean of orthogonal-basis amplifications."""
    a = as_matrix(u)
    return float(abs(det(a)) ** (1.0 / a.shape[0]))


def mp_tradeoff(u) -> float:
    """Product of the marginally passive mean amplification with ||u_norm||_s.

    The identity value is 1 for every invertible u: once a system is scaled
    to be just barely passive, stronger non-unitary action costs signal in
    exact proportion. Returned computed, not hardwired, as a pipeline check.
    """
    a = as_matrix(u)
    w = np.linalg.svd(a, compute_uv=False)
    if w[-1] <= 1e-12 * w[0]:
        raise SingularMatrix("mp_tradeoff needs an invertible operator")
    mean_amp = geometric_mean_amplification(a)
    s = spectral_norm(a)
    alpha_mp = mean_amp / s          # |det(u / ||u||_s)|^{1/N}
    u_norm_s = s / mean_amp          # spectral norm of det-normalized u
    return float(alpha_mp * u_norm_s)


def purely_nonunitary_part(u_norm) -> SvdTriple:
    """SVD of the operator; the singular-value factor w is the part left
    after stripping unitaries from both sides.

    Under any unitarily invariant norm, ||u_norm|| equals ||diag(w)||, so
    the bounds above depend on the evolution only through w.
    """
    return svd(u_norm)


@dataclass(frozen=True)
class BoundReport:
    """All resource quantities and bound checks for one audited schedule.

    Bounds are evaluated on the determinant-normalized propagator; slack is
    action_traceless minus the strongest available bound. Inverse-based
    fields are None when the propagator is numerically singular, and
    b_eigen is reported only under the spectral norm.
    """

    norm_kind: NormKind
    action_full: float
    action_traceless: float
    b_basic: float
    b_inverse: float | None
    b_max: float | None
    b_geomean: float | None
    b_eigen: float | None
    slack: float
    holds: bool
    mean_amp: float
    mp_tradeoff: float | None
    singular_values: np.ndarray
    steps: int
    est_error: float
    liouville_residual: float
    propagator: Propagator = field(repr=False)


def audit(
    spec: HamiltonianSpec,
    norm: NormKind = NormKind.SPECTRAL,
    tol: float = 1e-8,
) -> BoundReport:
    """Run the full pipeline on one schedule and check the resource bound.

    Computes the norm action with and without the traceless projection,
    integrates the propagator, and evaluates every lower bound on the
    determinant-normalized operator. `holds` records whether the traceless
    action clears the strongest bound within the error margin.
    """
    action_full = norm_action(spec, norm, use_traceless=False, tol=tol)
    action_traceless = norm_action(spec, norm, use_traceless=True, tol=tol)
    p = propagate(spec, tol)
    u_norm = p.u_norm

    b_basic = bound_basic(u_norm, norm)
    try:
        b_inverse = bound_inverse(u_norm, norm)
        b_max = max(b_basic, b_inverse)
        b_geomean = 0.5 * (b_basic + b_inverse)
    except SingularMatrix:
        b_inverse = b_max = b_geomean = None
    b_eigen = bound_eigen(u_norm) if norm is NormKind.SPECTRAL else None

    try:
        tradeoff = mp_tradeoff(p.u)
    except SingularMatrix:
        tradeoff = None

    strongest = b_max if b_max is not None else b_basic
    slack = action_traceless - strongest
    margin = max(SLACK_MARGIN, 10.0 * tol)

    return BoundReport(
        norm_kind=norm,
        action_full=action_full,
        action_traceless=action_traceless,
        b_basic=b_basic,
        b_inverse=b_inverse,
        b_max=b_max,
        b_geomean=b_geomean,
        b_eigen=b_eigen,
        slack=float(slack),
        holds=bool(slack >= -margin),
        mean_amp=geometric_mean_amplification(p.u),
        mp_tradeoff=tradeoff,
        singular_values=np.linalg.svd(u_norm, compute_uv=False),
        steps=p.steps,
        est_error=p.est_error,
        liouville_residual=liouville_residual(p),
        propagator=p,
    )
