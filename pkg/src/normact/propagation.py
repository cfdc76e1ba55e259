"""Evolution-operator integration for i dU/dt = H(t) U with U(0) = I.

The stepper is the exponential midpoint rule, U <- exp(-i H(t_mid) dt) U,
refined by global step doubling until both the step-halving difference and
the determinant consistency residual meet tolerance. The running integral
of tr H is accumulated on the same grid, which makes det U match
exp(-i * trace_integral) to roundoff by construction and fixes a continuous
branch for the N-th root used in determinant normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NonConvergence, SingularPropagator
from .hamiltonian import HamiltonianSpec, evaluate, panel_edges
from .linalg import spectral_norm

# Total step budget for one propagate call across all refinement levels.
MAX_STEPS = 2**22

# |det U| below this would overflow the normalized propagator.
DET_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class Propagator:
    """Evolution operator at the horizon with integration metadata.

    u is U(T); u_norm is the determinant-normalized version U / det(U)^{1/N}
    with the root branch fixed by the accumulated trace integral; det_u and
    trace_integral let callers re-check the determinant consistency.
    """

    u: np.ndarray = field(repr=False)
    u_norm: np.ndarray = field(repr=False)
    t_final: float
    det_u: complex
    trace_integral: complex
    steps: int
    est_error: float


def _level(spec: HamiltonianSpec, edges: np.ndarray, n_per_panel: int):
    """Integrate the whole horizon with n_per_panel midpoint steps per panel."""
    dim = spec.dim
    u = np.eye(dim, dtype=complex)
    trace = 0.0 + 0.0j
    steps = 0
    for a, b in zip(edges[:-1], edges[1:]):
        dt = (b - a) / n_per_panel
        mids = np.minimum(a + (np.arange(n_per_panel) + 0.5) * dt, b)
        hs = np.stack([evaluate(spec, t) for t in mids])
        exps = scipy.linalg.expm(-1j * dt * hs)
        if exps.ndim == 2:
            exps = exps[None, :, :]
        for e in exps:
            u = e @ u
        trace += dt * np.trace(hs, axis1=-2, axis2=-1).sum()
        steps += n_per_panel
    return u, trace, steps


def propagate(
    spec: HamiltonianSpec, tol: float = 1e-8, max_steps: int = MAX_STEPS
) -> Propagator:
    """Integrate the evolution operator over [0, T] to tolerance `tol`.

    Each refinement doubles the number of steps per panel; acceptance
    requires the Frobenius difference between successive levels and the
    determinant consistency residual to both fall at or below tol. Raises
    NonConvergence when the step budget runs out, which signals a schedule
    too stiff or rough for the requested tolerance.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    edges = panel_edges(spec)
    n_panels = edges.size - 1
    n_per_panel = 1
    u_prev = None
    while True:
        u, trace, steps = _level(spec, edges, n_per_panel)
        if u_prev is not None:
            diff = float(np.linalg.norm(u - u_prev, "fro"))
            det_u = complex(np.linalg.det(u))
            liou = abs(det_u - np.exp(-1j * trace))
            if diff <= tol and liou <= tol:
                est = max(diff, liou)
                return Propagator(
                    u=u,
                    u_norm=_det_normalized(u, det_u, trace, spec.dim),
                    t_final=spec.t_final,
                    det_u=det_u,
                    trace_integral=complex(trace),
                    steps=steps,
                    est_error=est,
                )
        if 2 * n_per_panel * n_panels > max_steps:
            raise NonConvergence(
                f"step budget {max_steps} exhausted at {steps} steps "
                f"without meeting tol = {tol}"
            )
        u_prev = u
        n_per_panel *= 2


def _det_normalized(u, det_u, trace_integral, dim) -> np.ndarray:
    if abs(det_u) < DET_UNDERFLOW:
        raise SingularPropagator(
            f"|det U| = {abs(det_u):.3e} too small to normalize"
        )
    # det(U)^{1/N} := exp(-(i/N) * integral of tr H), continuous in time and
    # equal to the principal root at t = 0.
    root = np.exp(-1j * trace_integral / dim)
    return u / root


def normalize_det(p: Propagator) -> np.ndarray:
    """Determinant-normalized propagator U / det(U)^{1/N} with det = 1.

    The N-th root branch follows the accumulated trace integral, so the
    normalized operator is continuous along the evolution rather than
    jumping at branch cuts of the principal root.
    """
    return _det_normalized(p.u, p.det_u, p.trace_integral, p.u.shape[0])


def marginally_passive(u) -> np.ndarray:
    """Rescale u to unit spectral norm: the strongest passive version of u.

    The result preserves at least one state's norm while amplifying none.
    """
    s = spectral_norm(u)
    if s == 0.0:
        raise ValueError("cannot rescale the zero matrix")
    return np.asarray(u, dtype=complex) / s


def liouville_residual(p: Propagator) -> float:
    """|det U - exp(-i * integral of tr H)|, the integrator consistency check."""
    return abs(p.det_u - np.exp(-1j * p.trace_integral))
