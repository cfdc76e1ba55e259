"""Built-in schedules with exact closed forms, used as end-to-end oracles.

Three two-level scenarios are provided:

* decay        -- one stable and one decaying level; the traceless action
                  meets its bound exactly, and the full action meets the
                  inverse bound of the marginally passive operator exactly.
* cooling      -- a time-dependent schedule that steers two initially
                  orthogonal states toward each other; resources diverge
                  logarithmically as the target angle approaches pi.
* exceptional  -- a non-diagonalizable (Jordan block) generator whose
                  eigenvalues carry no information: the eigenvalue bound is
                  zero while the norm bound is not.

Each scenario packages its schedule together with exact endpoint values so
the quadrature/integrator pipeline can be checked against independent
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bounds import audit
from .errors import BadParam, OracleMismatch
from .hamiltonian import HamiltonianSpec
from .linalg import NormKind, spectral_norm

_MONOTONE_GRID = 513


@dataclass(frozen=True)
class ClosedForms:
    """Exact values at the horizon for one scenario."""

    action_traceless: float
    action_full: float
    b_basic: float
    b_inverse: float
    u: np.ndarray = field(repr=False)
    u_norm: np.ndarray = field(repr=False)
    b_eigen: float | None = None
    # inverse bound of the marginally passive operator, where known exactly
    b_inverse_mp: float | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    params: dict
    spec: HamiltonianSpec
    closed: ClosedForms


def scenario_decay(gamma: float, t_final: float) -> Scenario:
    """Two levels, one decaying at rate `gamma`, evolved for `t_final`."""
    if not (np.isfinite(gamma) and gamma > 0):
        raise BadParam("decay rate gamma must be positive")
    if not (np.isfinite(t_final) and t_final > 0):
        raise BadParam("t_final must be positive")
    h = np.array([[0.0, 0.0], [0.0, -1j * gamma]])
    a = gamma * t_final
    closed = ClosedForms(
        action_traceless=0.5 * a,
        action_full=a,
        b_basic=0.5 * a,
        b_inverse=0.5 * a,
        b_eigen=0.5 * a,
        b_inverse_mp=a,
        u=np.diag([1.0, np.exp(-a)]).astype(complex),
        u_norm=np.diag([np.exp(0.5 * a), np.exp(-0.5 * a)]).astype(complex),
    )
    return Scenario(
        name="decay",
        params={"gamma": float(gamma), "t_final": float(t_final)},
        spec=HamiltonianSpec.constant(h, t_final),
        closed=closed,
    )


def cooling_generator(
    theta: Callable[[float], float], dtheta: Callable[[float], float]
) -> Callable[[float], np.ndarray]:
    """Traceless generator steering the second basis state toward the first.

    At angle th the instantaneous matrix is
        (i/2) th'(t) [[tan(th/2)/2, 1], [0, -tan(th/2)/2]],
    whose spectral norm is |th'| (1 + sec(th/2)) / 4.
    """

    def h(t: float) -> np.ndarray:
        th = theta(t)
        half_tan = 0.5 * np.tan(0.5 * th)
        return 0.5j * dtheta(t) * np.array(
            [[half_tan, 1.0], [0.0, -half_tan]], dtype=complex
        )

    return h


def _log_gain(theta: float) -> float:
    # ln ||u_norm||_s at endpoint angle theta, for a ramp starting at 0
    return 0.5 * np.log((1.0 + np.sin(0.5 * theta)) / np.cos(0.5 * theta))


def _action_antiderivative(theta: float) -> float:
    return 0.25 * theta + _log_gain(theta)


def _solution_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[1.0, np.sin(0.5 * theta)], [0.0, np.cos(0.5 * theta)]], dtype=complex
    )


def scenario_cooling(
    theta,
    t_final: float,
    dtheta: Callable[[float], float] | None = None,
) -> Scenario:
    """State-steering schedule with angle profile `theta` on [0, t_final].

    Parameters
    ----------
    theta : float or callable
        A number builds a linear ramp from 0 to that final angle; a callable
        is used as the angle profile directly and must be non-decreasing
        with theta(0) >= 0 and theta(t_final) < pi.
    t_final : float
        Horizon.
    dtheta : callable, optional
        Exact derivative of a callable profile; a central difference is used
        when omitted.
    """
    if not (np.isfinite(t_final) and t_final > 0):
        raise BadParam("t_final must be positive")

    if callable(theta):
        th = theta
        if dtheta is None:
            step = 1e-6 * t_final

            def dth(t: float) -> float:
                lo = max(t - step, 0.0)
                hi = min(t + step, t_final)
                return (th(hi) - th(lo)) / (hi - lo)
        else:
            dth = dtheta
        label_theta = float(th(t_final))
    else:
        final = float(theta)
        slope = final / t_final
        th = lambda t: slope * t
        dth = lambda t: slope
        label_theta = final

    grid = np.linspace(0.0, t_final, _MONOTONE_GRID)
    values = np.array([th(t) for t in grid], dtype=float)
    if not np.all(np.isfinite(values)):
        raise BadParam("angle profile must be finite on [0, t_final]")
    theta0, theta_t = float(values[0]), float(values[-1])
    if theta0 < -1e-12:
        raise BadParam("angle profile must start at theta(0) >= 0")
    if theta_t >= np.pi:
        raise BadParam("final angle must stay below pi (singular endpoint)")
    span = max(1.0, abs(theta_t - theta0))
    if np.any(np.diff(values) < -1e-10 * span):
        raise BadParam("angle profile must be non-decreasing")
    theta0 = max(theta0, 0.0)

    action = _action_antiderivative(theta_t) - _action_antiderivative(theta0)
    scale = np.sqrt(np.cos(0.5 * theta0) / np.cos(0.5 * theta_t))
    s_t = _solution_matrix(theta_t)
    if theta0 == 0.0:
        u = s_t * scale
        b_basic = _log_gain(theta_t)
    else:
        s0_inv = np.linalg.inv(_solution_matrix(theta0))
        u = s_t @ s0_inv * scale
        b_basic = float(np.log(spectral_norm(u)))
    closed = ClosedForms(
        action_traceless=action,
        action_full=action,  # generator is traceless
        b_basic=b_basic,
        b_inverse=b_basic,  # det = 1 in two levels: same singular values
        b_eigen=0.5 * float(np.log(np.cos(0.5 * theta0) / np.cos(0.5 * theta_t))),
        u=u,
        u_norm=u,
    )
    return Scenario(
        name="cooling",
        params={"theta_final": label_theta, "t_final": float(t_final)},
        spec=HamiltonianSpec.closed_form(
            cooling_generator(th, dth), dim=2, t_final=t_final
        ),
        closed=closed,
    )


def scenario_exceptional(e0: float, t_final: float) -> Scenario:
    """Jordan-block generator with off-diagonal coupling `e0`."""
    if not np.isfinite(e0):
        raise BadParam("coupling e0 must be finite")
    if not (np.isfinite(t_final) and t_final > 0):
        raise BadParam("t_final must be positive")
    h = np.array([[0.0, e0], [0.0, 0.0]], dtype=complex)
    a = abs(e0) * t_final
    b_basic = 0.5 * np.log1p(0.5 * a * (a + np.sqrt(4.0 + a * a)))
    u = np.array([[1.0, -1j * e0 * t_final], [0.0, 1.0]])
    closed = ClosedForms(
        action_traceless=a,
        action_full=a,
        b_basic=float(b_basic),
        b_inverse=float(b_basic),  # inverse flips the sign of e0 only
        b_eigen=0.0,
        u=u,
        u_norm=u,
    )
    return Scenario(
        name="exceptional",
        params={"e0": float(e0), "t_final": float(t_final)},
        spec=HamiltonianSpec.constant(h, t_final),
        closed=closed,
    )


# Builders and their user-facing parameters, for the CLI layer.
BUILDERS = {
    "decay": scenario_decay,
    "cooling": scenario_cooling,
    "exceptional": scenario_exceptional,
}
PARAM_NAMES = {
    "decay": ("gamma", "t_final"),
    "cooling": ("theta_final", "t_final"),
    "exceptional": ("e0", "t_final"),
}
# keyword used by each builder for its leading parameter
_LEAD_KEYWORD = {"decay": "gamma", "cooling": "theta", "exceptional": "e0"}


def build_scenario(name: str, params: dict) -> Scenario:
    """Construct a builtin scenario from plain numeric parameters."""
    if name not in BUILDERS:
        raise BadParam(f"unknown scenario {name!r}; choose from {sorted(BUILDERS)}")
    expected = PARAM_NAMES[name]
    unknown = set(params) - set(expected)
    if unknown:
        raise BadParam(f"unknown parameter(s) {sorted(unknown)} for {name!r}")
    missing = set(expected) - set(params)
    if missing:
        raise BadParam(f"missing parameter(s) {sorted(missing)} for {name!r}")
    lead, t_final = expected
    kwargs = {_LEAD_KEYWORD[name]: params[lead], "t_final": params[t_final]}
    return BUILDERS[name](**kwargs)


def scenario_residuals(s: Scenario, tol: float = 1e-10) -> dict[str, float]:
    """Absolute gaps between the computed pipeline and the closed forms."""
    rep = audit(s.spec, NormKind.SPECTRAL, tol)
    p = rep.propagator
    cf = s.closed
    res = {
        "action_traceless": abs(rep.action_traceless - cf.action_traceless),
        "action_full": abs(rep.action_full - cf.action_full),
        "b_basic": abs(rep.b_basic - cf.b_basic),
        "b_inverse": (
            float("inf") if rep.b_inverse is None
            else abs(rep.b_inverse - cf.b_inverse)
        ),
        "u_matrix": float(np.linalg.norm(p.u - cf.u, "fro")),
        "u_norm_matrix": float(np.linalg.norm(p.u_norm - cf.u_norm, "fro")),
    }
    if cf.b_eigen is not None and rep.b_eigen is not None:
        res["b_eigen"] = abs(rep.b_eigen - cf.b_eigen)
    return res


def verify_scenario(s: Scenario, tol: float = 1e-10) -> dict[str, float]:
    """Check the pipeline against the scenario's closed forms.

    Returns the residual table when every entry is at most 10 tol; raises
    OracleMismatch naming the worst offending field otherwise.
    """
    res = scenario_residuals(s, tol)
    limit = 10.0 * tol
    bad = {k: v for k, v in res.items() if not (v <= limit)}
    if bad:
        worst = max(bad, key=bad.get)
        raise OracleMismatch(
            f"scenario {s.name!r}: field {worst!r} off by {bad[worst]:.3e} "
            f"(limit {limit:.3e})"
        )
    return res
