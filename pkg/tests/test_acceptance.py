"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest -s tests/test_acceptance.py -v` to see the per-criterion
lines. The random-trial fixtures are shared between criteria so the
Liouville-residual criterion sees every propagator integrated here.
"""

import time

import numpy as np
import pytest

from normact import (
    NormKind,
    audit,
    bound_basic,
    bound_eigen,
    bound_geomean,
    bound_inverse,
    bound_max,
    geometric_mean_amplification,
    is_unitary_by_norm,
    marginally_passive,
    mp_tradeoff,
    norm_action,
    propagate,
    scenario_cooling,
    scenario_decay,
    scenario_exceptional,
    spectral_norm,
)
from util import (
    rand_constant_spec,
    rand_hermitian,
    rand_invertible,
    rand_matrix,
    rand_piecewise_spec,
    scaled_to_norm,
)
from normact import HamiltonianSpec

LN_PHI = 0.48121182505960347


def _criterion(num: int, desc: str, ok: bool) -> None:
    print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'}: {desc}")
    assert ok, f"criterion {num} failed: {desc}"


# ---------------------------------------------------------------------------
# shared pipelines (computed once; reused by the residual criterion)
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def decay_grid():
    """Audits of the decay scenario over the (rate, horizon) grid."""
    tol = 1e-10
    runs = []
    for gamma in (0.5, 1.0, 2.0):
        for t_final in (1.0, 2.0):
            start = time.monotonic()
            s = scenario_decay(gamma, t_final)
            rep = audit(s.spec, NormKind.SPECTRAL, tol)
            mp_inverse = bound_inverse(marginally_passive(rep.propagator.u))
            elapsed = time.monotonic() - start
            runs.append(
                {"gamma": gamma, "t_final": t_final, "rep": rep,
                 "mp_inverse": mp_inverse, "seconds": elapsed, "tol": tol}
            )
    return runs


@pytest.fixture(scope="module")
def exceptional_grid():
    tol = 1e-10
    runs = []
    for a in (0.5, 1.0, 5.0):
        s = scenario_exceptional(a, 1.0)
        rep = audit(s.spec, NormKind.SPECTRAL, tol)
        runs.append({"a": a, "rep": rep, "closed": s.closed, "tol": tol})
    return runs


@pytest.fixture(scope="module")
def master_suite():
    """500 random schedules audited under both norms at tol = 1e-8."""
    rng = np.random.default_rng(20240)
    tol = 1e-8
    records = []
    start = time.monotonic()
    for i in range(500):
        spec = rand_constant_spec(rng) if i % 2 == 0 else rand_piecewise_spec(rng)
        for kind in NormKind:
            rep = audit(spec, kind, tol)
            records.append(
                {"rep": rep, "norm": kind, "tol": tol,
                 "b_max_raw_u": bound_max(rep.propagator.u, kind)}
            )
    elapsed = time.monotonic() - start
    return {"records": records, "seconds": elapsed, "tol": tol}


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_criterion_1_decay_equality(decay_grid):
    ok = True
    for run in decay_grid:
        rep = run["rep"]
        ok &= abs(rep.action_traceless - rep.b_basic) <= 1e-8
        ok &= abs(rep.action_full - run["mp_inverse"]) <= 1e-8
        ok &= run["seconds"] < 1.0
    _criterion(
        1,
        "decay: traceless action equals forward bound and full action equals "
        "marginally-passive inverse bound on the rate/horizon grid",
        ok,
    )


def test_criterion_2_cooling_headline():
    s = scenario_cooling(np.pi - 1e-12, 1.0)
    ok = abs(s.closed.action_traceless - 15.294) <= 0.02
    ok &= abs(s.closed.b_basic - 14.509) <= 0.02
    for theta_t in (0.5, 1.0, 2.0, 3.0):
        sc = scenario_cooling(theta_t, 1.0)
        quad = norm_action(sc.spec, NormKind.SPECTRAL, use_traceless=True, tol=1e-8)
        ok &= abs(quad - sc.closed.action_traceless) <= 1e-6
    _criterion(
        2,
        "cooling: closed forms give 15.294/14.509 at the near-complete ramp "
        "and quadrature matches closed forms to 1e-6 up to angle 3.0",
        ok,
    )


def test_criterion_3_cooling_slack_identity():
    ok = True
    for theta_t in (np.pi / 4, np.pi / 2, 3 * np.pi / 4):
        s = scenario_cooling(theta_t, 1.0)
        slack = s.closed.action_traceless - s.closed.b_basic
        ok &= abs(slack - theta_t / 4.0) <= 1e-6
    _criterion(3, "cooling: action minus bound equals a quarter of the angle", ok)


def test_criterion_4_exceptional_point(exceptional_grid):
    ok = True
    for run in exceptional_grid:
        a, rep = run["a"], run["rep"]
        formula = 0.5 * np.log1p(0.5 * a * (a + np.sqrt(4.0 + a * a)))
        ok &= abs(rep.action_traceless - a) <= 1e-9
        ok &= abs(rep.b_basic - formula) <= 1e-9
        if a == 1.0:
            ok &= abs(rep.b_basic - LN_PHI) <= 1e-9
        ok &= abs(rep.b_eigen) <= 1e-12
        ok &= np.exp(2.0 * a) >= 1.0 + 0.5 * a * (a + np.sqrt(4.0 + a * a))
    _criterion(
        4,
        "exceptional point: action, norm bound, vanishing eigenvalue bound, "
        "and the exponential inequality chain",
        ok,
    )


def test_criterion_5_master_inequality(master_suite):
    records = master_suite["records"]
    violations = sum(
        1
        for r in records
        if r["rep"].action_traceless < (r["rep"].b_max if r["rep"].b_max is not None
                                        else r["rep"].b_basic) - 1e-6
    )
    full_violations = sum(
        1 for r in records if r["rep"].action_full < r["b_max_raw_u"] - 1e-6
    )
    ok = violations == 0 and full_violations == 0
    ok &= master_suite["seconds"] < 60.0
    ok &= all(r["rep"].holds for r in records)
    _criterion(
        5,
        f"master inequality holds in 1000/1000 audits (500 schedules x 2 norms) "
        f"in {master_suite['seconds']:.1f}s",
        ok,
    )


def test_criterion_6_unitarity_iff():
    rng = np.random.default_rng(606)
    tol = 1e-10
    ok = True
    for _ in range(200):
        n = int(rng.integers(2, 7))
        spec = HamiltonianSpec.constant(
            rand_hermitian(rng, n, 1.2), rng.uniform(0.2, 2.0)
        )
        p = propagate(spec, tol)
        ok &= is_unitary_by_norm(p.u_norm, tol=1e-7)
        for b in (
            bound_basic(p.u_norm),
            bound_inverse(p.u_norm),
            bound_max(p.u_norm),
            bound_geomean(p.u_norm),
            bound_eigen(p.u_norm),
        ):
            ok &= abs(b) <= 1e-7
    produced = 0
    while produced < 200:
        n = int(rng.integers(2, 7))
        h = scaled_to_norm(rand_matrix(rng, n), rng.uniform(0.5, 2.0))
        spec = HamiltonianSpec.constant(h, rng.uniform(0.3, 2.0))
        p = propagate(spec, tol)
        if spectral_norm(p.u_norm) <= 1.0 + 1e-6:
            continue  # too close to unitary to count for this family
        produced += 1
        ok &= not is_unitary_by_norm(p.u_norm, tol=1e-7)
    _criterion(
        6,
        "unit spectral norm of the det-normalized operator is equivalent to "
        "unitarity on 200 + 200 random propagators",
        ok,
    )


def test_criterion_7_mp_tradeoff():
    rng = np.random.default_rng(707)
    ok = True
    for _ in range(200):
        u = rand_invertible(rng, int(rng.integers(2, 7)), scale=2.0)
        ok &= abs(mp_tradeoff(u) - 1.0) <= 1e-9
        alpha_mp = geometric_mean_amplification(marginally_passive(u))
        ok &= alpha_mp <= 1.0 + 1e-12
    _criterion(
        7,
        "marginally passive tradeoff product is 1 and its mean amplification "
        "never exceeds 1 on 200 random invertible operators",
        ok,
    )


def test_criterion_8_liouville_residuals(decay_grid, exceptional_grid, master_suite):
    checks = []
    for run in decay_grid:
        checks.append((run["rep"].liouville_residual, run["tol"]))
    for run in exceptional_grid:
        checks.append((run["rep"].liouville_residual, run["tol"]))
    for r in master_suite["records"]:
        checks.append((r["rep"].liouville_residual, r["tol"]))
    ok = len(checks) > 0 and all(resid <= tol for resid, tol in checks)
    _criterion(
        8,
        f"determinant consistency residual within tolerance for all "
        f"{len(checks)} integrations run by criteria 1-5",
        ok,
    )


def test_criterion_9_structural(master_suite):
    rng = np.random.default_rng(909)
    ok = True
    for _ in range(100):
        u = rand_invertible(rng, int(rng.integers(2, 7)))
        c = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(c) < 0.1:
            c += 1.0
        for kind in NormKind:
            ok &= abs(bound_geomean(c * u, kind) - bound_geomean(u, kind)) <= 1e-10
    for r in master_suite["records"]:
        rep = r["rep"]
        if rep.b_max is not None:
            ok &= rep.b_geomean <= rep.b_max + 1e-10
        if rep.norm_kind is NormKind.SPECTRAL:
            ok &= rep.b_eigen <= rep.b_basic + 1e-10
    _criterion(
        9,
        "geometric-mean bound invariant under rescaling; eigenvalue bound "
        "below forward bound; geometric mean below max bound in all trials",
        ok,
    )
