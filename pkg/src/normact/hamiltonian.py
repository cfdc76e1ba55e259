"""Time-dependent Hamiltonian schedules and the norm-action functional.

A HamiltonianSpec describes H(t) on a horizon [0, T] in one of four forms:
constant, piecewise constant, sampled on a grid (linear interpolation), or
a closed-form callable. `norm_action` integrates t -> ||H(t)|| (optionally
with the traceless projection applied first) by adaptive composite Simpson
quadrature with schedule joints forced as panel boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergence, OutOfRange
from .linalg import NormKind, as_matrix, matrix_norm

CONSTANT = "constant"
PIECEWISE = "piecewise_constant"
SAMPLED = "sampled"
CLOSED_FORM = "closed_form"

# Refinement budget for one norm_action call, counted in examined panels.
MAX_PANELS = 2**20


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class HamiltonianSpec:
    """Immutable description of H(t) on [0, T]. Build via the classmethods."""

    dim: int
    t_final: float
    kind: str
    matrix: np.ndarray | None = field(default=None, repr=False)
    segments: tuple[tuple[float, np.ndarray], ...] = field(default=(), repr=False)
    times: np.ndarray | None = field(default=None, repr=False)
    samples: np.ndarray | None = field(default=None, repr=False)
    fn: Callable[[float], np.ndarray] | None = field(default=None, repr=False)
    # schedule joints interior to (0, T); forced quadrature/integrator edges
    breakpoints: tuple[float, ...] = ()

    @classmethod
    def constant(cls, matrix, t_final: float) -> "HamiltonianSpec":
        """Time-independent H on [0, t_final]."""
        m = _freeze(as_matrix(matrix))
        _check_horizon(t_final)
        return cls(dim=m.shape[0], t_final=float(t_final), kind=CONSTANT, matrix=m)

    @classmethod
    def piecewise_constant(
        cls,
        segments: Sequence[tuple[float, np.ndarray]],
        t_final: float | None = None,
    ) -> "HamiltonianSpec":
        """Schedule of (duration, matrix) segments applied in order.

        Durations must be positive and sum to at least t_final (which
        defaults to the total duration).
        """
        if not segments:
            raise ValueError("piecewise schedule needs at least one segment")
        mats = [_freeze(as_matrix(m)) for _, m in segments]
        durs = [float(d) for d, _ in segments]
        dim = mats[0].shape[0]
        if any(m.shape[0] != dim for m in mats):
            raise ValueError("all segments must share one dimension")
        if any(not np.isfinite(d) or d <= 0 for d in durs):
            raise ValueError("segment durations must be positive")
        total = float(np.sum(durs))
        horizon = total if t_final is None else float(t_final)
        _check_horizon(horizon)
        if total < horizon - 1e-12 * max(1.0, horizon):
            raise ValueError("segment durations must cover the horizon")
        edges = np.cumsum(durs)[:-1]
        inner = tuple(float(e) for e in edges if 0.0 < e < horizon)
        return cls(
            dim=dim,
            t_final=horizon,
            kind=PIECEWISE,
            segments=tuple(zip(durs, mats)),
            breakpoints=inner,
        )

    @classmethod
    def sampled(
        cls,
        times: Sequence[float],
        matrices: Sequence[np.ndarray],
        t_final: float | None = None,
    ) -> "HamiltonianSpec":
        """H sampled on a strictly increasing grid, linearly interpolated.

        The grid must start at 0; the horizon defaults to the last node.
        """
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("need at least two sample times")
        if t[0] != 0.0:
            raise ValueError("sample grid must start at t = 0")
        if not np.all(np.diff(t) > 0):
            raise ValueError("sample times must be strictly increasing")
        mats = np.stack([as_matrix(m) for m in matrices])
        if mats.shape[0] != t.size:
            raise ValueError("one matrix per sample time required")
        dim = mats.shape[1]
        horizon = float(t[-1]) if t_final is None else float(t_final)
        _check_horizon(horizon)
        if horizon > t[-1] + 1e-12 * max(1.0, horizon):
            raise ValueError("sample grid must cover the horizon")
        inner = tuple(float(x) for x in t if 0.0 < x < horizon)
        return cls(
            dim=dim,
            t_final=horizon,
            kind=SAMPLED,
            times=_freeze(t),
            samples=_freeze(mats),
            breakpoints=inner,
        )

    @classmethod
    def closed_form(
        cls,
        fn: Callable[[float], np.ndarray],
        dim: int,
        t_final: float,
        breakpoints: Sequence[float] = (),
    ) -> "HamiltonianSpec":
        """H(t) given by a callable returning a dim x dim matrix."""
        _check_horizon(t_final)
        if int(dim) < 1:
            raise ValueError("dim must be >= 1")
        inner = tuple(sorted(float(b) for b in breakpoints if 0.0 < b < t_final))
        return cls(
            dim=int(dim),
            t_final=float(t_final),
            kind=CLOSED_FORM,
            fn=fn,
            breakpoints=inner,
        )


def _check_horizon(t_final: float) -> None:
    if not np.isfinite(t_final) or t_final <= 0:
        raise ValueError("horizon t_final must be positive and finite")


def evaluate(spec: HamiltonianSpec, t: float) -> np.ndarray:
    """H(t) for t in [0, T]; raises OutOfRange outside the horizon."""
    if t < 0.0 or t > spec.t_final:
        raise OutOfRange(f"t = {t} outside [0, {spec.t_final}]")
    if spec.kind == CONSTANT:
        return spec.matrix
    if spec.kind == PIECEWISE:
        acc = 0.0
        for dur, m in spec.segments:
            acc += dur
            if t < acc:
                return m
        return spec.segments[-1][1]
    if spec.kind == SAMPLED:
        times = spec.times
        idx = int(np.searchsorted(times, t, side="right"))
        if idx <= 0:
            return spec.samples[0]
        if idx >= times.size:
            return spec.samples[-1]
        t0, t1 = times[idx - 1], times[idx]
        lam = (t - t0) / (t1 - t0)
        return (1.0 - lam) * spec.samples[idx - 1] + lam * spec.samples[idx]
    return as_matrix(spec.fn(t))


def _evaluate_left_limit(spec: HamiltonianSpec, t: float) -> np.ndarray:
    """H(t^-): at a piecewise joint, the segment ending there."""
    if spec.kind == PIECEWISE and t > 0.0:
        if t > spec.t_final:
            raise OutOfRange(f"t = {t} outside [0, {spec.t_final}]")
        acc = 0.0
        for dur, m in spec.segments:
            acc += dur
            if t <= acc:
                return m
        return spec.segments[-1][1]
    return evaluate(spec, t)


def traceless(h) -> np.ndarray:
    """Remove the trace part: h - (tr h / N) I.

    The trace only multiplies the evolution by a global phase/attenuation,
    so this isolates the part of H doing actual state transformation.
    """
    a = as_matrix(h)
    n = a.shape[0]
    return a - (np.trace(a) / n) * np.eye(n, dtype=complex)


def window(spec: HamiltonianSpec, t0: float, t1: float) -> HamiltonianSpec:
    """Restrict a schedule to [t0, t1], re-parameterized to start at 0."""
    if not (0.0 <= t0 < t1 <= spec.t_final):
        raise OutOfRange(f"window [{t0}, {t1}] not inside [0, {spec.t_final}]")
    span = t1 - t0
    if spec.kind == CONSTANT:
        return HamiltonianSpec.constant(spec.matrix, span)
    if spec.kind == PIECEWISE:
        segs = []
        acc = 0.0
        for dur, m in spec.segments:
            a, b = acc, acc + dur
            acc = b
            lo, hi = max(a, t0), min(b, t1)
            if hi > lo:
                segs.append((hi - lo, m))
            if b >= t1:
                break
        return HamiltonianSpec.piecewise_constant(segs, t_final=span)
    if spec.kind == SAMPLED:
        inner = [t for t in spec.times if t0 < t < t1]
        grid = np.array([t0, *inner, t1])
        mats = [evaluate(spec, t) for t in grid]
        return HamiltonianSpec.sampled(grid - t0, mats, t_final=span)
    shifted = [b - t0 for b in spec.breakpoints if t0 < b < t1]
    base = spec.fn
    return HamiltonianSpec.closed_form(
        lambda t: base(min(t + t0, t1)), spec.dim, span, breakpoints=shifted
    )


def panel_edges(spec: HamiltonianSpec) -> np.ndarray:
    """Sorted panel boundaries [0, ...joints..., T] for integration."""
    return np.unique(np.array([0.0, *spec.breakpoints, spec.t_final]))


def norm_action(
    spec: HamiltonianSpec,
    norm: NormKind = NormKind.SPECTRAL,
    use_traceless: bool = True,
    tol: float = 1e-8,
    max_panels: int = MAX_PANELS,
) -> float:
    """Integral of ||H(t)|| over [0, T] to absolute accuracy `tol`.

    Parameters
    ----------
    spec : HamiltonianSpec
        The schedule to integrate.
    norm : NormKind
        Matrix norm applied at each instant.
    use_traceless : bool
        Project out the trace part of H(t) before taking the norm.
    tol : float
        Absolute quadrature error target, distributed over panels by length.
    max_panels : int
        Refinement budget; NonConvergence when exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")

    if use_traceless:
        def f(t: float) -> float:
            return matrix_norm(traceless(evaluate(spec, t)), norm)

        def f_left(t: float) -> float:
            return matrix_norm(traceless(_evaluate_left_limit(spec, t)), norm)
    else:
        def f(t: float) -> float:
            return matrix_norm(evaluate(spec, t), norm)

        def f_left(t: float) -> float:
            return matrix_norm(_evaluate_left_limit(spec, t), norm)

    edges = panel_edges(spec)
    budget = [int(max_panels)]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        # panel edges can sit on schedule jumps: take the limit from inside
        total += _adaptive_simpson(
            f, a, b, tol * (b - a) / spec.t_final, budget, fa=f(a), fb=f_left(b)
        )
    return total


def _adaptive_simpson(f, a, b, tol, budget, fa=None, fb=None) -> float:
    """Adaptive composite Simpson with bisection and Richardson acceptance."""
    width_floor = 16.0 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    fm = f(0.5 * (a + b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol = stack.pop()
        budget[0] -= 1
        if budget[0] < 0:
            raise NonConvergence(
                "quadrature refinement budget exhausted; schedule too rough"
            )
        m = 0.5 * (a + b)
        flm = f(0.5 * (a + m))
        frm = f(0.5 * (m + b))
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol or (b - a) <= width_floor:
            total += left + right + delta / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, 0.5 * tol))
            stack.append((m, b, fm, frm, fb, right, 0.5 * tol))
    return total
