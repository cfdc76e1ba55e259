"""Command-line front end: audit one schedule, sweep a parameter, list scenarios.

Configs are JSON; complex numbers are two-element arrays [re, im] and
matrices are row-major arrays of rows. Audit reports are JSON documents,
sweeps are CSV tables with a fixed column order. Exit codes: 0 pass,
1 bound violation or oracle mismatch, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .bounds import BoundReport, audit
from .errors import (
    BadParam,
    ConfigError,
    NonConvergence,
    SingularMatrix,
    SingularPropagator,
)
from .hamiltonian import HamiltonianSpec
from .linalg import NormKind
from .scenarios import PARAM_NAMES, Scenario, build_scenario, scenario_residuals

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SWEEP_COLUMNS = (
    "param",
    "action_full",
    "action_traceless",
    "b_basic",
    "b_inverse",
    "b_max",
    "b_geomean",
    "b_eigen",
    "slack",
    "holds",
    "status",
)

_NUMERICAL_ERRORS = (NonConvergence, SingularMatrix, SingularPropagator)


@dataclass(frozen=True)
class SweepBlock:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class AuditConfig:
    norm: NormKind
    tol: float
    scenario: str | None = None
    params: dict | None = None
    hamiltonian: tuple | None = None  # canonical nested-tuple schedule
    output: str | None = None
    sweep: SweepBlock | None = None


# ---------------------------------------------------------------------------
# config parsing / serialization
# ---------------------------------------------------------------------------

def _parse_complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(float(x))
    if (
        isinstance(x, (list, tuple))
        and len(x) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)
    ):
        return complex(float(x[0]), float(x[1]))
    raise ConfigError(f"expected a number or [re, im] pair, got {x!r}")


def _parse_matrix(rows) -> tuple:
    if not isinstance(rows, list) or not rows:
        raise ConfigError("matrix must be a non-empty array of rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != len(rows):
            raise ConfigError("matrix must be square (rows of equal length)")
        out.append(tuple(_parse_complex(v) for v in row))
    return tuple(out)


def _require_number(obj, key, where) -> float:
    v = obj.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(f"{where}: {key!r} must be a number")
    return float(v)


def _parse_hamiltonian(obj) -> tuple:
    if not isinstance(obj, dict):
        raise ConfigError("hamiltonian block must be an object")
    kind = obj.get("kind")
    if kind == "constant":
        allowed = {"kind", "matrix", "t_final"}
        _reject_unknown(obj, allowed, "hamiltonian")
        return ("constant", _require_number(obj, "t_final", "hamiltonian"),
                _parse_matrix(obj.get("matrix")))
    if kind == "piecewise_constant":
        allowed = {"kind", "segments", "t_final"}
        _reject_unknown(obj, allowed, "hamiltonian")
        segs = obj.get("segments")
        if not isinstance(segs, list) or not segs:
            raise ConfigError("piecewise_constant needs a non-empty segments array")
        parsed = []
        for seg in segs:
            if not isinstance(seg, dict):
                raise ConfigError("each segment must be an object")
            _reject_unknown(seg, {"duration", "matrix"}, "segment")
            parsed.append(
                (_require_number(seg, "duration", "segment"),
                 _parse_matrix(seg.get("matrix")))
            )
        t_final = obj.get("t_final")
        if t_final is not None:
            t_final = _require_number(obj, "t_final", "hamiltonian")
        return ("piecewise_constant", t_final, tuple(parsed))
    if kind == "sampled":
        allowed = {"kind", "times", "matrices", "t_final"}
        _reject_unknown(obj, allowed, "hamiltonian")
        times = obj.get("times")
        mats = obj.get("matrices")
        if not isinstance(times, list) or not isinstance(mats, list):
            raise ConfigError("sampled needs times and matrices arrays")
        if any(isinstance(t, bool) or not isinstance(t, (int, float)) for t in times):
            raise ConfigError("sample times must be numbers")
        t_final = obj.get("t_final")
        if t_final is not None:
            t_final = _require_number(obj, "t_final", "hamiltonian")
        return (
            "sampled",
            t_final,
            tuple(float(t) for t in times),
            tuple(_parse_matrix(m) for m in mats),
        )
    raise ConfigError(
        "hamiltonian kind must be one of constant, piecewise_constant, sampled"
    )


def _reject_unknown(obj, allowed, where) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")


def parse_config(obj) -> AuditConfig:
    """Validate a decoded JSON object into an AuditConfig."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(
        obj, {"scenario", "hamiltonian", "norm", "tol", "output", "sweep"}, "config"
    )

    norm_name = obj.get("norm", "spectral")
    try:
        norm = NormKind(norm_name)
    except ValueError:
        raise ConfigError(f"norm must be 'spectral' or 'frobenius', got {norm_name!r}")

    tol = obj.get("tol", 1e-8)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool):
        raise ConfigError("tol must be a number")
    tol = float(tol)
    if not (0.0 < tol <= 1e-2):
        raise ConfigError(f"tol must lie in (0, 1e-2], got {tol}")

    scenario_block = obj.get("scenario")
    ham_block = obj.get("hamiltonian")
    if (scenario_block is None) == (ham_block is None):
        raise ConfigError("config needs exactly one of 'scenario' or 'hamiltonian'")

    scenario = None
    params = None
    hamiltonian = None
    if scenario_block is not None:
        if not isinstance(scenario_block, dict):
            raise ConfigError("scenario block must be an object")
        _reject_unknown(scenario_block, {"name", "params"}, "scenario")
        scenario = scenario_block.get("name")
        if scenario not in PARAM_NAMES:
            raise ConfigError(
                f"unknown scenario {scenario!r}; choose from {sorted(PARAM_NAMES)}"
            )
        raw_params = scenario_block.get("params", {})
        if not isinstance(raw_params, dict):
            raise ConfigError("scenario params must be an object")
        _reject_unknown(raw_params, PARAM_NAMES[scenario], "scenario params")
        params = {k: _require_number(raw_params, k, "scenario params")
                  for k in raw_params}
    else:
        hamiltonian = _parse_hamiltonian(ham_block)

    output = obj.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output must be a string path")

    sweep = None
    sweep_block = obj.get("sweep")
    if sweep_block is not None:
        if not isinstance(sweep_block, dict):
            raise ConfigError("sweep block must be an object")
        _reject_unknown(sweep_block, {"parameter", "values"}, "sweep")
        if scenario is None:
            raise ConfigError("sweeps require a builtin scenario")
        parameter = sweep_block.get("parameter")
        if parameter not in PARAM_NAMES[scenario]:
            raise ConfigError(
                f"sweep parameter {parameter!r} not in scenario {scenario!r} "
                f"(has {list(PARAM_NAMES[scenario])})"
            )
        values = sweep_block.get("values")
        if not isinstance(values, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in values
        ):
            raise ConfigError("sweep values must be an array of numbers")
        sweep = SweepBlock(parameter=parameter, values=tuple(float(v) for v in values))

    return AuditConfig(
        norm=norm,
        tol=tol,
        scenario=scenario,
        params=params,
        hamiltonian=hamiltonian,
        output=output,
        sweep=sweep,
    )


def _complex_out(z: complex) -> list:
    return [z.real, z.imag]


def _matrix_out(m) -> list:
    return [[_complex_out(complex(v)) for v in row] for row in np.asarray(m)]


def config_to_dict(cfg: AuditConfig) -> dict:
    """Serialize a config back to its JSON object form."""
    out: dict = {"norm": cfg.norm.value, "tol": cfg.tol}
    if cfg.scenario is not None:
        out["scenario"] = {"name": cfg.scenario, "params": dict(cfg.params)}
    else:
        kind = cfg.hamiltonian[0]
        if kind == "constant":
            _, t_final, matrix = cfg.hamiltonian
            out["hamiltonian"] = {
                "kind": kind,
                "t_final": t_final,
                "matrix": _matrix_out(matrix),
            }
        elif kind == "piecewise_constant":
            _, t_final, segments = cfg.hamiltonian
            block = {
                "kind": kind,
                "segments": [
                    {"duration": d, "matrix": _matrix_out(m)} for d, m in segments
                ],
            }
            if t_final is not None:
                block["t_final"] = t_final
            out["hamiltonian"] = block
        else:
            _, t_final, times, mats = cfg.hamiltonian
            block = {
                "kind": kind,
                "times": list(times),
                "matrices": [_matrix_out(m) for m in mats],
            }
            if t_final is not None:
                block["t_final"] = t_final
            out["hamiltonian"] = block
    if cfg.output is not None:
        out["output"] = cfg.output
    if cfg.sweep is not None:
        out["sweep"] = {
            "parameter": cfg.sweep.parameter,
            "values": list(cfg.sweep.values),
        }
    return out


# ---------------------------------------------------------------------------
# audit / sweep execution
# ---------------------------------------------------------------------------

def build_spec(cfg: AuditConfig) -> tuple[HamiltonianSpec, Scenario | None]:
    """Materialize the schedule (and scenario, when builtin) from a config."""
    if cfg.scenario is not None:
        try:
            sc = build_scenario(cfg.scenario, cfg.params)
        except BadParam as exc:
            raise ConfigError(str(exc)) from exc
        return sc.spec, sc
    kind = cfg.hamiltonian[0]
    try:
        if kind == "constant":
            _, t_final, matrix = cfg.hamiltonian
            return HamiltonianSpec.constant(np.array(matrix), t_final), None
        if kind == "piecewise_constant":
            _, t_final, segments = cfg.hamiltonian
            segs = [(d, np.array(m)) for d, m in segments]
            return HamiltonianSpec.piecewise_constant(segs, t_final=t_final), None
        _, t_final, times, mats = cfg.hamiltonian
        return (
            HamiltonianSpec.sampled(times, [np.array(m) for m in mats], t_final),
            None,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _report_to_dict(rep: BoundReport) -> dict:
    p = rep.propagator
    return {
        "norm_kind": rep.norm_kind.value,
        "action_full": rep.action_full,
        "action_traceless": rep.action_traceless,
        "b_basic": rep.b_basic,
        "b_inverse": rep.b_inverse,
        "b_max": rep.b_max,
        "b_geomean": rep.b_geomean,
        "b_eigen": rep.b_eigen,
        "slack": rep.slack,
        "holds": rep.holds,
        "mean_amp": rep.mean_amp,
        "mp_tradeoff": rep.mp_tradeoff,
        "singular_values": [float(w) for w in rep.singular_values],
        "steps": rep.steps,
        "est_error": rep.est_error,
        "liouville_residual": rep.liouville_residual,
        "propagator": {
            "u": _matrix_out(p.u),
            "u_norm": _matrix_out(p.u_norm),
            "det_u": _complex_out(p.det_u),
            "trace_integral": _complex_out(p.trace_integral),
        },
    }


def run_audit(cfg: AuditConfig) -> tuple[dict, int]:
    """Audit one schedule; returns (report document, exit code)."""
    spec, sc = build_spec(cfg)
    rep = audit(spec, cfg.norm, cfg.tol)
    doc = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": config_to_dict(cfg),
        "report": _report_to_dict(rep),
        "residuals": None,
    }
    passed = rep.holds
    if sc is not None:
        res = scenario_residuals(sc, cfg.tol)
        doc["residuals"] = res
        passed = passed and all(v <= 10.0 * cfg.tol for v in res.values())
    doc["passed"] = passed
    return doc, (EXIT_PASS if passed else EXIT_VIOLATION)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return format(float(v), ".17g")


def _sweep_row(cfg: AuditConfig, value: float) -> dict:
    params = dict(cfg.params)
    params[cfg.sweep.parameter] = value
    row = {c: "" for c in SWEEP_COLUMNS}
    row["param"] = _fmt(value)
    try:
        sc = build_scenario(cfg.scenario, params)
        rep = audit(sc.spec, cfg.norm, cfg.tol)
    except (BadParam, *_NUMERICAL_ERRORS) as exc:
        row["status"] = type(exc).__name__
        return row
    for name in ("action_full", "action_traceless", "b_basic", "b_inverse",
                 "b_max", "b_geomean", "b_eigen", "slack", "holds"):
        row[name] = _fmt(getattr(rep, name))
    row["status"] = "ok"
    return row


def run_sweep(cfg: AuditConfig) -> tuple[list[dict], int]:
    """Audit the scenario once per sweep value; returns (rows, exit code)."""
    if cfg.sweep is None:
        raise ConfigError("sweep block required for the sweep command")
    values = cfg.sweep.values
    if not values:
        return [], EXIT_PASS
    workers = min(len(values), _thread_cap())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda v: _sweep_row(cfg, v), values))
    else:
        rows = [_sweep_row(cfg, v) for v in values]

    statuses = {r["status"] for r in rows}
    if statuses & {e.__name__ for e in _NUMERICAL_ERRORS}:
        code = EXIT_NUMERICAL
    elif "BadParam" in statuses:
        code = EXIT_CONFIG
    elif any(r["holds"] == "false" for r in rows):
        code = EXIT_VIOLATION
    else:
        code = EXIT_PASS
    return rows, code


def _thread_cap() -> int:
    raw = os.environ.get("NORMACT_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"NORMACT_THREADS must be an integer, got {raw!r}")
    return max(1, cap)


def write_sweep_csv(rows: list[dict], path: str) -> None:
    """Fixed-order CSV, UTF-8, LF line endings, 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _load_config(path: str) -> AuditConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    return parse_config(obj)


def _write_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="normact",
        description="Audit resource lower bounds for non-unitary evolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="audit one schedule against its bounds")
    p_audit.add_argument("--config", required=True, help="path to a JSON config")
    p_audit.add_argument("--out", help="report path (default: config output or stdout)")

    p_sweep = sub.add_parser("sweep", help="audit a scenario over a parameter range")
    p_sweep.add_argument("--config", required=True, help="path to a JSON config")
    p_sweep.add_argument("--out", required=True, help="CSV output path")

    p_list = sub.add_parser("scenarios", help="list builtin scenarios")
    p_list.add_argument("--list", action="store_true", help="list names and parameters")

    args = parser.parse_args(argv)

    if args.command == "scenarios":
        for name in sorted(PARAM_NAMES):
            print(f"{name}: {', '.join(PARAM_NAMES[name])}")
        return EXIT_PASS

    try:
        cfg = _load_config(args.config)
        if args.command == "audit":
            doc, code = run_audit(cfg)
            _write_json(doc, args.out or cfg.output)
            return code
        rows, code = run_sweep(cfg)
        write_sweep_csv(rows, args.out)
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
