"""Command-line driver: ``rotomag <subcommand> --config PATH [--set key=value ...]``.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .heff import (
    analytic_eigensystem_A,
    build_heff,
    eigensolve_hermitian,
    eigensystem,
)
from .landau import corrected_energies_C, landau_energies
from .oracle import StepSizeError, convergence_order, oracle_phases_all, propagator_mismatch
from .phases import (
    angular_momentum_trace,
    cyclic_phase_report,
    phase_distance,
    precession_formula,
)
from .scenario import (
    DegenerateFrameError,
    RotatingField,
    ScenarioA,
    ScenarioB,
    ScenarioC,
    derive_frame,
    derive_frame_A,
    resonance_orders,
)

PHASE_TOL = 1e-6
MISMATCH_TOL = 1e-8
NORM_DRIFT_TOL = 1e-9
IDENTITY_TOL = 1e-10
ORDER_TARGET = 4.0
ORDER_TOL = 0.3


@dataclass
class Table:
    rows: list[dict]
    checks: dict = field(default_factory=dict)
    passed: bool = True


def _labels_ab(lab) -> dict:
    if lab is None:
        return {"m": None, "ms": None}
    m, ms = lab
    return {"m": int(m), "ms": float(ms)}


def cmd_spectrum(cfg: RunConfig) -> Table:
    sc = cfg.scenario_obj()
    if isinstance(sc, ScenarioC):
        return _spectrum_c(cfg, sc)
    numeric = eigensolve_hermitian(build_heff(sc).matrix)
    analytic = None
    if not isinstance(sc, ScenarioB) or sc.l == 0 or sc.xi_nl == 0:
        analytic = analytic_eigensystem_A(sc)
    rows = []
    for i, e_num in enumerate(numeric.energies):
        row = {"index": i}
        if analytic is not None:
            row.update(_labels_ab(analytic.labels[i]))
            e_an = float(analytic.energies[i])
            row.update(analytic=e_an, numeric=float(e_num), abs_diff=abs(e_an - float(e_num)))
        else:
            row.update(m=None, ms=None, analytic=None, numeric=float(e_num), abs_diff=None)
        rows.append(row)
    diffs = [r["abs_diff"] for r in rows if r["abs_diff"] is not None]
    checks = {"max_abs_diff": max(diffs) if diffs else None}
    return Table(rows, checks)


def _spectrum_c(cfg: RunConfig, sc: ScenarioC) -> Table:
    rows = []
    spins = [sc.s - k for k in range(sc.two_s + 1)]
    for n_rho in range(cfg.n_rho_max + 1):
        for m in range(-cfg.m_max, cfg.m_max + 1):
            for n_z in range(-cfg.n_z_max, cfg.n_z_max + 1):
                for ms in spins:
                    e0 = landau_energies(sc, n_rho, n_z, m, ms)
                    e1 = corrected_energies_C(sc, n_rho, n_z, m, ms)
                    rows.append(
                        {
                            "n_rho": n_rho,
                            "n_z": n_z,
                            "m": m,
                            "ms": ms,
                            "e_uncorrected": e0,
                            "e_corrected": e1,
                            "difference": e0 - e1,
                        }
                    )
    return Table(rows, {"rows": len(rows)})


def _report_row(rep) -> dict:
    lab = rep.label
    if isinstance(lab, tuple) and len(lab) == 4:
        head = {"n_rho": lab[0], "n_z": lab[1], "m": lab[2], "ms": lab[3]}
    elif isinstance(lab, tuple) and len(lab) == 1:
        head = {"ms": lab[0]}
    elif isinstance(lab, tuple):
        head = _labels_ab(lab)
    else:
        head = {"index": lab}
    identity = phase_distance(rep.delta, rep.beta + rep.gamma)
    return {
        **head,
        "energy": rep.energy,
        "jz_expect": rep.jz_expect,
        "delta": rep.delta,
        "beta": rep.beta,
        "gamma": rep.gamma,
        "gamma_closed_form": rep.gamma_closed_form,
        "closed_form_deviation": rep.closed_form_deviation,
        "closed_form_exact": rep.closed_form_exact,
        "identity_residual": identity,
    }


def cmd_phases(cfg: RunConfig) -> Table:
    sc = cfg.scenario_obj()
    if isinstance(sc, ScenarioC):
        spins = [sc.s - k for k in range(sc.two_s + 1)]
        reps = [cyclic_phase_report(sc, (cfg.n_rho, cfg.n_z, cfg.m, ms)) for ms in spins]
    else:
        system = eigensystem(sc)
        reps = [cyclic_phase_report(sc, index=i) for i in range(len(system))]
        if system.labels is not None:
            reps = [cyclic_phase_report(sc, lab) for lab in system.labels]
    rows = [_report_row(r) for r in reps]
    worst_identity = max(r["identity_residual"] for r in rows)
    devs = [r["closed_form_deviation"] for r in rows if r["closed_form_deviation"] is not None]
    checks = {
        "max_identity_residual": worst_identity,
        "identity_ok": worst_identity <= IDENTITY_TOL,
        "max_closed_form_deviation": max(devs) if devs else None,
    }
    return Table(rows, checks, passed=checks["identity_ok"])


def cmd_trace(cfg: RunConfig) -> Table:
    sc = cfg.scenario_obj()
    period = sc.field.period
    n = max(cfg.samples, 1)
    times = [period * k / (n - 1) for k in range(n)] if n > 1 else [0.0]
    if isinstance(sc, ScenarioC):
        label = (cfg.n_rho, cfg.n_z, cfg.m, cfg.ms)
        frame = derive_frame(sc)
        theta_l, theta_s = sc.field.theta_B, frame.theta_S
        m, ms = cfg.m, cfg.ms
    else:
        label = (cfg.m, cfg.ms)
        frame = derive_frame_A(sc)
        theta_l, theta_s = frame.theta_L, frame.theta_S
        m, ms = label
    pts = angular_momentum_trace(sc, label, times)
    rows = []
    for p in pts:
        l_ref = precession_formula(m, theta_l, sc.field.omega, p.t)
        s_ref = precession_formula(ms, theta_s, sc.field.omega, p.t)
        rows.append(
            {
                "t": p.t,
                "lx": p.l[0],
                "ly": p.l[1],
                "lz": p.l[2],
                "sx": p.s[0],
                "sy": p.s[1],
                "sz": p.s[2],
                "l_formula_dev": float(np.max(np.abs(p.l - l_ref))),
                "s_formula_dev": float(np.max(np.abs(p.s - s_ref))),
            }
        )
    return Table(rows, {"max_s_formula_dev": max(r["s_formula_dev"] for r in rows)})


def cmd_scan(cfg: RunConfig) -> Table:
    ratios = cfg.scan_ratio or [cfg.omega0 / cfg.omega]
    thetas = cfg.scan_theta_B or [cfg.theta_B]
    rows = []
    for ratio in ratios:
        for theta in thetas:
            row = {
                "ratio": ratio,
                "theta_B": theta,
                "cos_theta_B": math.cos(theta),
                "omega_L_over_omega": None,
                "omega_S_over_omega": None,
                "resonant": False,
                "N_L": None,
                "N_S": None,
                "degenerate": False,
            }
            try:
                sc = ScenarioA(RotatingField(cfg.omega, theta), ratio * cfg.omega, cfg.l, cfg.epsilon_nl)
            except ValueError as exc:
                raise ConfigError(str(exc), "scan_ratio" if "omega0" in str(exc) else "scan_theta_B") from None
            try:
                frame = derive_frame_A(sc)
                orders = resonance_orders(sc, cfg.tol)
            except DegenerateFrameError:
                row["degenerate"] = True
                rows.append(row)
                continue
            row["omega_L_over_omega"] = frame.omega_L / cfg.omega
            row["omega_S_over_omega"] = frame.omega_S / cfg.omega
            if orders:
                row.update(resonant=True, N_L=orders[0], N_S=orders[1])
            rows.append(row)
    return Table(rows, {"resonant_cells": sum(1 for r in rows if r["resonant"])})


def cmd_verify(cfg: RunConfig) -> Table:
    sc = cfg.scenario_obj()
    if cfg.steps % 2:
        raise ConfigError("steps must be even for Simpson quadrature", "steps")
    period = sc.field.period
    try:
        mismatch = propagator_mismatch(sc, period, cfg.steps)
        system = eigensystem(sc)
        oracle = oracle_phases_all(sc, system.states, cfg.steps)
    except StepSizeError as exc:
        raise ConfigError(str(exc), "steps") from None
    rows = []
    for i, orc in enumerate(oracle):
        rep = cyclic_phase_report(sc, index=i)
        row = _report_row(rep)
        row.update(
            oracle_delta=orc.total,
            oracle_beta=orc.dynamic,
            oracle_gamma=orc.geometric,
            gamma_deviation=phase_distance(orc.geometric, rep.gamma),
            delta_deviation=phase_distance(orc.total, rep.delta),
            oracle_vs_closed_form=(
                None if rep.gamma_closed_form is None else phase_distance(orc.geometric, rep.gamma_closed_form)
            ),
            norm_drift=orc.norm_drift,
        )
        rows.append(row)
    conv = convergence_order(sc, period)
    gamma_dev = max(max(r["gamma_deviation"], r["delta_deviation"]) for r in rows)
    cf = [r["oracle_vs_closed_form"] for r in rows if r["oracle_vs_closed_form"] is not None]
    drift = max(r["norm_drift"] for r in rows)
    checks = {
        "steps": cfg.steps,
        "propagator_mismatch": mismatch,
        "mismatch_ok": mismatch <= MISMATCH_TOL,
        "max_phase_deviation": gamma_dev,
        "phases_ok": gamma_dev <= PHASE_TOL,
        "max_oracle_vs_closed_form": max(cf) if cf else None,
        "closed_form_ok": (max(cf) <= PHASE_TOL) if cf else None,
        "norm_drift": drift,
        "norm_drift_ok": drift <= NORM_DRIFT_TOL,
        "convergence_steps": list(conv.steps),
        "convergence_errors": list(conv.errors),
        "convergence_order": conv.order,
        "convergence_ok": abs(conv.order - ORDER_TARGET) <= ORDER_TOL,
    }
    flags = [v for k, v in checks.items() if k.endswith("_ok") and v is not None]
    return Table(rows, checks, passed=all(flags))


COMMANDS = {
    "spectrum": cmd_spectrum,
    "phases": cmd_phases,
    "trace": cmd_trace,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def _fmt(value, precision: Optional[int]):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return format(value, f".{precision}g") if precision else repr(value)
    return str(value)


def _jsonable(value, precision: Optional[int]):
    if isinstance(value, dict):
        return {k: _jsonable(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, precision) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(format(value, f".{precision}g")) if precision else value
    return value


def render(table: Table, cfg: RunConfig, subcommand: str) -> str:
    if cfg.format == "json":
        meta = {"subcommand": subcommand, "version": __version__, "config": cfg.to_dict()}
        if cfg.timestamp:
            meta["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        doc = {
            "meta": meta,
            "rows": table.rows,
            "checks": {**table.checks, "passed": table.passed},
        }
        return json.dumps(_jsonable(doc, cfg.precision), indent=2) + "\n"
    header: list[str] = []
    for row in table.rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in table.rows:
        writer.writerow([_fmt(row.get(k), cfg.precision) for k in header])
    return buf.getvalue()


def _schema_epilog() -> str:
    schema = json.loads(resources.files("rotomag").joinpath("schema.json").read_text(encoding="utf-8"))
    lines = ["CSV columns by subcommand:"]
    for name, cols in schema["csv_columns"].items():
        lines.append(f"  {name}: {', '.join(cols)}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotomag",
        description="Charged particles in a rotating magnetic field: spectra, cyclic phases, oracle checks.",
        epilog=_schema_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"rotomag {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, epilog=_schema_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", metavar="PATH", help="flat key = value config file")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], help="override a config key")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from JSON meta")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(
            args.config,
            args.set,
            format=args.format,
            out=args.out,
            timestamp=False if args.no_timestamp else None,
        )
        table = COMMANDS[args.subcommand](cfg)
    except ConfigError as exc:
        key = f" [key: {exc.key}]" if exc.key else ""
        print(f"rotomag: config error{key}: {exc}", file=sys.stderr)
        return 2
    except DegenerateFrameError as exc:
        print(f"rotomag: degenerate parameters: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"rotomag: invalid input: {exc}", file=sys.stderr)
        return 2
    text = render(table, cfg, args.subcommand)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not table.passed:
        failed = sorted(k[: -len("_ok")] for k, v in table.checks.items() if k.endswith("_ok") and not v)
        print(f"rotomag: checks failed: {', '.join(failed) or 'see output'}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
