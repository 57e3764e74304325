"""Batch command-line tool: simulate, sweep, verify, oracle, plot.

All behavior is driven by scenario files and flags; identical invocations
produce identical output trees.  Field dumps are plain CSV with full
round-trip float precision, so downstream verification reproduces in-run
numbers bit for bit.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import integrate, verify
from .errors import ConstraintError, PositivityError
from .grid import PeriodicField, Torus
from .presets import PRESETS, load_preset
from .scenario import Scenario, format_keyvalues, parse_keyvalues
from .scheme import FlowState, recover_velocity

OUT_ROOT_ENV = "TORUSFLOW_OUT"


# ---------------------------------------------------------------------------
# field dumps
# ---------------------------------------------------------------------------

def dump_fields(state: FlowState, path) -> None:
    """Write one snapshot as CSV: x,rho,u (1-D) or x,y,rho,u,v (2-D).

    One row per cell at cell-center coordinates, repr precision (exact
    round-trip), row order fixed by the grid iteration order.
    """
    torus = state.torus
    vels = recover_velocity(state)
    try:
        with open(path, "w") as fh:
            if torus.dim == 1:
                fh.write("x,rho,u\n")
                x = torus.axis_centers()
                rho = state.rho.values
                u = vels[0].values
                for i in range(torus.cells):
                    fh.write(f"{x[i]!r},{rho[i]!r},{u[i]!r}\n")
            else:
                fh.write("x,y,rho,u,v\n")
                x = torus.axis_centers()
                rho = state.rho.values
                u, v = vels[0].values, vels[1].values
                for i in range(torus.cells):
                    for j in range(torus.cells):
                        fh.write(f"{x[i]!r},{x[j]!r},{rho[i, j]!r},"
                                 f"{u[i, j]!r},{v[i, j]!r}\n")
    except OSError as exc:
        raise OSError(f"cannot write field dump {path}: {exc}") from exc


def parse_fields(path) -> FlowState:
    """Rebuild a FlowState from a dump written by ``dump_fields``."""
    with open(path) as fh:
        header = fh.readline().strip()
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if header == "x,rho,u":
        cells = len(rows)
        torus = Torus(1, cells)
        rho = np.array([float(r[1]) for r in rows])
        u = np.array([float(r[2]) for r in rows])
        rho_f = PeriodicField(torus, rho)
        return FlowState(rho_f, rho_f.with_values(rho * u))
    if header == "x,y,rho,u,v":
        cells = int(round(math.sqrt(len(rows))))
        if cells * cells != len(rows):
            raise ValueError(f"dump {path} is not a square 2-D grid")
        torus = Torus(2, cells)
        data = np.array([[float(v) for v in r] for r in rows])
        rho = data[:, 2].reshape(cells, cells)
        u = data[:, 3].reshape(cells, cells)
        v = data[:, 4].reshape(cells, cells)
        rho_f = PeriodicField(torus, rho)
        return FlowState(rho_f, rho_f.with_values(rho * u), rho_f.with_values(rho * v))
    raise ValueError(f"unrecognized dump header {header!r} in {path}")


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _load_scenario(token: str, overrides) -> Scenario:
    ov = dict(kv.split("=", 1) for kv in overrides) if overrides else None
    if token in PRESETS:
        return load_preset(token, overrides=ov)
    path = Path(token)
    if not path.exists():
        raise ConstraintError(
            f"{token!r} is neither a preset ({', '.join(PRESETS)}) nor a file")
    return Scenario.from_text(path.read_text(), name=path.stem, overrides=ov)


def _snapshot_residuals(scenario: Scenario, built, out_dir: Path):
    """Dump snapshots, then compute residual records from the round-tripped
    dumps so that `verify` reproduces them exactly."""
    records = []
    snapshot_keys = {}
    psis = scenario.test_functions(built.torus)
    traj = integrate.run(built.initial, built.law, built.split, built.run_cfg,
                         built.eps)
    for idx, (t, state) in enumerate(traj.snapshots):
        fname = f"fields_{idx:04d}.csv"
        dump_fields(state, out_dir / fname)
        snapshot_keys[f"snapshot.{idx}.t"] = repr(t)
        snapshot_keys[f"snapshot.{idx}.file"] = fname
        state_rt = parse_fields(out_dir / fname)
        rhs = integrate.system_rhs(state_rt, built.law, built.split, built.eps)
        for psi in psis:
            res = verify.weak_residual(state_rt, rhs, built.law, psi, built.eps)
            for eq, val in res.items():
                records.append(verify.ResidualRecord(built.eps, t, psi.psi_id,
                                                     eq, val))
    return traj, records, snapshot_keys


def _write_monitors(traj, path) -> None:
    with open(path, "w") as fh:
        fh.write("step,t,mass,expected_mass,min_rho,max_rho,max_speed,max_grad_phi\n")
        for m in traj.monitors:
            fh.write(f"{m.step},{m.t!r},{m.mass!r},{m.expected_mass!r},"
                     f"{m.min_rho!r},{m.max_rho!r},{m.max_speed!r},{m.max_grad_phi!r}\n")


def _default_out(name: str) -> Path:
    root = os.environ.get(OUT_ROOT_ENV)
    if root is None:
        raise ConstraintError(
            f"no --out given and {OUT_ROOT_ENV} is not set")
    return Path(root) / name


def cmd_simulate(args) -> int:
    scenario = _load_scenario(args.scenario, args.override)
    out_dir = Path(args.out) if args.out else _default_out(scenario.name)
    out_dir.mkdir(parents=True, exist_ok=True)
    built = scenario.build()
    traj, records, snapshot_keys = _snapshot_residuals(scenario, built, out_dir)
    cfg = scenario.canonical_mapping()
    cfg.update(snapshot_keys)
    (out_dir / "run.cfg").write_text(format_keyvalues(cfg))
    verify.write_report(records, out_dir / "residuals.csv")
    _write_monitors(traj, out_dir / "monitors.csv")
    last = traj.monitors[-1]
    print(f"{scenario.name}: {last.step} steps to t={last.t:g}; "
          f"min rho {last.min_rho:.3g}, max |u| {last.max_speed:.3g}, "
          f"mass drift {abs(last.mass - last.expected_mass):.2e} -> {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _sweep_member(packed):
    token, scenario_mapping, name, out_dir = packed
    scenario = Scenario.from_mapping(scenario_mapping, name=name)
    member_dir = Path(out_dir)
    member_dir.mkdir(parents=True, exist_ok=True)
    built = scenario.build()
    traj, records, snapshot_keys = _snapshot_residuals(scenario, built, member_dir)
    cfg = scenario.canonical_mapping()
    cfg.update(snapshot_keys)
    (member_dir / "run.cfg").write_text(format_keyvalues(cfg))
    verify.write_report(records, member_dir / "residuals.csv")
    _write_monitors(traj, member_dir / "monitors.csv")
    return token


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args.scenario, args.override)
    out_dir = Path(args.out) if args.out else _default_out(
        f"{scenario.name}-sweep-{args.param}")
    out_dir.mkdir(parents=True, exist_ok=True)
    tokens = [v.strip() for v in args.values.split(",") if v.strip()]
    if not tokens:
        raise ConstraintError("sweep needs at least one value")

    jobs = []
    for token in tokens:
        if args.param == "delta":
            member = scenario.with_overrides({"scheme.delta": token})
        else:
            cells = int(round(2.0 * math.pi / float(token)))
            member = scenario.with_overrides({"cells": str(cells)})
        jobs.append((token, member.mapping, f"{scenario.name}-{args.param}={token}",
                     str(out_dir / f"{args.param}={token}")))

    workers = min(len(jobs), os.cpu_count() or 1)
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        list(pool.map(_sweep_member, jobs))

    summary_path = out_dir / "sweep.csv"
    all_records = []
    with open(summary_path, "w") as fh:
        if args.param == "delta":
            fh.write("delta,front_width\n")
        else:
            fh.write("eps,cells\n")
        for token, mapping, _, member_dir in jobs:
            member_dir = Path(member_dir)
            cfg = parse_keyvalues((member_dir / "run.cfg").read_text())
            last_idx = max(int(k.split(".")[1]) for k in cfg if k.startswith("snapshot."))
            state = parse_fields(member_dir / cfg[f"snapshot.{last_idx}.file"])
            all_records.extend(verify.read_report(member_dir / "residuals.csv"))
            if args.param == "delta":
                width = verify.front_width(state.torus.axis_centers(), state.rho.values)
                fh.write(f"{token},{width!r}\n")
            else:
                fh.write(f"{state.torus.h!r},{state.torus.cells}\n")
    if args.param == "eps":
        verdicts = verify.certify_decay(all_records)
        with open(out_dir / "decay.txt", "w") as fh:
            for eq, v in sorted(verdicts.items()):
                line = f"{'PASS' if v.passed else 'FAIL'} {eq}: slope {v.slope:.4f}"
                fh.write(line + "\n")
                print(line)
    print(f"sweep over {args.param} in {{{', '.join(tokens)}}} -> {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    run_dir = Path(args.run_dir)
    cfg = parse_keyvalues((run_dir / "run.cfg").read_text())
    scenario_map = {k: v for k, v in cfg.items() if not k.startswith("snapshot.")}
    scenario = Scenario.from_mapping(scenario_map, name=run_dir.name)
    built = scenario.build()
    psis = scenario.test_functions(built.torus)

    snapshots = sorted(
        (int(k.split(".")[1]), v) for k, v in cfg.items() if k.endswith(".file"))
    records = []
    for idx, fname in snapshots:
        t = float(cfg[f"snapshot.{idx}.t"])
        state = parse_fields(run_dir / fname)
        rhs = integrate.system_rhs(state, built.law, built.split, built.eps)
        for psi in psis:
            res = verify.weak_residual(state, rhs, built.law, psi, built.eps)
            for eq, val in res.items():
                records.append(verify.ResidualRecord(built.eps, t, psi.psi_id, eq, val))

    ok = True

    stored = verify.read_report(run_dir / "residuals.csv")
    reproduced = stored == records
    print(f"{'PASS' if reproduced else 'FAIL'} residual-reproduction: "
          f"{len(records)} records recomputed from dumps "
          f"{'match' if reproduced else 'differ from'} residuals.csv")
    ok &= reproduced

    tol = 100.0 * np.finfo(float).eps * built.torus.cells
    worst = 0.0
    min_rho = math.inf
    speeds = []
    with open(run_dir / "monitors.csv") as fh:
        fh.readline()
        for line in fh:
            vals = line.strip().split(",")
            _, t, mass, expected, mr = vals[0], *map(float, vals[1:5])
            worst = max(worst, abs(mass - expected))
            min_rho = min(min_rho, mr)
            speeds.append((float(vals[1]), float(vals[6])))
    mass_ok = worst <= tol
    print(f"{'PASS' if mass_ok else 'FAIL'} mass-law: worst deviation {worst:.3e} "
          f"(tolerance {tol:.3e})")
    ok &= mass_ok
    pos_ok = min_rho > 0.0
    print(f"{'PASS' if pos_ok else 'FAIL'} positivity: min rho {min_rho:.3e}")
    ok &= pos_ok
    ts = np.array([s[0] for s in speeds])
    us = np.array([s[1] for s in speeds])
    growth = float(np.polyfit(ts, us, 1)[0]) if len(ts) > 1 and ts.ptp() > 0 else 0.0
    env_ok = bool(np.all(np.isfinite(us)))
    print(f"{'PASS' if env_ok else 'FAIL'} velocity-envelope: max |u| {us.max():.4g}, "
          f"linear growth rate {growth:.4g}")
    ok &= env_ok
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def cmd_oracle(args) -> int:
    spec = parse_keyvalues(Path(args.spec).read_text())
    system = spec.get("system")
    t = float(spec["t"])
    if t <= 0.0:
        raise ConstraintError("oracle time t must be positive")
    cells = int(spec.get("cells", "1000"))
    center = float(spec.get("center", repr(math.pi)))
    torus = Torus(1, cells)
    x = torus.axis_centers()
    xi = ((x - center + math.pi) % (2.0 * math.pi) - math.pi) / t
    if system == "shallow":
        oracle = verify.ShallowWaterRiemann(
            float(spec["left.rho"]), float(spec["left.u"]),
            float(spec["right.rho"]), float(spec["right.u"]),
            float(spec.get("constants.g", "9.8")))
    elif system == "isothermal":
        oracle = verify.IsothermalRiemann(
            float(spec["left.rho"]), float(spec["left.u"]),
            float(spec["right.rho"]), float(spec["right.u"]),
            float(spec.get("constants.K", "1.0")))
    else:
        raise ConstraintError(
            f"oracle system must be shallow or isothermal, got {system!r}")
    rho, u = oracle(xi)
    lines = ["x,rho,u"]
    for i in range(cells):
        lines.append(f"{x[i]!r},{rho[i]!r},{u[i]!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"oracle samples -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------

_PLOT_SCRIPT = '''"""Render density/velocity panels from the field dumps in this directory."""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).parent
cfg = {}
for line in (HERE / "run.cfg").read_text().splitlines():
    if "=" in line:
        k, v = line.split("=", 1)
        cfg[k.strip()] = v.strip()

snaps = sorted(int(k.split(".")[1]) for k in cfg if k.endswith(".file"))
fig, axes = plt.subplots(len(snaps), 2, figsize=(10, 2.6 * len(snaps)),
                         squeeze=False)
for row, idx in enumerate(snaps):
    with open(HERE / cfg[f"snapshot.{idx}.file"]) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = list(zip(*[[float(v) for v in r] for r in reader]))
    x, rho, u = cols[0], cols[-2 if len(header) == 3 else 2], cols[-1 if len(header) == 3 else 3]
    t = float(cfg[f"snapshot.{idx}.t"])
    axes[row][0].plot(x, rho, lw=0.9)
    axes[row][0].set_ylabel(f"t = {t:g}")
    axes[row][1].plot(x, u, lw=0.9, color="tab:red")
    if row == 0:
        axes[row][0].set_title("density / height")
        axes[row][1].set_title("velocity")
fig.tight_layout()
out = HERE / "panels.png"
fig.savefig(out, dpi=130)
print(f"wrote {out}")
'''


def cmd_plot(args) -> int:
    run_dir = Path(args.run_dir)
    if not (run_dir / "run.cfg").exists():
        raise ConstraintError(f"{run_dir} does not contain run.cfg")
    script = run_dir / "plot.py"
    script.write_text(_PLOT_SCRIPT)
    print(f"plot script -> {script}; run it with: python3 {script}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusflow",
        description="Periodic-domain compressible-flow solver and verification tool")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario and dump results")
    p.add_argument("scenario", help="preset name or scenario file path")
    p.add_argument("--override", action="append", default=[],
                   metavar="KEY=VALUE", help="override a scenario key")
    p.add_argument("--out", help=f"output directory (default ${OUT_ROOT_ENV}/<name>)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("sweep", help="run a scenario over a parameter sweep")
    p.add_argument("--param", choices=("eps", "delta"), required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("scenario")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="recompute residuals and certificates from dumps")
    p.add_argument("run_dir")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("oracle", help="emit exact Riemann solution samples")
    p.add_argument("spec", help="key=value file describing the Riemann problem")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("plot", help="emit a plot script for a run directory")
    p.add_argument("run_dir")
    p.set_defaults(fn=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConstraintError, PositivityError, FileNotFoundError, KeyError,
            ValueError, OSError) as exc:
        msg = str(exc) or type(exc).__name__
        print(f"error: {msg.splitlines()[0]}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
