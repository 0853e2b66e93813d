"""Command-line interface.

Subcommands:
  simulate  run a scenario; write trajectory CSV, diagnostics CSV, manifest
  verify    run a named check suite; write a JSON (or CSV) report
  table     print a summary table: frequencies | identities | curvatures
  frenet    run a scenario and export frame/curvature diagnostics

Exit codes: 0 success, 1 check failure, 2 usage/config error,
3 runtime numeric error.

Config files are flat JSON (conventionally .cfg); see README for the
schema.  `--config` accepts a filesystem path or the name of a bundled
scenario (e.g. `free_helix`).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import backend_name
from .dynamics import (ScenarioConfig, Trajectory, mean_velocity, simulate,
                       zbw_frequency)
from .errors import (ConfigError, InsufficientDataError,
                     InsufficientSpanError, MassShellError,
                     SimulationNumericsError)
from .frenet import (curvatures_from_frame, darboux_bivector_series,
                     darboux_relation_residual, rotor_frame_sequence,
                     worldline_frame_sequence)
from .suites import SUITES, run_suite
from .verify import spin_mass_identity

#: pinned trajectory CSV schema (header row is mandatory)
TRAJECTORY_COLUMNS = (
    ["tau"]
    + [f"x{i}" for i in range(4)]
    + [f"pi{i}" for i in range(4)]
    + [f"v{i}" for i in range(4)]
    + [f"psi{i}" for i in range(8)]
    + ["H", "p2"]
    + ["S12", "S13", "S23", "S01", "S02", "S03"]
    + ["J01", "J02", "J03", "J12", "J13", "J23"]
)

_S_ORDER = [(1, 2), (1, 3), (2, 3), (0, 1), (0, 2), (0, 3)]
_J_ORDER = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _fmt(x: float) -> str:
    """17 significant digits: round-trip exact for doubles."""
    return format(float(x), ".17g")


@dataclass
class RunManifest:
    scenario: str
    config: dict
    outputs: dict = dc_field(default_factory=dict)
    duration_seconds: float = 0.0
    package_version: str = __version__
    backend: str = backend_name()

    def write(self, path: Path) -> None:
        data = {
            "scenario": self.scenario,
            "config": self.config,
            "package_version": self.package_version,
            "backend": self.backend,
            "outputs": {k: str(v) for k, v in self.outputs.items()},
            "duration_seconds": self.duration_seconds,
        }
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def resolve_config(spec: str) -> Path:
    """A filesystem path, or the name of a bundled scenario."""
    p = Path(spec)
    if p.exists():
        return p
    name = spec if spec.endswith(".cfg") else spec + ".cfg"
    base = resources.files("zbwsim") / "scenarios" / name
    if base.is_file():
        return Path(str(base))
    raise ConfigError(f"config not found: {spec!r} (no such file or bundled "
                      f"scenario)", field="--config")


def load_config(spec: str, step=None, tau_end=None) -> ScenarioConfig:
    cfg = ScenarioConfig.from_file(resolve_config(spec))
    if step is not None:
        if step <= 0:
            raise ConfigError("--step must be positive", field="step")
        cfg.step = step
    if tau_end is not None:
        if tau_end < 0:
            raise ConfigError("--tau-end must be non-negative", field="tau_end")
        cfg.tau_end = tau_end
    return cfg


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    S = traj.spin
    J = traj.J
    with open(path, "w") as f:
        f.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for k in range(len(traj)):
            row = ([traj.tau[k]] + list(traj.x[k]) + list(traj.pi[k])
                   + list(traj.v[k]) + list(traj.psi[k])
                   + [traj.H[k], traj.p2[k]]
                   + [S[k, mu, nu] for mu, nu in _S_ORDER]
                   + [J[k, mu, nu] for mu, nu in _J_ORDER])
            f.write(",".join(_fmt(x) for x in row) + "\n")


def diagnostics_summary(traj: Trajectory) -> list:
    inv = traj.psi_invariants
    rows = [
        ("samples", float(len(traj))),
        ("step", traj.step),
        ("tau_end", float(traj.tau[-1])),
        ("H_initial", float(traj.H[0])),
        ("H_drift_max", float(np.abs(traj.H - traj.H[0]).max())),
        ("p2_initial", float(traj.p2[0])),
        ("p2_drift_max", float(np.abs(traj.p2 - traj.p2[0]).max())),
        ("J_drift_max", float(np.abs(traj.J - traj.J[0]).max())),
        ("psi_norm_scalar_drift", float(np.abs(inv[:, 0] - inv[0, 0]).max())),
        ("psi_norm_pseudo_drift", float(np.abs(inv[:, 1] - inv[0, 1]).max())),
    ]
    try:
        rows.append(("zbw_frequency_v1", zbw_frequency(traj, 1)))
    except InsufficientSpanError:
        pass
    try:
        vbar = mean_velocity(traj)
        rows += [(f"mean_v{i}", float(vbar[i])) for i in range(4)]
    except InsufficientSpanError:
        pass
    return rows


def write_diagnostics_csv(traj: Trajectory, path: Path) -> None:
    with open(path, "w") as f:
        f.write("metric,value\n")
        for name, value in diagnostics_summary(traj):
            f.write(f"{name},{_fmt(value)}\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    cfg = load_config(args.config, args.step, args.tau_end)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    traj = simulate(cfg)
    manifest = RunManifest(scenario=cfg.name, config=cfg.to_dict())
    traj_path = out / f"{cfg.name}_trajectory.csv"
    diag_path = out / f"{cfg.name}_diagnostics.csv"
    write_trajectory_csv(traj, traj_path)
    write_diagnostics_csv(traj, diag_path)
    manifest.outputs = {"trajectory_csv": traj_path,
                        "diagnostics_csv": diag_path}
    manifest.duration_seconds = time.perf_counter() - t0
    man_path = out / f"{cfg.name}_manifest.json"
    manifest.write(man_path)
    print(f"wrote {traj_path}")
    print(f"wrote {diag_path}")
    print(f"wrote {man_path}")
    return 0


def cmd_verify(args) -> int:
    suite = args.suite or "all"
    if suite not in SUITES:
        print(f"error: unknown suite {suite!r}; choose from "
              f"{', '.join(sorted(SUITES))}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    rows = run_suite(suite)
    duration = time.perf_counter() - t0
    checks = []
    first_fail = None
    for num, c in rows:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] criterion {num:02d} {c.name}: "
              f"value={c.value:.3e} tolerance={c.tolerance:.3e}")
        entry = dict(c.to_dict(), criterion=num)
        checks.append(entry)
        if not c.passed and first_fail is None:
            first_fail = c.name
    report = {
        "suite": suite,
        "backend": backend_name(),
        "package_version": __version__,
        "duration_seconds": duration,
        "checks": checks,
        "pass": first_fail is None,
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        path = out / f"verify_{suite}.csv"
        with open(path, "w") as f:
            f.write("criterion,name,value,tolerance,pass\n")
            for c in checks:
                f.write(f"{c['criterion']},{c['name']},{_fmt(c['value'])},"
                        f"{_fmt(c['tolerance'])},{c['pass']}\n")
    else:
        path = out / f"verify_{suite}.json"
        path.write_text(json.dumps(report, indent=2) + "\n")
    print(f"wrote {path}")
    if first_fail is not None:
        print(f"FAILED: first failing check: {first_fail}", file=sys.stderr)
        return 1
    print(f"suite {suite!r}: all checks passed")
    return 0


def _render_table(title, headers, rows) -> str:
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows))
              for i, h in enumerate(headers)]
    def line(cells):
        return "  ".join(str(c).ljust(w) for c, w in zip(cells, widths))
    sep = "-" * (sum(widths) + 2 * (len(widths) - 1))
    return "\n".join([title, sep, line(headers), sep]
                     + [line(r) for r in rows] + [sep])


def cmd_table(args) -> int:
    cfg = load_config(args.config, args.step, args.tau_end)
    traj = simulate(cfg)
    which = args.which
    if which == "frequencies":
        omega = zbw_frequency(traj, 1)
        y = traj.v[:, 1]
        flips = np.where(np.diff(np.signbit(y)))[0]
        t = traj.tau
        crossings = t[flips] - y[flips] * (t[flips + 1] - t[flips]) \
            / (y[flips + 1] - y[flips])
        spacings = np.diff(crossings)
        sigma = (math.pi / np.mean(spacings) ** 2) * np.std(spacings) \
            / max(1.0, math.sqrt(len(spacings)))
        rows = [["v1 zero crossings", f"{omega:.4f} +/- {sigma:.4f}",
                 f"{2 * cfg.m:.4f}", f"{abs(omega - 2 * cfg.m) / (2 * cfg.m):.2e}"]]
        text = _render_table(
            f"zitterbewegung frequency (m = {cfg.m})",
            ["measurement", "omega", "expected 2m", "rel. error"], rows)
    elif which == "identities":
        rep = spin_mass_identity(traj)
        pv, oms = rep.details["pv"], rep.details["omega_s"]
        rows = [
            ["<p v>_0", f"{np.mean(pv):.9f}", f"{cfg.m:.6f}",
             f"{np.abs(pv - cfg.m).max():.2e}"],
            ["<Omega S>_0", f"{np.mean(oms):.9f}", f"{cfg.m:.6f}",
             f"{np.abs(oms - cfg.m).max():.2e}"],
        ]
        try:
            vbar = mean_velocity(traj)
            rows.append(["<v>_zbw vs p/m",
                         np.array2string(vbar, precision=6), "p/m",
                         f"{np.abs(vbar - traj.pi[0] / cfg.m).max():.2e}"])
        except InsufficientSpanError:
            pass
        text = _render_table(f"spin-mass identities (m = {cfg.m})",
                             ["identity", "measured", "expected",
                              "max deviation"], rows)
    else:  # curvatures
        seq = worldline_frame_sequence(traj)
        curv = curvatures_from_frame(seq)
        sl = slice(2, -2) if len(traj) > 4 else slice(None)
        rows = []
        for name, arr in (("K1", curv.K1), ("K2", curv.K2), ("K3", curv.K3)):
            a = arr[sl]
            rows.append([name, f"{np.mean(a):.9f}", f"{np.std(a):.2e}"])
        inv = curv.invariant()[sl]
        rows.append(["K1^2-K2^2-K3^2", f"{np.mean(inv):.9f}",
                     f"{np.std(inv):.2e}"])
        rows.append(["-K1^2 (extrinsic)",
                     f"{np.mean(curv.k_squared_extrinsic[sl]):.9f}", "-"])
        title = "Frenet curvatures" + (" [straight line]" if curv.straight
                                       else "")
        text = _render_table(title, ["quantity", "mean", "std"], rows)
    print(text)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"table_{which}.txt"
        path.write_text(text + "\n")
        print(f"wrote {path}")
    return 0


def cmd_frenet(args) -> int:
    cfg = load_config(args.config, args.step, args.tau_end)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    traj = simulate(cfg)
    seq = worldline_frame_sequence(traj) if args.frame == "worldline" \
        else rotor_frame_sequence(traj)
    curv = curvatures_from_frame(seq)
    omega = darboux_bivector_series(seq)
    resid = darboux_relation_residual(seq)["residual"].max(axis=1)
    path = out / f"{cfg.name}_frenet.csv"
    cols = (["tau", "K1", "K2", "K3"]
            + ["omega01", "omega02", "omega03", "omega12", "omega13",
               "omega23"] + ["darboux_residual"])
    with open(path, "w") as f:
        f.write(",".join(cols) + "\n")
        for k in range(len(traj)):
            row = ([traj.tau[k], curv.K1[k], curv.K2[k], curv.K3[k]]
                   + list(omega[k, 5:11]) + [resid[k]])
            f.write(",".join(_fmt(x) for x in row) + "\n")
    manifest = RunManifest(scenario=cfg.name, config=cfg.to_dict(),
                           outputs={"frenet_csv": path},
                           duration_seconds=time.perf_counter() - t0)
    man_path = out / f"{cfg.name}_frenet_manifest.json"
    manifest.write(man_path)
    sl = slice(2, -2) if len(traj) > 4 else slice(None)
    print(f"{args.frame} frame over {len(traj)} samples "
          f"(orthonormality residual {seq.orthonormality_residual():.2e})")
    for name, arr in (("K1", curv.K1), ("K2", curv.K2), ("K3", curv.K3)):
        print(f"  {name}: mean {np.mean(arr[sl]):+.6f}  "
              f"std {np.std(arr[sl]):.2e}")
    print(f"  max Darboux residual: {resid[sl].max():.2e}")
    print(f"wrote {path}")
    print(f"wrote {man_path}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zbwsim",
        description="Spacetime-algebra zitterbewegung simulator")
    ap.add_argument("--version", action="version",
                    version=f"zbwsim {__version__} ({backend_name()} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario, export CSV")
    sim.add_argument("--config", required=True,
                     help="config file path or bundled scenario name")
    sim.add_argument("--out", default="out", help="output directory")
    sim.add_argument("--step", type=float, default=None,
                     help="override integration step")
    sim.add_argument("--tau-end", type=float, default=None,
                     help="override final invariant time")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="run residual/identity suites")
    ver.add_argument("suite", nargs="?", default=None,
                     help=f"one of {', '.join(sorted(SUITES))} (default: all)")
    ver.add_argument("--suite", dest="suite_flag", default=None,
                     help="alternative to the positional suite name")
    ver.add_argument("--out", default="out", help="output directory")
    ver.add_argument("--format", choices=("csv", "json"), default="json",
                     help="report format")
    ver.set_defaults(func=cmd_verify)

    tab = sub.add_parser("table", help="print a summary table")
    tab.add_argument("which", choices=("frequencies", "identities",
                                       "curvatures"))
    tab.add_argument("--config", required=True)
    tab.add_argument("--out", default=None)
    tab.add_argument("--step", type=float, default=None)
    tab.add_argument("--tau-end", type=float, default=None)
    tab.set_defaults(func=cmd_table)

    fre = sub.add_parser("frenet", help="frame/curvature diagnostics")
    fre.add_argument("--config", required=True)
    fre.add_argument("--out", default="out")
    fre.add_argument("--frame", choices=("worldline", "rotor"),
                     default="worldline")
    fre.add_argument("--step", type=float, default=None)
    fre.add_argument("--tau-end", type=float, default=None)
    fre.set_defaults(func=cmd_frenet)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "suite_flag", None):
        args.suite = args.suite_flag
    try:
        return args.func(args)
    except ConfigError as exc:
        where = f" (field: {exc.field})" if exc.field else ""
        print(f"config error: {exc}{where}", file=sys.stderr)
        return 2
    except (InsufficientSpanError, InsufficientDataError,
            MassShellError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationNumericsError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
