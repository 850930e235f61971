"""Command-line front end.

Subcommands: classify, torsion, solve-limit, solve-3d, sweep.  Exit codes:
0 success, 2 configuration error, 3 solver failure.  Every run echoes the
fully resolved configuration to ``run.json`` in the output directory so a
rerun of the same file reproduces the outputs byte for byte.

Heavy numerical imports happen after thread pinning, so ``--threads`` and
``--deterministic`` take effect before any BLAS pool spins up.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


CONFIG_SCHEMA_HELP = """\
configuration file: JSON with "schema": 1 and sections
  geometry      {L, T, W, H}                       plate half-side, thickness
                                                   parameter, stiffener section
  material      {E, nu} or {lambda, mu}            exactly one pair
  exponents     {w, h}                             numbers or exact rationals
                                                   like "7/10"; w > 0, 0 < h < 1
  loads         plate_b{1,2,3}, beam_b{1,2,3},     constants or monomial sums in
                torque, beam_strips                (x1, x2, x3)
  mesh          {plate_n1, plate_n2, torsion_n}
  resolution3d  {nx, n_width, n_outer, n_thick, n_height}
  eps           strictly decreasing list           used by solve-3d and sweep
  case_aliases  path to "sign_vector = letter" lines (optional)
  output_dir    default output directory
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stiffplate",
        description="Limit models of a stiffened plate and their 3D reference checks.",
        epilog=CONFIG_SCHEMA_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", required=True, help="problem configuration JSON")
    parser.add_argument("--out", default=None, help="output directory (default from config)")
    parser.add_argument("--threads", type=int, default=None, help="BLAS/OpenMP thread count")
    parser.add_argument(
        "--deterministic",
        action="store_true",
        help="single-threaded ordered reductions; reruns are byte-identical",
    )
    parser.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    parser.add_argument(
        "--snapshots", action="store_true", help="also export 3D displacement snapshots"
    )
    parser.add_argument(
        "command",
        choices=["classify", "torsion", "solve-limit", "solve-3d", "sweep"],
        help="what to run",
    )
    return parser


def _pin_threads(args) -> None:
    n = 1 if args.deterministic else args.threads
    if n is None:
        return
    n = max(1, int(n))
    for var in _THREAD_VARS:
        os.environ[var] = str(n)
    # the env vars only affect pools created later; cap live ones as well so
    # in-process callers (tests, notebooks) get the same ordered reductions
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(n)
    except ImportError:
        pass


def _outdir(args, cfg) -> Path:
    out = Path(args.out) if args.out else Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_run_echo(out: Path, args, cfg) -> None:
    from .reporting import write_json

    echo = dict(cfg.resolved)
    echo["command"] = args.command
    echo["deterministic"] = bool(args.deterministic)
    echo["threads"] = 1 if args.deterministic else args.threads
    write_json(out / "run.json", echo)


def _condition_texts(rule) -> list[str]:
    plate_only = all(p == 1 for p in rule.plate_flags) and all(b == 0 for b in rule.beam_flags)
    beam_only = all(p == 0 for p in rule.plate_flags) and all(b == 1 for b in rule.beam_flags)
    if beam_only:
        return ["stiffener asymptotically inert"]
    if plate_only:
        return ["plate clamped along junction line"]
    texts = {
        (0, 1, 1): "beam inherits axial trace",
        (0, 1, 0): "plate axial trace pinned on line",
        (0, 0, 1): "beam axial displacement vanishes",
        (1, 1, 1): "beam lateral deflection tied to in-plane trace",
        (1, 1, 0): "plate lateral trace pinned on line",
        (1, 0, 1): "beam lateral deflection vanishes",
        (2, 1, 1): "beam deflection tied to plate deflection on line",
        (2, 1, 0): "plate deflection pinned on line",
        (2, 0, 1): "beam deflection vanishes",
        (3, 1, 1): "twist tied to plate slope across line",
        (3, 1, 0): "plate slope across line pinned",
        (3, 0, 1): "twist vanishes",
    }
    out = []
    for i in range(4):
        out.append(texts[(i, rule.plate_flags[i], rule.beam_flags[i])])
    return out


def cmd_classify(args, cfg) -> int:
    from .regime import classify_case, enumerate_limit_problems, recovery_proved
    from .reporting import write_json

    out = _outdir(args, cfg)
    _write_run_echo(out, args, cfg)
    rule = classify_case(cfg.exponents, aliases=cfg.case_aliases)
    conditions = _condition_texts(rule)
    letter = rule.case_letter or "unassigned"
    print(f"case {letter}; " + "; ".join(conditions))
    print(f"branch {rule.branch.value}; sign vector ({','.join(rule.sign_vector)})")
    print(f"plate flags {rule.plate_flags}; beam flags {rule.beam_flags}")
    proved = recovery_proved(rule)
    if not proved:
        print("note: conjectured limit model (no recovery-sequence proof for this regime)")
    report = {
        "w": str(cfg.exponents.w),
        "h": str(cfg.exponents.h),
        "k": str(cfg.exponents.k),
        "branch": rule.branch.value,
        "sign_vector": list(rule.sign_vector),
        "plate_flags": list(rule.plate_flags),
        "beam_flags": list(rule.beam_flags),
        "case_letter": rule.case_letter,
        "gamma_proved": proved,
        "conditions": conditions,
        "n_limit_problems": len(enumerate_limit_problems()),
    }
    write_json(out / "regime.json", report)
    return 0


def cmd_torsion(args, cfg) -> int:
    from .cross_section import constants, phi_to_csv, solve_torsion
    from .reporting import torsion_figure, write_json

    out = _outdir(args, cfg)
    _write_run_echo(out, args, cfg)
    xsec = constants(cfg.geometry.W, cfg.geometry.H)
    field = solve_torsion(cfg.geometry.W, cfg.geometry.H, cfg.torsion_n)
    (out / "torsion_phi.csv").write_text(phi_to_csv(field), encoding="utf-8", newline="\n")
    report = {
        "W": field.W,
        "H": field.H,
        "n2": field.n2,
        "n3": field.n3,
        "rigidity": field.rigidity,
        "torsion_wide": xsec.torsion_wide,
        "torsion_tall": xsec.torsion_tall,
        "polar_centroid": xsec.polar_centroid,
        "mean_phi": field.mean(),
        "cg_iterations": field.solver_iterations,
        "cg_residual": field.solver_residual,
    }
    write_json(out / "torsion.json", report)
    print(f"J_phi = {field.rigidity!r}")
    print(f"Jt_w  = {xsec.torsion_wide!r}")
    print(f"Jt_h  = {xsec.torsion_tall!r}")
    if not args.no_figures:
        torsion_figure(field, out / "torsion_phi.png")
    return 0


def _limit_solve(cfg):
    from .cross_section import constants, solve_torsion
    from .limit_solver import solve
    from .regime import Branch, classify_case

    rule = classify_case(cfg.exponents, aliases=cfg.case_aliases)
    xsec = constants(cfg.geometry.W, cfg.geometry.H)
    torsion = None
    if rule.branch is Branch.W_EQ_H:
        torsion = solve_torsion(cfg.geometry.W, cfg.geometry.H, cfg.torsion_n)
    report = solve(
        cfg.geometry, cfg.material, rule, xsec, cfg.loads, cfg.plate_mesh, torsion=torsion
    )
    return report, xsec


def _export_limit(out: Path, report, figures: bool) -> None:
    from .reporting import limit_figure, write_csv, write_json

    state = report.state
    mesh = state.mesh
    write_json(out / "limit_report.json", report.summary())
    x1, x2 = mesh.x1, mesh.x2
    for name, arr in (("plate_xi1", state.membrane(0)), ("plate_xi2", state.membrane(1))):
        rows = [(x1[i], x2[j], arr[i, j]) for i in range(len(x1)) for j in range(len(x2))]
        write_csv(out / f"{name}.csv", ("x1", "x2", "value"), rows)
    defl = state.deflection_dofs()[:, :, 0]
    rows = [(x1[i], x2[j], defl[i, j]) for i in range(len(x1)) for j in range(len(x2))]
    write_csv(out / "plate_xi3.csv", ("x1", "x2", "value"), rows)
    write_csv(out / "beam_xi1.csv", ("x1", "value"), zip(x1, state.beam_axial()))
    write_csv(out / "beam_xi2.csv", ("x1", "value"), zip(x1, state.beam_lateral()[:, 0]))
    write_csv(out / "beam_xi3.csv", ("x1", "value"), zip(x1, state.beam_vertical()[:, 0]))
    write_csv(out / "torsion_angle.csv", ("x1", "value"), zip(x1, state.twist()))
    if figures:
        limit_figure(report, out / "limit_fields.png")


def cmd_solve_limit(args, cfg) -> int:
    out = _outdir(args, cfg)
    _write_run_echo(out, args, cfg)
    if cfg.eps_list is None:
        print("warning: no eps list configured; fine for solve-limit, required for sweep")
    report, _ = _limit_solve(cfg)
    _export_limit(out, report, not args.no_figures)
    print(f"limit energy = {report.energy!r}")
    print(f"stored plate/beam = {report.stored_plate!r} / {report.stored_beam!r}")
    if not report.gamma_proved:
        print("note: conjectured limit model (no recovery-sequence proof for this regime)")
    return 0


def _snapshot_csv(out: Path, mesh, u, tag: str) -> None:
    from .reporting import write_csv

    coords = mesh.node_coords()
    rows = [
        (coords[n, 0], coords[n, 1], coords[n, 2], u[n, 0], u[n, 1], u[n, 2])
        for n in range(mesh.n_nodes)
    ]
    write_csv(out / f"snapshot_{tag}.csv", ("x1", "x2", "x3", "u1", "u2", "u3"), rows)


def cmd_solve_3d(args, cfg) -> int:
    from .config import ConfigError
    from .cross_section import constants
    from .elasticity3d import assemble_and_minimize, build_mesh, pushforward_loads
    from .reporting import write_json

    if not cfg.eps_list:
        raise ConfigError("solve-3d needs an eps list (the first entry is used)")
    out = _outdir(args, cfg)
    _write_run_echo(out, args, cfg)
    eps = cfg.eps_list[0]
    xsec = constants(cfg.geometry.W, cfg.geometry.H)
    mesh = build_mesh(cfg.geometry, cfg.exponents, eps, cfg.resolution3d)
    bp, bs, bj = pushforward_loads(cfg.loads, cfg.exponents, eps, cfg.geometry, xsec)
    sol = assemble_and_minimize(mesh, cfg.material, bp, bs, bj)
    report = {
        "eps": eps,
        "energy": sol.energy,
        "scaled_energy": sol.energy / eps,
        "stored_plate": sol.stored_plate,
        "stored_stiffener": sol.stored_stiffener,
        "load_work": sol.load_work,
        "cg_iterations": sol.cg_iterations,
        "cg_residual": sol.cg_residual,
        "n_dofs": mesh.n_dofs,
    }
    write_json(out / "solve3d.json", report)
    print(f"eps = {eps}: energy = {sol.energy!r}, scaled = {sol.energy / eps!r}")
    if args.snapshots:
        _snapshot_csv(out, mesh, sol.u, f"eps_{eps}")
    return 0


def cmd_sweep(args, cfg) -> int:
    from .config import ConfigError
    from .elasticity3d import sweep
    from .reporting import sweep_figure, write_csv, write_json

    if not cfg.eps_list:
        raise ConfigError("sweep needs a strictly decreasing eps list")
    out = _outdir(args, cfg)
    _write_run_echo(out, args, cfg)
    limit_report, xsec = _limit_solve(cfg)
    _export_limit(out, limit_report, not args.no_figures)
    hook = None
    if args.snapshots:

        def hook(eps, mesh, u):
            _snapshot_csv(out, mesh, u, f"eps_{eps}")

    report = sweep(
        cfg.geometry,
        cfg.material,
        cfg.exponents,
        cfg.loads,
        xsec,
        limit_report,
        cfg.eps_list,
        [cfg.resolution3d] * len(cfg.eps_list),
        snapshot_hook=hook,
    )
    write_csv(
        out / "sweep_gaps.csv",
        ("eps", "scaled_energy", "gap", "trace_gap"),
        [(r["eps"], r["scaled_energy"], r["gap"], r["trace_gap"]) for r in report.rows()],
    )
    entries = [
        {
            "eps": e.eps,
            "scaled_energy": e.scaled_energy,
            "energy_gap": e.energy_gap,
            "trace_gap": e.trace_gap,
            "junction_mismatch": e.junction_mismatch,
            "gaps": e.gaps,
            "traces": {
                "x1": e.traces.x1.tolist(),
                "axial_slab": e.traces.axial_slab.tolist(),
                "axial_line": e.traces.axial_line.tolist(),
                "plate_defl_line": e.traces.plate_defl_line.tolist(),
                "beam_defl": e.traces.beam_defl.tolist(),
                "beam_lat": e.traces.beam_lat.tolist(),
                "twist": e.traces.twist.tolist(),
            },
            "resolution": {
                "nx": e.resolution.nx,
                "n_width": e.resolution.n_width,
                "n_outer": e.resolution.n_outer,
                "n_thick": e.resolution.n_thick,
                "n_height": e.resolution.n_height,
            },
            "cg_iterations": e.cg_iterations,
            "cg_residual": e.cg_residual,
            "n_dofs": e.n_dofs,
            "status": e.status,
        }
        for e in report.entries
    ]
    write_json(
        out / "sweep.json",
        {
            "limit_energy": report.limit_energy,
            "entries": entries,
            "aborted": report.aborted,
            "abort_reason": report.abort_reason,
        },
    )
    for e in report.entries:
        print(
            f"eps={e.eps}: scaled={e.scaled_energy!r} gap={e.energy_gap!r} "
            f"mismatch={e.junction_mismatch!r}"
        )
    if not args.no_figures and report.entries:
        sweep_figure(report, out / "sweep_gaps.png")
    if report.aborted:
        print(f"sweep aborted: {report.abort_reason}", file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _pin_threads(args)

    from .config import ConfigError, load_config

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    from .cross_section import TorsionSolverError
    from .elasticity3d import CgError, MeshBuildError
    from .limit_solver import SolverError

    commands = {
        "classify": cmd_classify,
        "torsion": cmd_torsion,
        "solve-limit": cmd_solve_limit,
        "solve-3d": cmd_solve_3d,
        "sweep": cmd_sweep,
    }
    try:
        return commands[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, CgError, MeshBuildError, TorsionSolverError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
