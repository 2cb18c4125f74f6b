"""Command-line front end.

    minsurf audit --config audit.ini --out results/
    minsurf curvature --out results/
    minsurf solve | reduce | singularity | compare-coeffs | ode ...

Every subcommand reads the same config file (see :mod:`minsurf.config`) and
writes CSV files into ``--out``.  Exit status is 0 whenever the run
completes, whatever the verdicts; 2 on configuration errors, 1 on other
execution errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import SECTION_NAMES, AuditConfig, build_family, load_config
from .errors import ConfigError, MinsurfError

log = logging.getLogger("minsurf")


def _load(args) -> AuditConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if getattr(args, "sections", None):
        cfg.sections = [s.strip() for s in args.sections.split(",") if s.strip()]
        if cfg.sections == ["all"]:
            cfg.sections = list(SECTION_NAMES)
    cfg.validate()
    return cfg


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_audit(args) -> int:
    from .audit import run_audit

    cfg = _load(args)
    report, paths = run_audit(cfg, _out(args), workers=args.workers, plots=args.plots)
    for c in report.claims:
        print(f"{c.verdict:>12}  {c.claim_id}")
    print(f"report: {paths['report']}")
    return 0


def cmd_curvature(args) -> int:
    from .curvature import ricci_flat_scan, write_scan_csv
    from .surfaces import DomainSpec

    cfg = _load(args)
    dom = DomainSpec(cfg.t_min, cfg.t_max, cfg.x_min, cfg.x_max)
    out = _out(args)
    for name in cfg.families:
        fam = build_family(cfg, name)
        rows = ricci_flat_scan(fam, dom, cfg.nt, cfg.nx)
        path = out / f"curvature-{fam.describe().replace(' ', '')}.csv"
        write_scan_csv(rows, path)
        ok = [r for r in rows if r.ok]
        worst = max((r.ricci_inf for r in ok), default=float("nan"))
        print(f"{fam.describe()}: {len(ok)} points, max |Ricci| = {worst:.3e} -> {path}")
    return 0


def cmd_reduce(args) -> int:
    from .audit import Auditor

    cfg = _load(args)
    cfg.sections = ["reduction"]
    aud = Auditor(cfg)
    out = _out(args)
    for tab in aud.section_reduction():
        tab.write(out / f"{tab.name}.csv")
        if tab.name in ("reduction", "cancellation"):
            dev = max(tab.column("deviation"), default=0.0)
            print(f"{tab.name}: {len(tab.rows)} rows, max deviation {dev:.3e}")
        else:
            print(f"{tab.name}: {len(tab.rows)} rows")
    return 0


def cmd_solve(args) -> int:
    from .fdsolver import convergence_study, write_study_csv

    cfg = _load(args)
    out = _out(args)
    for name in cfg.families:
        fam = build_family(cfg, name)
        study = convergence_study(fam, cfg.solve_rect, cfg.solve_h_list, cfg.solve_tol, cfg.solve_max_iter)
        path = out / f"convergence-{fam.describe().replace(' ', '')}.csv"
        write_study_csv(study, path)
        order = "undefined" if study.order is None else f"{study.order:.3f}"
        print(f"{fam.describe()}: order {order} ({study.flag}); deviations "
              + ", ".join(f"{d:.3e}" for d in study.deviation))
    return 0


def cmd_singularity(args) -> int:
    from .audit import Auditor

    cfg = _load(args)
    out = _out(args)
    for tab in Auditor(cfg).section_singularity():
        tab.write(out / f"{tab.name}.csv")
        dev = max((abs(r[2] - r[3]) for r in tab.rows), default=0.0)
        print(f"{tab.name}: max |scaled u_x - k| = {dev:.3e}")
    return 0


def cmd_compare(args) -> int:
    from .metric import coeff_compare
    from .surfaces import DomainSpec

    cfg = _load(args)
    out = _out(args)
    dom = DomainSpec(cfg.t_min, cfg.t_max, cfg.x_min, cfg.x_max)
    path = out / "compare-coeffs.csv"
    worst = 0.0
    with open(path, "w") as fh:
        fh.write("t,x,a,b,c,a_printed,b_printed,c_printed\n")
        for t, x in dom.grid(cfg.nt, cfg.nx):
            cmp = coeff_compare((t, x), cfg.coeffs_k)
            c, p = cmp.computed, cmp.printed
            fh.write(",".join(repr(float(v)) for v in (t, x, c.a, c.b, c.c, p.a, p.b, p.c)) + "\n")
            worst = max(worst, cmp.max_diff)
    print(f"k = {cfg.coeffs_k:g}: max |computed - printed| = {worst:.3e} -> {path}")
    return 0


def cmd_ode(args) -> int:
    from .similarity import closed_form_profile, ode_integrate

    cfg = _load(args)
    out = _out(args)
    for ode in ("paper", "alt"):
        table = ode_integrate(ode, cfg.ode_C, cfg.ode_D, (cfg.ode_rho_min, cfg.ode_rho_max), cfg.ode_step)
        path = out / f"profile-{ode}.csv"
        table.to_csv(path)
        closed = closed_form_profile(ode, cfg.ode_C, cfg.ode_D)
        err = float(np.max(np.abs(table.v - np.array([closed(float(r)) for r in table.rho]))))
        print(f"{ode}: max |v - closed form| = {err:.3e}, Richardson estimate {table.error_estimate:.3e} -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="config file (defaults apply when omitted)")
    common.add_argument("--out", default="minsurf-out", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="minsurf", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", parents=[common], help="run the full claim audit")
    p.add_argument("--sections", default=None, help="comma list of sections (default: all)")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--plots", action="store_true", help="also write SVG plots")
    p.set_defaults(func=cmd_audit)

    for name, func, help_ in (
        ("curvature", cmd_curvature, "Ricci-flatness scan per family"),
        ("reduce", cmd_reduce, "similarity-reduction consistency checks"),
        ("solve", cmd_solve, "finite-difference convergence studies"),
        ("singularity", cmd_singularity, "u_x traces along x = 0"),
        ("compare-coeffs", cmd_compare, "jet-computed vs printed metric coefficients"),
        ("ode", cmd_ode, "integrate both profile ODEs"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MinsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
