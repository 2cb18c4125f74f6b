"""Claim audit: raw diagnostic tables, summary statistics and verdicts.

An audit runs in two phases.  First every requested section computes its raw
rows (sections are independent and run on a thread pool).  Then a single
merge step derives summary statistics from those rows and assigns verdicts;
the only cross-section dependency is that refuting a PDE claim requires the
finite-difference oracle to report a plateau.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import autodiff as ad
from .config import AuditConfig, build_family
from .curvature import curvature_bundle
from .errors import MinsurfError
from .fdsolver import convergence_study
from .fields import random_polynomial
from .metric import assemble_metric, metric_coeffs, paper_coeffs
from .pde import (divergence_residual_nested, gradient_norm_W, hessian_scale, maximal_residual,
                  minimal_residual, spacelike_indicator, divergence_residual)
from .similarity import (ProfileJet, chain_rule_comparison, closed_form_profile, ode_integrate,
                         profile_ode_residual, reduced_residual, reduction_consistency)
from .surfaces import (DomainSpec, LogSinh, NutkuArctan, TimeShifted, Zero, eval_jet, singular_trace,
                       time_shift)

VERIFIED, REFUTED, INCONCLUSIVE = "verified", "refuted", "inconclusive"

# Tensor-identity tolerances of the curvature and metric checks.
BIANCHI_TOL = 1e-9
RICCI_SYM_TOL = 1e-10
BLOCK_DET_TOL = 1e-12
DET_G_TOL = 1e-10
CANCELLATION_TOL = 1e-13
ORACLE_AGREEMENT_TOL = 1e-10
FD_RESIDUAL_AGREEMENT = 1e-5


# ---------------------------------------------------------------------------
# report structures

@dataclass
class Table:
    name: str
    header: list[str]
    rows: list[list] = field(default_factory=list)

    def column(self, name: str, where: dict | None = None) -> list:
        i = self.header.index(name)
        out = []
        for r in self.rows:
            if where and any(r[self.header.index(k)] != v for k, v in where.items()):
                continue
            out.append(r[i])
        return out

    def write(self, path: Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header)
            for r in self.rows:
                w.writerow([_fmt(v) for v in r])


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


@dataclass
class Claim:
    claim_id: str
    section: str
    anchor: str
    grid: str
    stats: dict
    verdict: str
    rows_file: str
    notes: list[str] = field(default_factory=list)


@dataclass
class AuditReport:
    metadata: dict
    claims: list[Claim]
    tables: dict = field(default_factory=dict, repr=False, compare=False)

    def to_json(self) -> str:
        return json.dumps({"metadata": self.metadata, "claims": [asdict(c) for c in self.claims]},
                          indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> AuditReport:
        data = json.loads(text)
        return cls(data["metadata"], [Claim(**c) for c in data["claims"]])

    def verdicts(self) -> dict[str, str]:
        return {c.claim_id: c.verdict for c in self.claims}

    def to_text(self) -> str:
        md = self.metadata
        lines = [
            "MINIMAL-SURFACE INSTANTON CLAIM AUDIT",
            f"toolkit version : {md['version']}",
            f"timestamp       : {md['timestamp']}",
            f"seed            : {md['config']['seed']}",
            f"families        : {', '.join(md['families'])}",
            "",
            "config:",
        ]
        for k, v in sorted(md["config"].items()):
            lines.append(f"  {k} = {v}")
        lines.append("")
        current = None
        for c in self.claims:
            if c.section != current:
                current = c.section
                lines += ["=" * 72, f"SECTION {current}", "=" * 72]
            lines.append(f"[{c.verdict.upper():>12}] {c.claim_id}")
            lines.append(f"    claim : {c.anchor}")
            lines.append(f"    grid  : {c.grid}")
            lines.append(f"    rows  : {c.rows_file}")
            for k, v in c.stats.items():
                lines.append(f"    {k:<28} {v:.6e}" if isinstance(v, float) else f"    {k:<28} {v}")
            for n in c.notes:
                lines.append(f"    note: {n}")
        lines.append("")
        counts = {v: sum(c.verdict == v for c in self.claims) for v in (VERIFIED, REFUTED, INCONCLUSIVE)}
        lines.append("summary: " + ", ".join(f"{k}={n}" for k, n in counts.items()))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# helpers

def _abs(values) -> list[float]:
    return [abs(float(v)) for v in values if not math.isnan(float(v))]


def summary(values, tol: float) -> dict:
    vals = _abs(values)
    if not vals:
        return {"n": 0, "max": float("nan"), "median": float("nan"), "pass_count": 0}
    return {"n": len(vals), "max": max(vals), "median": float(statistics.median(vals)),
            "pass_count": sum(v < tol for v in vals)}


def grade(stats: dict, refute_median: float, confirmed: bool = True) -> str:
    """Verdict rule: all points pass -> verified; large median + oracle -> refuted."""
    if stats["n"] and stats["pass_count"] == stats["n"]:
        return VERIFIED
    if stats["n"] and stats["median"] > refute_median and confirmed:
        return REFUTED
    return INCONCLUSIVE


def family_tag(family) -> str:
    return family.describe().replace(" ", "")


def self_similar_profile(family):
    """(profile v(rho), k) for families that depend on x/t only; None otherwise."""
    inner = family.inner if isinstance(family, TimeShifted) else family
    if isinstance(inner, Zero):
        return (lambda r: 0.0 * r), 0.0
    if isinstance(inner, NutkuArctan):
        return (lambda r, k=inner.k: k * ad.atan(r)), inner.k
    if isinstance(inner, LogSinh):
        return (lambda r, k=inner.k: k * ad.asinh(r)), inner.k
    return None


def _closed_profile_oracle(family, rho: float) -> tuple[float, float] | None:
    """Hand-derived (v', v'') of the arctan / log-sinh profiles (independent of jets)."""
    inner = family.inner if isinstance(family, TimeShifted) else family
    q = 1.0 + rho * rho
    if isinstance(inner, Zero):
        return 0.0, 0.0
    if isinstance(inner, NutkuArctan):
        return inner.k / q, -2.0 * inner.k * rho / q**2
    if isinstance(inner, LogSinh):
        return inner.k / math.sqrt(q), -inner.k * rho / q**1.5
    return None


# ---------------------------------------------------------------------------
# phase 1: raw rows

class Auditor:
    def __init__(self, cfg: AuditConfig):
        self.cfg = cfg
        self.families = [build_family(cfg, name) for name in cfg.families]
        self.domain = DomainSpec(cfg.t_min, cfg.t_max, cfg.x_min, cfg.x_max)
        self.points = self.domain.grid(cfg.nt, cfg.nx)
        self.grid_text = (f"t in [{cfg.t_min:g}, {cfg.t_max:g}] x x in [{cfg.x_min:g}, {cfg.x_max:g}], "
                          f"{cfg.nt}x{cfg.nx}")
        self.tables: dict[str, Table] = {}
        self.raw: dict[str, object] = {}
        self.errors: dict[str, str] = {}

    # -- residuals and maximal ------------------------------------------------
    def section_residuals(self):
        tab = Table("residuals", ["family", "t", "x", "r_minimal", "r_divergence", "r_divergence_nested",
                                  "normalized_minimal", "W", "in_domain"])
        for fam in self.families:
            tag = family_tag(fam)
            for t, x in self.points:
                try:
                    j = eval_jet(fam, (t, x))
                except MinsurfError:
                    nan = float("nan")
                    tab.rows.append([tag, t, x, nan, nan, nan, nan, nan, 0])
                    continue
                r = minimal_residual(j)
                tab.rows.append([tag, t, x, r, divergence_residual(j), divergence_residual_nested(j),
                                 r / hessian_scale(j), gradient_norm_W(j), 1])
        return [tab]

    def section_maximal(self):
        tab = Table("maximal", ["family", "t", "x", "r_maximal", "normalized_maximal", "r_maximal_fd",
                                "spacelike", "in_domain"])
        for fam in self.families:
            tag = family_tag(fam)
            f = lambda t, x, fam=fam: float(fam.field(t, x))
            for t, x in self.points:
                try:
                    j = eval_jet(fam, (t, x))
                except MinsurfError:
                    nan = float("nan")
                    tab.rows.append([tag, t, x, nan, nan, nan, nan, 0])
                    continue
                d = {s: ad.fd_partial(f, (t, x), *mi, 1e-3) for s, mi in
                     (("t", (1, 0)), ("x", (0, 1)), ("tt", (2, 0)), ("tx", (1, 1)), ("xx", (0, 2)))}
                r_fd = (d["tt"] * (1 - d["x"] ** 2) + 2 * d["t"] * d["x"] * d["tx"]
                        + d["xx"] * (1 - d["t"] ** 2))
                r = maximal_residual(j)
                tab.rows.append([tag, t, x, r, r / hessian_scale(j), r_fd, spacelike_indicator(j), 1])
        return [tab]

    # -- profile ODEs -----------------------------------------------------------
    def section_ode(self):
        cfg = self.cfg
        prof = Table("ode_profiles", ["family", "rho", "r_paper_ode", "r_alt_ode",
                                      "oracle_paper_ode", "oracle_alt_ode"])
        rhos = np.linspace(-cfg.ode_check_rho_max, cfg.ode_check_rho_max, 41)
        for fam in self.families:
            ss = self_similar_profile(fam)
            if ss is None:
                continue
            v, _ = ss
            for rho in rhos:
                rho = float(rho)
                p = ProfileJet.of(v, rho)
                r_paper, r_alt = profile_ode_residual(p, rho)
                d1, d2 = _closed_profile_oracle(fam, rho)
                q = 1.0 + rho * rho
                prof.rows.append([family_tag(fam), rho, r_paper, r_alt, q * d2 + 2 * rho * d1, q * d2 + rho * d1])

        integ = Table("ode_integration", ["ode", "rho", "v_numeric", "v_closed_form", "abs_error"])
        tables = {}
        for ode in ("paper", "alt"):
            table = ode_integrate(ode, cfg.ode_C, cfg.ode_D, (cfg.ode_rho_min, cfg.ode_rho_max), cfg.ode_step)
            tables[ode] = table
            closed = closed_form_profile(ode, cfg.ode_C, cfg.ode_D)
            mask = np.abs(table.rho) <= cfg.ode_check_rho_max + 1e-12
            for r, v in zip(table.rho[mask], table.v[mask]):
                c = float(closed(float(r)))
                integ.rows.append([ode, float(r), float(v), c, abs(float(v) - c)])
        self.raw["ode_tables"] = tables
        return [prof, integ]

    # -- reduction ------------------------------------------------------------
    def section_reduction(self):
        cfg = self.cfg
        rng = np.random.default_rng(cfg.seed)
        red = Table("reduction", ["profile", "t", "x", "r_original", "r_reduced_scaled", "deviation"])
        for n in range(cfg.reduce_profiles):
            poly = random_polynomial(rng, cfg.reduce_degree)
            t = float(rng.uniform(0.2, 5.0))
            x = float(rng.uniform(-5.0, 5.0))
            chk = reduction_consistency(poly, (t, x))
            red.rows.append([n, t, x, chk.r_original, chk.r_reduced_scaled, chk.deviation])

        canc = Table("cancellation", ["rho", "tau", "reduced", "linear_ode", "deviation"])
        for _ in range(cfg.reduce_profiles):
            v_r, v_rr = rng.uniform(-2.0, 2.0, size=2)
            rho = float(rng.uniform(-5.0, 5.0))
            tau = float(rng.uniform(-1.0, 1.0))
            pj = ProfileJet(0.0, float(v_r), float(v_rr))
            reduced = reduced_residual(pj.as_jet(), tau, rho)
            linear = profile_ode_residual(pj, rho)[0]
            scale = max(1.0, math.exp(2 * tau) * (v_r * v_r) * (4 * abs(rho * v_r) + 4 * rho * rho * abs(v_rr)))
            canc.rows.append([rho, tau, reduced, linear, abs(reduced - linear) / scale])

        chain = Table("chain_rule", ["family", "t", "x", "derivative", "printed", "composed", "rel_diff"])
        for fam in self.families:
            ss = self_similar_profile(fam)
            if ss is None or isinstance(fam, TimeShifted):
                continue
            v, _ = ss
            for t, x in self.points[:: max(1, len(self.points) // 25)]:
                for name, (printed, composed) in chain_rule_comparison(lambda tau, rho: v(rho), (t, x)).items():
                    rel = abs(printed - composed) / max(1.0, abs(composed))
                    chain.rows.append([family_tag(fam), t, x, name, printed, composed, rel])
        return [red, canc, chain]

    # -- metric coefficients ----------------------------------------------------
    def section_coefficients(self):
        tabs = []
        for fam in self.families:
            inner = fam.inner if isinstance(fam, TimeShifted) else fam
            if isinstance(inner, LogSinh):
                k = inner.k
            elif isinstance(inner, Zero):
                k = 0.0
            else:
                continue
            tab = Table(f"coefficients-{family_tag(fam)}",
                        ["t", "x", "a", "b", "c", "a_printed", "b_printed", "c_printed"])
            for t, x in self.points:
                try:
                    comp = metric_coeffs(eval_jet(fam, (t, x), order=1))
                except MinsurfError:
                    continue
                s = fam.singular_distance(t)
                pr = paper_coeffs(s, x, k)
                tab.rows.append([t, x, comp.a, comp.b, comp.c, pr.a, pr.b, pr.c])
            tabs.append(tab)
        return tabs

    # -- curvature ----------------------------------------------------------------
    def section_curvature(self):
        tabs = []
        for fam in self.families:
            tag = family_tag(fam)
            scan = Table(f"curvature-{tag}", ["t", "x", "ricci_inf", "minimal_residual", "kretschmann", "det_g"])
            inv = Table(f"curvature-invariants-{tag}",
                        ["t", "x", "bianchi", "antisymmetry", "pair_symmetry", "ricci_symmetry",
                         "min_leading_minor", "block_det", "scalar"])
            for t, x in self.points:
                try:
                    j = eval_jet(fam, (t, x))
                    m = assemble_metric(fam, (t, x))
                    b = curvature_bundle(m)
                except MinsurfError:
                    continue
                mc = metric_coeffs(j)
                scan.rows.append([t, x, b.ricci_inf, minimal_residual(j), b.kretschmann, m.det()])
                inv.rows.append([t, x, b.bianchi_error(), b.antisymmetry_error(), b.pair_symmetry_error(),
                                 b.ricci_symmetry_error(), min(m.leading_minors()), mc.block_det, b.scalar])
            tabs += [scan, inv]
        return tabs

    # -- FD convergence ---------------------------------------------------------
    def section_convergence(self):
        cfg = self.cfg
        tabs = []
        studies = {}
        for fam in self.families:
            tag = family_tag(fam)
            tab = Table(f"convergence-{tag}", ["h", "deviation", "iterations", "order"])
            try:
                st = convergence_study(fam, cfg.solve_rect, cfg.solve_h_list, cfg.solve_tol, cfg.solve_max_iter)
            except MinsurfError as exc:
                self.errors[f"convergence:{tag}"] = str(exc)
                tabs.append(tab)
                continue
            studies[tag] = st
            order = "" if st.order is None else st.order
            for h, d, it in zip(st.h, st.deviation, st.iterations):
                tab.rows.append([h, d, it, order])
            tabs.append(tab)
        self.raw["studies"] = studies
        return tabs

    # -- singular traces ----------------------------------------------------------
    def section_singularity(self):
        cfg = self.cfg
        tabs = []
        dist = np.geomspace(cfg.singularity_t_min, cfg.singularity_t_max, cfg.singularity_n)
        trace_families = []
        for fam in self.families:
            ss = self_similar_profile(fam)
            if ss is None:
                continue
            trace_families.append((fam, ss[1]))
            if not isinstance(fam, TimeShifted):
                trace_families.append((time_shift(fam, cfg.singularity_T), ss[1]))
        for fam, k in trace_families:
            tab = Table(f"singularity-{family_tag(fam)}", ["t", "u_x", "scaled", "k"])
            if isinstance(fam, TimeShifted):
                ts = [fam.T - d for d in dist[::-1] if fam.T - d > 0]
            else:
                ts = [float(d) for d in dist[::-1]]
            for tp in singular_trace(fam, ts):
                tab.rows.append([tp.t, tp.u_x, tp.scaled, k])
            tabs.append(tab)
        return tabs

    # ---------------------------------------------------------------------------
    def run_sections(self, workers: int = 4) -> None:
        order = [s for s in self.cfg.sections]
        funcs = {s: getattr(self, f"section_{s}") for s in order}

        def run(name):
            try:
                return name, funcs[name](), None
            except Exception as exc:  # recorded per section; the audit goes on
                return name, [], f"{type(exc).__name__}: {exc}"

        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = list(pool.map(run, order))
        for name, tabs, err in results:
            if err:
                self.errors[name] = err
            for tab in tabs:
                self.tables[tab.name] = tab

    # ---------------------------------------------------------------------------
    # phase 2: verdicts

    def verdicts(self) -> list[Claim]:
        cfg = self.cfg
        claims: list[Claim] = []
        studies = self.raw.get("studies", {})
        fd_flag = {tag: st.flag for tag, st in studies.items()}
        residual_verdict: dict[str, str] = {}
        maximal_verdict: dict[str, str] = {}
        ricci_verdict: dict[str, str] = {}
        fd_verdict: dict[str, str] = {}

        if "residuals" in self.tables:
            tab = self.tables["residuals"]
            for fam in self.families:
                tag = family_tag(fam)
                norm = tab.column("normalized_minimal", {"family": tag})
                st = summary(norm, cfg.verdict_tol)
                raw = tab.column("r_minimal", {"family": tag})
                dv = tab.column("r_divergence", {"family": tag})
                nested = tab.column("r_divergence_nested", {"family": tag})
                Ws = tab.column("W", {"family": tag})
                form = [abs(d * w**3 - r) / max(1.0, abs(r)) for d, w, r in zip(dv, Ws, raw) if not math.isnan(r)]
                nest = [abs(a - b) / max(1.0, abs(b)) for a, b in zip(nested, dv) if not math.isnan(b)]
                st["max_abs_raw_residual"] = max(_abs(raw), default=float("nan"))
                st["form_equivalence_max"] = max(form, default=0.0)
                st["nested_divergence_max_dev"] = max(nest, default=0.0)
                plateau = fd_flag.get(tag) == "plateau"
                v = grade(st, cfg.refute_median, confirmed=plateau)
                notes = []
                if st["median"] > cfg.refute_median and not plateau:
                    notes.append("median residual large but the FD oracle did not confirm a plateau")
                residual_verdict[tag] = v
                claims.append(Claim(f"minimal-residual:{tag}", "residuals",
                                    f"{fam.describe()} solves u_tt(1+u_x^2) - 2u_t u_x u_tx + u_xx(1+u_t^2) = 0",
                                    self.grid_text, st, v, "residuals.csv", notes))

        if "convergence" in self.cfg.sections:
            for fam in self.families:
                tag = family_tag(fam)
                st_obj = studies.get(tag)
                if st_obj is None:
                    claims.append(Claim(f"fd-convergence:{tag}", "convergence",
                                        f"Dirichlet solve with {fam.describe()} boundary data recovers the family",
                                        str(cfg.solve_rect), {}, INCONCLUSIVE, f"convergence-{tag}.csv",
                                        [self.errors.get(f"convergence:{tag}", "study did not run")]))
                    fd_verdict[tag] = INCONCLUSIVE
                    continue
                v = {"decay": VERIFIED, "rounding": VERIFIED, "plateau": REFUTED}.get(st_obj.flag, INCONCLUSIVE)
                fd_verdict[tag] = v
                stats = {"fitted_order": st_obj.order if st_obj.order is not None else "undefined",
                         "finest_deviation": st_obj.deviation[-1], "coarsest_deviation": st_obj.deviation[0],
                         "flag": st_obj.flag}
                claims.append(Claim(f"fd-convergence:{tag}", "convergence",
                                    f"Dirichlet solve with {fam.describe()} boundary data recovers the family",
                                    f"rect {cfg.solve_rect}, h = {cfg.solve_h_list}", stats, v,
                                    f"convergence-{tag}.csv"))

        if "maximal" in self.tables:
            tab = self.tables["maximal"]
            for fam in self.families:
                tag = family_tag(fam)
                norm = tab.column("normalized_maximal", {"family": tag})
                st = summary(norm, cfg.verdict_tol)
                r = tab.column("r_maximal", {"family": tag})
                rfd = tab.column("r_maximal_fd", {"family": tag})
                agree = [abs(a - b) / max(1.0, abs(a)) for a, b in zip(r, rfd) if not math.isnan(a)]
                sl = [s for s in tab.column("spacelike", {"family": tag}) if not math.isnan(s)]
                st["fd_oracle_max_dev"] = max(agree, default=0.0)
                st["spacelike_count"] = sum(s > 0 for s in sl)
                confirmed = st["fd_oracle_max_dev"] < FD_RESIDUAL_AGREEMENT
                v = grade(st, cfg.refute_median, confirmed)
                maximal_verdict[tag] = v
                claims.append(Claim(f"maximal-residual:{tag}", "maximal",
                                    f"{fam.describe()} solves u_tt(1-u_x^2) + 2u_t u_x u_tx + u_xx(1-u_t^2) = 0",
                                    self.grid_text, st, v, "maximal.csv"))
            if residual_verdict:
                pairs = [(residual_verdict[t], maximal_verdict[t]) for t in maximal_verdict if t in residual_verdict]
                mismatch = sum({a, b} == {VERIFIED, REFUTED} for a, b in pairs)
                agree = sum(a == b and a != INCONCLUSIVE for a, b in pairs)
                if mismatch:
                    v = REFUTED
                elif agree == len(pairs) and pairs:
                    v = VERIFIED
                else:
                    v = INCONCLUSIVE
                claims.append(Claim("maximal-shares-solutions", "maximal",
                                    "minimal and maximal surface equations have the same self-similar solutions "
                                    "among the audited families",
                                    self.grid_text, {"families": len(pairs), "agreeing": agree,
                                                     "contradicting": mismatch}, v, "maximal.csv"))

        if "ode_profiles" in self.tables:
            tab = self.tables["ode_profiles"]
            for fam in self.families:
                tag = family_tag(fam)
                if not tab.column("rho", {"family": tag}):
                    continue
                for ode in ("paper", "alt"):
                    vals = tab.column(f"r_{ode}_ode", {"family": tag})
                    oracle = tab.column(f"oracle_{ode}_ode", {"family": tag})
                    st = summary(vals, cfg.verdict_tol)
                    st["oracle_max_dev"] = max((abs(a - b) for a, b in zip(vals, oracle)), default=0.0)
                    label = ("(1+rho^2) v'' + 2 rho v' = 0" if ode == "paper" else "(1+rho^2) v'' + rho v' = 0")
                    claims.append(Claim(f"profile-ode-{ode}:{tag}", "ode",
                                        f"profile of {fam.describe()} solves {label}",
                                        f"rho in [-{cfg.ode_check_rho_max:g}, {cfg.ode_check_rho_max:g}], 41 nodes",
                                        st, grade(st, cfg.refute_median), "ode_profiles.csv"))
        if "ode_integration" in self.tables:
            tab = self.tables["ode_integration"]
            tables = self.raw.get("ode_tables", {})
            for ode, closed in (("paper", "C arctan(rho) + D"), ("alt", "C asinh(rho) + D")):
                errs = tab.column("abs_error", {"ode": ode})
                st = summary(errs, cfg.ode_tol)
                if ode in tables:
                    st["richardson_estimate"] = tables[ode].error_estimate
                claims.append(Claim(f"ode-general-solution:{ode}", "ode",
                                    f"RK4 integration of the '{ode}' profile ODE equals {closed}",
                                    f"rho in [-{cfg.ode_check_rho_max:g}, {cfg.ode_check_rho_max:g}], "
                                    f"step {cfg.ode_step:g}, C={cfg.ode_C:g}, D={cfg.ode_D:g}",
                                    st, grade(st, cfg.refute_median), "ode_integration.csv"))

        if "reduction" in self.tables:
            tab = self.tables["reduction"]
            st = summary(tab.column("deviation"), cfg.reduce_tol)
            claims.append(Claim("reduced-equation", "reduction",
                                "minimal-surface residual equals e^(2 tau) times the reduced (tau, rho) residual",
                                f"{cfg.reduce_profiles} random degree-{cfg.reduce_degree} profiles, seed {cfg.seed}",
                                st, grade(st, cfg.refute_median), "reduction.csv"))
            tab = self.tables["cancellation"]
            st = summary(tab.column("deviation"), CANCELLATION_TOL)
            claims.append(Claim("tau-independent-cancellation", "reduction",
                                "for tau-independent v the nonlinear terms cancel, leaving (1+rho^2)v'' + 2 rho v'",
                                f"{cfg.reduce_profiles} random profile jets", st,
                                grade(st, cfg.refute_median), "cancellation.csv"))
            tab = self.tables["chain_rule"]
            if tab.rows:
                st = {}
                worst = INCONCLUSIVE
                medians = []
                for name in ("u_t", "u_tt", "u_x", "u_xx", "u_tx"):
                    s = summary(tab.column("rel_diff", {"derivative": name}), 1e-12)
                    st[f"{name}_median_rel_diff"] = s["median"]
                    st[f"{name}_pass_count"] = s["pass_count"]
                    medians.append((s, name))
                flagged = [n for s, n in medians if s["median"] > cfg.refute_median]
                if all(s["pass_count"] == s["n"] for s, _ in medians):
                    worst = VERIFIED
                elif flagged:
                    worst = REFUTED
                notes = [f"printed formula disagrees with jet composition for {', '.join(flagged)}"] if flagged else []
                claims.append(Claim("printed-chain-rule", "reduction",
                                    "u_t = e^tau (v_tau + rho v_rho) and companions, as printed",
                                    "profiles of the configured self-similar families", st, worst,
                                    "chain_rule.csv", notes))

        for name, tab in self.tables.items():
            if not name.startswith("coefficients-"):
                continue
            tag = name[len("coefficients-"):]
            diffs = [max(abs(r[2] - r[5]), abs(r[3] - r[6]), abs(r[4] - r[7])) for r in tab.rows]
            st = summary(diffs, 1e-12)
            st["block_det_max_dev"] = max((abs(r[2] * r[3] - 0.25 * r[4] ** 2 - 1.0) for r in tab.rows), default=0.0)
            x0 = [d for r, d in zip(tab.rows, diffs) if r[1] == 0.0]
            st["max_diff_on_x0"] = max(x0, default=float("nan"))
            claims.append(Claim(f"printed-coefficients:{tag}", "coefficients",
                                "printed closed forms of a, b, c equal (1+u_t^2)/W, (1+u_x^2)/W, 2u_t u_x/W",
                                self.grid_text, st, grade(st, cfg.refute_median), f"{name}.csv"))

        for fam in self.families:
            tag = family_tag(fam)
            scan = self.tables.get(f"curvature-{tag}")
            inv = self.tables.get(f"curvature-invariants-{tag}")
            if scan is None:
                continue
            ric = scan.column("ricci_inf")
            res = scan.column("minimal_residual")
            st = summary(ric, cfg.curvature_ricci_tol)
            zero_res = [(r, q) for r, q in zip(ric, res) if abs(q) < cfg.curvature_implication_residual]
            st["rows_with_zero_residual"] = len(zero_res)
            st["implication_violations"] = sum(r >= cfg.curvature_ricci_tol for r, _ in zero_res)
            large_res = [r for r, q in zip(ric, res) if abs(q) >= cfg.curvature_implication_residual]
            st["rows_with_nonzero_residual"] = len(large_res)
            st["ricci_small_despite_residual"] = sum(r < cfg.curvature_ricci_tol for r in large_res)
            st["kretschmann_max"] = max(_abs(scan.column("kretschmann")), default=float("nan"))
            v = grade(st, cfg.refute_median)
            ricci_verdict[tag] = v
            notes = []
            if st["implication_violations"]:
                notes.append("pointwise zero residual does not force zero Ricci at those rows "
                             "(Ricci involves derivatives of the residual)")
            claims.append(Claim(f"ricci-flat:{tag}", "curvature",
                                f"metric built from {fam.describe()} is Ricci-flat", self.grid_text, st, v,
                                f"curvature-{tag}.csv", notes))

            ist = {
                "bianchi_max": max(inv.column("bianchi"), default=0.0),
                "antisymmetry_max": max(inv.column("antisymmetry"), default=0.0),
                "pair_symmetry_max": max(inv.column("pair_symmetry"), default=0.0),
                "ricci_symmetry_max": max(inv.column("ricci_symmetry"), default=0.0),
                "n": len(inv.rows),
            }
            ok = (ist["bianchi_max"] < BIANCHI_TOL and ist["antisymmetry_max"] < BIANCHI_TOL
                  and ist["pair_symmetry_max"] < BIANCHI_TOL and ist["ricci_symmetry_max"] < RICCI_SYM_TOL)
            claims.append(Claim(f"curvature-identities:{tag}", "curvature",
                                "Riemann tensor satisfies Bianchi, antisymmetry and pair symmetry",
                                self.grid_text, ist, VERIFIED if ok else REFUTED,
                                f"curvature-invariants-{tag}.csv"))
            mst = {
                "block_det_max_dev": max((abs(b - 1.0) for b in inv.column("block_det")), default=0.0),
                "det_g_max_dev": max((abs(d - 1.0) for d in scan.column("det_g")), default=0.0),
                "min_leading_minor": min(inv.column("min_leading_minor"), default=float("nan")),
                "n": len(inv.rows),
            }
            ok = (mst["block_det_max_dev"] < BLOCK_DET_TOL and mst["det_g_max_dev"] < DET_G_TOL
                  and mst["min_leading_minor"] > 0)
            claims.append(Claim(f"metric-identities:{tag}", "curvature",
                                "ab - c^2/4 = 1, det g = 1 and g positive definite",
                                self.grid_text, mst, VERIFIED if ok else REFUTED,
                                f"curvature-invariants-{tag}.csv"))

        for fam in self.families:
            tag = family_tag(fam)
            inner = fam.inner if isinstance(fam, TimeShifted) else fam
            if not isinstance(inner, LogSinh):
                continue
            subs = {"residual": residual_verdict.get(tag), "fd_oracle": fd_verdict.get(tag),
                    "ricci": ricci_verdict.get(tag)}
            present = {k: v for k, v in subs.items() if v is not None}
            consistent = len(present) == 3 and len(set(present.values())) == 1
            v = next(iter(present.values())) if consistent else INCONCLUSIVE
            stats = {f"{k}_verdict": (v_ or "not run") for k, v_ in subs.items()}
            stats["consistent"] = int(consistent)
            claims.append(Claim(f"singular-solution:{tag}", "residuals",
                                f"{fam.describe()} is an exact singular solution (combined oracles)",
                                self.grid_text, stats, v, "residuals.csv"))

        for name, tab in self.tables.items():
            if not name.startswith("singularity-"):
                continue
            tag = name[len("singularity-"):]
            k = tab.rows[0][3] if tab.rows else 0.0
            devs = [abs(r[2] - r[3]) for r in tab.rows]
            tol = cfg.singularity_tol * max(1.0, abs(k))
            st = summary(devs, tol)
            st["max_u_x"] = max(_abs(tab.column("u_x")), default=float("nan"))
            claims.append(Claim(f"singular-trace:{tag}", "singularity",
                                "u_x(t, 0) times distance to the singular line equals k",
                                f"distance in [{cfg.singularity_t_min:g}, {cfg.singularity_t_max:g}], "
                                f"{cfg.singularity_n} log-spaced", st, grade(st, cfg.refute_median), f"{name}.csv"))

        for sec, err in self.errors.items():
            if ":" in sec:
                continue
            claims.append(Claim(f"section-error:{sec}", sec, "section execution", "", {}, INCONCLUSIVE, "", [err]))
        order = {s: i for i, s in enumerate(["residuals", "maximal", "ode", "reduction", "coefficients",
                                             "curvature", "convergence", "singularity"])}
        claims.sort(key=lambda c: order.get(c.section, 99))
        return claims


def run_audit(cfg: AuditConfig, out_dir: str | Path | None = None, workers: int = 4,
              plots: bool = False, timestamp: str | None = None) -> tuple[AuditReport, dict[str, Path]]:
    """Run every configured section; write report and CSV appendices when ``out_dir`` is given."""
    auditor = Auditor(cfg)
    auditor.run_sections(workers)
    claims = auditor.verdicts()
    stamp = timestamp or datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    metadata = {
        "version": __version__,
        "timestamp": stamp,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in cfg.echo().items()},
        "families": [f.describe() for f in auditor.families],
        "section_errors": dict(auditor.errors),
    }
    report = AuditReport(metadata, claims, auditor.tables)
    paths: dict[str, Path] = {}
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, tab in sorted(auditor.tables.items()):
            p = out / f"{name}.csv"
            tab.write(p)
            paths[name] = p
        paths["report"] = out / f"audit-{stamp}.txt"
        paths["report"].write_text(report.to_text())
        paths["json"] = out / f"audit-{stamp}.json"
        paths["json"].write_text(report.to_json())
        if plots:
            from .plots import plot_tables
            paths.update(plot_tables(auditor.tables, out))
    return report, paths
