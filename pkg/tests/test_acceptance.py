"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import filecmp
import math
import tempfile
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from minsurf import autodiff as ad
from minsurf.audit import BIANCHI_TOL, RICCI_SYM_TOL, run_audit
from minsurf.config import AuditConfig
from minsurf.curvature import curvature_bundle
from minsurf.fdsolver import convergence_study
from minsurf.fields import random_polynomial
from minsurf.metric import assemble_metric, metric_coeffs
from minsurf.pde import maximal_residual, minimal_residual, scaling_residual_identity
from minsurf.similarity import ProfileJet, ode_integrate, profile_ode_residual, reduced_residual, reduction_consistency
from minsurf.surfaces import (DomainSpec, Linear, LogSinh, NutkuArctan, Zero, eval_jet, singular_trace,
                              time_shift)

SEED = 1729
GRID = DomainSpec(0.5, 2.0, -2.0, 2.0)
RESULTS: list[str] = []


@lru_cache(maxsize=None)
def default_audit():
    out = Path(tempfile.mkdtemp(prefix="minsurf-acc-"))
    report, _ = run_audit(AuditConfig(), out, workers=4, timestamp="run1")
    return report, out


def _random_jet(rng):
    return ad.Jet(rng.uniform(-1, 1, 10))


def criterion_1():
    rng = np.random.default_rng(SEED)
    worst_res = worst_curv = worst_dg = 0.0
    for fam in (Zero(), Linear(0.8, -1.3), Linear(-2.0, 0.5)):
        for t, x in zip(rng.uniform(0.1, 5, 25), rng.uniform(-5, 5, 25)):
            j = eval_jet(fam, (t, x))
            worst_res = max(worst_res, abs(minimal_residual(j)), abs(maximal_residual(j)))
            m = assemble_metric(fam, (t, x))
            _, dg, ddg = m.derivative_arrays()
            worst_dg = max(worst_dg, np.max(np.abs(dg)), np.max(np.abs(ddg)))
            b = curvature_bundle(m)
            worst_curv = max(worst_curv, np.max(np.abs(b.gamma)), np.max(np.abs(b.riemann)),
                             np.max(np.abs(b.ricci)), abs(b.scalar), abs(b.kretschmann))
    ok = worst_res < 1e-14 and worst_dg == 0.0 and worst_curv == 0.0
    return ok, f"max |residual| {worst_res:.1e}, max |dg| {worst_dg:.1e}, max curvature entry {worst_curv:.1e}"


def criterion_2():
    rng = np.random.default_rng(SEED)
    fams = (Zero(), Linear(0.8, -1.3), NutkuArctan(1.0), LogSinh(1.0),
            time_shift(NutkuArctan(1.0), 3.0), time_shift(LogSinh(1.0), 3.0))
    fd = max(ad.fd_crosscheck(f.field, (t, x))
             for f in fams for t, x in zip(rng.uniform(0.5, 2, 50), rng.uniform(-2, 2, 50)))
    leib = inv = 0.0
    for _ in range(1000):
        a, b = _random_jet(rng), _random_jet(rng)
        c = a * b
        for i, j in ad.multi_indices(3):
            ref = sum(math.comb(i, p) * math.comb(j, q) * a.partial(p, q) * b.partial(i - p, j - q)
                      for p in range(i + 1) for q in range(j + 1))
            leib = max(leib, abs(c.partial(i, j) - ref))
        a = ad.Jet((rng.choice([-1, 1]) * rng.uniform(0.5, 2),) + a.taylor[1:])
        one = a * a.reciprocal()
        inv = max(inv, abs(one.taylor[0] - 1), max(abs(v) for v in one.taylor[1:]))
    ok = fd < 1e-5 and leib < 1e-12 and inv < 1e-12
    return ok, f"fd deviation {fd:.1e}, Leibniz {leib:.1e}, inverse {inv:.1e}"


def criterion_3():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(50):
        f = random_polynomial(rng, int(rng.integers(1, 5)))
        p = tuple(rng.uniform(-1, 1, 2))
        for lam in (0.5, 2.0, 3.0):
            lhs, rhs = scaling_residual_identity(f, lam, p)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst < 1e-11, f"max relative defect {worst:.1e}"


def criterion_4():
    fam = NutkuArctan(1.0)
    res = ric = 0.0
    for p in GRID.grid(21, 21):
        res = max(res, abs(minimal_residual(eval_jet(fam, p))))
        ric = max(ric, curvature_bundle(assemble_metric(fam, p)).ricci_inf)
    st = convergence_study(fam, (0.5, 2.0, -1.0, 1.0), [1 / 16, 1 / 32, 1 / 64])
    ok = res < 1e-12 and ric < 1e-7 and st.order is not None and abs(st.order - 2.0) <= 0.2
    return ok, f"max |residual| {res:.1e}, max |Ricci| {ric:.1e}, FD order {st.order:.3f}"


def criterion_5():
    rng = np.random.default_rng(SEED)
    dev = 0.0
    for _ in range(100):
        v = random_polynomial(rng, 3)
        p = (float(rng.uniform(0.5, 2)), float(rng.uniform(-2, 2)))
        dev = max(dev, reduction_consistency(v, p).deviation)
    canc = 0.0
    for _ in range(100):
        pj = ProfileJet(*rng.uniform(-1, 1, 4))
        rho, tau = float(rng.uniform(-3, 3)), float(rng.uniform(-2, 2))
        lin = (1 + rho * rho) * pj.v_rr + 2 * rho * pj.v_r
        canc = max(canc, abs(reduced_residual(pj.as_jet(), tau, rho) - lin) / max(1.0, abs(lin)))
    return dev < 1e-10 and canc < 1e-13, f"reduction deviation {dev:.1e}, cancellation {canc:.1e}"


def criterion_6():
    errs = {}
    for ode, fn in (("paper", np.arctan), ("alt", np.arcsinh)):
        tab = ode_integrate(ode, 1.0, 0.0, (-5.0, 5.0), 1e-3)
        errs[ode] = float(np.max(np.abs(tab.v - fn(tab.rho))))
    # hand-derived residuals: arctan -> (0, -rho/q), log profile -> (rho/sqrt q, 0)
    agree = 0.0
    for rho in np.linspace(-5, 5, 101):
        q = 1 + rho * rho
        got = profile_ode_residual(ProfileJet.of(ad.atan, rho), rho) + \
            profile_ode_residual(ProfileJet.of(ad.asinh, rho), rho)
        want = (0.0, -rho / q, rho / math.sqrt(q), 0.0)
        agree = max(agree, max(abs(g - w) for g, w in zip(got, want)))
    ok = errs["paper"] < 1e-9 and errs["alt"] < 1e-9 and agree < 1e-10
    return ok, f"paper vs arctan {errs['paper']:.1e}, alt vs asinh {errs['alt']:.1e}, oracle agreement {agree:.1e}"


def criterion_7():
    report, _ = default_audit()
    claim = next(c for c in report.claims if c.claim_id == "singular-solution:logsinh(k=1)")
    subs = {k: claim.stats[f"{k}_verdict"] for k in ("residual", "fd_oracle", "ricci")}
    ok = len(set(subs.values())) == 1 and claim.stats["consistent"] == 1
    return ok, ", ".join(f"{k}={v}" for k, v in subs.items()) + f" -> {claim.verdict}"


def criterion_8():
    fams = (Zero(), Linear(0.8, -1.3), NutkuArctan(1.0), NutkuArctan(-2.0), LogSinh(1.0), LogSinh(2.5),
            time_shift(NutkuArctan(1.0), 3.0), time_shift(LogSinh(1.0), 3.0))
    blk = det = 0.0
    pd = True
    for fam in fams:
        for p in GRID.grid(21, 21):
            j = eval_jet(fam, p)
            blk = max(blk, abs(metric_coeffs(j).block_det - 1.0))
            m = assemble_metric(fam, p)
            det = max(det, abs(m.det() - 1.0))
            pd = pd and m.is_positive_definite() and bool(np.all(np.linalg.eigvalsh(m.matrix()) > 0))
    report, _ = default_audit()
    audit_ok = all(v == "verified" for k, v in report.verdicts().items() if k.startswith("metric-identities:"))
    ok = blk < 1e-12 and det < 1e-10 and pd and audit_ok
    return ok, f"block det dev {blk:.1e}, det g dev {det:.1e}, positive definite {pd}, audit claims {audit_ok}"


def criterion_9():
    worst = {"bianchi": 0.0, "antisymmetry": 0.0, "pair": 0.0, "ricci_sym": 0.0}
    for fam in (NutkuArctan(1.0), LogSinh(1.0), time_shift(LogSinh(1.0), 3.0)):
        for p in GRID.grid(21, 21):
            b = curvature_bundle(assemble_metric(fam, p))
            worst["bianchi"] = max(worst["bianchi"], b.bianchi_error())
            worst["antisymmetry"] = max(worst["antisymmetry"], b.antisymmetry_error())
            worst["pair"] = max(worst["pair"], b.pair_symmetry_error())
            worst["ricci_sym"] = max(worst["ricci_sym"], b.ricci_symmetry_error())
    ok = (max(worst["bianchi"], worst["antisymmetry"], worst["pair"]) < BIANCHI_TOL
          and worst["ricci_sym"] < RICCI_SYM_TOL)
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items())


def criterion_10():
    ts = np.geomspace(1e-3, 10, 41)
    worst = 0.0
    for fam in (LogSinh(1.0), LogSinh(-2.0), NutkuArctan(1.0), NutkuArctan(3.0)):
        worst = max(worst, max(abs(p.scaled - fam.k) for p in singular_trace(fam, ts)))
    T = 2.0
    shifted_ts = [T - d for d in np.geomspace(1e-3, 10, 41) if T - d > 0]
    for inner in (LogSinh(1.0), NutkuArctan(2.0)):
        fam = time_shift(inner, T)
        worst = max(worst, max(abs(p.scaled - inner.k) for p in singular_trace(fam, shifted_ts)))
    return worst < 1e-12, f"max |distance * u_x - k| {worst:.1e}"


def criterion_11():
    _, out1 = default_audit()
    out2 = Path(tempfile.mkdtemp(prefix="minsurf-acc-"))
    run_audit(AuditConfig(), out2, workers=2, timestamp="run2")
    csvs = sorted(p.name for p in out1.glob("*.csv"))
    same = csvs == sorted(p.name for p in out2.glob("*.csv"))
    _, mismatch, errors = filecmp.cmpfiles(out1, out2, csvs, shallow=False)
    ok = same and bool(csvs) and not mismatch and not errors
    return ok, f"{len(csvs)} CSV files compared, {len(mismatch)} differ"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def _line(n, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    line = _line(n, ok, detail)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for n, fn in enumerate(CRITERIA, 1):
        print(_line(n, *fn()), flush=True)
