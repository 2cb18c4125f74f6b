import math

import numpy as np
import pytest

from minsurf.errors import InvalidParameter, OutOfDomain
from minsurf.similarity import ode_integrate
from minsurf.surfaces import (DomainSpec, Linear, LogSinh, NutkuArctan, OdeProfile, TimeShifted, Zero, eval_jet,
                              eval_value, family_from_params, singular_trace, time_shift)


def test_domain_grid_and_validation():
    pts = DomainSpec(0.5, 2.0, -2.0, 2.0).grid(21, 21)
    assert len(pts) == 441 and pts[0] == (0.5, -2.0) and pts[-1] == (2.0, 2.0)
    with pytest.raises(InvalidParameter):
        DomainSpec(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(InvalidParameter):
        DomainSpec(1.0, 0.5, 0.0, 1.0)


def test_closed_form_values():
    assert eval_value(NutkuArctan(2.0), (1.0, 1.0)) == pytest.approx(2.0 * math.pi / 4)
    assert eval_value(LogSinh(1.0), (2.0, 3.0)) == pytest.approx(math.asinh(1.5))
    assert eval_value(Linear(2.0, -1.0), (1.0, 3.0)) == pytest.approx(-1.0)
    assert eval_value(Zero(), (1.0, 3.0)) == 0.0


def test_logsinh_printed_form_agrees_with_asinh(rng):
    fam = LogSinh(1.7)
    for t, x in zip(rng.uniform(0.1, 3, 30), rng.uniform(-3, 3, 30)):
        assert fam.printed_form(t, x) == pytest.approx(eval_value(fam, (t, x)), abs=1e-12)


def test_arctan_jet_partials_closed_form():
    t, x, k = 1.3, -0.4, 1.5
    j = eval_jet(NutkuArctan(k), (t, x))
    r2 = t * t + x * x
    assert j.u_t == pytest.approx(-k * x / r2)
    assert j.u_x == pytest.approx(k * t / r2)
    assert j.u_tt == pytest.approx(2 * k * t * x / r2**2)
    assert j.u_xx == pytest.approx(-2 * k * t * x / r2**2)


def test_singular_line_rejected():
    for fam in (NutkuArctan(1.0), LogSinh(1.0)):
        with pytest.raises(OutOfDomain):
            eval_jet(fam, (0.0, 1.0))
        with pytest.raises(OutOfDomain):
            eval_jet(fam, (-1.0, 1.0))
    with pytest.raises(OutOfDomain):
        eval_jet(NutkuArctan(1.0), (0.05, 0.0), margin=0.1)


def test_time_shift():
    base = NutkuArctan(1.0)
    sh = time_shift(base, 3.0)
    assert isinstance(sh, TimeShifted)
    assert eval_value(sh, (1.0, 0.5)) == pytest.approx(eval_value(base, (2.0, 0.5)))
    # u(T - t): d/dt flips sign
    assert eval_jet(sh, (1.0, 0.5)).u_t == pytest.approx(-eval_jet(base, (2.0, 0.5)).u_t)
    with pytest.raises(OutOfDomain):
        eval_jet(sh, (3.0, 0.5))
    with pytest.raises(OutOfDomain):
        eval_jet(sh, (-0.5, 0.5))
    with pytest.raises(InvalidParameter):
        time_shift(sh, 2.0)
    with pytest.raises(InvalidParameter):
        time_shift(base, 0.0)


def test_family_from_params():
    assert family_from_params("logsinh", k=2.0) == LogSinh(2.0)
    assert family_from_params("nutku") == NutkuArctan(1.0)
    assert family_from_params("linear", alpha=1.0, beta=2.0) == Linear(1.0, 2.0)
    assert family_from_params("arctan", k=1.0, T=2.0) == TimeShifted(NutkuArctan(1.0), 2.0)
    with pytest.raises(InvalidParameter):
        family_from_params("helicoid")


def test_zero_k_rejected():
    with pytest.raises(InvalidParameter):
        NutkuArctan(0.0)


def test_singular_trace_scaled_is_k():
    for fam in (NutkuArctan(2.0), LogSinh(-0.5)):
        for p in singular_trace(fam, np.geomspace(1e-3, 10, 9)):
            assert p.scaled == pytest.approx(fam.k, abs=1e-12)


def test_profile_table_and_ode_profile(tmp_path):
    table = ode_integrate("paper", 1.0, 0.0, (-3.0, 3.0), 1e-2)
    v, dv, d2v, d3v = table.derivatives(0.7)
    q = 1 + 0.49
    assert v == pytest.approx(math.atan(0.7), abs=1e-9)
    assert dv == pytest.approx(1 / q, abs=1e-9)
    assert d2v == pytest.approx(-1.4 / q**2, abs=1e-7)
    assert d3v == pytest.approx((6 * 0.49 - 2) / q**3, abs=1e-4)
    fam = OdeProfile(table)
    assert eval_value(fam, (2.0, 1.0)) == pytest.approx(math.atan(0.5), abs=1e-9)
    with pytest.raises(OutOfDomain):
        eval_value(fam, (0.5, 2.0))
    path = tmp_path / "p.csv"
    table.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "rho,v" and len(lines) == len(table.rho) + 1
