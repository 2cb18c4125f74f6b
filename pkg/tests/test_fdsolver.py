import numpy as np
import pytest

from minsurf.errors import InvalidParameter, NonConvergence
from minsurf.fdsolver import (GridProblem, classify, convergence_study, discrete_jacobian, discrete_residual,
                              solve_dirichlet, write_field_csv, write_study_csv)
from minsurf.surfaces import Linear, LogSinh, NutkuArctan, Zero


def test_grid_problem_validation():
    p = GridProblem(Zero(), 0.5, 1.0, -0.5, 0.5, 0.125)
    assert (p.nt, p.nx) == (5, 9)
    with pytest.raises(InvalidParameter):
        GridProblem(Zero(), 0.0, 1.0, 0.0, 1.0, 0.25)
    with pytest.raises(InvalidParameter):
        GridProblem(Zero(), 0.5, 1.0, 0.0, 1.0, 0.3)
    with pytest.raises(InvalidParameter):
        GridProblem(Zero(), 0.5, 1.0, 0.0, 1.0, 0.25)


def test_jacobian_matches_finite_differences(rng):
    U = rng.normal(size=(7, 8))
    h = 0.1
    J = discrete_jacobian(U, h).toarray()
    F0 = discrete_residual(U, h).ravel()
    interior = [(i, j) for i in range(1, 6) for j in range(1, 7)]
    eps = 1e-6
    for col, (i, j) in enumerate(interior):
        Up = U.copy()
        Up[i, j] += eps
        Um = U.copy()
        Um[i, j] -= eps
        fd = (discrete_residual(Up, h).ravel() - discrete_residual(Um, h).ravel()) / (2 * eps)
        assert np.allclose(J[:, col], fd, atol=1e-5 * max(1, np.max(np.abs(F0))))


@pytest.mark.parametrize("fam", [Zero(), Linear(0.5, -1.5)])
def test_trivial_families_exact(fam):
    res = solve_dirichlet(GridProblem(fam, 0.5, 1.5, -1.0, 1.0, 0.125), warm_start=False)
    assert res.converged and res.max_deviation < 1e-11


def test_cold_start_arctan_converges():
    res = solve_dirichlet(GridProblem(NutkuArctan(1.0), 0.5, 2.0, -1.0, 1.0, 1 / 8), warm_start=False)
    assert res.converged and res.residual_norm < 1e-10 and res.max_deviation < 1e-2


def test_strict_nonconvergence():
    with pytest.raises(NonConvergence):
        solve_dirichlet(GridProblem(NutkuArctan(1.0), 0.5, 2.0, -1.0, 1.0, 1 / 8),
                        warm_start=False, max_iter=1, strict=True)


def test_classify_rules():
    h = [1 / 16, 1 / 32, 1 / 64]
    assert classify(h, [1e-13, 1e-13, 1e-13]) == (None, "rounding")
    order, flag = classify(h, [4e-4, 1e-4, 2.5e-5])
    assert flag == "decay" and order == pytest.approx(2.0)
    assert classify(h, [0.03, 0.03, 0.03])[1] == "plateau"
    assert classify(h, [4e-3, 2.8e-3, 2e-3])[1] == "inconclusive"


def test_convergence_study_arctan_second_order(tmp_path):
    st = convergence_study(NutkuArctan(1.0), (0.5, 2.0, -1.0, 1.0), [1 / 8, 1 / 16, 1 / 32])
    assert st.flag == "decay" and st.order == pytest.approx(2.0, abs=0.2)
    write_study_csv(st, tmp_path / "c.csv")
    assert (tmp_path / "c.csv").read_text().startswith("h,deviation,order\n")


def test_convergence_study_logsinh_plateau():
    st = convergence_study(LogSinh(1.0), (0.5, 2.0, -1.0, 1.0), [1 / 8, 1 / 16, 1 / 32])
    assert st.flag == "plateau"


def test_study_input_validation():
    with pytest.raises(InvalidParameter):
        convergence_study(Zero(), (0.5, 1.0, 0.0, 1.0), [0.25, 0.125])
    with pytest.raises(InvalidParameter):
        convergence_study(Zero(), (0.5, 1.0, 0.0, 1.0), [0.125, 0.25, 0.0625])


def test_write_field_csv(tmp_path):
    p = GridProblem(Zero(), 0.5, 1.0, 0.0, 0.5, 0.125)
    res = solve_dirichlet(p)
    write_field_csv(p, res.field, tmp_path / "f.csv")
    assert len((tmp_path / "f.csv").read_text().splitlines()) == 1 + p.nt * p.nx
