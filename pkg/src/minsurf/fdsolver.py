"""Damped-Newton finite-difference solver for the minimal-surface Dirichlet problem.

Second-order central differences on a uniform grid over [t0, t1] x [x0, x1]:
5-point stencils for u_tt, u_xx and the 4-point cross stencil for u_tx.
Boundary values are sampled from a surface family; the interior is found by
Newton's method with the analytic Jacobian of the discrete operator and step
halving whenever the residual grows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .errors import InvalidParameter, NonConvergence


@dataclass(frozen=True)
class GridProblem:
    family: object
    t0: float
    t1: float
    x0: float
    x1: float
    h: float

    def __post_init__(self):
        if not self.t0 > 0.0:
            raise InvalidParameter(f"t0 must be > 0, got {self.t0}")
        if not self.h > 0.0:
            raise InvalidParameter(f"mesh size must be > 0, got {self.h}")
        for lo, hi in ((self.t0, self.t1), (self.x0, self.x1)):
            n = (hi - lo) / self.h
            if abs(n - round(n)) > 1e-9 * max(1.0, n):
                raise InvalidParameter(f"interval [{lo}, {hi}] is not a multiple of h = {self.h}")
        if self.nt < 5 or self.nx < 5:
            raise InvalidParameter("need at least 3 interior nodes per direction")

    @property
    def nt(self) -> int:
        return int(round((self.t1 - self.t0) / self.h)) + 1

    @property
    def nx(self) -> int:
        return int(round((self.x1 - self.x0) / self.h)) + 1

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        t = self.t0 + self.h * np.arange(self.nt)
        x = self.x0 + self.h * np.arange(self.nx)
        return np.meshgrid(t, x, indexing="ij")

    def family_samples(self) -> np.ndarray:
        T, X = self.nodes()
        f = np.vectorize(lambda t, x: float(self.family.field(float(t), float(x))))
        return f(T, X)


@dataclass
class SolveResult:
    converged: bool
    iterations: int
    step_norm: float
    max_deviation: float
    residual_norm: float
    field: np.ndarray = field(repr=False)


def _derivs(U: np.ndarray, h: float):
    c = U[1:-1, 1:-1]
    ut = (U[2:, 1:-1] - U[:-2, 1:-1]) / (2 * h)
    ux = (U[1:-1, 2:] - U[1:-1, :-2]) / (2 * h)
    utt = (U[2:, 1:-1] - 2 * c + U[:-2, 1:-1]) / h**2
    uxx = (U[1:-1, 2:] - 2 * c + U[1:-1, :-2]) / h**2
    utx = (U[2:, 2:] - U[2:, :-2] - U[:-2, 2:] + U[:-2, :-2]) / (4 * h**2)
    return ut, ux, utt, uxx, utx


def discrete_residual(U: np.ndarray, h: float) -> np.ndarray:
    """Discrete minimal-surface operator at interior nodes."""
    ut, ux, utt, uxx, utx = _derivs(U, h)
    return utt * (1 + ux**2) - 2 * ut * ux * utx + uxx * (1 + ut**2)


def discrete_jacobian(U: np.ndarray, h: float) -> sp.csc_matrix:
    """d(residual)/d(interior values), interior nodes flattened row-major (t, x)."""
    ut, ux, utt, uxx, utx = _derivs(U, h)
    A = 1 + ux**2           # coefficient of u_tt
    C = 1 + ut**2           # coefficient of u_xx
    B = -2 * ut * ux        # coefficient of u_tx
    Dt = 2 * ut * uxx - 2 * ux * utx   # d/d(u_t)
    Dx = 2 * ux * utt - 2 * ut * utx   # d/d(u_x)

    mt, mx = A.shape
    idx = np.arange(mt * mx).reshape(mt, mx)
    rows, cols, vals = [], [], []

    def add(di, dj, w):
        # neighbour (i+di, j+dj) in interior coordinates
        i0, i1 = max(0, -di), mt - max(0, di)
        j0, j1 = max(0, -dj), mx - max(0, dj)
        r = idx[i0:i1, j0:j1]
        c = idx[i0 + di:i1 + di, j0 + dj:j1 + dj]
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.broadcast_to(w, A.shape)[i0:i1, j0:j1].ravel())

    add(0, 0, -2 * (A + C) / h**2)
    add(1, 0, A / h**2 + Dt / (2 * h))
    add(-1, 0, A / h**2 - Dt / (2 * h))
    add(0, 1, C / h**2 + Dx / (2 * h))
    add(0, -1, C / h**2 - Dx / (2 * h))
    add(1, 1, B / (4 * h**2))
    add(-1, -1, B / (4 * h**2))
    add(1, -1, -B / (4 * h**2))
    add(-1, 1, -B / (4 * h**2))
    n = mt * mx
    return sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))


def solve_dirichlet(p: GridProblem, tol: float = 1e-10, max_iter: int = 50,
                    warm_start: bool = True, strict: bool = False,
                    min_step: float = 2.0**-20) -> SolveResult:
    """Newton solve of the discrete Dirichlet problem with boundary data from ``p.family``.

    Every iteration takes one (possibly damped) Newton step; convergence is
    declared when the max-norm of the discrete residual drops below ``tol``.
    With ``strict`` a failure raises :class:`NonConvergence`, otherwise it is
    reported through ``converged=False``.
    """
    if not tol > 0.0:
        raise InvalidParameter(f"tol must be > 0, got {tol}")
    exact = p.family_samples()
    U = exact.copy()
    if not warm_start:
        U[1:-1, 1:-1] = 0.0
    h = p.h

    F = discrete_residual(U, h)
    fnorm = float(np.max(np.abs(F)))
    step_norm = float("nan")
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        J = discrete_jacobian(U, h)
        delta = spsolve(J, -F.ravel()).reshape(F.shape)
        lam = 1.0
        while True:
            trial = U.copy()
            trial[1:-1, 1:-1] += lam * delta
            F_trial = discrete_residual(trial, h)
            f_trial = float(np.max(np.abs(F_trial)))
            if f_trial <= fnorm or lam <= min_step:
                break
            lam *= 0.5
        U, F, fnorm = trial, F_trial, f_trial
        step_norm = float(lam * np.max(np.abs(delta)))
        if fnorm < tol:
            converged = True
            break

    dev = float(np.max(np.abs(U[1:-1, 1:-1] - exact[1:-1, 1:-1])))
    result = SolveResult(converged, it, step_norm, dev, fnorm, U)
    if strict and not converged:
        raise NonConvergence(f"no convergence after {max_iter} iterations (residual {fnorm:.3e})")
    return result


@dataclass
class ConvergenceStudy:
    family: str
    rectangle: tuple[float, float, float, float]
    h: list[float]
    deviation: list[float]
    iterations: list[int]
    order: float | None
    flag: str  # "decay", "plateau", "rounding" or "inconclusive"

    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.h, self.deviation))


#: Deviations below this are treated as rounding noise (order undefined).
ROUNDING_LEVEL = 1e-11


def classify(h: list[float], dev: list[float]) -> tuple[float | None, str]:
    """Least-squares slope of log(dev) vs log(h) and the decay/plateau label."""
    if max(dev) < ROUNDING_LEVEL:
        return None, "rounding"
    order = float(np.polyfit(np.log(h), np.log(np.maximum(dev, 1e-300)), 1)[0])
    if order >= 1.5:
        return order, "decay"
    if order < 0.5 and dev[-1] > 1e-6:
        return order, "plateau"
    return order, "inconclusive"


def convergence_study(family, rectangle: tuple[float, float, float, float], h_list,
                      tol: float = 1e-10, max_iter: int = 50) -> ConvergenceStudy:
    """Solve on each mesh size (warm start) and fit the deviation order."""
    h_list = [float(h) for h in h_list]
    if len(h_list) < 3:
        raise InvalidParameter("convergence study needs at least 3 mesh sizes")
    if any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise InvalidParameter("mesh sizes must be strictly decreasing")
    t0, t1, x0, x1 = rectangle
    devs, iters = [], []
    for h in h_list:
        res = solve_dirichlet(GridProblem(family, t0, t1, x0, x1, h), tol, max_iter, strict=True)
        devs.append(res.max_deviation)
        iters.append(res.iterations)
    order, flag = classify(h_list, devs)
    name = family.describe() if hasattr(family, "describe") else str(family)
    return ConvergenceStudy(name, tuple(rectangle), h_list, devs, iters, order, flag)


def write_study_csv(study: ConvergenceStudy, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("h", "deviation", "order"))
        order = "" if study.order is None else repr(study.order)
        for h, d in study.rows():
            w.writerow((repr(h), repr(d), order))


def write_field_csv(p: GridProblem, U: np.ndarray, path) -> None:
    T, X = p.nodes()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t", "x", "u"))
        for t, x, u in zip(T.ravel(), X.ravel(), U.ravel()):
            w.writerow((repr(float(t)), repr(float(x)), repr(float(u))))
