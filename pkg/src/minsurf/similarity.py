"""Similarity coordinates tau = -log t, rho = x / t and the reduced equations.

Bivariate jets in (tau, rho) reuse :class:`~minsurf.autodiff.Jet` with the
``t`` slots standing for tau and the ``x`` slots for rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import autodiff as ad
from .autodiff import Jet
from .errors import InvalidParameter, OutOfDomain
from .pde import minimal_residual
from .surfaces import ProfileTable


@dataclass(frozen=True)
class SimilarityPoint:
    tau: float
    rho: float


def to_similarity(point: tuple[float, float]) -> SimilarityPoint:
    t, x = point
    if not t > 0.0:
        raise OutOfDomain(f"similarity coordinates need t > 0, got t = {t}")
    return SimilarityPoint(-math.log(t), x / t)


def from_similarity(sp: SimilarityPoint) -> tuple[float, float]:
    t = math.exp(-sp.tau)
    return t, sp.rho * t


@dataclass(frozen=True)
class ProfileJet:
    """Derivatives of a tau-independent profile v(rho)."""

    v: float
    v_r: float
    v_rr: float
    v_rrr: float = 0.0

    @classmethod
    def of(cls, fn: Callable, rho: float) -> ProfileJet:
        """Exact derivatives of ``fn`` (written with minsurf.autodiff functions) at rho."""
        j = fn(ad.jet_variable("x", rho))
        return cls(j.u, j.u_x, j.u_xx, j.u_xxx)

    def as_jet(self) -> Jet:
        """Bivariate (tau, rho) jet with all tau-derivatives zero."""
        return Jet.from_partials([self.v, 0.0, self.v_r, 0.0, 0.0, self.v_rr, 0.0, 0.0, 0.0, self.v_rrr])


def _reduced_parts(vj: Jet, tau: float, rho: float) -> tuple[float, float]:
    vt, vr = vj.u_t, vj.u_x
    vtt, vtr, vrr = vj.u_tt, vj.u_tx, vj.u_xx
    linear = vtt + (1.0 + rho * rho) * vrr + vt + 2.0 * rho * vr + 2.0 * rho * vtr
    g = vt + rho * vr
    nonlinear = (
        vr * vr * (vtt + vt + 2.0 * rho * vr + 2.0 * rho * vtr + rho * rho * vrr)
        + g * g * vrr
        - 2.0 * vr * g * (vr + rho * vrr + vtr)
    )
    return linear, nonlinear


def reduced_residual(vj: Jet, tau: float, rho: float) -> float:
    """Left-hand side of the reduced quasilinear equation in (tau, rho).

    ``vj`` holds v and its (tau, rho) partials at the point; tau enters
    through the e^(2 tau) factor of the nonlinear terms.
    """
    linear, nonlinear = _reduced_parts(vj, tau, rho)
    return linear + math.exp(2.0 * tau) * nonlinear


def reduced_residual_scale(vj: Jet, tau: float, rho: float) -> float:
    """Magnitude of the largest term in the reduced residual (for relative checks)."""
    vt, vr = vj.u_t, vj.u_x
    vtt, vtr, vrr = vj.u_tt, vj.u_tx, vj.u_xx
    g = abs(vt) + abs(rho * vr)
    lin = abs(vtt) + (1.0 + rho * rho) * abs(vrr) + abs(vt) + 2.0 * abs(rho * vr) + 2.0 * abs(rho * vtr)
    nl = (vr * vr * (abs(vtt) + abs(vt) + 2.0 * abs(rho * vr) + 2.0 * abs(rho * vtr) + rho * rho * abs(vrr))
          + g * g * abs(vrr) + 2.0 * abs(vr) * g * (abs(vr) + abs(rho * vrr) + abs(vtr)))
    return lin + math.exp(2.0 * tau) * nl


@dataclass(frozen=True)
class ReductionCheck:
    r_original: float
    r_reduced_scaled: float
    deviation: float


def reduction_consistency(v: Callable, point: tuple[float, float]) -> ReductionCheck:
    """Compare Q[u] for u(t, x) = v(-log t, x/t) with e^(2 tau) times the reduced residual.

    ``v(tau, rho)`` must accept jets.  The u-jet is built by composing v with
    the coordinate jets, so the chain rule comes from jet arithmetic.  The
    deviation is relative to max(1, largest term of the reduced residual).
    """
    t, x = point
    sp = to_similarity(point)
    tj, xj = ad.jet_point(t, x)
    u = v(-ad.log(tj), xj / tj)
    r_original = minimal_residual(u)

    vj = v(ad.jet_variable("t", sp.tau), ad.jet_variable("x", sp.rho))
    factor = math.exp(2.0 * sp.tau)
    r_reduced = factor * reduced_residual(vj, sp.tau, sp.rho)
    scale = max(1.0, factor * reduced_residual_scale(vj, sp.tau, sp.rho))
    return ReductionCheck(r_original, r_reduced, abs(r_original - r_reduced) / scale)


def printed_chain_rule(vj: Jet, tau: float, rho: float) -> dict[str, float]:
    """u-derivatives from the similarity-variable formulas exactly as printed."""
    vt, vr = vj.u_t, vj.u_x
    vtt, vtr, vrr = vj.u_tt, vj.u_tx, vj.u_xx
    e1, e2 = math.exp(tau), math.exp(2.0 * tau)
    return {
        "u_t": e1 * (vt + rho * vr),
        "u_tt": e2 * (vtt + vt + 2.0 * rho * vr + 2.0 * rho * vtr + rho * rho * vrr),
        "u_x": e1 * vr,
        "u_xx": e2 * vrr,
        "u_tx": e2 * (vtr + vr + rho * vrr),
    }


def chain_rule_comparison(v: Callable, point: tuple[float, float]) -> dict[str, tuple[float, float]]:
    """{name: (printed, jet-composed)} for the five first/second u-derivatives."""
    t, x = point
    sp = to_similarity(point)
    vj = v(ad.jet_variable("t", sp.tau), ad.jet_variable("x", sp.rho))
    printed = printed_chain_rule(vj, sp.tau, sp.rho)
    tj, xj = ad.jet_point(t, x)
    u = v(-ad.log(tj), xj / tj)
    return {name: (printed[name], getattr(u, name)) for name in printed}


# profile ODEs ---------------------------------------------------------------

_ODE_COEFF = {"paper": 2.0, "alt": 1.0}


def profile_ode_residual(p: ProfileJet, rho: float) -> tuple[float, float]:
    """((1+rho^2) v'' + 2 rho v', (1+rho^2) v'' + rho v')."""
    base = (1.0 + rho * rho) * p.v_rr
    return base + 2.0 * rho * p.v_r, base + rho * p.v_r


def _rhs(ode: str):
    c = _ODE_COEFF[ode]

    def f(rho, y):
        # y = (v, v')
        return np.array([y[1], -c * rho * y[1] / (1.0 + rho * rho)])

    return f


def _rk4_leg(f, y0: np.ndarray, end: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    h = end / n
    rho = np.linspace(0.0, end, n + 1)
    ys = np.empty((n + 1, 2))
    ys[0] = y0
    y = y0.copy()
    for i in range(n):
        r = rho[i]
        k1 = f(r, y)
        k2 = f(r + h / 2, y + h / 2 * k1)
        k3 = f(r + h / 2, y + h / 2 * k2)
        k4 = f(r + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    return rho, ys


def _integrate(ode: str, C: float, D: float, lo: float, hi: float, n_lo: int, n_hi: int):
    f = _rhs(ode)
    y0 = np.array([D, C], dtype=float)
    parts_r, parts_y = [], []
    if n_lo:
        r, y = _rk4_leg(f, y0, lo, n_lo)
        parts_r.append(r[:0:-1])
        parts_y.append(y[:0:-1])
    parts_r.append(np.array([0.0]))
    parts_y.append(y0[None, :])
    if n_hi:
        r, y = _rk4_leg(f, y0, hi, n_hi)
        parts_r.append(r[1:])
        parts_y.append(y[1:])
    return np.concatenate(parts_r), np.concatenate(parts_y)


def _half_steps(length: float, step: float) -> int:
    """Number of step pairs covering ``length`` (so the 2*step grid nests)."""
    return math.ceil(abs(length) / (2.0 * step) - 1e-9) if length else 0


def ode_integrate(ode: str = "paper", C: float = 1.0, D: float = 0.0,
                  rho_range: tuple[float, float] = (-10.0, 10.0), step: float = 1e-3) -> ProfileTable:
    """Integrate (1+rho^2) v'' + c rho v' = 0 from v(0) = D, v'(0) = C with classical RK4.

    ``ode`` selects c = 2 ("paper") or c = 1 ("alt").  The range must contain
    rho = 0; each leg uses an even number of steps no longer than ``step``.
    A Richardson estimate (fine vs. doubled step, divided by 15) of the
    error in v is stored on the returned table.
    """
    if ode not in _ODE_COEFF:
        raise InvalidParameter(f"ode must be 'paper' or 'alt', got {ode!r}")
    if not step > 0.0:
        raise InvalidParameter(f"step must be > 0, got {step}")
    lo, hi = float(rho_range[0]), float(rho_range[1])
    if not lo <= 0.0 <= hi or lo == hi:
        raise InvalidParameter(f"rho_range must contain 0 and be non-empty, got {rho_range}")
    m_lo, m_hi = _half_steps(lo, step), _half_steps(hi, step)
    rho, y = _integrate(ode, C, D, lo, hi, 2 * m_lo, 2 * m_hi)
    _, y_coarse = _integrate(ode, C, D, lo, hi, m_lo, m_hi)
    err = float(np.max(np.abs(y[::2, 0] - y_coarse[:, 0]))) / 15.0
    d2v = _rhs(ode)(rho, y.T)[1]
    return ProfileTable(rho=rho, v=y[:, 0].copy(), dv=y[:, 1].copy(), d2v=np.asarray(d2v, dtype=float),
                        ode=ode, error_estimate=err)


def closed_form_profile(ode: str, C: float, D: float) -> Callable:
    """C arctan(rho) + D for ``ode="paper"`` (c = 2), C asinh(rho) + D for ``ode="alt"`` (c = 1)."""
    fn = ad.atan if ode == "paper" else ad.asinh
    return lambda rho: C * fn(rho) + D
