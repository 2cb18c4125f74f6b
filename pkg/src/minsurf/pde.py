"""Pointwise residuals of the minimal and maximal surface equations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import autodiff as ad
from .autodiff import Jet
from .surfaces import _Family, eval_jet

#: Normalized-residual threshold for "satisfies the PDE at this point".
VERDICT_TOL = 1e-9


def gradient_norm_W(j: Jet) -> float:
    return math.sqrt(1.0 + j.u_t**2 + j.u_x**2)


def minimal_residual(j: Jet) -> float:
    """u_tt (1 + u_x^2) - 2 u_t u_x u_tx + u_xx (1 + u_t^2)."""
    ut, ux = j.u_t, j.u_x
    return j.u_tt * (1.0 + ux * ux) - 2.0 * ut * ux * j.u_tx + j.u_xx * (1.0 + ut * ut)


def divergence_residual(j: Jet) -> float:
    """d/dt(u_t / W) + d/dx(u_x / W), expanded analytically (= Q / W^3)."""
    return minimal_residual(j) / gradient_norm_W(j) ** 3


def divergence_residual_nested(j: Jet) -> float:
    """Divergence form evaluated by differentiating the flux jets u_t/W, u_x/W.

    Independent of the expanded identity: the gradient components are lifted
    to order-(n-1) jets, the flux is formed by jet arithmetic and its
    divergence read off the first-order slots.
    """
    p = j.derivative("t")
    q = j.derivative("x")
    W = ad.sqrt(1.0 + p * p + q * q)
    return (p / W).u_t + (q / W).u_x


def maximal_residual(j: Jet) -> float:
    """u_tt (1 - u_x^2) + 2 u_t u_x u_tx + u_xx (1 - u_t^2)."""
    ut, ux = j.u_t, j.u_x
    return j.u_tt * (1.0 - ux * ux) + 2.0 * ut * ux * j.u_tx + j.u_xx * (1.0 - ut * ut)


def spacelike_indicator(j: Jet) -> float:
    """1 - u_t^2 - u_x^2; positive where the maximal-surface equation applies."""
    return 1.0 - j.u_t**2 - j.u_x**2


def hessian_scale(j: Jet) -> float:
    return 1.0 + abs(j.u_tt) + abs(j.u_tx) + abs(j.u_xx)


def normalized(residual: float, j: Jet) -> float:
    return residual / hessian_scale(j)


@dataclass(frozen=True)
class ResidualSample:
    point: tuple[float, float]
    r_minimal: float
    r_divergence: float
    r_maximal: float
    gradient_norm_W: float
    spacelike: float
    scale: float

    @property
    def normalized_minimal(self) -> float:
        return self.r_minimal / self.scale

    @property
    def normalized_maximal(self) -> float:
        return self.r_maximal / self.scale

    def satisfies_minimal(self, tol: float = VERDICT_TOL) -> bool:
        return abs(self.normalized_minimal) < tol

    def satisfies_maximal(self, tol: float = VERDICT_TOL) -> bool:
        return abs(self.normalized_maximal) < tol


def residual_sample(family, point: tuple[float, float], margin: float = 0.0) -> ResidualSample:
    j = eval_jet(family, point, margin)
    return ResidualSample(
        point=(float(point[0]), float(point[1])),
        r_minimal=minimal_residual(j),
        r_divergence=divergence_residual(j),
        r_maximal=maximal_residual(j),
        gradient_norm_W=gradient_norm_W(j),
        spacelike=spacelike_indicator(j),
        scale=hessian_scale(j),
    )


def scaling_residual_identity(f: Callable | _Family, lam: float, point: tuple[float, float]) -> tuple[float, float]:
    """Both sides of Q[u_lam](p) = lam * Q[u](lam p), u_lam(p) = u(lam p) / lam.

    ``f`` is a family or any scalar field ``f(t, x)`` accepting jets.  The
    identity holds for every smooth field, solution or not.
    """
    if lam <= 0.0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    t, x = point
    if isinstance(f, _Family):
        f.check_point(t, x)
        f.check_point(lam * t, lam * x)
        field = f.field
    else:
        field = f
    tj, xj = ad.jet_point(t, x)
    scaled = field(lam * tj, lam * xj) / lam
    lhs = minimal_residual(_as_jet(scaled))
    tj2, xj2 = ad.jet_point(lam * t, lam * x)
    rhs = lam * minimal_residual(_as_jet(field(tj2, xj2)))
    return lhs, rhs


def _as_jet(value) -> Jet:
    return value if isinstance(value, Jet) else Jet.constant(float(value))
