"""The two-Killing-vector instanton metric built from a minimal graph.

Line element, coordinates ordered (t, y, x, z)::

    ds^2 = a (dt^2 + dy^2) + b (dx^2 + dz^2) + c (dt dx + dy dz)

with a = (1 + u_t^2)/W, b = (1 + u_x^2)/W, c = 2 u_t u_x / W and
W = sqrt(1 + u_t^2 + u_x^2).  The symmetric component array therefore has
g_tx = g_yz = c / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import Jet
from .errors import DomainError
from .surfaces import LogSinh, eval_jet

COORDS = ("t", "y", "x", "z")
T, Y, X, Z = range(4)


@dataclass(frozen=True)
class MetricCoeffs:
    a: float
    b: float
    c: float
    W: float = float("nan")

    @property
    def block_det(self) -> float:
        return self.a * self.b - 0.25 * self.c * self.c


def metric_coeffs(j: Jet) -> MetricCoeffs:
    ut, ux = j.u_t, j.u_x
    W = math.sqrt(1.0 + ut * ut + ux * ux)
    return MetricCoeffs((1.0 + ut * ut) / W, (1.0 + ux * ux) / W, 2.0 * ut * ux / W, W)


def coefficient_jets(j: Jet) -> tuple[Jet, Jet, Jet]:
    """a, b, c as jets one order below the surface jet."""
    p = j.derivative("t")
    q = j.derivative("x")
    W = ad.sqrt(1.0 + p * p + q * q)
    return (1.0 + p * p) / W, (1.0 + q * q) / W, 2.0 * p * q / W


class MetricJet:
    """Symmetric 4x4 metric whose components carry (t, x)-jets of order 2.

    One jet per unordered index pair; y and z are Killing directions, so all
    y/z derivatives vanish.
    """

    def __init__(self, components: dict[tuple[int, int], Jet], point: tuple[float, float] = (float("nan"),) * 2):
        self._c = {}
        for (i, j), v in components.items():
            self._c[(min(i, j), max(i, j))] = v
        self.order = min(v.order for v in self._c.values())
        self.point = point

    def component(self, i: int, j: int) -> Jet:
        key = (min(i, j), max(i, j))
        return self._c.get(key) or Jet.constant(0.0, self.order)

    def matrix(self) -> np.ndarray:
        g = np.zeros((4, 4))
        for (i, j), v in self._c.items():
            g[i, j] = g[j, i] = v.u
        return g

    def derivative_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """g[i,j], dg[a,i,j] = d_a g_ij and ddg[a,b,i,j] over the 4 coordinates."""
        g = self.matrix()
        dg = np.zeros((4, 4, 4))
        ddg = np.zeros((4, 4, 4, 4))
        # coordinate index -> (t-power, x-power) for a single derivative
        unit = {T: (1, 0), X: (0, 1)}
        for (i, j), v in self._c.items():
            for a, (pa, qa) in unit.items():
                dg[a, i, j] = dg[a, j, i] = v.partial(pa, qa)
                for b, (pb, qb) in unit.items():
                    ddg[a, b, i, j] = ddg[a, b, j, i] = v.partial(pa + pb, qa + qb)
        return g, dg, ddg

    def det(self) -> float:
        return float(np.linalg.det(self.matrix()))

    def leading_minors(self) -> list[float]:
        g = self.matrix()
        return [float(np.linalg.det(g[:k, :k])) for k in range(1, 5)]

    def is_positive_definite(self) -> bool:
        return all(m > 0.0 for m in self.leading_minors())


def metric_from_jet(j: Jet, point=(float("nan"),) * 2) -> MetricJet:
    a, b, c = coefficient_jets(j)
    half_c = 0.5 * c
    return MetricJet(
        {(T, T): a, (Y, Y): a, (X, X): b, (Z, Z): b, (T, X): half_c, (Y, Z): half_c},
        point,
    )


def assemble_metric(family, point: tuple[float, float], margin: float = 0.0) -> MetricJet:
    return metric_from_jet(eval_jet(family, point, margin), point)


def paper_coeffs(t: float, x: float, k: float) -> MetricCoeffs:
    """The log-sinh metric coefficients transcribed literally from their printed closed forms.

    Evaluated as written, including a factor ((t^2+x^2)^(1/2) + x)^2 that
    appears in both the numerator and the denominator of one summand, and
    the grouping of the cross-term factors as printed.  No simplification.
    """
    if not t > 0.0:
        raise DomainError(f"printed coefficients need t > 0, got {t}")
    s = math.sqrt(t * t + x * x)
    sx = s + x

    def div(num, den):
        if den == 0.0:
            raise DomainError("division by zero in printed coefficient denominator")
        return num / den

    term_t = div(k * k * x * x * sx**2, t * t * (t * t + x * x) * sx**2)
    term_x = div(k * k * sx**2, (x * s + t * t) ** 2)
    bracket = 1.0 + term_t + term_x
    inv_root = bracket**-0.5
    a = (1.0 + term_t) * inv_root
    b = (1.0 + term_x) * inv_root
    c = (-2.0 * k * k * (x * s + x * x) * sx
         * div(1.0, t * x * s + t**3 + t * x * x)
         * div(1.0, x * s + t * t)
         * inv_root)
    return MetricCoeffs(a, b, c, math.sqrt(bracket))


@dataclass(frozen=True)
class CoeffComparison:
    point: tuple[float, float]
    k: float
    computed: MetricCoeffs
    printed: MetricCoeffs

    @property
    def abs_diffs(self) -> tuple[float, float, float]:
        return (abs(self.computed.a - self.printed.a),
                abs(self.computed.b - self.printed.b),
                abs(self.computed.c - self.printed.c))

    @property
    def max_diff(self) -> float:
        return max(self.abs_diffs)


def coeff_compare(point: tuple[float, float], k: float) -> CoeffComparison:
    """Jet-computed log-sinh coefficients against the printed closed forms."""
    t, x = point
    computed = metric_coeffs(eval_jet(LogSinh(k), point, order=1))
    return CoeffComparison((t, x), k, computed, paper_coeffs(t, x, k))
