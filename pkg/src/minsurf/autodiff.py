"""Truncated bivariate Taylor jets in the graph variables (t, x).

A :class:`Jet` of order ``n`` carries a scalar field value together with all
partial derivatives in ``t`` and ``x`` up to total order ``n``.  Internally
the coefficients are stored as Taylor coefficients
``c[i, j] = d^(i+j) f / dt^i dx^j / (i! j!)`` so that multiplication is a
plain truncated convolution; the public accessors (``u_t``, ``u_tx`` ...)
return ordinary partial derivatives.

The elementary functions in this module (:func:`sqrt`, :func:`log`,
:func:`atan`, :func:`asinh`, :func:`exp`) accept either floats or jets, so a
scalar field written once as ``f(t, x)`` can be evaluated pointwise or
differentiated exactly.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Sequence

from .errors import DivisionByZeroJet, DomainError

#: Default pole-detection threshold for jet division.
DIVISION_EPS = 1e-12

SLOT_NAMES = ("u", "u_t", "u_x", "u_tt", "u_tx", "u_xx", "u_ttt", "u_ttx", "u_txx", "u_xxx")


@lru_cache(maxsize=None)
def multi_indices(order: int) -> tuple[tuple[int, int], ...]:
    """(t-power, x-power) pairs ordered by total degree, t-heavy first."""
    return tuple((i, d - i) for d in range(order + 1) for i in range(d, -1, -1))


@lru_cache(maxsize=None)
def _slot(order: int) -> dict[tuple[int, int], int]:
    return {mi: k for k, mi in enumerate(multi_indices(order))}


@lru_cache(maxsize=None)
def _product_table(order: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    idx = multi_indices(order)
    slot = _slot(order)
    table = []
    for (i, j) in idx:
        pairs = []
        for a in range(i + 1):
            for b in range(j + 1):
                pairs.append((slot[(a, b)], slot[(i - a, j - b)]))
        table.append(tuple(pairs))
    return tuple(table)


@lru_cache(maxsize=None)
def _factorials(order: int) -> tuple[float, ...]:
    return tuple(float(math.factorial(i) * math.factorial(j)) for i, j in multi_indices(order))


def _size(order: int) -> int:
    return (order + 1) * (order + 2) // 2


class Jet:
    """Immutable truncated Taylor polynomial in (t, x)."""

    __slots__ = ("order", "taylor")
    __array_ufunc__ = None  # numpy scalars defer to the reflected jet operators

    def __init__(self, taylor: Sequence[float], order: int = 3):
        taylor = tuple(float(c) for c in taylor)
        if len(taylor) != _size(order):
            raise ValueError(f"order-{order} jet needs {_size(order)} coefficients, got {len(taylor)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "taylor", taylor)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def from_partials(cls, partials: Sequence[float], order: int | None = None) -> Jet:
        """Build a jet from partial derivatives listed in slot order."""
        if order is None:
            n = len(partials)
            order = next(o for o in range(12) if _size(o) == n)
        fac = _factorials(order)
        return cls([p / f for p, f in zip(partials, fac)], order)

    @classmethod
    def constant(cls, value: float, order: int = 3) -> Jet:
        return cls([value] + [0.0] * (_size(order) - 1), order)

    # access -------------------------------------------------------------
    def partial(self, i: int, j: int) -> float:
        """d^(i+j)/dt^i dx^j at the base point (0 beyond the jet order)."""
        if i + j > self.order:
            return 0.0
        return self.taylor[_slot(self.order)[(i, j)]] * math.factorial(i) * math.factorial(j)

    def partials(self) -> tuple[float, ...]:
        return tuple(c * f for c, f in zip(self.taylor, _factorials(self.order)))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(SLOT_NAMES, self.partials()))

    u = property(lambda self: self.taylor[0])
    u_t = property(lambda self: self.partial(1, 0))
    u_x = property(lambda self: self.partial(0, 1))
    u_tt = property(lambda self: self.partial(2, 0))
    u_tx = property(lambda self: self.partial(1, 1))
    u_xx = property(lambda self: self.partial(0, 2))
    u_ttt = property(lambda self: self.partial(3, 0))
    u_ttx = property(lambda self: self.partial(2, 1))
    u_txx = property(lambda self: self.partial(1, 2))
    u_xxx = property(lambda self: self.partial(0, 3))

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in self.taylor)

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        return Jet(self.taylor[: _size(order)], order)

    def derivative(self, var: str) -> Jet:
        """Jet of d/dt or d/dx of this field, one order lower."""
        if self.order == 0:
            raise ValueError("order-0 jet has no derivative information")
        slot = _slot(self.order)
        out = []
        for i, j in multi_indices(self.order - 1):
            if var == "t":
                out.append((i + 1) * self.taylor[slot[(i + 1, j)]])
            elif var == "x":
                out.append((j + 1) * self.taylor[slot[(i, j + 1)]])
            else:
                raise ValueError(f"unknown variable {var!r}")
        return Jet(out, self.order - 1)

    # arithmetic ---------------------------------------------------------
    def _common(self, other: Jet) -> tuple[Jet, Jet]:
        if other.order == self.order:
            return self, other
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n)

    def __add__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return Jet((self.taylor[0] + other,) + self.taylor[1:], self.order)
        a, b = self._common(other)
        return Jet([p + q for p, q in zip(a.taylor, b.taylor)], a.order)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return Jet([-c for c in self.taylor], self.order)

    def __pos__(self) -> Jet:
        return self

    def __sub__(self, other) -> Jet:
        return self + (-other)

    def __rsub__(self, other) -> Jet:
        return (-self) + other

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            s = float(other)
            return Jet([s * c for c in self.taylor], self.order)
        a, b = self._common(other)
        ca, cb = a.taylor, b.taylor
        out = [sum(ca[p] * cb[q] for p, q in pairs) for pairs in _product_table(a.order)]
        return Jet(out, a.order)

    __rmul__ = __mul__

    def reciprocal(self, eps: float = DIVISION_EPS) -> Jet:
        a0 = self.taylor[0]
        if abs(a0) < eps:
            raise DivisionByZeroJet(f"jet division by base value {a0!r} (|.| < {eps})")
        derivs = [1.0 / a0]
        for n in range(1, self.order + 1):
            derivs.append(-n * derivs[-1] / a0)
        return compose(self, derivs)

    def __truediv__(self, other) -> Jet:
        if not isinstance(other, Jet):
            if abs(other) < DIVISION_EPS:
                raise DivisionByZeroJet(f"jet division by scalar {other!r}")
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> Jet:
        return self.reciprocal() * float(other)

    def __pow__(self, n: int) -> Jet:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Jet.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v:.6g}" for k, v in zip(SLOT_NAMES, self.partials()))
        return f"Jet(order={self.order}, {body})"


def compose(a: Jet, derivs: Sequence[float]) -> Jet:
    """Jet of g(a) given g and its derivatives at a.u (``derivs[n] = g^(n)(a.u)``).

    Uses the nilpotent expansion g(a0 + h) = sum_n g^(n)(a0) h^n / n!.
    """
    n = a.order
    h = Jet((0.0,) + a.taylor[1:], n)
    out = [0.0] * _size(n)
    out[0] = derivs[0]
    power = Jet.constant(1.0, n)
    for k in range(1, n + 1):
        power = power * h
        scale = derivs[k] / math.factorial(k)
        for s, c in enumerate(power.taylor):
            out[s] += scale * c
    return Jet(out, n)


def jet_variable(role: str, value: float, order: int = 3) -> Jet:
    """Jet of the coordinate function ``t`` or ``x`` at ``value``."""
    if not math.isfinite(value):
        raise ValueError(f"coordinate value must be finite, got {value!r}")
    coeffs = [0.0] * _size(order)
    coeffs[0] = value
    if role == "t":
        coeffs[1] = 1.0
    elif role == "x":
        coeffs[2] = 1.0
    else:
        raise ValueError(f"role must be 't' or 'x', got {role!r}")
    return Jet(coeffs, order)


def jet_point(t: float, x: float, order: int = 3) -> tuple[Jet, Jet]:
    return jet_variable("t", t, order), jet_variable("x", x, order)


def jet_arith(op: str, a: Jet, b: Jet, eps: float = DIVISION_EPS) -> Jet:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a * b.reciprocal(eps)
    raise ValueError(f"unknown jet operation {op!r}")


# elementary functions ----------------------------------------------------

def _sqrt_derivs(a0: float, n: int) -> list[float]:
    if a0 <= 0.0:
        raise DomainError(f"sqrt of non-positive base value {a0!r}")
    s = math.sqrt(a0)
    out = [s]
    coef = 1.0
    for k in range(1, n + 1):
        coef *= 0.5 - (k - 1)
        out.append(coef * s / a0**k)
    return out


def _log_derivs(a0: float, n: int) -> list[float]:
    if a0 <= 0.0:
        raise DomainError(f"log of non-positive base value {a0!r}")
    out = [math.log(a0)]
    for k in range(1, n + 1):
        out.append((-1) ** (k - 1) * math.factorial(k - 1) / a0**k)
    return out


def _atan_derivs(a0: float, n: int) -> list[float]:
    q = 1.0 + a0 * a0
    d = [math.atan(a0), 1.0 / q, -2.0 * a0 / q**2, (6.0 * a0 * a0 - 2.0) / q**3]
    if n > 3:
        raise ValueError("atan jets implemented through order 3")
    return d[: n + 1]


def _asinh_derivs(a0: float, n: int) -> list[float]:
    q = 1.0 + a0 * a0
    d = [math.asinh(a0), q**-0.5, -a0 * q**-1.5, (2.0 * a0 * a0 - 1.0) * q**-2.5]
    if n > 3:
        raise ValueError("asinh jets implemented through order 3")
    return d[: n + 1]


def _exp_derivs(a0: float, n: int) -> list[float]:
    return [math.exp(a0)] * (n + 1)


def _lift(name: str, scalar: Callable[[float], float], derivs: Callable[[float, int], list[float]]):
    def fn(a):
        if isinstance(a, Jet):
            return compose(a, derivs(a.taylor[0], a.order))
        return derivs(float(a), 0)[0] if name in ("sqrt", "log") else scalar(a)

    fn.__name__ = name
    fn.__doc__ = f"{name} of a float or a jet."
    return fn


sqrt = _lift("sqrt", math.sqrt, _sqrt_derivs)
log = _lift("log", math.log, _log_derivs)
atan = _lift("atan", math.atan, _atan_derivs)
asinh = _lift("asinh", math.asinh, _asinh_derivs)
exp = _lift("exp", math.exp, _exp_derivs)


def square(a):
    return a * a


UNARY = {
    "sqrt": sqrt,
    "ln": log,
    "atan": atan,
    "asinh": asinh,
    "exp": exp,
    "neg": lambda a: -a,
    "square": square,
}


def jet_unary(fn: str, a: Jet) -> Jet:
    try:
        f = UNARY[fn]
    except KeyError:
        raise ValueError(f"unknown unary function {fn!r}") from None
    return f(a)


# finite-difference oracle --------------------------------------------------

# Fourth-order central stencils (offset -> weight) for derivative orders 0..3.
_STENCILS = {
    0: {0: 1.0},
    1: {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12},
    2: {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12},
    3: {-3: 1 / 8, -2: -1.0, -1: 13 / 8, 1: -13 / 8, 2: 1.0, 3: -1 / 8},
}

# Step multiplier by total derivative order; third-order stencils divide by
# step**3, so they need a wider step to keep rounding below 1e-7.
_STEP_SCALE = {1: 1.0, 2: 1.0, 3: 20.0}


def fd_partial(f: Callable[[float, float], float], point: tuple[float, float], i: int, j: int, step: float) -> float:
    """Central-difference estimate of d^(i+j) f / dt^i dx^j (fourth-order accurate)."""
    t0, x0 = point
    total = 0.0
    for p, wp in _STENCILS[i].items():
        for q, wq in _STENCILS[j].items():
            total += wp * wq * f(t0 + p * step, x0 + q * step)
    return total / step ** (i + j)


def fd_crosscheck(f: Callable, point: tuple[float, float], h: float = 1e-4) -> float:
    """Worst relative deviation between jet and finite-difference derivatives.

    ``f`` is a scalar field ``f(t, x)`` accepting floats or jets.  All nine
    derivative slots are compared; deviations are measured relative to
    ``max(1, |jet slot|)``.  First and second order slots use step ``h``,
    third order slots use ``20 h``.
    """
    t0, x0 = point
    tj, xj = jet_point(t0, x0)
    jet = f(tj, xj)
    if not isinstance(jet, Jet):
        jet = Jet.constant(float(jet))
    fval = lambda t, x: float(f(t, x))
    worst = 0.0
    for i, j in multi_indices(3)[1:]:
        step = h * _STEP_SCALE[i + j]
        approx = fd_partial(fval, point, i, j, step)
        exact = jet.partial(i, j)
        worst = max(worst, abs(approx - exact) / max(1.0, abs(exact)))
    return worst
