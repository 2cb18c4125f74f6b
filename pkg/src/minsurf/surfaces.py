"""Closed-form candidate solutions of the minimal surface equation.

Every family exposes ``field(t, x)``, which works on floats and on
:class:`~minsurf.autodiff.Jet` arguments alike; :func:`eval_jet` wraps it
with the domain checks.  Coordinates are always (t, x) with the singular
line at t = 0 (t = T for time-shifted families).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence, Union

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import autodiff as ad
from .autodiff import Jet
from .errors import InvalidParameter, OutOfDomain


@dataclass(frozen=True)
class DomainSpec:
    """Rectangle of evaluation points, t_min > 0."""

    t_min: float
    t_max: float
    x_min: float
    x_max: float

    def __post_init__(self):
        if not self.t_min > 0.0:
            raise InvalidParameter(f"t_min must be > 0, got {self.t_min}")
        if self.t_max < self.t_min or self.x_max < self.x_min:
            raise InvalidParameter("empty interval in DomainSpec")

    def grid(self, nt: int, nx: int) -> list[tuple[float, float]]:
        ts = np.linspace(self.t_min, self.t_max, nt)
        xs = np.linspace(self.x_min, self.x_max, nx)
        return [(float(t), float(x)) for t in ts for x in xs]


class _Family:
    name = "family"

    def field(self, t, x):
        raise NotImplementedError

    def singular_distance(self, t: float) -> float:
        """Distance in t from the singular line."""
        return t

    def check_point(self, t: float, x: float, margin: float = 0.0) -> None:
        if not (math.isfinite(t) and math.isfinite(x)):
            raise OutOfDomain(f"non-finite point ({t}, {x})")
        if t <= margin:
            raise OutOfDomain(f"t = {t} is not > {margin} (singular line t = 0)")

    def params(self) -> dict:
        return {}

    def describe(self) -> str:
        p = ", ".join(f"{k}={v:g}" for k, v in self.params().items())
        return f"{self.name}({p})"


@dataclass(frozen=True)
class Zero(_Family):
    name = "zero"

    def field(self, t, x):
        return 0.0 * t


@dataclass(frozen=True)
class Linear(_Family):
    alpha: float
    beta: float
    name = "linear"

    def field(self, t, x):
        return self.alpha * t + self.beta * x

    def params(self):
        return {"alpha": self.alpha, "beta": self.beta}


def _check_k(k: float) -> None:
    if k == 0.0 or not math.isfinite(k):
        raise InvalidParameter(f"k must be a nonzero real, got {k}")


@dataclass(frozen=True)
class NutkuArctan(_Family):
    """u = k arctan(x / t)."""

    k: float
    name = "arctan"

    def __post_init__(self):
        _check_k(self.k)

    def field(self, t, x):
        return self.k * ad.atan(x / t)

    def params(self):
        return {"k": self.k}


@dataclass(frozen=True)
class LogSinh(_Family):
    """u = k ln|x/t + sqrt(1 + x^2/t^2)|, evaluated as k asinh(x / t)."""

    k: float
    name = "logsinh"

    def __post_init__(self):
        _check_k(self.k)

    def field(self, t, x):
        return self.k * ad.asinh(x / t)

    def printed_form(self, t: float, x: float) -> float:
        r = x / t
        return self.k * math.log(abs(r + math.sqrt(1.0 + r * r)))

    def params(self):
        return {"k": self.k}


@dataclass(frozen=True)
class TimeShifted(_Family):
    """u(t, x) = inner(T - t, x); singular line at t = T."""

    inner: _Family
    T: float
    name = "shifted"

    def __post_init__(self):
        if not (self.T > 0.0 and math.isfinite(self.T)):
            raise InvalidParameter(f"T must be > 0, got {self.T}")
        if isinstance(self.inner, TimeShifted):
            raise InvalidParameter("family is already time-shifted")

    def field(self, t, x):
        return self.inner.field(self.T - t, x)

    def singular_distance(self, t: float) -> float:
        return self.T - t

    def check_point(self, t, x, margin=0.0):
        if not (math.isfinite(t) and math.isfinite(x)):
            raise OutOfDomain(f"non-finite point ({t}, {x})")
        if t <= 0.0:
            raise OutOfDomain(f"t = {t} is not > 0")
        if self.T - t <= margin:
            raise OutOfDomain(f"T - t = {self.T - t} is not > {margin} (singular line t = T)")
        self.inner.check_point(self.T - t, x, margin)

    def params(self):
        return {**self.inner.params(), "T": self.T}

    def describe(self):
        return f"shifted({self.inner.describe()}, T={self.T:g})"


@dataclass(frozen=True, eq=False)
class ProfileTable:
    """Sampled similarity profile v(rho) with v' and v'' at each node.

    ``v`` is interpolated by cubic Hermite data (v, v') and ``v'`` by cubic
    Hermite data (v', v''), which gives the profile and its first three
    derivatives anywhere inside the sampled range.
    """

    rho: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    d2v: np.ndarray
    ode: str = "paper"
    error_estimate: float = float("nan")
    _splines: tuple = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.rho) < 2 or np.any(np.diff(self.rho) <= 0):
            raise InvalidParameter("profile nodes must be strictly increasing")
        sv = CubicHermiteSpline(self.rho, self.v, self.dv)
        sw = CubicHermiteSpline(self.rho, self.dv, self.d2v)
        object.__setattr__(self, "_splines", (sv, sw, sw.derivative(1), sw.derivative(2)))

    @property
    def rho_range(self) -> tuple[float, float]:
        return float(self.rho[0]), float(self.rho[-1])

    def derivatives(self, rho: float) -> list[float]:
        """[v, v', v'', v'''] at rho."""
        lo, hi = self.rho_range
        if not lo <= rho <= hi:
            raise OutOfDomain(f"rho = {rho} outside sampled profile range [{lo}, {hi}]")
        sv, sw, dsw, d2sw = self._splines
        return [float(sv(rho)), float(sw(rho)), float(dsw(rho)), float(d2sw(rho))]

    def __call__(self, rho):
        if isinstance(rho, Jet):
            return ad.compose(rho, self.derivatives(rho.u)[: rho.order + 1])
        return self.derivatives(float(rho))[0]

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("rho,v\n")
            for r, v in zip(self.rho, self.v):
                fh.write(f"{float(r)!r},{float(v)!r}\n")


@dataclass(frozen=True)
class OdeProfile(_Family):
    """u(t, x) = v(x / t) for a numerically integrated profile v."""

    table: ProfileTable
    name = "ode"

    def field(self, t, x):
        return self.table(x / t)

    def check_point(self, t, x, margin=0.0):
        super().check_point(t, x, margin)
        lo, hi = self.table.rho_range
        if not lo <= x / t <= hi:
            raise OutOfDomain(f"x/t = {x / t} outside profile range [{lo}, {hi}]")

    def params(self):
        return {"ode": self.table.ode}

    def describe(self):
        lo, hi = self.table.rho_range
        return f"ode({self.table.ode}, rho in [{lo:g}, {hi:g}])"


SurfaceFamily = Union[Zero, Linear, NutkuArctan, LogSinh, TimeShifted, OdeProfile]


def eval_jet(family: SurfaceFamily, point: tuple[float, float], margin: float = 0.0, order: int = 3) -> Jet:
    """Value and all (t, x) partials through ``order`` of the family at ``point``."""
    t, x = point
    family.check_point(t, x, margin)
    tj, xj = ad.jet_point(t, x, order)
    out = family.field(tj, xj)
    if not isinstance(out, Jet):
        out = Jet.constant(float(out), order)
    return out


def eval_value(family: SurfaceFamily, point: tuple[float, float]) -> float:
    t, x = point
    family.check_point(t, x)
    return float(family.field(t, x))


def time_shift(family: SurfaceFamily, T: float) -> TimeShifted:
    return TimeShifted(family, T)


@dataclass(frozen=True)
class TracePoint:
    t: float
    u_x: float
    scaled: float  # distance to the singular line times u_x


def singular_trace(family: SurfaceFamily, t_values: Sequence[float]) -> list[TracePoint]:
    """u_x along x = 0, with (distance to singular line) * u_x alongside.

    For the arctan and log-sinh families the scaled column should equal k.
    """
    out = []
    for t in t_values:
        j = eval_jet(family, (float(t), 0.0), order=1)
        d = family.singular_distance(float(t))
        out.append(TracePoint(float(t), j.u_x, d * j.u_x))
    return out


def family_from_params(name: str, k: float | None = None, T: float | None = None,
                       alpha: float = 0.0, beta: float = 0.0) -> SurfaceFamily:
    """Build a family from a config-style descriptor (``"logsinh"``, k=1, T=None)."""
    name = name.strip().lower()
    if name == "zero":
        fam = Zero()
    elif name == "linear":
        fam = Linear(float(alpha), float(beta))
    elif name in ("arctan", "nutku"):
        fam = NutkuArctan(float(1.0 if k is None else k))
    elif name == "logsinh":
        fam = LogSinh(float(1.0 if k is None else k))
    else:
        raise InvalidParameter(f"unknown family {name!r}")
    if T is not None:
        fam = time_shift(fam, float(T))
    return fam
