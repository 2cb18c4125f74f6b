"""Christoffel symbols and curvature of a :class:`~minsurf.metric.MetricJet`.

Conventions::

    Gamma^l_{mn} = 1/2 g^{lk} (d_m g_{kn} + d_n g_{km} - d_k g_{mn})
    R^r_{smn}    = d_m Gamma^r_{ns} - d_n Gamma^r_{ms}
                   + Gamma^r_{ml} Gamma^l_{ns} - Gamma^r_{nl} Gamma^l_{ms}
    R_{mn}       = R^l_{mln}

Arrays are indexed over (t, y, x, z).  Metric derivatives come from the
exact component jets; no finite differences are involved.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain, SingularMetric
from .metric import MetricJet, assemble_metric
from .pde import minimal_residual
from .surfaces import DomainSpec, eval_jet

#: det g below this signals breakdown (the exact determinant is 1).
SINGULAR_DET_EPS = 1e-10


def christoffel(m: MetricJet, det_eps: float = SINGULAR_DET_EPS) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(gamma, dgamma)`` with gamma[l, m, n] and dgamma[a, l, m, n] = d_a gamma[l, m, n]."""
    g, dg, ddg = m.derivative_arrays()
    det = np.linalg.det(g)
    if not det > det_eps:
        raise SingularMetric(f"metric determinant {det!r} below {det_eps}")
    ginv = np.linalg.inv(g)
    dginv = -np.einsum("ij,ajk,kl->ail", ginv, dg, ginv)

    # first kind: G[k, m, n] = 1/2 (d_m g_kn + d_n g_km - d_k g_mn)
    first = 0.5 * (np.einsum("mkn->kmn", dg) + np.einsum("nkm->kmn", dg) - dg)
    dfirst = 0.5 * (np.einsum("amkn->akmn", ddg) + np.einsum("ankm->akmn", ddg) - ddg)

    gamma = np.einsum("lk,kmn->lmn", ginv, first)
    dgamma = np.einsum("alk,kmn->almn", dginv, first) + np.einsum("lk,akmn->almn", ginv, dfirst)
    return gamma, dgamma


def riemann(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """R[r, s, m, n] = R^r_{smn}."""
    term = np.einsum("mrns->rsmn", dgamma)
    quad = np.einsum("rml,lns->rsmn", gamma, gamma)
    return term - term.transpose(0, 1, 3, 2) + quad - quad.transpose(0, 1, 3, 2)


def ricci(R: np.ndarray, ginv: np.ndarray) -> tuple[np.ndarray, float]:
    ric = np.einsum("lmln->mn", R)
    return ric, float(np.einsum("mn,mn->", ginv, ric))


def kretschmann(R: np.ndarray, g: np.ndarray) -> float:
    ginv = np.linalg.inv(g)
    lower = np.einsum("ra,asmn->rsmn", g, R)
    upper = np.einsum("sb,mc,nd,abcd->asmn", ginv, ginv, ginv, R)
    return float(np.einsum("abcd,abcd->", lower, upper))


@dataclass
class CurvatureBundle:
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    kretschmann: float
    metric: np.ndarray

    @property
    def riemann_lower(self) -> np.ndarray:
        return np.einsum("ra,asmn->rsmn", self.metric, self.riemann)

    @property
    def ricci_inf(self) -> float:
        return float(np.max(np.abs(self.ricci)))

    def bianchi_error(self) -> float:
        R = self.riemann
        cyc = R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2)
        return float(np.max(np.abs(cyc)))

    def antisymmetry_error(self) -> float:
        L = self.riemann_lower
        return float(max(np.max(np.abs(L + L.transpose(1, 0, 2, 3))),
                         np.max(np.abs(L + L.transpose(0, 1, 3, 2)))))

    def pair_symmetry_error(self) -> float:
        L = self.riemann_lower
        return float(np.max(np.abs(L - L.transpose(2, 3, 0, 1))))

    def ricci_symmetry_error(self) -> float:
        return float(np.max(np.abs(self.ricci - self.ricci.T)))


def curvature_bundle(m: MetricJet, det_eps: float = SINGULAR_DET_EPS) -> CurvatureBundle:
    gamma, dgamma = christoffel(m, det_eps)
    R = riemann(gamma, dgamma)
    g = m.matrix()
    ric, scalar = ricci(R, np.linalg.inv(g))
    return CurvatureBundle(gamma, R, ric, scalar, kretschmann(R, g), g)


@dataclass(frozen=True)
class ScanRow:
    t: float
    x: float
    ricci_inf: float
    minimal_residual: float
    kretschmann: float
    det_g: float
    ok: bool = True

    CSV_HEADER = ("t", "x", "ricci_inf", "minimal_residual", "kretschmann", "det_g")

    def csv_fields(self) -> list[str]:
        return [repr(float(v)) for v in (self.t, self.x, self.ricci_inf, self.minimal_residual,
                                         self.kretschmann, self.det_g)]


def ricci_flat_scan(family, domain: DomainSpec, nt: int, nx: int) -> list[ScanRow]:
    """Ricci sup-norm and minimal-surface residual at every grid point.

    Points outside the family's domain (or where the metric degenerates) are
    returned with ``ok=False`` and NaN diagnostics.
    """
    rows = []
    for t, x in domain.grid(nt, nx):
        try:
            j = eval_jet(family, (t, x))
            m = assemble_metric(family, (t, x))
            b = curvature_bundle(m)
        except (OutOfDomain, SingularMetric):
            nan = float("nan")
            rows.append(ScanRow(t, x, nan, nan, nan, nan, ok=False))
            continue
        rows.append(ScanRow(t, x, b.ricci_inf, minimal_residual(j), b.kretschmann, m.det()))
    return rows


def write_scan_csv(rows: list[ScanRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ScanRow.CSV_HEADER)
        for r in rows:
            w.writerow(r.csv_fields())
