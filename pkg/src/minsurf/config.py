"""Audit configuration: a flat key-value file with one section per subcommand.

Grammar (``configparser`` syntax, ``;`` or ``#`` comments)::

    [audit]
    families = arctan, logsinh      ; zero | linear | arctan | logsinh
    k = 1.0                         ; parameter of arctan / logsinh
    alpha = 0.0                     ; linear family u = alpha t + beta x
    beta = 0.0
    T = none                        ; > 0 wraps every family in a time shift
    t_min = 0.5
    t_max = 2.0
    x_min = -2.0
    x_max = 2.0
    nt = 21
    nx = 21
    seed = 1729
    sections = all                  ; or a comma list of section names
    verdict_tol = 1e-9              ; normalized residual for "satisfies"
    refute_median = 1e-3            ; median threshold for "refuted"

    [reduce]
    profiles = 100                  ; random polynomial profiles
    degree = 3
    tol = 1e-10

    [ode]
    step = 1e-3
    rho_min = -10
    rho_max = 10
    C = 1.0
    D = 0.0
    check_rho_max = 5               ; profile comparison range [-5, 5]
    tol = 1e-9

    [solve]
    rect = 0.5, 2.0, -1.0, 1.0      ; t0, t1, x0, x1
    h_list = 1/16, 1/32, 1/64
    tol = 1e-10
    max_iter = 50

    [curvature]
    ricci_tol = 1e-7
    implication_residual = 1e-12

    [singularity]
    t_min = 1e-3
    t_max = 10
    n = 41
    T = 2.0                         ; singular time of the shifted trace
    tol = 1e-12

    [coeffs]
    k = 1.0

Every key is optional; the defaults above apply.
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, InvalidParameter

SECTION_NAMES = ("residuals", "ode", "reduction", "coefficients", "curvature",
                 "convergence", "maximal", "singularity")


@dataclass
class AuditConfig:
    families: list[str] = field(default_factory=lambda: ["arctan", "logsinh"])
    k: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    T: float | None = None
    t_min: float = 0.5
    t_max: float = 2.0
    x_min: float = -2.0
    x_max: float = 2.0
    nt: int = 21
    nx: int = 21
    seed: int = 1729
    sections: list[str] = field(default_factory=lambda: list(SECTION_NAMES))
    verdict_tol: float = 1e-9
    refute_median: float = 1e-3

    reduce_profiles: int = 100
    reduce_degree: int = 3
    reduce_tol: float = 1e-10

    ode_step: float = 1e-3
    ode_rho_min: float = -10.0
    ode_rho_max: float = 10.0
    ode_C: float = 1.0
    ode_D: float = 0.0
    ode_check_rho_max: float = 5.0
    ode_tol: float = 1e-9

    solve_rect: tuple[float, float, float, float] = (0.5, 2.0, -1.0, 1.0)
    solve_h_list: list[float] = field(default_factory=lambda: [1 / 16, 1 / 32, 1 / 64])
    solve_tol: float = 1e-10
    solve_max_iter: int = 50

    curvature_ricci_tol: float = 1e-7
    curvature_implication_residual: float = 1e-12

    singularity_t_min: float = 1e-3
    singularity_t_max: float = 10.0
    singularity_n: int = 41
    singularity_T: float = 2.0
    singularity_tol: float = 1e-12

    coeffs_k: float = 1.0

    def validate(self) -> None:
        def bad(key, msg):
            raise ConfigError(f"{key}: {msg}")

        if not self.t_min > 0:
            bad("t_min", f"must be > 0 (singular line t = 0 excluded), got {self.t_min}")
        if self.t_max < self.t_min:
            bad("t_max", "must be >= t_min")
        if self.x_max < self.x_min:
            bad("x_max", "must be >= x_min")
        if self.nt < 1 or self.nx < 1:
            bad("nt" if self.nt < 1 else "nx", "grid needs at least one node")
        if self.T is not None and not self.T > 0:
            bad("T", f"must be > 0 or none, got {self.T}")
        if self.k == 0:
            bad("k", "must be nonzero")
        for name in self.families:
            if name not in ("zero", "linear", "arctan", "nutku", "logsinh"):
                bad("families", f"unknown family {name!r}")
        for s in self.sections:
            if s not in SECTION_NAMES:
                bad("sections", f"unknown section {s!r}")
        if not self.ode_step > 0:
            bad("ode.step", "must be > 0")
        if not self.ode_rho_min <= 0 <= self.ode_rho_max:
            bad("ode.rho_min", "profile range must contain 0")
        t0, t1, x0, x1 = self.solve_rect
        if not t0 > 0:
            bad("solve.rect", "t0 must be > 0")
        if len(self.solve_h_list) < 3:
            bad("solve.h_list", "need at least 3 mesh sizes")
        if not self.singularity_t_min > 0:
            bad("singularity.t_min", "must be > 0")
        if not self.singularity_T > 0:
            bad("singularity.T", "must be > 0")

    def echo(self) -> dict:
        return asdict(self)


# key in file -> (section, attribute)
_KEYS = {
    "audit": {f.name: f.name for f in fields(AuditConfig)
              if not f.name.split("_")[0] in ("reduce", "ode", "solve", "curvature", "singularity", "coeffs")},
    "reduce": {"profiles": "reduce_profiles", "degree": "reduce_degree", "tol": "reduce_tol"},
    "ode": {"step": "ode_step", "rho_min": "ode_rho_min", "rho_max": "ode_rho_max", "c": "ode_C",
            "d": "ode_D", "check_rho_max": "ode_check_rho_max", "tol": "ode_tol"},
    "solve": {"rect": "solve_rect", "h_list": "solve_h_list", "tol": "solve_tol", "max_iter": "solve_max_iter"},
    "curvature": {"ricci_tol": "curvature_ricci_tol", "implication_residual": "curvature_implication_residual"},
    "singularity": {"t_min": "singularity_t_min", "t_max": "singularity_t_max", "n": "singularity_n",
                    "t": "singularity_T", "tol": "singularity_tol"},
    "coeffs": {"k": "coeffs_k"},
}
_KEYS["audit"]["family"] = "families"
_KEYS["audit"] = {k.lower(): v for k, v in _KEYS["audit"].items()}


def _number(text: str) -> float:
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        return float(Fraction(text))


def _parse_value(attr: str, raw: str):
    default = getattr(AuditConfig(), attr)
    raw = raw.strip()
    if attr in ("families", "sections"):
        items = [s.strip().lower() for s in raw.split(",") if s.strip()]
        if attr == "sections" and items == ["all"]:
            return list(SECTION_NAMES)
        return items
    if attr == "T":
        return None if raw.lower() in ("none", "") else _number(raw)
    if attr == "solve_rect":
        vals = tuple(_number(s) for s in raw.split(","))
        if len(vals) != 4:
            raise ValueError("rect needs 4 numbers")
        return vals
    if attr == "solve_h_list":
        return [_number(s) for s in raw.split(",")]
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    return _number(raw)


def parse_config(text: str) -> AuditConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc
    cfg = AuditConfig()
    for section in cp.sections():
        table = _KEYS.get(section.lower())
        if table is None:
            raise ConfigError(f"[{section}]: unknown section")
        for key, raw in cp.items(section):
            attr = table.get(key.lower())
            if attr is None:
                raise ConfigError(f"{section}.{key}: unknown key")
            try:
                setattr(cfg, attr, _parse_value(attr, raw))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"{key}: cannot parse {raw!r} ({exc})") from exc
    cfg.validate()
    return cfg


def load_config(path: str | Path | None = None) -> AuditConfig:
    if path is None:
        cfg = AuditConfig()
        cfg.validate()
        return cfg
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def build_family(cfg: AuditConfig, name: str):
    from .surfaces import family_from_params

    try:
        return family_from_params(name, k=cfg.k, T=cfg.T, alpha=cfg.alpha, beta=cfg.beta)
    except InvalidParameter as exc:
        raise ConfigError(f"families: {exc}") from exc
