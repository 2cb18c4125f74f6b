"""Verification toolkit for exact minimal-surface solutions and the instanton metrics built from them."""

__version__ = "0.1.0"

from .autodiff import Jet, jet_variable, jet_arith, jet_unary, fd_crosscheck  # noqa: E402
from .surfaces import (DomainSpec, Linear, LogSinh, NutkuArctan, OdeProfile, TimeShifted, Zero,  # noqa: E402
                       eval_jet, singular_trace, time_shift)
from .pde import (divergence_residual, maximal_residual, minimal_residual,  # noqa: E402
                  scaling_residual_identity)

__all__ = [
    "Jet", "jet_variable", "jet_arith", "jet_unary", "fd_crosscheck",
    "DomainSpec", "Zero", "Linear", "NutkuArctan", "LogSinh", "TimeShifted", "OdeProfile",
    "eval_jet", "singular_trace", "time_shift",
    "minimal_residual", "divergence_residual", "maximal_residual", "scaling_residual_identity",
]
