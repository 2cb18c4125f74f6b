"""Exception types shared across the toolkit."""


class MinsurfError(Exception):
    """Base class for toolkit errors."""


class DivisionByZeroJet(MinsurfError, ZeroDivisionError):
    """Jet division with a base value within epsilon of zero (a pole)."""


class DomainError(MinsurfError, ValueError):
    """A function was evaluated outside its real domain."""


class OutOfDomain(MinsurfError, ValueError):
    """A point lies outside the admissible domain of a field or transform."""


class InvalidParameter(MinsurfError, ValueError):
    pass


class SingularMetric(MinsurfError, ArithmeticError):
    pass


class NonConvergence(MinsurfError, RuntimeError):
    pass


class ConfigError(MinsurfError, ValueError):
    pass
