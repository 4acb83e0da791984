"""Exception hierarchy shared by the engine, the physics modules and the CLI."""


class TwprobeError(Exception):
    """Base class for all library errors."""


class ConfigError(TwprobeError, ValueError):
    """Invalid or incomplete user configuration."""


class StateError(TwprobeError, ValueError):
    """A matrix failed the density-matrix (or operator) invariants."""


class DimensionError(TwprobeError, ValueError):
    """Operands of incompatible or unsupported dimension."""


class NumericalValidityError(TwprobeError, ArithmeticError):
    """Numerical result left its validity envelope (trace drift, truncation leakage, ...)."""


class NonUniqueSteadyStateError(NumericalValidityError):
    """The Liouvillian kernel is degenerate, so no single fixed point exists."""


class DomainError(TwprobeError, ValueError):
    """A closed-form expression was evaluated outside the interval where it holds."""
