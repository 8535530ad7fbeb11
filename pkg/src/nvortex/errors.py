"""Exception hierarchy shared by every module."""


class VortexError(Exception):
    """Base class for all library errors."""


class SingularPoint(VortexError, ValueError):
    """log, power or division evaluated at a zero of its argument."""


class DomainBoundary(VortexError, ValueError):
    """Point lies on or outside the chart where the metric is defined."""


class PoleAtPoint(VortexError, ValueError):
    """A rational map is evaluated at one of its poles."""


class NonConvergence(VortexError, RuntimeError):
    pass


class DegenerateMap(VortexError, ValueError):
    pass


class ExcludedRegion(VortexError, ValueError):
    """Point falls inside an exclusion disc (vortex centre or pole)."""


class QuadratureNonConvergence(VortexError, RuntimeError):
    pass


class UnsupportedDomain(VortexError, ValueError):
    pass


class MixedAlgebra(VortexError, ValueError):
    """Lie algebra elements with different structure constants were combined."""


class OnRemovedFibre(VortexError, ValueError):
    pass


class ConstraintViolation(VortexError, ValueError):
    pass


class DomainViolation(VortexError, ValueError):
    pass


class InvalidConfiguration(VortexError, ValueError):
    pass


class OutsideRegion(VortexError, ValueError):
    pass


class ConfigError(VortexError, ValueError):
    exit_code = 2


class CheckFailure(VortexError):
    exit_code = 1
