"""Exception hierarchy shared by all kgwell modules."""


class KGWellError(Exception):
    """Base class for every error raised by kgwell."""


class InvalidParameter(KGWellError, ValueError):
    pass


class NonConvergence(KGWellError, ArithmeticError):
    """A power series did not reach its tolerance within the term budget."""


class OutOfWindow(KGWellError, ValueError):
    """Energy outside the bound-state window |E| < 1."""


class NotAnEigenvalue(KGWellError):
    """Continuity conditions cannot all be met at the requested energy."""


class QuadratureFailure(KGWellError, ArithmeticError):
    pass


class IntegrationFailure(KGWellError, ArithmeticError):
    pass


class BracketInvalid(KGWellError, ValueError):
    """The critical-potential predicate does not change across the bracket."""
