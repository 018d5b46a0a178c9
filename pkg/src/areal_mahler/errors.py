"""Exception types raised across the package."""


class ArealMahlerError(Exception):
    pass


class NonConvergence(ArealMahlerError):
    """Root iteration exhausted its budget with a residual above tolerance."""


class SingularNode(ArealMahlerError):
    """A quadrature node landed exactly on a zero, even after rotating the grid."""


class DomainError(ArealMahlerError, ValueError):
    pass


class DegreeMismatch(ArealMahlerError, ValueError):
    pass


class MultipleRoot(ArealMahlerError, ValueError):
    pass


class BudgetExceeded(ArealMahlerError):
    pass


class TailNotCertified(ArealMahlerError):
    pass


class ParseError(ArealMahlerError, ValueError):
    pass
