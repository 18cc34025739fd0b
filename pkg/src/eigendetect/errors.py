"""Exception types shared across the package."""


class DomainError(ArithmeticError):
    """Raised when a computation is undefined for otherwise well-formed input.

    Examples are degenerate spectra, all-infinite detector scores, and
    separation metrics requested below the phase transition. Malformed input
    raises ValueError instead.
    """
