"""Exception types shared across the solvers."""


class DivergenceError(RuntimeError):
    """A message or node variable became non-finite during iteration."""

    def __init__(self, message: str, where: tuple | None = None):
        super().__init__(message)
        self.where = where


class SingularDenominatorError(RuntimeError):
    """The Gaussian closure 1 - beta~*C hit zero; the coupling is too
    strong for the quadratic (Hopfield) approximation."""


class EnergyDomainError(ValueError):
    """The energy estimate is inconsistent with any positive temperature
    (|eps / (alpha sqrt(N))| >= 1 in the temperature update)."""
