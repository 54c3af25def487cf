"""Exception types shared across the package."""


class QslFieldError(Exception):
    """Base class for package-specific failures."""


class ConvergenceError(QslFieldError):
    """A numerical routine exhausted its refinement budget without converging."""


class DegenerateLevelsError(ConvergenceError):
    """Two computed eigenvalues are too close to order reliably.

    Within one (spin, m) channel the radial spectrum is non-degenerate; a
    near-degenerate pair signals a solver failure rather than physics, so we
    fail loudly instead of returning an ambiguous ordering.
    """


class DomainOverflowError(ConvergenceError):
    """The classically forbidden region could not be bracketed within budget."""
