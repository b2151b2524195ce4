"""Exception hierarchy shared by all modules."""


class ToricError(ValueError):
    """Base class for errors raised by toriclift."""


class ValidationError(ToricError):
    """Input data violates a structural invariant (exit code 1 in the CLI)."""


class HypothesisError(ToricError):
    """A theorem hypothesis is not met, e.g. non-ample H or gcd(N, p) != 1 (exit code 2)."""


class UnsupportedRankError(ToricError):
    """The requested computation is only implemented in low ambient rank."""
