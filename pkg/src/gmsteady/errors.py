"""Exception types shared across the package."""

__all__ = [
    "UndefinedIndexError",
    "RegimeError",
    "HypothesisError",
    "NonexistenceError",
    "NonIntegrableTailError",
    "FieldParseError",
]


class UndefinedIndexError(ValueError):
    """The cross-inhibition index is undefined (requires p > 1)."""


class RegimeError(ValueError):
    """Inputs fall outside the regime a constant ledger is valid for."""


class HypothesisError(ValueError):
    """A solver was invoked outside the hypotheses that guarantee a solution."""


class NonexistenceError(ValueError):
    """The requested problem provably has no positive solution."""


class NonIntegrableTailError(ValueError):
    """A declared far-field model makes the required integral diverge."""


class FieldParseError(ValueError):
    """A field dump file is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
