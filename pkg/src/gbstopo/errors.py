"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat.
"""


class FormatError(ValueError):
    """Malformed input file or record (bad JSON, bad indices, bad schema)."""


class BudgetError(RuntimeError):
    """An enumeration would exceed its configured size budget."""

    def __init__(self, message: str, required: int, budget: int):
        super().__init__(message)
        self.required = required
        self.budget = budget


class InvariantError(RuntimeError):
    """An internal consistency check failed (numerical or structural)."""


class UndefinedRatioError(ZeroDivisionError):
    """Enhancement ratio with a zero denominator; carries both rates."""

    def __init__(self, numerator: float, denominator: float):
        super().__init__(
            f"undefined ratio: numerator={numerator}, denominator={denominator}"
        )
        self.numerator = numerator
        self.denominator = denominator


class EmptyConditionError(ValueError):
    """Conditioning selected no shots / no probability mass."""
