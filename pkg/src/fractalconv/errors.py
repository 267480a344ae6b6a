"""Error taxonomy shared by the library and the command-line driver.

Exit-code mapping used by the CLI: ValidationError -> 2, BudgetError -> 3,
DegenerateInputError -> 4.
"""


class FractalConvError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(FractalConvError):
    """A parameter or input file failed validation.

    `field` names the offending field so callers can produce a structured
    report.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class BudgetError(FractalConvError):
    """A combinatorial enumeration would exceed the configured node budget."""

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        self.required = required
        self.budget = budget
        super().__init__(message)


class PrecisionError(BudgetError):
    """A computation would leave the exact range of double precision.

    Raised by the integer-sequence generators when requested powers exceed
    2**53; callers may retry with a smaller depth or wide precision.
    """


class DegenerateInputError(FractalConvError):
    """Inputs hit a degenerate configuration (zero denominator, flat window)."""


class NonRealBetaError(DegenerateInputError):
    """Reconstruction produced a non-positive squared imaginary part."""


class ContourError(DegenerateInputError):
    """A contour integral passed too close to a zero of the integrand."""
