"""Exception types for conditions the math treats as answers or hard failures."""


class KellyLabError(Exception):
    """Base class for every error raised by kellylab."""


class InvalidSimplex(KellyLabError, ValueError):
    pass


class SupportViolation(KellyLabError, ValueError):
    """Some p_i > 0 where q_i = 0, so the divergence is infinite."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"p[{index}] > 0 but q[{index}] == 0 (divergence is +inf)")


class RuinRisk(KellyLabError, ArithmeticError):
    """Wealth hits zero with positive probability; log growth is -inf."""

    def __init__(self, message, row=None):
        self.row = row
        super().__init__(message)


class NotFairOdds(KellyLabError, ValueError):
    pass


class BudgetExceeded(KellyLabError, RuntimeError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} sequences, budget is {budget}")


class NotAType(KellyLabError, ValueError):
    pass


class InvalidSpec(KellyLabError, ValueError):
    pass


class ParseError(KellyLabError, ValueError):
    pass


class NonPositiveReturn(ParseError):
    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"non-positive gross return {value!r} at (row {row}, col {column})")


class DuplicatePeriod(ParseError):
    def __init__(self, row, label):
        self.row = row
        self.label = label
        super().__init__(f"duplicate period {label!r} at row {row}")
