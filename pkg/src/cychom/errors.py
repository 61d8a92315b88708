"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (malformed input, bad
arguments, exceeded budgets) and :class:`VerdictFailure` (a mathematical
consistency check failed, which points at a bug or a convention error).
The CLI maps them to exit codes 1 and 2.
"""


class CychomError(Exception):
    pass


class InputError(CychomError):
    pass


class VerdictFailure(CychomError):
    pass


class ParseError(InputError):
    pass


class BudgetExceeded(InputError):
    pass


class OutOfRange(InputError):
    pass


class NotArtinian(InputError):
    pass


class FieldMismatch(InputError):
    pass


class UnknownName(InputError):
    pass


class NotContained(InputError):
    pass


class CompositionNonzero(VerdictFailure):
    pass


class OracleMismatch(VerdictFailure):
    pass


class SpectrumMismatch(VerdictFailure):
    pass


class ExactnessFailure(VerdictFailure):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class SplittingFailure(VerdictFailure):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
