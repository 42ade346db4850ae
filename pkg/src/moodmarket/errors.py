"""Exception hierarchy.

Every error raised on purpose by the toolkit derives from ``MoodMarketError``
so the CLI can map it to an exit code. Input/validation problems additionally
derive from ``InputError`` (exit code 2); everything else is computational
(exit code 1).
"""


class MoodMarketError(Exception):
    pass


class InputError(MoodMarketError, ValueError):
    """Bad or missing input: files, config, parameters."""


class ComputationError(MoodMarketError, ArithmeticError):
    """A numerical routine cannot produce a meaningful answer."""


class EmptyLexicon(InputError):
    pass


class CorpusFormatError(InputError):
    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class SeriesFormatError(InputError):
    pass


class EmptyIntersection(InputError):
    pass


class InsufficientLength(InputError):
    pass


class InsufficientHistory(InputError):
    pass


class InvalidSpec(InputError):
    pass


class NonPositiveValue(ComputationError):
    def __init__(self, date, value):
        self.date = date
        self.value = value
        super().__init__(f"non-positive value {value!r} at {date.isoformat()}")


class ZeroVariance(ComputationError):
    pass


class ZeroActual(ComputationError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"actual value is zero at index {index}; percentage error undefined")


class RankDeficient(ComputationError):
    def __init__(self, column, label=None):
        self.column = column
        self.label = label
        name = f" ({label})" if label else ""
        super().__init__(
            f"design matrix is rank deficient: column {column}{name} is collinear "
            "with the preceding columns"
        )


class NoTermsSelected(ComputationError):
    pass
