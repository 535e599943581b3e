"""Exceptions raised across the toolkit, and the no-popular-matching sentinel."""


class PopMatchError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class InstanceFormatError(PopMatchError, ValueError):
    """Syntax error in an instance or matching file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(f"{where}{message}")


class InstanceError(PopMatchError, ValueError):
    """An instance violates one of its invariants."""


class InvalidMatchingError(PopMatchError, ValueError):
    """A matching is not a matching of the instance it is used with."""


class ModelViolation(PopMatchError):
    """The solver only handles instances where every post holds a single tie."""


class NotMaximumMatchingError(PopMatchError, ValueError):
    """classify() was handed a matching that still has an augmenting path."""


class GuardExceeded(PopMatchError):
    """An exhaustive search was asked to run above its configured size."""


class CnfValidationError(PopMatchError, ValueError):
    """A formula is not a (2,2)-E3 formula. `problems` lists every violation."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnsatisfiedAssignmentError(PopMatchError, ValueError):
    """The assignment leaves at least one clause false."""


class StructureError(PopMatchError, ValueError):
    """A matching of a reduced instance lacks the shape every popular matching has."""


class NoPopularMatching:
    """Result marker: the instance admits no popular matching."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_POPULAR_MATCHING"

    def __bool__(self):
        return False


NO_POPULAR_MATCHING = NoPopularMatching()
