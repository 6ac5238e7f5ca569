"""Exception hierarchy.

Every failure raised on purpose by the package derives from
:class:`CausatumError`; the CLI maps those to exit code 1.
"""


class CausatumError(Exception):
    """Base class for domain errors."""


class DomainError(CausatumError, ValueError):
    """An argument is outside the operation's domain."""


class PreconditionError(DomainError):
    pass


class CapacityError(DomainError):
    """A configured size limit would be exceeded."""

    def __init__(self, what: str, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: m={size} exceeds limit={limit}")


class KBError(CausatumError, ValueError):
    """Problem found while reading a knowledge base document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class KBSyntaxError(KBError):
    pass


class UndeclaredSymbolError(KBError):
    pass


class DuplicateDeclarationError(KBError):
    pass


class DistributionError(KBError):
    """Probability table that does not sum to one or has a negative entry."""


class NullConditioningError(DomainError):
    """Conditioning on an event of probability zero."""


class DegenerateEffectError(DomainError):
    """The effect already follows from the field alone."""


class CycleError(DomainError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("cyclic rules: " + " -> ".join(self.cycle))


class MissingBindingError(DomainError):
    def __init__(self, leaf: str):
        self.leaf = leaf
        super().__init__(f"no binding for leaf {leaf!r}")


class StructureMismatchError(DomainError):
    def __init__(self, missing, extra):
        self.missing = frozenset(missing)
        self.extra = frozenset(extra)
        super().__init__(
            f"topology mismatch: missing={sorted(self.missing)} extra={sorted(self.extra)}"
        )


class NoExplanationError(DomainError):
    """Every candidate has zero posterior weight."""
