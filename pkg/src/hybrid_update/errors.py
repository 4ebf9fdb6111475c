"""Exception hierarchy shared by every layer of the reasoner."""


class HybridUpdateError(Exception):
    """Base class for all errors raised by this package."""


class SignatureMismatch(HybridUpdateError):
    """An atom, predicate or interpretation does not belong to the signature in use."""


class AtomBudgetExceeded(HybridUpdateError):
    """Exhaustive enumeration was requested over too many atoms."""

    def __init__(self, atoms: int, limit: int):
        super().__init__(
            f"signature has {atoms} atoms, above the enumeration budget of {limit} "
            f"(raise it with --max-atoms)"
        )
        self.atoms = atoms
        self.limit = limit


class ContractViolation(HybridUpdateError):
    """A precondition of an operation was not met (e.g. non-definite program)."""


class KbSyntaxError(HybridUpdateError):
    """Malformed knowledge-base or query text."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        where = f"line {line}, column {column}"
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{where}: {message}{hint}")
        self.line = line
        self.column = column
        self.expected = expected


class UndeclaredIndividual(HybridUpdateError):
    """An assertion names a constant missing from the %constants section."""


class NonGroundFormula(HybridUpdateError):
    """A query or update mentions a variable."""


class ArityConflict(HybridUpdateError):
    """One name is used with two different arities."""
