"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Operands do not fit together (variable counts, dangling references)."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class DegreeError(ValueError):
    """A query polynomial exceeds the degree bound of a truncated basis."""


class BudgetExceeded(RuntimeError):
    """A bounded computation ran out of its step budget."""


class ParseError(ValueError):
    """Malformed polynomial or instance text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
