"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input-format problems exit 3,
budget and cap violations exit 4.
"""


class QMonomialError(Exception):
    """Base class for all library errors."""


class ParameterError(QMonomialError, ValueError):
    """An argument is outside its documented range."""


class CircuitFormatError(QMonomialError, ValueError):
    """A circuit document is malformed: syntax, cycles, arity, dangling ids."""

    def __init__(self, message: str, gate_id: int | None = None):
        if gate_id is not None:
            message = f"gate {gate_id}: {message}"
        super().__init__(message)
        self.gate_id = gate_id


class InputFormatError(QMonomialError, ValueError):
    """A graph, set-system or family file cannot be parsed."""


class StructureError(QMonomialError, ValueError):
    """The circuit does not have the shape an operation requires (e.g. tree-likeness)."""


class BudgetError(QMonomialError):
    """An enumeration or expansion would exceed its configured budget."""


class ExpansionTooLarge(BudgetError):
    """Symbolic expansion produced more distinct monomials than the cap allows."""


class CapError(BudgetError):
    """A hard size cap (e.g. the group-algebra dimension) was exceeded."""
