"""Exception hierarchy shared by all modules."""


class AlbmodError(Exception):
    """Base class for errors raised by this package."""


class DomainError(AlbmodError, ValueError):
    """An argument lies outside the domain of an operation."""


class PrecisionError(AlbmodError, ArithmeticError):
    """A requested coefficient is not certified by the working precision."""


class BudgetError(AlbmodError, RuntimeError):
    """An enumeration would exceed its configured budget."""


class CapError(AlbmodError, RuntimeError):
    """A membership search was inconclusive at the configured caps."""


class ParseError(AlbmodError, ValueError):
    """Malformed textual input; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f": {text!r}" if text else ""))

    def annotated(self) -> str:
        return f"{self.args[0]}\n  {self.text}\n  {' ' * self.pos}^"
