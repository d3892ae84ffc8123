"""Exception types shared across the package.

Every exception carries the originating module name and a short machine
readable code, so the command-line front end can print single-line
diagnostics of the form ``E:<module>:<code>: message``.
"""


class SpinPhaseError(Exception):
    code = "error"

    def __init__(self, module: str, message: str):
        super().__init__(message)
        self.module = module
        self.message = message

    def oneline(self) -> str:
        return f"E:{self.module}:{self.code}: {self.message}"


class DomainError(SpinPhaseError):
    """Input outside the documented domain of an operation."""

    code = "domain"


class ConditioningError(SpinPhaseError):
    """A weight or multiplier would overflow double precision.

    ``detail`` names the offending harmonic rank j when known.
    """

    code = "conditioning"

    def __init__(self, module: str, message: str, j: int | None = None):
        super().__init__(module, message)
        self.j = j


class ContractError(SpinPhaseError):
    """A documented precondition between collaborating objects is violated."""

    code = "contract"


class IntegrityError(SpinPhaseError):
    """A result failed its own internal consistency check."""

    code = "integrity"


class FormatError(SpinPhaseError):
    """Malformed serialized data."""

    code = "format"
