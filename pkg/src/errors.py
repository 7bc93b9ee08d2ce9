"""Exception hierarchy shared by the engine, the CLI and the HTTP routes."""


class BootstrapError(Exception):
    """Base class for every error raised on purpose by this package."""


class InputError(BootstrapError, ValueError):
    """Malformed or out-of-range input (bad vertex index, bad flag, zero trials)."""


class EdgeListFormatError(InputError):
    """The edge-list text could not be parsed."""

    def __init__(self, message: str, line_no: int = 0):
        self.line_no = line_no
        if line_no:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class PreconditionError(InputError):
    """An operation was called outside its precondition."""


class DomainError(BootstrapError, ValueError):
    """A formula or check was requested for a pattern outside its proven range."""


class RangeGuardError(BootstrapError, ValueError):
    """An exhaustive enumeration would exceed its hard cap."""


class BracketError(BootstrapError, RuntimeError):
    """A threshold bracket with the half-probability crossing could not be found."""


class InvariantViolation(BootstrapError, AssertionError):
    """An internal invariant of the engine was broken. Always a bug."""


EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, InvariantViolation):
        return EXIT_INVARIANT
    return EXIT_INPUT
