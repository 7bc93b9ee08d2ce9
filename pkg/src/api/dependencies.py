from fastapi import HTTPException, status

from src.database import get_db
from src.errors import BootstrapError, InputError, InvariantViolation
from src.models.pattern import Pattern

__all__ = ["get_db", "http_error", "pattern_or_400"]


def http_error(error: BootstrapError) -> HTTPException:
    """Maps the engine's exception hierarchy onto HTTP status codes."""
    if isinstance(error, InvariantViolation):
        code = status.HTTP_500_INTERNAL_SERVER_ERROR
    elif isinstance(error, InputError):
        code = status.HTTP_400_BAD_REQUEST
    else:
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    return HTTPException(status_code=code, detail=str(error))


def pattern_or_400(r: int, s: int) -> Pattern:
    try:
        return Pattern(r, s)
    except InputError as e:
        raise http_error(e)
