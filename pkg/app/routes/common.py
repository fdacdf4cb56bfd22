from fastapi import HTTPException, status

from app.engine.errors import EngineError, NotLieNilpotent, ResourceLimitExceeded
from app.models.group_spec import SpecError


def http_error(error: Exception) -> HTTPException:
    """Map engine and parse failures to HTTP responses"""
    if isinstance(error, SpecError):
        return HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={"message": error.message, "position": error.position},
        )
    if isinstance(error, ResourceLimitExceeded):
        return HTTPException(
            status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            detail={"message": str(error), "error": type(error).__name__},
        )
    if isinstance(error, NotLieNilpotent):
        return HTTPException(
            status_code=status.HTTP_409_CONFLICT,
            detail={"message": str(error), "error": type(error).__name__},
        )
    if isinstance(error, (EngineError, ValueError)):
        return HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail={"message": str(error), "error": type(error).__name__},
        )
    raise error
