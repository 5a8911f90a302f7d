import functools
import logging
from typing import Callable, Optional
import pydantic
from src.models.responses import ErrorDetail, ErrorResponse
from src.utils.errors import TreeCountError
from src.utils.renderers import Renderers

logger = logging.getLogger(__name__)


def emit(text: str, output: Optional[str] = None) -> None:
    """Write rendered output to a file or stdout."""
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")


def error_response(exc: Exception) -> ErrorResponse:
    """
    Map an exception to its machine-readable error object.

    Args:
        exc: Raised exception

    Returns:
        ErrorResponse carrying the exit code
    """
    if isinstance(exc, TreeCountError):
        exit_code = exc.exit_code
    elif isinstance(exc, (pydantic.ValidationError, ValueError)):
        exit_code = 1
    else:
        exit_code = 3 if isinstance(exc, (ArithmeticError, MemoryError)) else 1

    return ErrorResponse(
        error=ErrorDetail(type=type(exc).__name__, detail=str(exc), exit_code=exit_code)
    )


def handle_errors(handler: Callable) -> Callable:
    """
    Wrap a command handler: render its response, or its failure, and return the exit code.

    The handler receives the parsed arguments and returns a response model. A response
    with an `exit_code` attribute (verification reports) decides the exit status itself.

    Args:
        handler: Command handler

    Returns:
        Wrapped handler returning an integer exit code
    """

    @functools.wraps(handler)
    def wrapper(args) -> int:
        fmt = getattr(args, "format", "json")
        output = getattr(args, "output", None)
        try:
            response = handler(args)
        except (TreeCountError, pydantic.ValidationError, ValueError, ArithmeticError) as exc:
            logger.debug("command failed", exc_info=True)
            failure = error_response(exc)
            emit(Renderers.render(failure, fmt), output)
            return failure.error.exit_code

        emit(Renderers.render(response, fmt), output)
        return getattr(response, "exit_code", 0)

    return wrapper
