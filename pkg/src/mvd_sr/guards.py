import asyncio
import logging
from functools import wraps
from typing import Any, Callable, TypeVar

from mvd_sr.errors import MvdError
from mvd_sr.strings import get_string

logger = logging.getLogger("mvd_sr.cli")

F = TypeVar("F", bound=Callable[..., Any])

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2
EXIT_INTERRUPTED = 130


def _exit_code(error: BaseException) -> int:
    match error:
        case MvdError():
            logger.error("%s", error)
            return error.exit_code
        case OSError():
            where = f"{error.filename}: " if error.filename else ""
            logger.error("%s%s", where, error.strerror or error)
            return EXIT_IO
        case KeyboardInterrupt():
            logger.warning(get_string("interrupted"))
            return EXIT_INTERRUPTED
    raise error


def exit_codes(func: F) -> F:
    """Turns library errors into process exit codes and log lines.

    Handlers return ``None`` on success; anything else is passed through as
    the exit code.
    """

    @wraps(func)
    async def async_wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            result = await func(*args, **kwargs)
        except (MvdError, OSError, KeyboardInterrupt) as e:
            return _exit_code(e)
        return EXIT_OK if result is None else result

    @wraps(func)
    def sync_wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            result = func(*args, **kwargs)
        except (MvdError, OSError, KeyboardInterrupt) as e:
            return _exit_code(e)
        return EXIT_OK if result is None else result

    return async_wrapper if asyncio.iscoroutinefunction(func) else sync_wrapper  # type: ignore
