import functools
import time
from typing import Any, Callable, TypeVar

from src.commons.utils import logger

F = TypeVar("F", bound=Callable[..., Any])


def timed(stage: str) -> Callable[[F], F]:
    """Log the wall time of a pipeline stage"""

    def decorate(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                logger.debug("Stage finished", extra={"stage": stage, "seconds": round(time.perf_counter() - start, 4)})

        return wrapper  # type: ignore[return-value]

    return decorate
