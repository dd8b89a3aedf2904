"""Timing helpers for denoisers and simulation cells"""

import functools
import logging
import time
from typing import Any, Callable, TypeVar

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


def performance_monitor(func: F) -> F:
    """Decorator logging the wall time of each call at debug level"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            duration = time.perf_counter() - start_time
            logger.debug(f"{func.__name__} took {duration:.4f} seconds")

    return wrapper  # type: ignore[return-value]


class PerformanceTracker:
    """Context manager timing a block of code; the elapsed time stays readable afterwards"""

    def __init__(self, name: str):
        self.name = name
        self.start_time: float | None = None
        self.elapsed: float = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            self.elapsed = time.perf_counter() - self.start_time
            logger.debug(f"{self.name} took {self.elapsed:.4f} seconds")
