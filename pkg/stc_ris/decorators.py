"""Decorators for common error handling patterns in stc-ris.

- with_error_handling: convert foreign exceptions into StcError subclasses
- with_performance_logging: time an operation, record it, log slow calls
- with_input_validation: run argument validators before the call
- toolkit_operation: the combination used by the public numerical entry points
"""

import functools
import inspect
import time
from collections.abc import Callable
from typing import Any, TypeVar, cast

from .errors import StcError, handle_exception
from .logging import logger
from .monitoring.metrics import record_response_time

F = TypeVar("F", bound=Callable[..., Any])


def with_error_handling(operation_name: str) -> Callable[[F], F]:
    """Decorator for standardized error handling.

    StcError subclasses pass through untouched; anything else is logged and
    re-raised as the StcError chosen by ``handle_exception``.

    Args:
        operation_name: Name of the operation for logging
    """

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except StcError:
                raise
            except Exception as e:
                logger.error(f"Error in {operation_name}: {str(e)}", exc_info=True)
                raise handle_exception(e, operation_name, operation_name) from e

        return cast(F, wrapper)

    return decorator


def with_performance_logging(
    log_threshold_ms: float = 1000.0, name: str | None = None
) -> Callable[[F], F]:
    """Decorator to log and record the duration of operations.

    Args:
        log_threshold_ms: Warn if the operation takes longer than this
        name: Metric name (defaults to the function's qualified name)
    """

    def decorator(func: F) -> F:
        metric_name = name or func.__qualname__

        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start_time
                record_response_time(metric_name, elapsed)
                elapsed_ms = elapsed * 1000
                if elapsed_ms > log_threshold_ms:
                    logger.warning(f"Slow operation {metric_name}: {elapsed_ms:.2f}ms")
                else:
                    logger.debug(f"Operation {metric_name}: {elapsed_ms:.2f}ms")

        return cast(F, wrapper)

    return decorator


def with_input_validation(
    *validators: Callable[[dict[str, Any]], None],
) -> Callable[[F], F]:
    """Decorator for input validation.

    Each validator receives the bound arguments as a name -> value dict and
    raises ValidationError when they are unacceptable.
    """

    def decorator(func: F) -> F:
        signature = inspect.signature(func)

        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            bound = signature.bind(*args, **kwargs)
            bound.apply_defaults()
            for validator in validators:
                validator(dict(bound.arguments))
            return func(*args, **kwargs)

        return cast(F, wrapper)

    return decorator


def toolkit_operation(
    operation_name: str, log_threshold_ms: float = 1000.0
) -> Callable[[F], F]:
    """Standard decorator combination for heavy toolkit operations."""

    def decorator(func: F) -> F:
        return with_performance_logging(log_threshold_ms, operation_name)(
            with_error_handling(operation_name)(func)
        )

    return decorator
