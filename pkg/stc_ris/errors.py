"""Error handling and exception classes for the stc-ris toolkit."""

import logging
import uuid
from enum import Enum
from typing import Any

from .error_codes import CATEGORY_PREFIXES, format_error_code

logger = logging.getLogger("stc_ris")


class ErrorCategory(Enum):
    """Categories of errors for better error handling and reporting."""

    CONFIGURATION = "configuration"  # Bad environment or config documents
    NOT_FOUND = "not_found"  # Missing input files
    VALIDATION = "validation"  # Input validation errors
    CAPACITY = "capacity"  # Enumeration too large
    DESIGN = "design"  # Codebook or steering request cannot be met
    SIGNAL = "signal"  # Receiver-side failures
    INTERNAL = "internal"  # Bugs
    UNKNOWN = "unknown"  # Uncategorized errors


class ErrorSeverity(Enum):
    """Severity levels for errors."""

    CRITICAL = "critical"
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


# CLI exit status per category: 2 for anything the user can fix, 1 for bugs.
EXIT_CODES = {
    ErrorCategory.CONFIGURATION: 2,
    ErrorCategory.NOT_FOUND: 2,
    ErrorCategory.VALIDATION: 2,
    ErrorCategory.CAPACITY: 2,
    ErrorCategory.DESIGN: 2,
    ErrorCategory.SIGNAL: 2,
    ErrorCategory.INTERNAL: 1,
    ErrorCategory.UNKNOWN: 1,
}


class StcError(Exception):
    """Base exception class for stc-ris errors.

    This provides consistent error handling with categories, severity levels,
    structured details and logging at construction time.
    """

    DEFAULT_USER_MESSAGES = {
        ErrorCategory.CONFIGURATION: "Configuration error. Please check your settings.",
        ErrorCategory.NOT_FOUND: "The requested file was not found.",
        ErrorCategory.VALIDATION: "Invalid input. Please check the parameters.",
        ErrorCategory.CAPACITY: "The request is too large to enumerate.",
        ErrorCategory.DESIGN: "The requested design cannot be realized.",
        ErrorCategory.SIGNAL: "The received signal cannot be processed.",
        ErrorCategory.INTERNAL: "An internal error occurred.",
        ErrorCategory.UNKNOWN: "An unexpected error occurred.",
    }

    def __init__(
        self,
        message: str,
        category: ErrorCategory = ErrorCategory.UNKNOWN,
        severity: ErrorSeverity = ErrorSeverity.ERROR,
        recoverable: bool = True,
        original_error: Exception | None = None,
        details: dict[str, Any] | None = None,
        subcategory: str | None = None,
        operation: str | None = None,
        user_message: str | None = None,
        trace_id: str | None = None,
        **kwargs: Any,
    ) -> None:
        """Initialize a new StcError.

        Args:
            message: Human-readable error message
            category: Error category for classification
            severity: Error severity level
            recoverable: Whether the caller can retry with different input
            original_error: Original exception that caused this error, if any
            details: Additional error details as a dictionary
            subcategory: Short subcategory code (e.g. "FMT", "ENUM")
            operation: Operation that was being performed
            user_message: User-friendly error message
            trace_id: Unique identifier for tracking the error
            **kwargs: Additional context to be stored in details
        """
        self.message = message
        self.category = category
        self.severity = severity
        self.recoverable = recoverable
        self.original_error = original_error
        self.details = details or {}
        self.subcategory = subcategory
        self.operation = operation
        self.user_message = user_message

        for key, value in kwargs.items():
            self.details[key] = value

        self.trace_id = trace_id or str(uuid.uuid4())
        self.error_code = self._generate_error_code()

        full_message = f"{category.value.upper()}: {message}"
        if original_error:
            full_message += (
                f" (caused by: {type(original_error).__name__}: {str(original_error)})"
            )

        super().__init__(full_message)

        self._log_error()

    def _generate_error_code(self) -> str:
        """Generate an error code based on category and subcategory."""
        prefix = CATEGORY_PREFIXES.get(self.category.value, "UNK")
        subcat_code = (self.subcategory or "GEN").upper()[:4]
        identifier = str(uuid.uuid4())[:4]
        return format_error_code(prefix, subcat_code, identifier)

    def _log_error(self) -> None:
        """Log the error with appropriate severity level."""
        log_message = str(self)
        extra: dict[str, Any] = {
            "category": self.category.value,
            "recoverable": self.recoverable,
            "trace_id": self.trace_id,
            "error_code": self.error_code,
        }

        if self.subcategory:
            extra["subcategory"] = self.subcategory

        if self.operation:
            extra["operation"] = self.operation

        if self.severity == ErrorSeverity.CRITICAL:
            logger.critical(log_message, extra=extra, exc_info=self.original_error)
        elif self.severity == ErrorSeverity.ERROR:
            logger.error(log_message, extra=extra, exc_info=self.original_error)
        elif self.severity == ErrorSeverity.WARNING:
            logger.warning(log_message, extra=extra, exc_info=self.original_error)
        else:  # INFO
            logger.info(log_message, extra=extra, exc_info=self.original_error)

    @property
    def exit_code(self) -> int:
        """CLI exit status for this error."""
        return EXIT_CODES.get(self.category, 1)

    def get_user_message(self) -> str:
        """Get a user-friendly error message."""
        if self.user_message:
            return self.user_message
        return self.DEFAULT_USER_MESSAGES.get(
            self.category, self.DEFAULT_USER_MESSAGES[ErrorCategory.UNKNOWN]
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert the error to a dictionary for JSON diagnostics."""
        result: dict[str, Any] = {
            "success": False,
            "error": {
                "code": self.error_code,
                "message": self.message,
                "user_message": self.get_user_message(),
                "category": self.category.value,
                "severity": self.severity.value,
                "recoverable": self.recoverable,
                "trace_id": self.trace_id,
            },
        }

        if self.subcategory:
            result["error"]["subcategory"] = self.subcategory

        if self.operation:
            result["error"]["operation"] = self.operation

        if self.details:
            result["error"]["details"] = self.details

        return result


# Specific error types
class ConfigurationError(StcError):
    """Configuration-related errors."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.CONFIGURATION)
        kwargs.setdefault("severity", ErrorSeverity.ERROR)
        kwargs.setdefault("recoverable", False)
        super().__init__(message, **kwargs)


class ResourceNotFoundError(StcError):
    """Input file not found."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.NOT_FOUND)
        kwargs.setdefault("subcategory", "FILE")
        kwargs.setdefault("severity", ErrorSeverity.ERROR)
        super().__init__(message, **kwargs)


class ValidationError(StcError):
    """Input validation errors."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.VALIDATION)
        kwargs.setdefault("severity", ErrorSeverity.WARNING)
        kwargs.setdefault("recoverable", True)
        super().__init__(message, **kwargs)


class CodeParseError(ValidationError):
    """A code string could not be parsed; ``details['position']`` is 1-based."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("subcategory", "COD")
        super().__init__(message, **kwargs)


class EnumerationCapError(StcError):
    """Enumeration would exceed the configured cap."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.CAPACITY)
        kwargs.setdefault("subcategory", "ENUM")
        kwargs.setdefault("severity", ErrorSeverity.WARNING)
        super().__init__(message, **kwargs)


class InfeasibleDesignError(StcError):
    """A codebook cannot be built for the requested scheme."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.DESIGN)
        kwargs.setdefault("severity", ErrorSeverity.WARNING)
        super().__init__(message, **kwargs)


class EvanescentSteeringError(StcError):
    """The requested shift steers outside visible space."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.DESIGN)
        kwargs.setdefault("subcategory", "EVAN")
        kwargs.setdefault("severity", ErrorSeverity.WARNING)
        super().__init__(message, **kwargs)


class PilotUnusableError(StcError):
    """The pilot symbols carry no usable energy."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.SIGNAL)
        kwargs.setdefault("subcategory", "PLT")
        kwargs.setdefault("severity", ErrorSeverity.WARNING)
        super().__init__(message, **kwargs)


class SignalError(StcError):
    """Receiver input does not match the configured timing."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.SIGNAL)
        kwargs.setdefault("severity", ErrorSeverity.ERROR)
        super().__init__(message, **kwargs)


class InternalError(StcError):
    """Internal errors."""

    def __init__(self, message: str, **kwargs: Any) -> None:
        kwargs.setdefault("category", ErrorCategory.INTERNAL)
        kwargs.setdefault("severity", ErrorSeverity.ERROR)
        kwargs.setdefault("recoverable", False)
        super().__init__(message, **kwargs)


def exit_code_for(error: BaseException) -> int:
    """CLI exit status: the category's code for StcError, 1 for anything else."""
    if isinstance(error, StcError):
        return error.exit_code
    return 1


def handle_exception(e: Exception, context: str = "", operation: str = "") -> StcError:
    """Convert standard exceptions to appropriate StcError types.

    Args:
        e: The exception to handle
        context: Optional context string to include in the error message
        operation: Optional name of the operation being performed

    Returns:
        An appropriate StcError instance

    """
    context_str = f" while {context}" if context else ""

    if isinstance(e, StcError):
        if operation and not e.operation:
            e.operation = operation
        return e

    error_mapping: dict[type[Exception], type[StcError]] = {
        FileNotFoundError: ResourceNotFoundError,
        ValueError: ValidationError,
    }

    for exc_type, error_class in error_mapping.items():
        if isinstance(e, exc_type):
            return error_class(
                f"{str(e)}{context_str}", original_error=e, operation=operation
            )

    return InternalError(
        f"Unexpected error{context_str}: {str(e)}",
        original_error=e,
        operation=operation,
        subcategory="UNH",
    )
