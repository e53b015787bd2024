"""Tests for the decorators module."""

import pytest

from stc_ris.decorators import (
    toolkit_operation,
    with_error_handling,
    with_input_validation,
    with_performance_logging,
)
from stc_ris.errors import (
    InternalError,
    ResourceNotFoundError,
    SignalError,
    ValidationError,
)
from stc_ris.monitoring.metrics import get_metrics


class TestWithErrorHandling:
    """Test the error handling decorator."""

    def test_success(self):
        """Test that the wrapped function's result is returned unchanged."""
        @with_error_handling("design")
        def func():
            return "success"

        assert func() == "success"

    def test_stc_errors_pass_through(self):
        """Test that an StcError is re-raised as the same object."""
        original = SignalError("short record")

        @with_error_handling("demodulate")
        def func():
            raise original

        with pytest.raises(SignalError) as excinfo:
            func()
        assert excinfo.value is original

    def test_foreign_errors_are_converted(self):
        """Test that builtin exceptions become StcError subclasses with the cause kept."""
        @with_error_handling("load")
        def missing():
            raise FileNotFoundError("codebook.json")

        @with_error_handling("search")
        def broken():
            raise ZeroDivisionError("division by zero")

        with pytest.raises(ResourceNotFoundError):
            missing()
        with pytest.raises(InternalError) as excinfo:
            broken()
        assert excinfo.value.operation == "search"
        assert isinstance(excinfo.value.__cause__, ZeroDivisionError)


class TestWithPerformanceLogging:
    """Test the timing decorator."""

    def test_records_duration(self):
        """Test that a call records one timing sample under the given name."""
        @with_performance_logging(name="enumerate")
        def func():
            return 3

        assert func() == 3
        timings = get_metrics().snapshot()["timings"]
        assert timings["enumerate"]["count"] == 1

    def test_records_on_failure(self):
        """Test that a timing sample is recorded even when the call raises."""
        @with_performance_logging()
        def func():
            raise ValueError("nope")

        with pytest.raises(ValueError):
            func()
        timings = get_metrics().snapshot()["timings"]
        assert any(name.endswith("func") for name in timings)

    def test_slow_operations_warn(self, caplog):
        """Test that a call above the threshold logs a slow-operation warning."""
        @with_performance_logging(log_threshold_ms=-1.0, name="sweep")
        def func():
            return None

        func()
        assert "Slow operation sweep" in caplog.text


class TestWithInputValidation:
    """Test argument validators."""

    def test_validators_see_defaults(self):
        """Test that validators receive bound arguments with defaults applied."""
        seen = {}

        def check(arguments):
            seen.update(arguments)
            if arguments["reps"] < 1:
                raise ValidationError("reps must be >= 1")

        @with_input_validation(check)
        def schedule(payload, reps=1):
            return payload * reps

        assert schedule("ab") == "ab"
        assert seen == {"payload": "ab", "reps": 1}
        with pytest.raises(ValidationError):
            schedule("ab", reps=0)


class TestToolkitOperation:
    """Test the combined decorator."""

    def test_combines_timing_and_conversion(self):
        """Test that toolkit_operation both times the call and converts its errors."""
        @toolkit_operation("table")
        def func():
            raise KeyError("L")

        with pytest.raises(InternalError):
            func()
        assert get_metrics().snapshot()["timings"]["table"]["count"] == 1
