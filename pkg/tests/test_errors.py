"""Unit tests for error handling components."""

import logging

import pytest

from stc_ris.error_codes import (
    format_error_code,
    parse_error_code,
)
from stc_ris.errors import (
    CodeParseError,
    ConfigurationError,
    EnumerationCapError,
    ErrorCategory,
    ErrorSeverity,
    EvanescentSteeringError,
    InfeasibleDesignError,
    InternalError,
    PilotUnusableError,
    ResourceNotFoundError,
    SignalError,
    StcError,
    ValidationError,
    exit_code_for,
    handle_exception,
)


class TestStcError:
    """Tests for the StcError base class."""

    def test_basic(self):
        """Test creating a basic StcError."""
        error = StcError("Test error message")
        assert error.message == "Test error message"
        assert error.category == ErrorCategory.UNKNOWN
        assert str(error) == "UNKNOWN: Test error message"
        assert error.exit_code == 1

    def test_keyword_context_lands_in_details(self):
        """Test that extra keyword arguments are stored as details."""
        error = ValidationError("bad bit", subcategory="FMT", position=4)
        assert error.details == {"position": 4}
        assert error.error_code.startswith("VAL_FMT_")

    def test_original_error_in_message(self):
        """Test that the wrapped cause appears in the string form."""
        cause = ValueError("boom")
        error = ConfigurationError("Invalid link configuration", original_error=cause)
        assert "caused by: ValueError: boom" in str(error)
        assert error.recoverable is False

    def test_to_dict(self):
        """Test converting StcError to a dictionary."""
        error = InfeasibleDesignError(
            "16psk unreachable by shifts", subcategory="SHFT", order=16
        )
        data = error.to_dict()
        assert data["success"] is False
        assert data["error"]["category"] == "design"
        assert data["error"]["subcategory"] == "SHFT"
        assert data["error"]["details"]["order"] == 16
        assert data["error"]["user_message"] == "The requested design cannot be realized."

    def test_logged_at_its_severity(self, caplog):
        """Test that errors log themselves at the level of their severity."""
        with caplog.at_level(logging.WARNING, logger="stc_ris"):
            ValidationError("odd payload")
            SignalError("short record")
        levels = [r.levelname for r in caplog.records]
        assert levels == ["WARNING", "ERROR"]


class TestSpecificErrors:
    """Tests for specific error subclasses and their exit codes."""

    def test_user_errors_exit_two(self):
        """Test that every user-facing error class maps to exit code 2."""
        errors = [
            ConfigurationError("x"),
            ResourceNotFoundError("x"),
            ValidationError("x"),
            CodeParseError("x"),
            EnumerationCapError("x"),
            InfeasibleDesignError("x"),
            EvanescentSteeringError("x"),
            PilotUnusableError("x"),
            SignalError("x"),
        ]
        assert {exit_code_for(e) for e in errors} == {2}

    def test_internal_errors_exit_one(self):
        """Test that internal and foreign errors map to exit code 1."""
        assert exit_code_for(InternalError("bug")) == 1
        assert exit_code_for(RuntimeError("bug")) == 1

    def test_default_subcategories(self):
        """Test the default subcategory of each specific error class."""
        assert CodeParseError("x").subcategory == "COD"
        assert EnumerationCapError("x").subcategory == "ENUM"
        assert EvanescentSteeringError("x").error_code.startswith("DSN_EVAN_")
        assert PilotUnusableError("x").error_code.startswith("SIG_PLT_")
        assert ResourceNotFoundError("x").error_code.startswith("NF_FILE_")

    def test_code_parse_error_is_a_validation_error(self):
        """Test that CodeParseError is a ValidationError with WARNING severity."""
        error = CodeParseError("bad char", position=3)
        assert isinstance(error, ValidationError)
        assert error.severity == ErrorSeverity.WARNING


class TestHandleException:
    """Tests for handle_exception."""

    def test_file_not_found(self):
        """Test that FileNotFoundError becomes ResourceNotFoundError with context."""
        error = handle_exception(FileNotFoundError("gone"), "loading config")
        assert isinstance(error, ResourceNotFoundError)
        assert "while loading config" in error.message

    def test_value_error(self):
        """Test that ValueError becomes ValidationError."""
        assert isinstance(handle_exception(ValueError("nan")), ValidationError)

    def test_unknown_exception(self):
        """Test that other exceptions become InternalError tagged with the operation."""
        error = handle_exception(KeyError("k"), operation="map")
        assert isinstance(error, InternalError)
        assert error.operation == "map"

    def test_stc_error_passes_through(self):
        """Test that an StcError is returned as is, with the operation filled in."""
        original = SignalError("short")
        assert handle_exception(original, operation="demodulate") is original
        assert original.operation == "demodulate"


class TestErrorCodes:
    """Tests for error code helpers."""

    def test_parse(self):
        """Test splitting an error code into its readable parts."""
        parsed = parse_error_code("DSN_SHFT_ab12")
        assert parsed == {
            "category": "Design",
            "subcategory": "Scheme unreachable by shifts",
            "identifier": "ab12",
            "full_code": "DSN_SHFT_ab12",
        }

    def test_parse_unknown(self):
        """Test that unknown or truncated codes parse to None."""
        assert parse_error_code("XYZ_FOO_0000") is None
        assert parse_error_code("VAL") is None

    def test_format(self):
        """Test assembling an error code from its parts."""
        assert format_error_code("CAP", "ENUM", "0001") == "CAP_ENUM_0001"

    @pytest.mark.parametrize(
        ("error_class", "subcategory"),
        [
            (ConfigurationError, None),
            (ConfigurationError, "ENV"),
            (ConfigurationError, "LINK"),
            (ConfigurationError, "MANI"),
            (ResourceNotFoundError, None),
            (ValidationError, "FMT"),
            (CodeParseError, None),
            (EnumerationCapError, None),
            (InfeasibleDesignError, "ZERO"),
            (EvanescentSteeringError, None),
            (PilotUnusableError, None),
            (SignalError, "SHRT"),
            (InternalError, "UNH"),
        ],
    )
    def test_generated_codes_parse(self, error_class, subcategory):
        """Test that the code generated for every error class parses back."""
        kwargs = {} if subcategory is None else {"subcategory": subcategory}
        error = error_class("failure", **kwargs)
        assert parse_error_code(error.error_code) is not None
