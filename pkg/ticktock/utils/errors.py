"""
Toolkit Error Handler
Typed error hierarchy with stable error codes and CLI exit codes.
"""

from typing import Any, Dict, Optional


class ErrorCode:
    # Data errors (exit 1)
    INVALID_RECORD = "DATA_001"
    DUPLICATE_ID = "DATA_002"
    UNKNOWN_ID = "DATA_003"
    EMPTY_INPUT = "DATA_004"
    NON_FINITE_VALUE = "DATA_005"

    # Schema errors (exit 1)
    MALFORMED_JSON = "SCHEMA_001"
    MISSING_REQUIRED_FIELD = "SCHEMA_002"
    INVALID_FIELD_VALUE = "SCHEMA_003"

    # Image / IO errors (exit 1)
    UNDECODABLE_IMAGE = "IO_001"
    UNWRITABLE_OUTPUT = "IO_002"
    MISSING_INPUT = "IO_003"

    # Usage / configuration errors (exit 2)
    INVALID_ARGUMENT = "CONFIG_001"
    UNKNOWN_CONFIG_KEY = "CONFIG_002"
    INVALID_CONFIG_FILE = "CONFIG_003"

    # Unexpected failures
    INTERNAL_ERROR = "SYS_001"


EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2


class ToolkitError(Exception):
    """Base toolkit exception class."""

    def __init__(self,
                 message: str,
                 error_code: str,
                 exit_code: int = EXIT_DATA_ERROR,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': type(self).__name__,
            'error_code': self.error_code,
            'message': self.message,
            'exit_code': self.exit_code,
            'details': self.details,
        }


class DataError(ToolkitError):
    """Runtime data errors: join failures, empty inputs, non-finite values."""

    def __init__(self, message: str, error_code: str = ErrorCode.INVALID_RECORD,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_code, EXIT_DATA_ERROR, details)


class JoinError(DataError):
    """Prediction/annotation join failures."""

    def __init__(self, message: str, error_code: str, record_id: str,
                 details: Optional[Dict[str, Any]] = None):
        details = details or {}
        details['id'] = record_id
        super().__init__(message, error_code, details)
        self.record_id = record_id


class SchemaError(DataError):
    """Malformed JSONL input, reported with path and 1-based line number."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None,
                 error_code: str = ErrorCode.INVALID_FIELD_VALUE,
                 details: Optional[Dict[str, Any]] = None):
        details = details or {}
        if path is not None:
            details['path'] = str(path)
        if line_number is not None:
            details['line'] = line_number
        location = ''
        if path is not None and line_number is not None:
            location = f"{path}:{line_number}: "
        elif line_number is not None:
            location = f"line {line_number}: "
        super().__init__(f"{location}{message}", error_code, details)
        self.path = path
        self.line_number = line_number


class ImageDecodeError(ToolkitError):
    """Image bytes that cannot be decoded."""

    def __init__(self, message: str, path: str, details: Optional[Dict[str, Any]] = None):
        details = details or {}
        details['path'] = str(path)
        super().__init__(f"{message}: {path}", ErrorCode.UNDECODABLE_IMAGE, EXIT_DATA_ERROR, details)
        self.path = path


class OutputError(ToolkitError):
    """Output directory or file cannot be written."""

    def __init__(self, message: str, path: str, details: Optional[Dict[str, Any]] = None):
        details = details or {}
        details['path'] = str(path)
        super().__init__(f"{message}: {path}", ErrorCode.UNWRITABLE_OUTPUT, EXIT_DATA_ERROR, details)
        self.path = path


class ConfigError(ToolkitError):
    """Usage and configuration errors."""

    def __init__(self, message: str, error_code: str = ErrorCode.INVALID_CONFIG_FILE,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_code, EXIT_USAGE_ERROR, details)


class ValidationError(ToolkitError, ValueError):
    """Invalid arguments passed to a library operation."""

    def __init__(self, message: str, field: Optional[str] = None,
                 details: Optional[Dict[str, Any]] = None):
        details = details or {}
        if field:
            details['field'] = field
        super().__init__(message, ErrorCode.INVALID_ARGUMENT, EXIT_USAGE_ERROR, details)
        self.field = field


def raise_duplicate_id(record_id: str):
    """Raise join error for a prediction id seen twice."""
    raise JoinError(f"Duplicate prediction id: {record_id}", ErrorCode.DUPLICATE_ID, record_id)


def raise_unknown_id(record_id: str):
    """Raise join error for a prediction id with no annotation."""
    raise JoinError(f"Prediction id joins no annotation: {record_id}", ErrorCode.UNKNOWN_ID, record_id)
