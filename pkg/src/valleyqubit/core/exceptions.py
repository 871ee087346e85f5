# exceptions.py - Custom exception classes for valley-qubit-kit
# Defines domain-specific exceptions shared by the services, the CLI and the HTTP app.

from typing import Optional


class ValleyQubitError(Exception):
    """Base class for every error raised by the toolkit."""
    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)


class DomainError(ValleyQubitError):
    """Raised when an input lies outside an operation's domain."""
    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


class CalibrationError(ValleyQubitError):
    """Raised when a calibration cannot be used (degenerate extrema, q3 <= 0)."""
    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


class FitError(ValleyQubitError):
    """Raised when a least-squares problem is rank deficient."""
    def __init__(self, message: str, rank: Optional[int] = None):
        self.rank = rank
        super().__init__(message)


class ConfigError(ValleyQubitError):
    """Raised when a run configuration is invalid or incomplete."""
    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


class ScanParseError(ValleyQubitError):
    """Raised when a scan or result file cannot be parsed."""
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        if line is not None:
            message = f"{path or '<input>'}:{line}: {message}"
        super().__init__(message)


class StorageError(ValleyQubitError):
    """Wrapper for filesystem failures while reading or writing artifacts."""
    def __init__(self, message: str, path: Optional[str] = None, original_error: Optional[Exception] = None):
        self.path = path
        self.original_error = original_error
        super().__init__(message)
