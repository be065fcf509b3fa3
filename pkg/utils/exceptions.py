"""
Custom exceptions for the Phase Estimation Lab
"""

class PhaseLabError(Exception):
    """Base exception for the Phase Estimation Lab"""
    pass

class InvalidArgumentError(PhaseLabError, ValueError):
    """Raised when an argument falls outside an operation's domain"""
    pass

class NumericError(PhaseLabError):
    """Raised when a numerical routine fails or misses its accuracy contract"""

    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

class ContractViolationError(PhaseLabError):
    """Raised when an object is used in a mode that does not support the call"""
    pass

class ConfigurationError(PhaseLabError):
    """Raised when configuration or an experiment plan is invalid"""
    pass

class ValidationError(PhaseLabError):
    """Raised when data validation fails"""
    pass

class ExportError(PhaseLabError):
    """Raised when writing or reading an artifact fails"""
    pass
