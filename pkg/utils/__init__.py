# utils/__init__.py
"""
Utility functions and helpers for the Phase Estimation Lab
"""

from .exceptions import (
    PhaseLabError,
    InvalidArgumentError,
    NumericError,
    ContractViolationError,
    ConfigurationError,
    ValidationError,
    ExportError
)

from .logging_config import setup_logging, get_logger, log_performance, ContextualLogger, TrialLogger
from .helpers import (
    DataValidator,
    NumberFormatter,
    FileHelper,
    ConfigHelper,
    PerformanceMonitor
)
from .cache_manager import SpectrumCache, get_spectrum_cache, cached_spectrum

__all__ = [
    # Exceptions
    'PhaseLabError',
    'InvalidArgumentError',
    'NumericError',
    'ContractViolationError',
    'ConfigurationError',
    'ValidationError',
    'ExportError',

    # Logging
    'setup_logging',
    'get_logger',
    'log_performance',
    'ContextualLogger',
    'TrialLogger',

    # Helpers
    'DataValidator',
    'NumberFormatter',
    'FileHelper',
    'ConfigHelper',
    'PerformanceMonitor',

    # Cache
    'SpectrumCache',
    'get_spectrum_cache',
    'cached_spectrum'
]
