"""
Utility helper functions for the Phase Estimation Lab
"""

import json
import logging
import math
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
import yaml

from utils.exceptions import ConfigurationError, ValidationError

logger = logging.getLogger(__name__)

# Data validation helpers
class DataValidator:
    """Data validation utilities"""

    @staticmethod
    def validate_dataframe(df: pd.DataFrame, required_columns: List[str] = None) -> bool:
        """Validate DataFrame structure and content"""
        if df is None or df.empty:
            raise ValidationError("DataFrame is empty or None")

        if required_columns:
            missing_columns = set(required_columns) - set(df.columns)
            if missing_columns:
                raise ValidationError(f"Missing required columns: {sorted(missing_columns)}")

        return True

# Number formatting helpers
class NumberFormatter:
    """Number formatting utilities"""

    @staticmethod
    def format_roundtrip(value: Optional[float]) -> str:
        """17 significant digits, enough to round-trip any float64"""
        if value is None or (isinstance(value, float) and math.isnan(value)):
            return ""
        return format(float(value), ".17g")

    @staticmethod
    def format_duration(seconds: float) -> str:
        """Format duration in human-readable format"""
        if seconds < 60:
            return f"{seconds:.1f}s"
        elif seconds < 3600:
            return f"{seconds/60:.1f}m"
        else:
            return f"{seconds/3600:.1f}h"

# File handling helpers
class FileHelper:
    """File handling utilities"""

    @staticmethod
    def ensure_parent(path: Union[str, Path]) -> Path:
        """Ensure the parent directory of a file path exists"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    @staticmethod
    def read_config_file(file_path: Union[str, Path]) -> Dict[str, Any]:
        """Read configuration file (JSON or YAML)"""
        file_path = Path(file_path)

        if not file_path.exists():
            raise ConfigurationError(f"Config file not found: {file_path}")

        with open(file_path, 'r', encoding='utf-8') as f:
            if file_path.suffix.lower() == '.json':
                data = json.load(f)
            elif file_path.suffix.lower() in ['.yml', '.yaml']:
                data = yaml.safe_load(f)
            else:
                raise ConfigurationError(f"Unsupported config file format: {file_path.suffix}")

        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {file_path} must contain a mapping at top level")
        return data

# Configuration helpers
class ConfigHelper:
    """Configuration management utilities"""

    @staticmethod
    def merge_configs(*configs: Dict[str, Any]) -> Dict[str, Any]:
        """Merge configuration dictionaries; later ones win, None values are skipped"""
        merged = {}
        for config in configs:
            for key, value in (config or {}).items():
                if value is None:
                    continue
                if isinstance(value, dict) and isinstance(merged.get(key), dict):
                    merged[key] = ConfigHelper.merge_configs(merged[key], value)
                else:
                    merged[key] = value
        return merged

# Performance monitoring helpers
class PerformanceMonitor:
    """Performance monitoring utilities"""

    def __init__(self):
        self.start_time = None
        self.checkpoints = {}

    def start(self):
        """Start performance monitoring"""
        self.start_time = time.perf_counter()
        logger.debug("Performance monitoring started")

    def checkpoint(self, name: str):
        """Add a checkpoint"""
        if self.start_time is None:
            self.start()

        elapsed = time.perf_counter() - self.start_time
        self.checkpoints[name] = elapsed
        logger.debug(f"Checkpoint '{name}': {elapsed:.3f}s")

    def get_elapsed_time(self) -> float:
        """Get total elapsed time"""
        if self.start_time is None:
            return 0.0
        return time.perf_counter() - self.start_time

    def get_report(self) -> Dict[str, Any]:
        """Get performance report"""
        return {
            "total_time": self.get_elapsed_time(),
            "checkpoints": self.checkpoints.copy()
        }
