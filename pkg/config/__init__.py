# config/__init__.py
"""
Configuration management for the Phase Estimation Lab
"""

from .settings import app_config, bench_config, plot_config

__all__ = ['app_config', 'bench_config', 'plot_config']
