"""
Application settings for the Phase Estimation Lab

Values come from environment variables (a local .env file is loaded first)
and fall back to the defaults below.
"""

import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


@dataclass
class AppConfig:
    """General application configuration"""
    APP_TITLE: str = field(default_factory=lambda: os.getenv("APP_TITLE", "Phase Estimation Lab"))
    LOG_LEVEL: str = field(default_factory=lambda: os.getenv("LOG_LEVEL", "INFO"))
    LOG_DIR: str = field(default_factory=lambda: os.getenv("LOG_DIR", "logs"))
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class BenchConfig:
    """Defaults for the experiment harness"""
    DEFAULT_WORKERS: int = field(default_factory=lambda: _env_int("PHASELAB_WORKERS", os.cpu_count() or 1))
    DEFAULT_TRIALS: int = field(default_factory=lambda: _env_int("PHASELAB_TRIALS", 200))
    FIGURE_TRIALS: int = 10
    DEFAULT_MASTER_SEED: int = field(default_factory=lambda: _env_int("PHASELAB_MASTER_SEED", 20230101))
    OUTPUT_DIR: str = field(default_factory=lambda: os.getenv("PHASELAB_OUTPUT_DIR", "results"))

    DEFAULT_ETA: float = 0.1
    # delta = (1 - p0) * margin unless a plan pins delta explicitly
    DELTA_MARGIN: float = 1.05

    # QPE outcome sampling: inverse-CDF over the tabulated kernel up to this
    # many ancillas, rejection sampling above
    QPE_TABULATE_MAX_ANCILLA: int = 16
    QPE_MAX_ANCILLA: int = 24
    QPE_DEFAULT_SHOTS: int = 1

    # Spectrum cache (dense eigendecompositions keyed by model parameters)
    SPECTRUM_CACHE_MAX_ENTRIES: int = field(default_factory=lambda: _env_int("SPECTRUM_CACHE_MAX_ENTRIES", 16))


@dataclass
class PlotConfig:
    """Plot script configuration"""
    CHART_WIDTH: int = 420
    CHART_HEIGHT: int = 320
    COLOR_SCHEME: str = "category10"


app_config = AppConfig()
bench_config = BenchConfig()
plot_config = PlotConfig()
