# bench/methods/__init__.py
"""
Estimation methods available to experiment plans
"""

from bench.plan import ExperimentPlan, MethodKind
from utils.exceptions import ConfigurationError

from .base_method import BaseMethod
from .qpe_method import QpeMethod
from .rpe_method import RpeMethod

METHODS = {
    MethodKind.RPE: RpeMethod,
    MethodKind.RPE_LOWDEPTH: RpeMethod,
    MethodKind.QPE: QpeMethod,
}


def get_method(kind: MethodKind, plan: ExperimentPlan) -> BaseMethod:
    try:
        return METHODS[MethodKind(kind)](plan)
    except (KeyError, ValueError):
        raise ConfigurationError(f"Unknown method '{kind}'")


__all__ = ['BaseMethod', 'RpeMethod', 'QpeMethod', 'METHODS', 'get_method']
