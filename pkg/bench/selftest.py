"""
Quick invariant checks behind the `selftest` command
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from estimation.angle import angular_distance
from estimation.oracle import OracleMode, ShotOracle
from estimation.qpe_baseline import outcome_distribution
from estimation.rpe import DELTA_LIMIT, RpeConfig, alpha, beta, run_rpe, shots_per_level
from estimation.spectrum import SpectralDecomposition, tfim_spectral_model
from bench.summary import wilson_interval

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _reduction_identity() -> CheckResult:
    deltas = np.linspace(0.0, DELTA_LIMIT, 10_000, endpoint=False)
    worst = max(abs(beta(d, 1.0) - alpha(d)) / math.ulp(alpha(d)) for d in deltas)
    return CheckResult("beta(delta, 1) == alpha(delta)", worst <= 1.0, f"worst gap {worst:.1f} ulp")


def _shot_fixture() -> CheckResult:
    n_s = shots_per_level(1e-3, 0.1, 0.2, 1.0)
    return CheckResult("N_s(1e-3, 0.1, 0.2, 1) == 202", n_s == 202, f"got {n_s}")


def _exact_recovery() -> CheckResult:
    rng = np.random.default_rng(7)
    config = RpeConfig(epsilon=1e-6, eta=0.1, delta=0.0)
    worst = 0.0
    for phase in rng.uniform(-math.pi, math.pi, size=20):
        sd = SpectralDecomposition(phases=[phase], weights=[1.0])
        result = run_rpe(config, ShotOracle(sd, mode=OracleMode.EXACT))
        worst = max(worst, angular_distance(result.theta_J, sd.target_phase))
    return CheckResult("exact oracle recovers the phase", worst <= 1e-12, f"worst error {worst:.3g}")


def _qpe_normalization() -> CheckResult:
    rng = np.random.default_rng(11)
    worst = max(abs(outcome_distribution(p, 10).sum() - 1.0) for p in rng.uniform(-math.pi, math.pi, 100))
    return CheckResult("QPE outcome distribution sums to 1", worst <= 1e-9, f"worst deviation {worst:.3g}")


def _tfim_ground_phase() -> CheckResult:
    model = tfim_spectral_model(8, 4.0)
    phase = float(model.phases[model.ground_index])
    return CheckResult("TFIM(8, 4) ground phase is -pi/4", abs(phase + math.pi / 4) <= 1e-12, f"got {phase!r}")


def _wilson_reference() -> CheckResult:
    _, high = wilson_interval(0, 10)
    return CheckResult("Wilson upper bound at 0/10", abs(high - 0.2775) < 5e-4, f"got {high:.4f}")


CHECKS: List[Callable[[], CheckResult]] = [
    _reduction_identity,
    _shot_fixture,
    _exact_recovery,
    _qpe_normalization,
    _tfim_ground_phase,
    _wilson_reference,
]


def run_selftest() -> List[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            result = check()
        except Exception as e:
            logger.error(f"Self-test {check.__name__} raised: {e}")
            result = CheckResult(check.__name__.strip("_").replace("_", " "), False, f"raised {e!r}")
        results.append(result)
        logger.debug(f"{result.name}: {'ok' if result.passed else 'FAILED'} ({result.detail})")
    return results
