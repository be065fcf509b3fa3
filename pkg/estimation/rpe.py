"""
Robust phase estimation

One estimator covers both the full-depth scheme and its low-depth variant:
the depth prefactor ``xi`` shrinks the deepest circuit to about xi/epsilon
and the noise radius from α(δ) to β(δ, ξ). At xi = 1 the two coincide,
since β(δ, 1) = α(δ).
"""

import cmath
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, NamedTuple, Tuple

import numpy as np

from estimation.angle import Angle, angular_distance, candidate_set, nearest_candidate
from estimation.oracle import PhaseOracle
from estimation.spectrum import SpectralDecomposition, exact_expectation
from utils.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

SQRT3_OVER_2 = math.sqrt(3.0) / 2.0
# δ must stay below 2√3 − 3 for α(δ) to be positive
DELTA_LIMIT = 2.0 * math.sqrt(3.0) - 3.0
# ξ/ε within this many ulps of a power of two snaps to it before the ceiling
_SNAP_ULPS = 4


def _check_finite(name: str, value: float) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)) \
            or not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be a finite real number, got {value!r}")
    return float(value)


def alpha(delta: float) -> float:
    """α(δ) = (√3/2)(1 − δ) − δ, zero at δ = 2√3 − 3."""
    delta = _check_finite("delta", delta)
    if not 0.0 <= delta <= DELTA_LIMIT:
        raise InvalidArgumentError(f"delta must lie in [0, 2√3 − 3], got {delta}")
    return SQRT3_OVER_2 * (1.0 - delta) - delta


def xi_lower_bound(delta: float) -> float:
    """(3/π) arcsin(δ / (1 − δ)); β(δ, ξ) > 0 exactly when ξ exceeds it."""
    delta = _check_finite("delta", delta)
    if not 0.0 <= delta < 0.5:
        raise InvalidArgumentError(f"delta must lie in [0, 1/2), got {delta}")
    return 3.0 / math.pi * math.asin(delta / (1.0 - delta))


def beta(delta: float, xi: float) -> float:
    """β(δ, ξ) = (1 − δ) sin(πξ/3) − δ."""
    delta = _check_finite("delta", delta)
    xi = _check_finite("xi", xi)
    if not 0.0 <= delta < DELTA_LIMIT:
        raise InvalidArgumentError(f"delta must lie in [0, 2√3 − 3), got {delta}")
    floor = xi_lower_bound(delta)
    if not floor < xi <= 1.0:
        raise InvalidArgumentError(f"xi must lie in ({floor:.6g}, 1] for delta={delta}, got {xi}")
    # sin(π/3) spelled as √3/2 so that β(δ, 1) is bitwise α(δ)
    sine = SQRT3_OVER_2 if xi == 1.0 else math.sin(math.pi * xi / 3.0)
    value = sine * (1.0 - delta) - delta
    if value <= 0.0:
        raise InvalidArgumentError(f"beta({delta}, {xi}) is not positive")
    return value


def level_count(epsilon: float, xi: float = 1.0) -> int:
    """J = ⌈log₂(ξ/ε)⌉, never negative."""
    epsilon = _check_finite("epsilon", epsilon)
    xi = _check_finite("xi", xi)
    if epsilon <= 0.0 or xi <= 0.0:
        raise InvalidArgumentError("epsilon and xi must be positive")
    ratio = xi / epsilon
    exponent = round(math.log2(ratio))
    nearest = math.ldexp(1.0, exponent)
    if abs(ratio - nearest) <= _SNAP_ULPS * math.ulp(nearest):
        levels = exponent
    else:
        levels = math.ceil(math.log2(ratio))
    return max(int(levels), 0)


def shots_per_level(epsilon: float, eta: float, delta: float, xi: float = 1.0) -> int:
    """N_s = 2⌈(4/β²)(log(4/η) + log(J + 1))⌉ with natural logarithms."""
    eta = _check_finite("eta", eta)
    if eta <= 0.0:
        raise InvalidArgumentError(f"eta must be positive, got {eta}")
    radius = beta(delta, xi)
    levels = level_count(epsilon, xi)
    bound = 4.0 / radius ** 2 * (math.log(4.0 / eta) + math.log(levels + 1))
    return max(2, 2 * math.ceil(bound))


class Hypotheses(NamedTuple):
    """Which hypotheses of the accuracy guarantee hold for a run."""
    overlap: bool  # p0 > 1 − δ
    delta: bool    # δ < 2√3 − 3
    xi: bool       # ξ above the noise floor and at most 1

    @property
    def all(self) -> bool:
        return self.overlap and self.delta and self.xi


def theorem_hypotheses(p0: float, delta: float, xi: float = 1.0) -> Hypotheses:
    delta_ok = 0.0 <= delta < DELTA_LIMIT
    xi_ok = delta_ok and xi_lower_bound(delta) < xi <= 1.0
    return Hypotheses(overlap=p0 > 1.0 - delta, delta=delta_ok, xi=xi_ok)


@dataclass(frozen=True)
class RpeConfig:
    """Inputs (ε, η, δ, ξ) and the derived level count J and shots N_s."""
    epsilon: float
    eta: float
    delta: float
    xi: float = 1.0

    def __post_init__(self):
        epsilon = _check_finite("epsilon", self.epsilon)
        eta = _check_finite("eta", self.eta)
        if epsilon <= 0.0:
            raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
        if not 0.0 < eta < 1.0:
            raise InvalidArgumentError(f"eta must lie in (0, 1), got {eta}")
        # validates δ and ξ together
        beta(self.delta, self.xi)
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "xi", float(self.xi))

    @classmethod
    def full_depth(cls, epsilon: float, eta: float, delta: float) -> "RpeConfig":
        """The full-depth scheme: ξ = 1, noise radius α(δ)."""
        return cls(epsilon=epsilon, eta=eta, delta=delta, xi=1.0)

    @property
    def J(self) -> int:
        return level_count(self.epsilon, self.xi)

    @property
    def N_s(self) -> int:
        return shots_per_level(self.epsilon, self.eta, self.delta, self.xi)

    @property
    def radius(self) -> float:
        return beta(self.delta, self.xi)

    @property
    def predicted_T_max(self) -> int:
        return 1 << self.J

    @property
    def predicted_T_total(self) -> int:
        return self.N_s * ((1 << (self.J + 1)) - 1)


@dataclass(frozen=True)
class LevelRecord:
    j: int
    z: complex
    arg_z: Angle
    theta: Angle
    total_depth: int
    max_depth: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "j": self.j,
            "z": [self.z.real, self.z.imag],
            "arg_z": float(self.arg_z),
            "theta": float(self.theta),
            "total_depth": self.total_depth,
            "max_depth": self.max_depth,
        }


@dataclass(frozen=True)
class RpeTrace:
    levels: Tuple[LevelRecord, ...] = ()

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)


@dataclass(frozen=True)
class RpeResult:
    theta_J: Angle
    J: int
    N_s: int
    T_max: int
    T_total: int
    trace: RpeTrace = field(repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta_J": float(self.theta_J),
            "J": self.J,
            "N_s": self.N_s,
            "T_max": self.T_max,
            "T_total": self.T_total,
            "trace": [level.to_dict() for level in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def run_rpe(config: RpeConfig, oracle: PhaseOracle) -> RpeResult:
    """
    θ_{-1} = 0; for j = 0..J estimate Z_j with N_s shots and keep the member
    of S_j closest to θ_{j-1}.
    """
    levels_total = config.J
    shots = config.N_s
    start_total, _ = oracle.ledger.snapshot()

    theta = Angle(0.0)
    levels = []
    run_max = 0
    for j in range(levels_total + 1):
        before, _ = oracle.ledger.snapshot()
        z = oracle.estimate_Z(j, shots)
        arg_z = Angle(cmath.phase(z))
        theta = nearest_candidate(candidate_set(arg_z, j), theta)
        total_depth, _ = oracle.ledger.snapshot()
        # the ledger may predate this run; level j reaches depth 2**j when charged
        if total_depth > before:
            run_max = max(run_max, 1 << j)
        levels.append(LevelRecord(j=j, z=complex(z), arg_z=arg_z, theta=theta,
                                  total_depth=total_depth - start_total, max_depth=run_max))

    total_depth, _ = oracle.ledger.snapshot()
    logger.debug(f"RPE finished: J={levels_total} N_s={shots} theta_J={float(theta):.12f}")
    return RpeResult(theta_J=theta, J=levels_total, N_s=shots,
                     T_max=run_max, T_total=total_depth - start_total,
                     trace=RpeTrace(tuple(levels)))


@dataclass(frozen=True)
class TraceAudit:
    """Per-level checks of a finished run against the known spectrum."""
    in_ball: Tuple[bool, ...]
    in_interval: Tuple[bool, ...]
    final_error: float
    success: bool

    @property
    def all_in_ball(self) -> bool:
        return all(self.in_ball)

    @property
    def chain_holds(self) -> bool:
        return all(self.in_interval)

    @property
    def consistent(self) -> bool:
        """Every level inside the noise ball implies the interval chain and final accuracy."""
        return not self.all_in_ball or (self.chain_holds and self.success)


def audit_trace(result: RpeResult, sd: SpectralDecomposition, config: RpeConfig) -> TraceAudit:
    radius = config.radius
    target = sd.target_phase
    in_ball, in_interval = [], []
    for level in result.trace:
        expected = exact_expectation(sd, 1 << level.j)
        in_ball.append(abs(level.z - expected) < radius)
        half_width = math.pi * config.xi / (3.0 * (1 << level.j))
        in_interval.append(angular_distance(level.theta, target) < half_width)

    final_error = angular_distance(result.theta_J, target)
    return TraceAudit(in_ball=tuple(in_ball), in_interval=tuple(in_interval),
                      final_error=final_error,
                      success=final_error < math.pi * config.epsilon / 3.0)
