"""
Textbook QFT phase estimation baseline

The n-ancilla register reads k with probability given by the Fejér kernel
    P(k | λ) = sin²(πu) / (N² sin²(πu/N)),   N = 2**n, u = Nλ/2π − k,
which is sampled directly instead of simulating the circuit.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.settings import bench_config
from estimation.angle import MAX_LEVEL, TWO_PI, reference_angle
from estimation.spectrum import SpectralDecomposition
from utils.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QpeConfig:
    n_ancilla: int
    shots: int = 1

    def __post_init__(self):
        for name in ("n_ancilla", "shots"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
        if not 1 <= self.n_ancilla <= bench_config.QPE_MAX_ANCILLA:
            raise InvalidArgumentError(
                f"n_ancilla must lie in [1, {bench_config.QPE_MAX_ANCILLA}], got {self.n_ancilla}")
        if self.shots < 1:
            raise InvalidArgumentError(f"shots must be positive, got {self.shots}")
        object.__setattr__(self, "n_ancilla", int(self.n_ancilla))
        object.__setattr__(self, "shots", int(self.shots))

    @property
    def grid_size(self) -> int:
        return 1 << self.n_ancilla

    @property
    def T_max(self) -> int:
        """Controlled powers U, U², ..., U^(2^(n-1)) add up to 2ⁿ − 1 applications."""
        return self.grid_size - 1

    @property
    def T_total(self) -> int:
        return self.shots * self.T_max


@dataclass(frozen=True)
class QpeResult:
    estimate: float          # representative in [-π, π)
    outcome: int             # modal register value k
    n_ancilla: int
    shots: int
    T_max: int
    T_total: int
    counts: Tuple[Tuple[int, int], ...] = ()


def _grid_position(phase: float, size: int) -> Tuple[int, float]:
    """Split Nλ/2π into its floor k0 and fractional part f in [0, 1)."""
    x = size * (float(phase) % TWO_PI) / TWO_PI
    k0 = math.floor(x)
    f = x - k0
    if f >= 1.0:
        k0, f = k0 + 1, 0.0
    return k0 % size, f


def _kernel(f: float, d: np.ndarray, size: int) -> np.ndarray:
    """
    P of landing d grid steps above floor(Nλ/2π), for signed d in
    (-N/2, N/2]; f must be nonzero.
    """
    u = f - d
    # sin(πf) = sin(π(1 − f)); the smaller argument keeps full precision near the grid
    numerator = math.sin(math.pi * min(f, 1.0 - f)) ** 2
    return numerator / (size ** 2 * np.sin(math.pi * u / size) ** 2)


def outcome_distribution(phase: float, n: int) -> np.ndarray:
    """Probabilities of every register value k = 0..2ⁿ−1 for an eigenphase."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) \
            or not 1 <= n <= bench_config.QPE_MAX_ANCILLA:
        raise InvalidArgumentError(
            f"n must be an integer in [1, {bench_config.QPE_MAX_ANCILLA}] to tabulate, got {n!r}")
    if not math.isfinite(phase):
        raise InvalidArgumentError(f"phase must be finite, got {phase!r}")

    size = 1 << int(n)
    k0, f = _grid_position(phase, size)
    if f == 0.0:
        table = np.zeros(size)
        table[k0] = 1.0
        return table

    k = np.arange(size)
    offset = (k - k0) % size
    d = np.where(offset > size // 2, offset - size, offset)
    return _kernel(f, d.astype(np.float64), size)


def _sample_tabulated(phase: float, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(outcome_distribution(phase, n))
    draws = rng.random(count) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, draws, side="right"), cdf.size - 1)


def _sample_rejection(phase: float, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Exact draws for registers too large to tabulate.

    Envelope over offsets d from floor(Nλ/2π): 1 at d ∈ {0, 1}, 1/(4(d−1)²)
    for d ≥ 2 and 1/(4d²) for d ≤ −1, which dominates the kernel by
    |sin(πu/N)| ≥ 2|u|/N. Tail offsets come from a Zipf(2) draw.
    """
    size = 1 << n
    k0, f = _grid_position(phase, size)
    if f == 0.0:
        return np.full(count, k0, dtype=np.int64)

    tail_mass = math.pi ** 2 / 24.0  # one side: (1/4)·ζ(2)
    head_share = 2.0 / (2.0 + 2.0 * tail_mass)
    lowest, highest = -size // 2 + 1, size // 2

    out = np.empty(count, dtype=np.int64)
    for i in range(count):
        while True:
            if rng.random() < head_share:
                d = int(rng.integers(0, 2))
                envelope = 1.0
            else:
                m = int(rng.zipf(2.0))
                if rng.random() < 0.5:
                    d, envelope = m + 1, 1.0 / (4.0 * m * m)
                else:
                    d, envelope = -m, 1.0 / (4.0 * m * m)
            if not lowest <= d <= highest:
                continue
            target = float(_kernel(f, np.array([float(d)]), size)[0])
            if rng.random() * envelope < target:
                out[i] = (k0 + d) % size
                break
    return out


def sample_qpe_outcomes(sd: SpectralDecomposition, n: int, shots: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Register readouts of ``shots`` independent runs on the state described by ``sd``."""
    if not 1 <= n <= MAX_LEVEL:
        raise InvalidArgumentError(f"n must lie in [1, {MAX_LEVEL}], got {n}")
    eigen = rng.choice(len(sd), size=shots, p=sd.weights)
    outcomes = np.empty(shots, dtype=np.int64)
    for m in np.unique(eigen):
        mask = eigen == m
        phase = float(sd.phases[m])
        if n <= bench_config.QPE_TABULATE_MAX_ANCILLA:
            outcomes[mask] = _sample_tabulated(phase, n, int(mask.sum()), rng)
        else:
            outcomes[mask] = _sample_rejection(phase, n, int(mask.sum()), rng)
    return outcomes


def sample_qpe(sd: SpectralDecomposition, config: QpeConfig, rng: np.random.Generator) -> QpeResult:
    """Modal readout over ``config.shots`` runs; ties go to the smallest k."""
    outcomes = sample_qpe_outcomes(sd, config.n_ancilla, config.shots, rng)
    values, counts = np.unique(outcomes, return_counts=True)
    k = int(values[int(np.argmax(counts))])
    estimate = reference_angle(TWO_PI * k / config.grid_size)
    logger.debug(f"QPE n={config.n_ancilla} shots={config.shots}: k={k} estimate={estimate:.12f}")
    return QpeResult(
        estimate=estimate,
        outcome=k,
        n_ancilla=config.n_ancilla,
        shots=config.shots,
        T_max=config.T_max,
        T_total=config.T_total,
        counts=tuple((int(v), int(c)) for v, c in zip(values, counts)),
    )
