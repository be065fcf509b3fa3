"""
Hadamard-test oracle

Simulates the controlled-U^(2^j) Hadamard tests as ±1 Bernoulli draws whose
means are Re and Im of <ψ|U^(2^j)|ψ>, and keeps the depth ledger (T_max,
T_total in applications of U).
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from estimation.angle import MAX_LEVEL
from estimation.spectrum import SpectralDecomposition, exact_expectation
from utils.exceptions import ContractViolationError, InvalidArgumentError

logger = logging.getLogger(__name__)


class OracleMode(str, Enum):
    SAMPLED = "sampled"
    EXACT = "exact"


class Part(str, Enum):
    REAL = "real"
    IMAG = "imag"


class ExactAccounting(str, Enum):
    """Depth charged by EXACT-mode estimates."""
    NOTIONAL = "notional"  # as if the requested shots were taken
    NONE = "none"


_PART_KEY = {Part.REAL: 0, Part.IMAG: 1}


@dataclass
class CostLedger:
    """Cumulative (total_depth) and largest single-circuit (max_depth) powers of U."""
    total_depth: int = 0
    max_depth: int = 0

    def charge(self, power: int, shots: int = 1):
        if power < 0 or shots < 0:
            raise InvalidArgumentError("ledger charges must be nonnegative")
        self.total_depth += power * shots
        if shots:
            self.max_depth = max(self.max_depth, power)

    def snapshot(self) -> Tuple[int, int]:
        return self.total_depth, self.max_depth


def _power(j: int) -> int:
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)) or not 0 <= j <= MAX_LEVEL:
        raise InvalidArgumentError(f"level j must be an integer in [0, {MAX_LEVEL}], got {j!r}")
    return 1 << int(j)


class PhaseOracle(ABC):
    """Anything that can estimate <ψ|U^(2^j)|ψ> and account for the depth it used."""

    def __init__(self):
        self.ledger = CostLedger()

    @abstractmethod
    def estimate_Z(self, j: int, n_shots: int) -> complex:
        """Estimate of <ψ|U^(2^j)|ψ> from n_shots Hadamard tests (half real, half imaginary)."""
        pass


class ShotOracle(PhaseOracle):
    """
    Oracle over a known spectral decomposition.

    Random streams are derived from (seed, *stream, j, part) so a trial's
    draws do not depend on which worker runs it or on other trials.
    """

    def __init__(self,
                 sd: SpectralDecomposition,
                 mode: OracleMode = OracleMode.SAMPLED,
                 seed: int = 0,
                 stream: Tuple[int, ...] = (),
                 exact_accounting: ExactAccounting = ExactAccounting.NOTIONAL):
        super().__init__()
        if seed < 0:
            raise InvalidArgumentError(f"seed must be nonnegative, got {seed}")
        self.sd = sd
        self.mode = OracleMode(mode)
        self.seed = int(seed)
        self.stream = tuple(int(s) for s in stream)
        self.exact_accounting = ExactAccounting(exact_accounting)
        self._generators: Dict[Tuple[int, Part], np.random.Generator] = {}

    def _generator(self, j: int, part: Part) -> np.random.Generator:
        key = (j, part)
        if key not in self._generators:
            sequence = np.random.SeedSequence(self.seed, spawn_key=(*self.stream, j, _PART_KEY[part]))
            self._generators[key] = np.random.default_rng(sequence)
        return self._generators[key]

    def expectation(self, j: int) -> complex:
        return exact_expectation(self.sd, _power(j))

    def probability_plus(self, j: int, part: Part) -> float:
        """P(+1) = (1 + x) / 2 with x the requested component of the expectation."""
        value = self.expectation(j)
        x = value.real if Part(part) is Part.REAL else value.imag
        return min(1.0, max(0.0, 0.5 * (1.0 + x)))

    def sample_shot(self, j: int, part: Part) -> int:
        if self.mode is not OracleMode.SAMPLED:
            raise ContractViolationError("single shots are only available in SAMPLED mode")
        part = Part(part)
        power = _power(j)
        outcome = 1 if self._generator(j, part).random() < self.probability_plus(j, part) else -1
        self.ledger.charge(power, 1)
        return outcome

    def _component_mean(self, j: int, part: Part, shots: int) -> float:
        plus = int(self._generator(j, part).binomial(shots, self.probability_plus(j, part)))
        return (2 * plus - shots) / shots

    def estimate_Z(self, j: int, n_shots: int) -> complex:
        power = _power(j)

        if self.mode is OracleMode.EXACT:
            if self.exact_accounting is ExactAccounting.NOTIONAL:
                self.ledger.charge(power, max(int(n_shots), 0))
            return self.expectation(j)

        if isinstance(n_shots, bool) or not isinstance(n_shots, (int, np.integer)) \
                or n_shots < 2 or n_shots % 2:
            raise InvalidArgumentError(f"n_shots must be an even integer >= 2, got {n_shots!r}")

        half = int(n_shots) // 2
        z = complex(self._component_mean(j, Part.REAL, half), self._component_mean(j, Part.IMAG, half))
        self.ledger.charge(power, int(n_shots))
        return z
