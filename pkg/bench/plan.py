"""
Experiment plans and trial records

A plan is a declarative document (YAML or JSON) validated by pydantic. It
expands into cells, one per (method, p0, xi or n_ancilla, epsilon), each of
which runs ``trials`` seeded trials.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, \
    field_validator, model_validator

from config.settings import bench_config
from estimation.oracle import ExactAccounting, OracleMode
from estimation.spectrum import MAX_SITES, MIN_SITES, ResidualPolicy
from utils.exceptions import ConfigurationError
from utils.helpers import ConfigHelper, FileHelper

logger = logging.getLogger(__name__)

# spawn-key namespaces for the two kinds of random stream a plan uses
STATE_STREAM = 0
TRIAL_STREAM = 1
_SEED_MASK = (1 << 63) - 1


class MethodKind(str, Enum):
    RPE = "rpe"
    RPE_LOWDEPTH = "rpe_lowdepth"
    QPE = "qpe"


class TfimSource(BaseModel):
    model_config = ConfigDict(extra="forbid")

    L: int = Field(default=8, ge=MIN_SITES, le=MAX_SITES)
    g: float = 4.0


class SpectrumSource(BaseModel):
    """Either a TFIM model or a spectrum JSON file ({phases, weights, target_index})."""
    model_config = ConfigDict(extra="forbid")

    tfim: Optional[TfimSource] = None
    path: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        if self.tfim is not None and self.path is not None:
            raise ValueError("spectrum takes either 'tfim' or 'path', not both")
        if self.tfim is None and self.path is None:
            self.tfim = TfimSource()
        return self


class MethodSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: MethodKind
    xi: List[float] = Field(default_factory=lambda: [1.0])
    n_ancilla: List[int] = Field(default_factory=list)
    shots: int = Field(default=bench_config.QPE_DEFAULT_SHOTS, ge=1)

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind is MethodKind.RPE:
            self.xi = [1.0]
        elif self.kind is MethodKind.RPE_LOWDEPTH:
            if not self.xi:
                raise ValueError("rpe_lowdepth needs at least one xi")
            for xi in self.xi:
                if not 0.0 < xi <= 1.0:
                    raise ValueError(f"xi must lie in (0, 1], got {xi}")
        else:
            if not self.n_ancilla:
                raise ValueError("qpe needs at least one n_ancilla")
            for n in self.n_ancilla:
                if not 1 <= n <= bench_config.QPE_MAX_ANCILLA:
                    raise ValueError(f"n_ancilla must lie in [1, {bench_config.QPE_MAX_ANCILLA}], got {n}")
        return self


class DeltaPolicy(BaseModel):
    """An explicit δ, or δ = (1 − p0)·margin."""
    model_config = ConfigDict(extra="forbid")

    value: Optional[float] = Field(default=None, ge=0.0)
    margin: float = Field(default=bench_config.DELTA_MARGIN, gt=0.0)

    def resolve(self, p0: float) -> float:
        return self.value if self.value is not None else (1.0 - p0) * self.margin


class ExperimentPlan(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "custom"
    spectrum: SpectrumSource = Field(default_factory=SpectrumSource)
    # None targets the ground state (or the file's own target)
    target_index: Optional[int] = Field(default=None, ge=0)
    residual_policy: ResidualPolicy = ResidualPolicy.RANDOM
    residual_index: Optional[int] = None
    methods: List[MethodSpec] = Field(default_factory=lambda: [MethodSpec(kind=MethodKind.RPE)], min_length=1)
    epsilons: List[float] = Field(default_factory=lambda: [1e-3], min_length=1)
    # left unset with a spectrum file, the file's own weights are used
    p0s: List[float] = Field(default_factory=lambda: [0.8], min_length=1)
    delta: DeltaPolicy = Field(default_factory=DeltaPolicy)
    eta: float = Field(default=bench_config.DEFAULT_ETA, gt=0.0, lt=1.0)
    trials: int = Field(default=bench_config.DEFAULT_TRIALS, ge=1)
    master_seed: int = Field(default=bench_config.DEFAULT_MASTER_SEED, ge=0)
    oracle_mode: OracleMode = OracleMode.SAMPLED
    exact_accounting: ExactAccounting = ExactAccounting.NOTIONAL
    notes: List[str] = Field(default_factory=list)

    @field_validator("epsilons")
    @classmethod
    def _positive_epsilons(cls, values: List[float]) -> List[float]:
        for eps in values:
            if not (math.isfinite(eps) and eps > 0.0):
                raise ValueError(f"epsilon must be positive, got {eps}")
        return values

    @field_validator("p0s")
    @classmethod
    def _overlaps_in_range(cls, values: List[float]) -> List[float]:
        for p0 in values:
            if not 0.0 < p0 <= 1.0:
                raise ValueError(f"p0 must lie in (0, 1], got {p0}")
        return values

    def cells(self) -> Iterator["PlanCell"]:
        """Cells in canonical order; ``point_index`` is the position in that order."""
        point = 0
        for method in self.methods:
            for p0_index, p0 in enumerate(self.p0s):
                delta = self.delta.resolve(p0)
                if method.kind is MethodKind.QPE:
                    for n in method.n_ancilla:
                        yield PlanCell(point, method.kind, p0_index, p0, eta=None, delta=None,
                                       epsilon=3.0 * math.ldexp(1.0, -n), xi=None,
                                       n_ancilla=n, shots=method.shots)
                        point += 1
                    continue
                for xi in method.xi:
                    for eps in self.epsilons:
                        yield PlanCell(point, method.kind, p0_index, p0, eta=self.eta, delta=delta,
                                       epsilon=eps, xi=xi)
                        point += 1

    def cell_count(self) -> int:
        return sum(1 for _ in self.cells())

    def trial_seed(self, point_index: int, trial_index: int) -> int:
        sequence = np.random.SeedSequence(self.master_seed, spawn_key=(TRIAL_STREAM, point_index, trial_index))
        return int(sequence.generate_state(1, dtype=np.uint64)[0]) & _SEED_MASK

    def state_seed(self, p0_index: int) -> int:
        sequence = np.random.SeedSequence(self.master_seed, spawn_key=(STATE_STREAM, p0_index))
        return int(sequence.generate_state(1, dtype=np.uint64)[0]) & _SEED_MASK

    @classmethod
    def preset(cls, name: str) -> "ExperimentPlan":
        try:
            data = PRESETS[name]
        except KeyError:
            raise ConfigurationError(f"Unknown preset '{name}'; choose from {sorted(PRESETS)}")
        return cls.model_validate(data)


@dataclass(frozen=True)
class PlanCell:
    point_index: int
    method: MethodKind
    p0_index: int
    p0: float
    eta: Optional[float]
    delta: Optional[float]
    epsilon: float
    xi: Optional[float]
    n_ancilla: Optional[int] = None
    shots: Optional[int] = None

    def describe(self) -> Dict[str, Any]:
        info = {"p0": self.p0, "epsilon": self.epsilon}
        if self.xi is not None:
            info.update(xi=self.xi, delta=self.delta)
        if self.n_ancilla is not None:
            info.update(n_ancilla=self.n_ancilla, shots=self.shots)
        return info


@dataclass
class TrialRecord:
    method: str
    epsilon: float
    xi: Optional[float]
    p0: float
    delta: Optional[float]
    eta: Optional[float]
    seed: int
    theta_J: float
    lambda_0: float
    error: float
    T_max: int
    T_total: int
    N_s: int
    J: int
    hypothesis_violated: bool = False
    energy_estimate: Optional[float] = None
    point_index: int = 0
    trial_index: int = 0
    wall_time: float = field(default=0.0, compare=False)

    @property
    def success(self) -> bool:
        return self.error < math.pi * self.epsilon / 3.0

    def sort_key(self):
        # None sorts after every real xi
        xi_key = (1, 0.0) if self.xi is None else (0, self.xi)
        return (self.method, self.epsilon, xi_key, self.seed, self.p0, self.point_index, self.trial_index)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["success"] = self.success
        return data


def sort_records(records: List[TrialRecord]) -> List[TrialRecord]:
    return sorted(records, key=TrialRecord.sort_key)


_FIGURE_EPSILONS = [math.ldexp(1.0, -k) for k in range(3, 13)]

PRESETS: Dict[str, Dict[str, Any]] = {
    "paper-fig4": {
        "name": "paper-fig4",
        "spectrum": {"tfim": {"L": 8, "g": 4.0}},
        "methods": [
            {"kind": "rpe"},
            {"kind": "qpe", "n_ancilla": list(range(3, 13)), "shots": bench_config.QPE_DEFAULT_SHOTS},
        ],
        "epsilons": _FIGURE_EPSILONS,
        "p0s": [0.6, 0.8],
        "eta": bench_config.DEFAULT_ETA,
        "trials": bench_config.FIGURE_TRIALS,
        "notes": [
            "TFIM L=8, g=4, ground state target; errors averaged over 10 trials",
            f"reconstructed settings: eta={bench_config.DEFAULT_ETA}, "
            f"delta=(1-p0)*{bench_config.DELTA_MARGIN}, random residual weights",
            f"QPE: {bench_config.QPE_DEFAULT_SHOTS} shot(s) per trial, modal readout, n_ancilla 3..12",
            "epsilon grid 2^-3 .. 2^-12",
        ],
    },
    "paper-fig5": {
        "name": "paper-fig5",
        "spectrum": {"tfim": {"L": 8, "g": 4.0}},
        "methods": [{"kind": "rpe_lowdepth", "xi": [1.0, 0.3, 0.1]}],
        "epsilons": _FIGURE_EPSILONS,
        "p0s": [0.99],
        "eta": bench_config.DEFAULT_ETA,
        "trials": bench_config.FIGURE_TRIALS,
        "notes": [
            "TFIM L=8, g=4, ground state target; errors averaged over 10 trials",
            f"reconstructed settings: eta={bench_config.DEFAULT_ETA}, "
            f"delta=(1-p0)*{bench_config.DELTA_MARGIN}, random residual weights",
            "epsilon grid 2^-3 .. 2^-12",
        ],
    },
}


def load_plan(path: Optional[Union[str, Path]] = None,
              preset: Optional[str] = None,
              overrides: Optional[Dict[str, Any]] = None) -> ExperimentPlan:
    """
    Build a plan from a preset, then a config file, then explicit overrides
    (later sources win; None values are ignored).
    """
    base = PRESETS[preset] if preset in PRESETS else {}
    if preset is not None and preset not in PRESETS:
        raise ConfigurationError(f"Unknown preset '{preset}'; choose from {sorted(PRESETS)}")
    from_file = FileHelper.read_config_file(path) if path is not None else {}
    merged = ConfigHelper.merge_configs(base, from_file, overrides or {})

    try:
        plan = ExperimentPlan.model_validate(merged)
    except PydanticValidationError as e:
        raise ConfigurationError(f"Invalid experiment plan: {e}") from e

    for note in plan.notes:
        logger.info(f"Plan note: {note}")
    return plan
