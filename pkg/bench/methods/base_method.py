"""
Base class for the estimation methods a plan can run
"""

from abc import ABC, abstractmethod
import logging
import time
from typing import Any, Optional

from bench.plan import ExperimentPlan, PlanCell, TrialRecord
from estimation.angle import angular_distance, reference_angle
from estimation.rpe import theorem_hypotheses
from estimation.spectrum import SpectralDecomposition, phase_to_energy

logger = logging.getLogger(__name__)


class BaseMethod(ABC):
    """One estimation method: validates a cell once, then runs its trials"""

    def __init__(self, plan: ExperimentPlan):
        self.plan = plan

    @abstractmethod
    def prepare(self, cell: PlanCell) -> Any:
        """
        Build the method configuration for a cell.

        Raises a PhaseLabError when the cell's parameters are rejected; the
        runner then skips the cell.
        """
        pass

    @abstractmethod
    def run_trial(self, prepared: Any, sd: SpectralDecomposition, cell: PlanCell,
                  trial_index: int, norm: Optional[float] = None) -> TrialRecord:
        pass

    def hypothesis_violated(self, cell: PlanCell) -> bool:
        """A cell whose overlap fails p0 > 1 − δ is outside the accuracy guarantee."""
        if cell.delta is None:
            return False
        return not theorem_hypotheses(cell.p0, cell.delta, cell.xi or 1.0).overlap

    def _record(self, cell: PlanCell, sd: SpectralDecomposition, seed: int, trial_index: int,
                estimate: float, T_max: int, T_total: int, N_s: int, J: int,
                started: float, norm: Optional[float]) -> TrialRecord:
        lambda_0 = sd.target_phase
        return TrialRecord(
            method=cell.method.value,
            epsilon=cell.epsilon,
            xi=cell.xi,
            p0=cell.p0,
            delta=cell.delta,
            eta=cell.eta,
            seed=seed,
            theta_J=reference_angle(estimate),
            lambda_0=lambda_0,
            error=angular_distance(estimate, lambda_0),
            T_max=int(T_max),
            T_total=int(T_total),
            N_s=int(N_s),
            J=int(J),
            hypothesis_violated=self.hypothesis_violated(cell),
            energy_estimate=phase_to_energy(estimate, norm) if norm else None,
            point_index=cell.point_index,
            trial_index=trial_index,
            wall_time=time.perf_counter() - started,
        )
