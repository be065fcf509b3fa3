"""
Robust phase estimation trials (full-depth and low-depth)
"""

import time
from typing import Optional

from bench.methods.base_method import BaseMethod
from bench.plan import PlanCell, TrialRecord
from estimation.oracle import ShotOracle
from estimation.rpe import RpeConfig, run_rpe
from estimation.spectrum import SpectralDecomposition


class RpeMethod(BaseMethod):

    def prepare(self, cell: PlanCell) -> RpeConfig:
        return RpeConfig(epsilon=cell.epsilon, eta=cell.eta, delta=cell.delta, xi=cell.xi)

    def run_trial(self, prepared: RpeConfig, sd: SpectralDecomposition, cell: PlanCell,
                  trial_index: int, norm: Optional[float] = None) -> TrialRecord:
        seed = self.plan.trial_seed(cell.point_index, trial_index)
        oracle = ShotOracle(sd, mode=self.plan.oracle_mode, seed=seed,
                            exact_accounting=self.plan.exact_accounting)
        started = time.perf_counter()
        result = run_rpe(prepared, oracle)
        return self._record(cell, sd, seed, trial_index, float(result.theta_J),
                            T_max=result.T_max, T_total=result.T_total, N_s=result.N_s, J=result.J,
                            started=started, norm=norm)
