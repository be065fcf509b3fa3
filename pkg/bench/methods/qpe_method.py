"""
Textbook QPE trials

Rows share the RPE schema: epsilon is 3·2⁻ⁿ so that "error < πε/3" means
within half a grid step, N_s holds the shot count and J holds n.
"""

import time
from typing import Optional

import numpy as np

from bench.methods.base_method import BaseMethod
from bench.plan import PlanCell, TrialRecord
from estimation.qpe_baseline import QpeConfig, sample_qpe
from estimation.spectrum import SpectralDecomposition


class QpeMethod(BaseMethod):

    def prepare(self, cell: PlanCell) -> QpeConfig:
        return QpeConfig(n_ancilla=cell.n_ancilla, shots=cell.shots)

    def run_trial(self, prepared: QpeConfig, sd: SpectralDecomposition, cell: PlanCell,
                  trial_index: int, norm: Optional[float] = None) -> TrialRecord:
        seed = self.plan.trial_seed(cell.point_index, trial_index)
        started = time.perf_counter()
        result = sample_qpe(sd, prepared, np.random.default_rng(seed))
        return self._record(cell, sd, seed, trial_index, result.estimate,
                            T_max=result.T_max, T_total=result.T_total,
                            N_s=result.shots, J=result.n_ancilla,
                            started=started, norm=norm)
