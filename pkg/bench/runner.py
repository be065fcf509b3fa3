"""
Plan execution

Every trial gets its own oracle or generator seeded from (master_seed,
point_index, trial_index), so the record set does not depend on the worker
count or on scheduling. Records are returned in canonical order.
"""

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from bench.methods import BaseMethod, get_method
from bench.plan import ExperimentPlan, PlanCell, TrialRecord, sort_records
from config.settings import bench_config
from estimation.spectrum import SpectralDecomposition, load_spectrum, make_initial_state, tfim_spectral_model
from utils.exceptions import ConfigurationError, PhaseLabError
from utils.helpers import PerformanceMonitor
from utils.logging_config import TrialLogger, get_logger, log_performance

logger = get_logger(__name__)


@dataclass(frozen=True)
class SpectrumContext:
    """
    Eigenphases a plan runs against, with ‖H‖₂ when the Hamiltonian is known
    and the file's own initial state when the spectrum came from a file.
    """
    phases: np.ndarray
    target_index: int
    norm: Optional[float] = None
    state: Optional[SpectralDecomposition] = None


def _check_target(target: int, size: int):
    if not 0 <= target < size:
        raise ConfigurationError(f"target_index {target} out of range for a spectrum of {size} levels")


def load_spectrum_context(plan: ExperimentPlan) -> SpectrumContext:
    source = plan.spectrum
    if source.path is not None:
        sd = load_spectrum(source.path)
        target = plan.target_index if plan.target_index is not None else sd.target_index
        _check_target(target, len(sd))
        state = SpectralDecomposition(phases=sd.phases, weights=sd.weights, target_index=target)
        return SpectrumContext(phases=sd.phases, target_index=target, state=state)

    model = tfim_spectral_model(source.tfim.L, source.tfim.g)
    target = plan.target_index if plan.target_index is not None else model.ground_index
    _check_target(target, model.phases.size)
    logger.info(f"TFIM L={source.tfim.L} g={source.tfim.g}: ‖H‖₂={model.norm:.6f}, "
                f"target phase {model.phases[target]:.12f}")
    return SpectrumContext(phases=model.phases, target_index=target, norm=model.norm)


@dataclass(frozen=True)
class _Task:
    method: BaseMethod
    prepared: Any
    sd: SpectralDecomposition
    cell: PlanCell
    trial_index: int


class PlanRunner:
    """Runs every (cell, trial) of a plan on a thread pool"""

    def __init__(self, plan: ExperimentPlan, workers: Optional[int] = None, progress: bool = False):
        self.plan = plan
        self.workers = max(1, int(workers or bench_config.DEFAULT_WORKERS))
        self.progress = progress
        self.skipped_cells: List[Tuple[PlanCell, str]] = []
        self._context: Optional[SpectrumContext] = None
        self._states: Dict[int, SpectralDecomposition] = {}
        self._file_state: Optional[SpectralDecomposition] = None
        self.timings: Dict[str, Any] = {}

    @property
    def context(self) -> SpectrumContext:
        if self._context is None:
            self._context = load_spectrum_context(self.plan)
            self._adopt_file_state()
        return self._context

    def _adopt_file_state(self):
        """A spectrum file's weights are the initial state unless the plan sets p0s itself."""
        state = self._context.state
        if state is None:
            return
        if "p0s" in self.plan.model_fields_set:
            logger.warning(f"Plan sets p0s={self.plan.p0s}; spectrum file weights are replaced by "
                           f"the {self.plan.residual_policy.value} residual policy")
            return
        if state.p0 <= 0.0:
            raise ConfigurationError(f"spectrum file gives no weight to target {state.target_index}")
        self.plan = self.plan.model_copy(update={"p0s": [state.p0]})
        self._file_state = state
        logger.info(f"Running on the spectrum file's weights (p0={state.p0:.12g})")

    def initial_state(self, cell: PlanCell) -> SpectralDecomposition:
        """Initial state for a cell's p0, shared by every method and trial at that p0."""
        context = self.context
        if self._file_state is not None:
            return self._file_state
        if cell.p0_index not in self._states:
            self._states[cell.p0_index] = make_initial_state(
                context.phases,
                context.target_index,
                cell.p0,
                residual_policy=self.plan.residual_policy,
                seed=self.plan.state_seed(cell.p0_index),
                residual_index=self.plan.residual_index,
            )
        return self._states[cell.p0_index]

    def _build_tasks(self) -> List[_Task]:
        tasks = []
        for cell in self.plan.cells():
            method = get_method(cell.method, self.plan)
            cell_logger = TrialLogger(cell.method.value, cell.point_index, **cell.describe())
            try:
                prepared = method.prepare(cell)
                sd = self.initial_state(cell)
            except PhaseLabError as e:
                cell_logger.log_cell_skipped(str(e))
                self.skipped_cells.append((cell, str(e)))
                continue

            if method.hypothesis_violated(cell):
                cell_logger.log_hypothesis_violation(cell.p0, cell.delta)
            tasks.extend(_Task(method, prepared, sd, cell, t) for t in range(self.plan.trials))
        return tasks

    @staticmethod
    def _execute(task: _Task, norm: Optional[float]) -> TrialRecord:
        return task.method.run_trial(task.prepared, task.sd, task.cell, task.trial_index, norm)

    @log_performance
    def run(self) -> List[TrialRecord]:
        self.skipped_cells = []
        monitor = PerformanceMonitor()
        monitor.start()
        norm = self.context.norm
        monitor.checkpoint("spectrum")
        tasks = self._build_tasks()
        monitor.checkpoint("tasks")
        logger.info(f"Running plan '{self.plan.name}': {len(tasks)} trials on {self.workers} worker(s), "
                    f"{len(self.skipped_cells)} cell(s) skipped")

        records: List[TrialRecord] = []
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(self._execute, task, norm) for task in tasks]
            for future in tqdm(as_completed(futures), total=len(futures),
                               desc=self.plan.name, disable=not self.progress):
                records.append(future.result())

        monitor.checkpoint("trials")
        self.timings = monitor.get_report()

        self._log_cells(records)
        return sort_records(records)

    def _log_cells(self, records: List[TrialRecord]):
        by_cell = defaultdict(list)
        for record in records:
            by_cell[(record.method, record.point_index)].append(record)
        for (method, point), cell_records in sorted(by_cell.items()):
            failures = sum(not r.success for r in cell_records)
            TrialLogger(method, point).log_cell_done(len(cell_records), failures)


def run_plan(plan: ExperimentPlan, workers: Optional[int] = None, progress: bool = False) -> List[TrialRecord]:
    return PlanRunner(plan, workers=workers, progress=progress).run()
