# bench/__init__.py
"""
Experiment harness: plans, trial execution, statistics and output
"""

from .plan import ExperimentPlan, MethodKind, PlanCell, TrialRecord, load_plan, sort_records
from .runner import PlanRunner, run_plan
from .summary import fit_loglog_slope, summarize, wilson_interval
from .export import CSV_HEADER, emit_csv, emit_plot_script, emit_summary_csv, load_records_csv

__all__ = [
    'ExperimentPlan',
    'MethodKind',
    'PlanCell',
    'TrialRecord',
    'load_plan',
    'sort_records',
    'PlanRunner',
    'run_plan',
    'fit_loglog_slope',
    'summarize',
    'wilson_interval',
    'CSV_HEADER',
    'emit_csv',
    'emit_plot_script',
    'emit_summary_csv',
    'load_records_csv'
]
