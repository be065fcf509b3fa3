"""
Phase Estimation Lab

Command-line entry point: run experiment plans, summarize and plot their
records, dump TFIM spectra and run the self-test.
"""

import sys
from pathlib import Path

import click

from bench.export import emit_csv, emit_plot_script, emit_summary_csv, load_records_csv
from bench.plan import load_plan
from bench.runner import PlanRunner
from bench.selftest import run_selftest
from bench.summary import fit_loglog_slope, summarize
from config.settings import app_config, bench_config
from estimation.spectrum import ResidualPolicy, dump_spectrum, make_initial_state, phase_to_energy, \
    tfim_spectral_model
from utils.exceptions import PhaseLabError
from utils.helpers import NumberFormatter
from utils.logging_config import get_logger, setup_logging

logger = get_logger(__name__)

_PAPER_CHOICES = {"fig4": "paper-fig4", "fig5": "paper-fig5"}


def _fail(error: Exception):
    logger.error(str(error))
    raise click.ClickException(str(error))


@click.group()
@click.option("--log-level", default=None, help="Logging level (defaults to LOG_LEVEL).")
@click.option("--no-log-file", is_flag=True, help="Log to the console only.")
def cli(log_level, no_log_file):
    """Robust and textbook phase estimation experiments."""
    setup_logging(log_level=log_level, log_to_file=not no_log_file)
    logger.debug(f"{app_config.APP_TITLE} starting")


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="YAML or JSON experiment plan.")
@click.option("--paper", type=click.Choice(sorted(_PAPER_CHOICES)), help="Start from a figure preset.")
@click.option("--trials", type=int, help="Trials per cell.")
@click.option("--epsilon", "epsilons", type=float, multiple=True, help="Target accuracy (repeatable).")
@click.option("--p0", "p0s", type=float, multiple=True, help="Initial overlap (repeatable).")
@click.option("--xi", "xis", type=float, multiple=True, help="Depth prefactor; runs rpe_lowdepth (repeatable).")
@click.option("--delta", type=float, help="Pin delta instead of (1 - p0) * margin.")
@click.option("--eta", type=float, help="Failure probability bound.")
@click.option("--oracle-mode", type=click.Choice(["sampled", "exact"]))
@click.option("--master-seed", type=int)
@click.option("--workers", type=int, default=bench_config.DEFAULT_WORKERS, show_default=True,
              envvar="PHASELAB_WORKERS")
@click.option("--output", type=click.Path(dir_okay=False), help="Records CSV path.")
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False), help="Also write per-cell statistics.")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), help="Also write the plot script.")
@click.option("--progress/--no-progress", default=True)
def run(config_path, paper, trials, epsilons, p0s, xis, delta, eta, oracle_mode, master_seed,
        workers, output, summary_path, plot_path, progress):
    """Execute an experiment plan and write its records."""
    overrides = {
        "trials": trials,
        "epsilons": list(epsilons) or None,
        "p0s": list(p0s) or None,
        "methods": [{"kind": "rpe_lowdepth", "xi": list(xis)}] if xis else None,
        "delta": {"value": delta} if delta is not None else None,
        "eta": eta,
        "oracle_mode": oracle_mode,
        "master_seed": master_seed,
    }
    try:
        plan = load_plan(config_path, preset=_PAPER_CHOICES.get(paper), overrides=overrides)
        runner = PlanRunner(plan, workers=workers, progress=progress)
        records = runner.run()

        output = Path(output or Path(bench_config.OUTPUT_DIR) / f"{plan.name}_records.csv")
        emit_csv(records, output)
        elapsed = NumberFormatter.format_duration(runner.timings.get("total_time", 0.0))
        click.echo(f"{len(records)} records written to {output} in {elapsed}")
        for cell, reason in runner.skipped_cells:
            click.echo(f"skipped cell {cell.point_index} ({cell.method.value}): {reason}", err=True)

        if summary_path or plot_path:
            aggregates = summarize(records)
            if summary_path:
                emit_summary_csv(aggregates, summary_path)
            if plot_path:
                emit_plot_script(aggregates, plot_path, description="; ".join(plan.notes) or None)
    except PhaseLabError as e:
        _fail(e)


@cli.command("summarize")
@click.argument("records_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), help="Summary CSV path (stdout if omitted).")
@click.option("--slopes", is_flag=True, help="Also print log-log slopes of error against T_max.")
def summarize_command(records_csv, output, slopes):
    """Aggregate a records CSV per (method, epsilon, p0, xi)."""
    try:
        aggregates = summarize(load_records_csv(records_csv))
        if output:
            emit_summary_csv(aggregates, output)
        else:
            click.echo(aggregates.to_string(index=False))
        if slopes:
            click.echo(fit_loglog_slope(aggregates).to_string(index=False))
    except PhaseLabError as e:
        _fail(e)


@cli.command()
@click.argument("records_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), required=True, help="Vega-Lite JSON path.")
@click.option("--description", help="Free-text notes embedded in the plot document.")
def plot(records_csv, output, description):
    """Write the error-vs-runtime plot script for a records CSV."""
    try:
        emit_plot_script(summarize(load_records_csv(records_csv)), output, description=description)
        click.echo(f"Plot script written to {output}")
    except PhaseLabError as e:
        _fail(e)


@cli.command()
@click.option("--sites", "-L", "sites", type=int, default=8, show_default=True)
@click.option("--coupling", "-g", "coupling", type=float, default=4.0, show_default=True)
@click.option("--p0", type=float, default=1.0, show_default=True, help="Overlap with the ground state.")
@click.option("--residual-policy", type=click.Choice([p.value for p in ResidualPolicy]),
              default=ResidualPolicy.RANDOM.value, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), required=True, help="Spectrum JSON path.")
def spectrum(sites, coupling, p0, residual_policy, seed, output):
    """Dump a TFIM spectrum (phases, weights, target_index) to JSON."""
    try:
        model = tfim_spectral_model(sites, coupling)
        target = model.ground_index
        residual_index = target + 1 if residual_policy == ResidualPolicy.SINGLE.value else None
        sd = make_initial_state(model.phases, target, p0, residual_policy=residual_policy,
                                seed=seed, residual_index=residual_index)
        dump_spectrum(sd, output)
        click.echo(f"{len(sd)} levels written to {output}")
        click.echo(f"norm={NumberFormatter.format_roundtrip(model.norm)} "
                   f"ground phase={NumberFormatter.format_roundtrip(sd.target_phase)} "
                   f"ground energy={NumberFormatter.format_roundtrip(phase_to_energy(sd.target_phase, model.norm))}")
    except PhaseLabError as e:
        _fail(e)


@cli.command()
def selftest():
    """Run the invariant checks."""
    results = run_selftest()
    for result in results:
        click.echo(f"[{'ok' if result.passed else 'FAIL'}] {result.name}: {result.detail}")
    failed = sum(not r.passed for r in results)
    if failed:
        click.echo(f"{failed} check(s) failed", err=True)
        sys.exit(1)
    click.echo("all checks passed")


if __name__ == "__main__":
    cli()
