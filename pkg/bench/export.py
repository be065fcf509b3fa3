"""
CSV and plot-script output
"""

import json
import logging
from pathlib import Path
from typing import Iterable, Optional, Union

import altair as alt
import pandas as pd

from bench.plan import TrialRecord, sort_records
from config.settings import plot_config
from utils.exceptions import ExportError, InvalidArgumentError
from utils.helpers import DataValidator, FileHelper

logger = logging.getLogger(__name__)

CSV_HEADER = ["method", "epsilon", "xi", "p0", "delta", "eta", "seed", "theta_J", "lambda_0",
              "error", "success", "T_max", "T_total", "N_s", "J"]
_FLOAT_FORMAT = "%.17g"


def _write_frame(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        FileHelper.ensure_parent(path)
        df.to_csv(path, index=False, float_format=_FLOAT_FORMAT, na_rep="", lineterminator="\n")
    except OSError as e:
        raise ExportError(f"Could not write {path}: {e}") from e
    logger.info(f"Wrote {len(df)} row(s) to {path}")
    return path


def records_to_frame(records: Iterable[TrialRecord]) -> pd.DataFrame:
    """Records in canonical order, restricted to the CSV columns."""
    rows = []
    for record in sort_records(list(records)):
        row = record.to_dict()
        rows.append({column: row[column] for column in CSV_HEADER})
    return pd.DataFrame(rows, columns=CSV_HEADER)


def emit_csv(records: Iterable[TrialRecord], path: Union[str, Path]) -> Path:
    """One row per trial, floats in 17-significant-digit round-trip form."""
    return _write_frame(records_to_frame(records), path)


def emit_summary_csv(aggregates: pd.DataFrame, path: Union[str, Path]) -> Path:
    return _write_frame(aggregates, path)


def load_records_csv(path: Union[str, Path]) -> pd.DataFrame:
    path = Path(path)
    try:
        df = pd.read_csv(path)
    except FileNotFoundError as e:
        raise ExportError(f"Records file not found: {path}") from e
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ExportError(f"Could not read records from {path}: {e}") from e

    if df.empty:
        return pd.DataFrame(columns=CSV_HEADER)
    DataValidator.validate_dataframe(df, CSV_HEADER)
    return df


def _series_label(row: pd.Series) -> str:
    label = f"{row['method']} p0={row['p0']:g}"
    if pd.notna(row.get("xi")) and row["method"] != "rpe":
        label += f" ξ={row['xi']:g}"
    return label


def build_plot_chart(aggregates: pd.DataFrame, description: Optional[str] = None) -> alt.HConcatChart:
    """Error against T_max and against T_total, log-log, one series per (method, ξ, p0)."""
    if aggregates is None or aggregates.empty:
        raise InvalidArgumentError("Cannot plot an empty aggregate table")
    DataValidator.validate_dataframe(aggregates, ["method", "p0", "xi", "mean_error", "mean_T_max", "mean_T_total"])

    data = aggregates.copy()
    data["series"] = data.apply(_series_label, axis=1)
    positive = (data["mean_error"] > 0) & (data["mean_T_max"] > 0) & (data["mean_T_total"] > 0)
    if not positive.all():
        logger.warning(f"Leaving out {int((~positive).sum())} cell(s) that cannot sit on log axes")
        data = data[positive]
    data = data[["series", "method", "p0", "xi", "epsilon", "mean_error", "mean_T_max", "mean_T_total"]]

    color = alt.Color("series:N", scale=alt.Scale(scheme=plot_config.COLOR_SCHEME), legend=alt.Legend(title="Series"))
    log_scale = alt.Scale(type="log")

    def panel(x_col: str, x_title: str) -> alt.Chart:
        return alt.Chart(data).mark_line(point=True).encode(
            x=alt.X(f"{x_col}:Q", title=x_title, scale=log_scale),
            y=alt.Y("mean_error:Q", title="Mean error", scale=log_scale),
            color=color,
            tooltip=list(data.columns),
        ).properties(
            width=plot_config.CHART_WIDTH,
            height=plot_config.CHART_HEIGHT,
            title=f"Error vs {x_title}",
        )

    chart = alt.hconcat(panel("mean_T_max", "T_max"), panel("mean_T_total", "T_total"))
    if description:
        chart = chart.properties(description=description)
    return chart


def emit_plot_script(aggregates: pd.DataFrame, path: Union[str, Path], description: Optional[str] = None) -> Path:
    """Write a Vega-Lite document (render with any Vega-Lite tool)."""
    chart = build_plot_chart(aggregates, description)
    path = Path(path)
    try:
        FileHelper.ensure_parent(path)
        spec = json.loads(chart.to_json())
        path.write_text(json.dumps(spec, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise ExportError(f"Could not write plot script {path}: {e}") from e
    logger.info(f"Wrote plot script to {path}")
    return path
