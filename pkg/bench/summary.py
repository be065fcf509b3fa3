"""
Per-cell statistics over trial records
"""

import logging
import math
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from bench.plan import TrialRecord
from utils.exceptions import InvalidArgumentError, ValidationError
from utils.helpers import DataValidator

logger = logging.getLogger(__name__)

GROUP_KEYS = ["method", "epsilon", "p0", "xi"]
SERIES_KEYS = ["method", "xi", "p0"]
RECORD_COLUMNS = ["method", "epsilon", "xi", "p0", "error", "T_max", "T_total"]


def records_frame(records: Union[pd.DataFrame, Iterable[TrialRecord]]) -> pd.DataFrame:
    if isinstance(records, pd.DataFrame):
        return records.copy()
    return pd.DataFrame([r.to_dict() for r in records])


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise InvalidArgumentError("Wilson interval needs at least one trial")
    if not 0 <= failures <= trials:
        raise InvalidArgumentError(f"failures must lie in [0, {trials}], got {failures}")
    z = stats.norm.ppf(1.0 - (1.0 - confidence) / 2.0)
    p = failures / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def summarize(records: Union[pd.DataFrame, Iterable[TrialRecord]], confidence: float = 0.95) -> pd.DataFrame:
    """
    Aggregate records per (method, epsilon, p0, xi).

    Success is recomputed from error and epsilon rather than read from the
    input. Rows without a finite error are dropped with a warning.
    """
    df = records_frame(records)
    if df.empty:
        raise ValidationError("No records to summarize")
    DataValidator.validate_dataframe(df, RECORD_COLUMNS)

    finite = np.isfinite(df["error"].astype(float))
    if not finite.all():
        logger.warning(f"Dropping {int((~finite).sum())} record(s) without a finite error")
        df = df[finite]
    if df.empty:
        logger.warning("Every record was dropped; nothing to summarize")
        return pd.DataFrame()

    df = df.assign(failed=~(df["error"] < math.pi * df["epsilon"] / 3.0))
    grouped = df.groupby(GROUP_KEYS, dropna=False, sort=True)
    summary = grouped.agg(
        mean_error=("error", "mean"),
        median_error=("error", "median"),
        failures=("failed", "sum"),
        trials=("error", "size"),
        mean_T_max=("T_max", "mean"),
        max_T_max=("T_max", "max"),
        mean_T_total=("T_total", "mean"),
    ).reset_index()

    summary["failures"] = summary["failures"].astype(int)
    summary["failure_rate"] = summary["failures"] / summary["trials"]
    bounds = [wilson_interval(int(k), int(n), confidence)
              for k, n in zip(summary["failures"], summary["trials"])]
    summary["wilson_low"] = [low for low, _ in bounds]
    summary["wilson_high"] = [high for _, high in bounds]

    logger.info(f"Summarized {len(df)} records into {len(summary)} cells")
    return summary


def fit_loglog_slope(aggregates: pd.DataFrame, x: str = "mean_T_max", y: str = "mean_error") -> pd.DataFrame:
    """Least-squares slope of log y against log x for every (method, xi, p0) series."""
    DataValidator.validate_dataframe(aggregates, SERIES_KEYS + [x, y])
    rows: List[dict] = []
    for key, series in aggregates.groupby(SERIES_KEYS, dropna=False, sort=True):
        usable = series[(series[x] > 0) & (series[y] > 0)]
        slope = np.nan
        if usable[x].nunique() >= 2:
            slope, _ = np.polyfit(np.log(usable[x].astype(float)), np.log(usable[y].astype(float)), 1)
        rows.append(dict(zip(SERIES_KEYS, key), points=len(usable), slope=float(slope)))
    return pd.DataFrame(rows, columns=SERIES_KEYS + ["points", "slope"])


def series_slope(slopes: pd.DataFrame, method: str, p0: float, xi: Sequence[float] = (1.0,)) -> float:
    """Pick one fitted slope out of ``fit_loglog_slope`` output."""
    match = slopes[(slopes["method"] == method) & np.isclose(slopes["p0"], p0)
                   & slopes["xi"].isin(list(xi))]
    if match.empty:
        raise InvalidArgumentError(f"No fitted series for method={method} p0={p0} xi={list(xi)}")
    return float(match["slope"].iloc[0])
