"""Report table builders.

Every builder returns a flat DataFrame so the same table can go to any
exporter. Column names follow the printed study layout: coefficients with
significance stars and t-values in parentheses, losses with their ranks,
and ``**`` flags for rejections at the 5% level.
"""

import math
from collections.abc import Mapping, Sequence

import numpy as np
import pandas as pd

from regimecast.estimation.estimator import FitResult
from regimecast.evaluation.ranking import LossReport
from regimecast.models.interfaces import ModelKind, RegimeProbPath
from regimecast.models.mrs import regime_prob_series
from regimecast.models.params import ParamVector
from regimecast.risk.backtest import LrReport

# two-sided normal critical values at 1%, 5% and 10%
STAR_LEVELS = ((2.576, "***"), (1.96, "**"), (1.645, "*"))


def significance_stars(t_value: float | None) -> str:
    """Return ***, ** or * for |t| above the 1%, 5% or 10% critical value."""
    if t_value is None or not math.isfinite(t_value):
        return ""
    for critical, stars in STAR_LEVELS:
        if abs(t_value) > critical:
            return stars
    return ""


def _label(params: ParamVector, name: str) -> str:
    labels = type(params).labels
    return labels.get(name, name)


def coefficient_table(fit: FitResult) -> pd.DataFrame:
    """One row per parameter: estimate, standard error, t-value and stars."""
    records = []
    for name, value in fit.params.as_dict().items():
        t_value = fit.t_values[name]
        stars = significance_stars(t_value)
        cell = f"{value:.4f}{stars}"
        if t_value is not None:
            cell += f" ({t_value:.2f})"
        records.append(
            {
                "model": fit.model.label,
                "parameter": _label(fit.params, name),
                "estimate": value,
                "std_error": fit.std_errors[name],
                "t_value": t_value,
                "stars": stars,
                "cell": cell,
            }
        )
    return pd.DataFrame.from_records(records)


def _moment_flag(fit: FitResult, name: str) -> bool | None:
    return None if fit.diagnostics is None else getattr(fit.diagnostics, name)


def fit_summary_table(fits: Sequence[FitResult]) -> pd.DataFrame:
    """Log-likelihood, AIC, convergence and flags per model."""
    return pd.DataFrame.from_records(
        [
            {
                "model": fit.model.label,
                "n_obs": fit.n_obs,
                "loglik": fit.loglik,
                "aic": fit.aic,
                "converged": fit.converged,
                "flags": ",".join(fit.flags),
                "second_moment_ok": _moment_flag(fit, "second_moment_ok"),
                "fourth_moment_ok": _moment_flag(fit, "fourth_moment_ok"),
            }
            for fit in fits
        ]
    )


def loss_table(report: LossReport) -> pd.DataFrame:
    """Losses with ranks; out-of-sample panels add SR and DA with ``**``."""
    frame = report.frame()
    if "DA" in frame.columns:
        frame["DA_flag"] = np.where(frame.pop("DA_significant").astype(bool), "**", "")
    if report.k is not None:
        frame.insert(1, "k", report.k)
    return frame


def var_table(
    reports: Mapping[ModelKind, LrReport], k: int, alpha: float
) -> pd.DataFrame:
    """LRuc, LRind and LRcc per model with ``**`` where the test rejects."""
    return pd.DataFrame.from_records(
        [
            {
                "model": kind.label,
                "k": k,
                "alpha": alpha,
                "n": report.n,
                "violations": report.n1,
                "expected": alpha * report.n,
                "LRuc": report.lruc,
                "LRuc_flag": "**" if report.reject_uc else "",
                "LRind": report.lrind,
                "LRind_flag": "**" if report.reject_ind else "",
                "LRcc": report.lrcc,
                "LRcc_flag": "**" if report.reject_cc else "",
            }
            for kind, report in reports.items()
        ]
    )


def regime_table(path: RegimeProbPath) -> pd.DataFrame:
    """Filtered probability of the high-variance regime per date."""
    series = regime_prob_series(path)
    frame = series.rename_axis("date").reset_index()
    if pd.api.types.is_datetime64_any_dtype(frame["date"]):
        frame["date"] = frame["date"].dt.strftime("%Y-%m-%d")
    return frame


def recovery_table(truth: ParamVector, fit: FitResult) -> pd.DataFrame:
    """Compare estimates with the generating parameters."""
    records = []
    for name, true_value in truth.as_dict().items():
        estimate = fit.params.as_dict()[name]
        se = fit.std_errors[name]
        error_in_se = None if se is None else abs(estimate - true_value) / se
        records.append(
            {
                "parameter": _label(truth, name),
                "truth": true_value,
                "estimate": estimate,
                "std_error": se,
                "abs_error_in_se": error_in_se,
            }
        )
    return pd.DataFrame.from_records(records)
