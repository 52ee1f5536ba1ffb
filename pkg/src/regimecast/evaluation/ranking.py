"""Cross-model evaluation panels and criterion ranks."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import pandas as pd

from regimecast.data.market_data import RealizedVolSeries
from regimecast.estimation.estimator import FitResult
from regimecast.evaluation.directional import MIN_DA_ROWS, DirectionalResult, da_test
from regimecast.evaluation.losses import LossValues, in_sample_losses, losses
from regimecast.exceptions import EvaluationError
from regimecast.forecasting.forecaster import ForecastTable
from regimecast.models.interfaces import ModelKind


def rank_models(values: Mapping[str, Mapping[str, float]]) -> pd.DataFrame:
    """Rank models per criterion, 1 for the smallest value.

    Ties share the smaller rank and the next rank is skipped. Missing or
    NaN values stay unranked.

    Args:
        values: Criterion values keyed by model, then criterion.

    Returns:
        Integer ranks indexed by model with one column per criterion.

    """
    if not values:
        msg = "Ranking needs at least one model."
        raise EvaluationError(msg)
    frame = pd.DataFrame.from_dict(values, orient="index")
    return frame.rank(method="min", ascending=True).astype("Int64")


@dataclass(frozen=True)
class ModelEvaluation:
    """Losses and directional accuracy of one model on one panel."""

    model: ModelKind
    losses: LossValues
    direction: DirectionalResult | None = None


@dataclass(frozen=True)
class LossReport:
    """One evaluation panel: every model's criteria with their ranks.

    Attributes:
        k: Forecast horizon of the panel; None for in-sample panels.
        evaluations: One entry per model in report order.
        ranks: Criterion ranks indexed by model label.
        extra: Additional ranked criteria per model label (AIC in-sample).

    """

    k: int | None
    evaluations: tuple[ModelEvaluation, ...]
    ranks: pd.DataFrame
    extra: dict[str, dict[str, float]] | None = None

    def frame(self) -> pd.DataFrame:
        """Return the panel with value and rank columns per criterion."""
        records = []
        for evaluation in self.evaluations:
            label = evaluation.model.label
            record: dict[str, object] = {"model": label}
            criteria = {str(c): v for c, v in evaluation.losses.as_dict().items()}
            if self.extra is not None:
                criteria = {**self.extra[label], **criteria}
            for criterion, value in criteria.items():
                record[criterion] = value
                rank = self.ranks.at[label, criterion]
                record[f"{criterion}_rank"] = None if pd.isna(rank) else int(rank)
            if evaluation.direction is not None:
                record["SR"] = evaluation.direction.success_ratio
                record["DA"] = evaluation.direction.statistic
                record["DA_significant"] = evaluation.direction.significant
            record["n"] = evaluation.losses.n
            record["skipped"] = evaluation.losses.skipped
            records.append(record)
        return pd.DataFrame.from_records(records)


def _check_rows(evaluations: Sequence[ModelEvaluation]) -> None:
    counts = {e.losses.n for e in evaluations}
    if len(counts) > 1:
        msg = f"Models were evaluated on different row counts: {sorted(counts)}."
        raise EvaluationError(msg)


def _ranks(
    evaluations: Sequence[ModelEvaluation],
    extra: Mapping[str, Mapping[str, float]] | None = None,
) -> pd.DataFrame:
    values = {}
    for e in evaluations:
        criteria = {str(c): v for c, v in e.losses.as_dict().items()}
        if extra is not None:
            criteria = {**extra[e.model.label], **criteria}
        values[e.model.label] = criteria
    return rank_models(values)


def evaluate_panel(tables: Sequence[ForecastTable], k: int) -> LossReport:
    """Score every model's k-step forecasts and rank them."""
    evaluations = []
    for table in tables:
        panel = table.panel(k)
        direction = da_test(panel) if len(panel) >= MIN_DA_ROWS else None
        evaluations.append(ModelEvaluation(table.model, losses(panel), direction))
    _check_rows(evaluations)
    return LossReport(k=k, evaluations=tuple(evaluations), ranks=_ranks(evaluations))


def evaluate_in_sample(fits: Sequence[FitResult], vol: RealizedVolSeries) -> LossReport:
    """Rank models on AIC and the in-sample one-step losses."""
    evaluations = [ModelEvaluation(f.model, in_sample_losses(f, vol)) for f in fits]
    _check_rows(evaluations)
    extra = {f.model.label: {"AIC": f.aic} for f in fits}
    return LossReport(
        k=None,
        evaluations=tuple(evaluations),
        ranks=_ranks(evaluations, extra),
        extra=extra,
    )

