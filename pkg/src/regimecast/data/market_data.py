"""Dated price series, percent log-returns and realized volatility.

All series are immutable: values are stored as read-only numpy arrays next to
a ``pandas.DatetimeIndex`` so they can be shared between concurrently running
model tasks.
"""

import datetime as dt
import hashlib
import logging
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path

import numpy as np
import pandas as pd

from regimecast.exceptions import PriceFileError, SplitError
from regimecast.utils.logging import AppLoggerAdapter

MIN_IN_SAMPLE = 50

logger = logging.getLogger(__name__)


class Frequency(StrEnum):
    """Declared sampling frequency of a price file."""

    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"

    @property
    def pandas_freq(self) -> str:
        """Return the pandas offset alias used for synthetic calendars."""
        match self:
            case Frequency.DAILY:
                return "B"
            case Frequency.WEEKLY:
                return "W-FRI"
            case Frequency.MONTHLY:
                return "ME"


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


def _check_dates(dates: pd.DatetimeIndex, n: int, what: str) -> None:
    if len(dates) != n:
        msg = f"{what}: {len(dates)} dates for {n} values."
        raise PriceFileError(msg)
    if not dates.is_monotonic_increasing or dates.has_duplicates:
        msg = f"{what}: dates must be strictly increasing."
        raise PriceFileError(msg)


@dataclass(frozen=True)
class PriceSeries:
    """Prices observed at a declared frequency.

    Attributes:
        frequency: Declared frequency of the observations.
        dates: Observation dates, strictly increasing.
        values: Positive prices.
        checksum: SHA-256 of the file the prices were read from, if any.

    """

    frequency: Frequency
    dates: pd.DatetimeIndex
    values: np.ndarray
    checksum: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(self.values))
        _check_dates(self.dates, len(self.values), "PriceSeries")
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0.0):
            msg = "PriceSeries: all prices must be finite and positive."
            raise PriceFileError(msg)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ReturnSeries:
    """Percent log-returns, 100·(ln p_t − ln p_{t−1}), dated by p_t."""

    frequency: Frequency
    dates: pd.DatetimeIndex
    values: np.ndarray
    checksum: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(self.values))
        _check_dates(self.dates, len(self.values), "ReturnSeries")
        if not np.all(np.isfinite(self.values)):
            msg = "ReturnSeries: returns must be finite."
            raise PriceFileError(msg)

    def __len__(self) -> int:
        return len(self.values)

    def head(self, n: int) -> "ReturnSeries":
        """Return the first ``n`` observations as a new series."""
        return ReturnSeries(
            self.frequency, self.dates[:n], self.values[:n], self.checksum
        )


@dataclass(frozen=True)
class RealizedVolSeries:
    """Realized volatility proxy: the squared percent return."""

    frequency: Frequency
    dates: pd.DatetimeIndex
    values: np.ndarray
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(self.values))
        _check_dates(self.dates, len(self.values), "RealizedVolSeries")
        if np.any(self.values < 0.0):
            msg = "RealizedVolSeries: variances must be non-negative."
            raise PriceFileError(msg)
        cumulative = np.concatenate(([0.0], np.cumsum(self.values)))
        object.__setattr__(self, "cumulative", _frozen(cumulative))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SampleSplit:
    """In-sample / out-of-sample partition of a return series.

    Attributes:
        in_sample_end: Boundary date, the last in-sample observation.
        in_sample: Index range of the estimation sample.
        out_of_sample: Index range of the evaluation sample.

    """

    in_sample_end: dt.date
    in_sample: range
    out_of_sample: range

    def __post_init__(self) -> None:
        if self.in_sample.start != 0 or self.in_sample.stop != self.out_of_sample.start:
            msg = "SampleSplit ranges must be contiguous and start at 0."
            raise SplitError(msg)

    @property
    def n_in(self) -> int:
        """Number of in-sample observations."""
        return len(self.in_sample)

    @property
    def n_out(self) -> int:
        """Number of out-of-sample observations."""
        return len(self.out_of_sample)


def file_checksum(path: Path) -> str:
    """Return the SHA-256 hex digest of a file's bytes."""
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _first_bad_row(mask: np.ndarray) -> int:
    # data row numbers are 1-based; the header is line 1 of the file
    return int(np.flatnonzero(mask)[0]) + 1


def load_prices(
    path: Path,
    frequency: Frequency,
    date_column: str = "date",
    price_column: str = "price",
) -> PriceSeries:
    """Read a CSV price file into a PriceSeries.

    Args:
        path: CSV file with a header row, UTF-8 encoded. Lines starting with
            ``#`` are skipped.
        frequency: Declared frequency; never inferred from the dates.
        date_column: Name of the ISO-8601 date column.
        price_column: Name of the price column.

    Returns:
        The prices sorted by date, with the file checksum attached.

    Raises:
        PriceFileError: If the file is missing, a column is absent, a row is
            malformed, a price is not positive or a date is duplicated.

    """
    app_logger = AppLoggerAdapter(logger, operation="DATA_LOAD", file=str(path))
    if not path.is_file():
        msg = f"Price file {path} does not exist."
        raise PriceFileError(msg)

    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            encoding="utf-8",
            keep_default_na=False,
            skipinitialspace=True,
            comment="#",
        )
    except (
        pd.errors.ParserError,
        pd.errors.EmptyDataError,
        UnicodeDecodeError,
    ) as exc:
        msg = f"Price file {path} cannot be parsed: {exc}"
        raise PriceFileError(msg) from exc

    missing = [col for col in (date_column, price_column) if col not in frame.columns]
    if missing:
        msg = f"Price file {path} has no column(s) {', '.join(map(repr, missing))}."
        raise PriceFileError(msg)

    date_text = frame[date_column].str.strip()
    price_text = frame[price_column].str.strip()
    dates = pd.to_datetime(date_text, format="ISO8601", errors="coerce")
    prices = pd.to_numeric(price_text, errors="coerce").to_numpy(dtype=np.float64)

    bad = dates.isna().to_numpy() | np.isnan(prices)
    if bad.any():
        row = _first_bad_row(bad)
        msg = (
            f"Price file {path}: malformed row {row} "
            f"({date_text.iloc[row - 1]!r}, {price_text.iloc[row - 1]!r})."
        )
        raise PriceFileError(msg)

    non_positive = ~np.isfinite(prices) | (prices <= 0.0)
    if non_positive.any():
        row = _first_bad_row(non_positive)
        msg = (
            f"Price file {path}: non-positive price {price_text.iloc[row - 1]!r} "
            f"in row {row}."
        )
        raise PriceFileError(msg)

    duplicated = dates.duplicated(keep="first").to_numpy()
    if duplicated.any():
        row = _first_bad_row(duplicated)
        msg = (
            f"Price file {path}: duplicate date {date_text.iloc[row - 1]} in row {row}."
        )
        raise PriceFileError(msg)

    order = np.argsort(dates.to_numpy(), kind="stable")
    index = pd.DatetimeIndex(dates.to_numpy()[order], name="date")
    series = PriceSeries(
        frequency=frequency,
        dates=index,
        values=prices[order],
        checksum=file_checksum(path),
    )
    app_logger.debug(f"Loaded {len(series)} {frequency} prices successfully")
    return series


def to_returns(prices: PriceSeries) -> ReturnSeries:
    """Return 100·(ln p_t − ln p_{t−1}) dated by p_t."""
    if len(prices) < 2:
        msg = "At least two prices are needed to build returns."
        raise SplitError(msg)
    return ReturnSeries(
        frequency=prices.frequency,
        dates=prices.dates[1:],
        values=100.0 * np.diff(np.log(prices.values)),
        checksum=prices.checksum,
    )


def to_realized_vol(returns: ReturnSeries) -> RealizedVolSeries:
    """Return the squared returns."""
    return RealizedVolSeries(
        frequency=returns.frequency,
        dates=returns.dates,
        values=np.square(returns.values),
    )


def split(returns: ReturnSeries, in_sample_end: dt.date) -> SampleSplit:
    """Partition a series at a boundary date that belongs to the in-sample part.

    Raises:
        SplitError: If the date is outside the series or absent from it, the
            in-sample part has fewer than 50 points, or nothing is left out of
            sample.

    """
    boundary = pd.Timestamp(in_sample_end)
    if boundary < returns.dates[0] or boundary > returns.dates[-1]:
        msg = (
            f"Split date {in_sample_end} is outside the series range "
            f"{returns.dates[0].date()}..{returns.dates[-1].date()}."
        )
        raise SplitError(msg)
    position = int(returns.dates.get_indexer([boundary])[0])
    if position < 0:
        msg = f"Split date {in_sample_end} is not an observation date of the series."
        raise SplitError(msg)
    n_in = position + 1
    if n_in < MIN_IN_SAMPLE:
        msg = (
            f"In-sample part has {n_in} observations; at least {MIN_IN_SAMPLE} "
            "are required."
        )
        raise SplitError(msg)
    if n_in == len(returns):
        msg = f"Split date {in_sample_end} leaves no out-of-sample observations."
        raise SplitError(msg)
    return SampleSplit(
        in_sample_end=boundary.date(),
        in_sample=range(0, n_in),
        out_of_sample=range(n_in, len(returns)),
    )


def realized_k_period(vol: RealizedVolSeries, origin: int, k: int) -> float:
    """Return Σ_{τ=1..k} σ²_{origin+τ}.

    Raises:
        SplitError: If the window runs past the end of the series.

    """
    if k < 1 or origin < 0:
        msg = f"Invalid window: origin={origin}, k={k}."
        raise SplitError(msg)
    if origin + k > len(vol) - 1:
        msg = (
            f"Window origin={origin}, k={k} exceeds the series end "
            f"(last index {len(vol) - 1})."
        )
        raise SplitError(msg)
    return float(np.sum(vol.values[origin + 1 : origin + k + 1]))


def realized_k_return(returns: ReturnSeries, origin: int, k: int) -> float:
    """Return the k-period return Σ_{τ=1..k} r_{origin+τ}."""
    if k < 1 or origin < 0 or origin + k > len(returns) - 1:
        msg = f"Window origin={origin}, k={k} exceeds the series bounds."
        raise SplitError(msg)
    return float(np.sum(returns.values[origin + 1 : origin + k + 1]))


def subsample(
    returns: ReturnSeries,
    start: dt.date | None = None,
    end: dt.date | None = None,
) -> ReturnSeries:
    """Restrict a series to an inclusive date window."""
    if start is not None and end is not None and start > end:
        msg = f"Sub-sample start {start} is after its end {end}."
        raise SplitError(msg)
    mask = np.ones(len(returns), dtype=bool)
    if start is not None:
        mask &= returns.dates >= pd.Timestamp(start)
    if end is not None:
        mask &= returns.dates <= pd.Timestamp(end)
    if not mask.any():
        msg = f"Sub-sample window {start}..{end} contains no observations."
        raise SplitError(msg)
    return ReturnSeries(
        frequency=returns.frequency,
        dates=returns.dates[mask],
        values=returns.values[mask],
        checksum=returns.checksum,
    )


def market_frame(prices: PriceSeries) -> pd.DataFrame:
    """Return prices, returns and squared returns on one date index.

    The first row has no return; its return and variance are NaN.
    """
    returns = np.concatenate(([np.nan], 100.0 * np.diff(np.log(prices.values))))
    return pd.DataFrame(
        {
            "date": prices.dates.strftime("%Y-%m-%d"),
            "price": prices.values,
            "return": returns,
            "realized_variance": np.square(returns),
        }
    )


def write_prices(
    prices: PriceSeries,
    path: Path,
    date_column: str = "date",
    price_column: str = "price",
    header: str = "",
) -> Path:
    """Write prices in the CSV layout ``load_prices`` reads.

    ``header`` is written first; ``load_prices`` skips its ``#`` lines.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {
            date_column: prices.dates.strftime("%Y-%m-%d"),
            price_column: prices.values,
        }
    )
    body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    path.write_text(header + body, encoding="utf-8")
    return path
