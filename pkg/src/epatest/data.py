"""CSV ingestion for forecast-evaluation datasets.

Survey-style forecast files mix numeric columns with missing-value markers
("#N/A", "NA", or empty cells) and a textual date column such as
"2007:Q2". The loader pulls two forecast columns and a realization column
out of such a file, optionally restricts to a date window (the YYYY:QQ
format sorts correctly as plain strings), and resolves missing data by one
of two explicit policies before any statistic is computed:

* ``drop``: keep only rows where both forecasts and the realization are
  all present (listwise deletion);
* ``zero``: keep every row and later treat any forecast error touching a
  missing value as exactly zero.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .series import loss_differential

__all__ = [
    "MISSING_MARKERS",
    "NA_POLICIES",
    "CsvParseError",
    "ForecastDataset",
    "load_csv",
    "forecast_errors",
    "loss_series",
]

MISSING_MARKERS = frozenset({"", "NA", "#N/A"})
NA_POLICIES = ("drop", "zero")


class CsvParseError(ValueError):
    """A cell could not be interpreted; carries 1-based file coordinates."""

    def __init__(self, row: int, column: str, message: str):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: {message}")


@dataclass(frozen=True)
class ForecastDataset:
    """Aligned forecast and realization columns after policy resolution.

    Under the ``drop`` policy no NaN survives in any numeric column; under
    ``zero`` NaNs persist here and are turned into zero forecast errors by
    :func:`forecast_errors`.
    """

    f1: np.ndarray
    f2: np.ndarray
    realization: np.ndarray
    dates: tuple[str, ...] | None
    forecast_cols: tuple[str, str]
    realization_col: str
    na_policy: str

    @property
    def n_rows(self) -> int:
        return self.realization.size


def _parse_cell(raw: str, row: int, column: str) -> float:
    text = raw.strip()
    if text in MISSING_MARKERS:
        return np.nan
    try:
        return float(text)
    except ValueError:
        raise CsvParseError(row, column, f"cannot parse {raw!r} as a number") from None


def load_csv(
    path,
    forecast_cols: tuple[str, str],
    realization_col: str,
    na_policy: str = "drop",
    date_col: str | None = None,
    date_range: tuple[str | None, str | None] | None = None,
) -> ForecastDataset:
    """Load two forecast columns and a realization column from a CSV file.

    Parameters
    ----------
    path : path-like
        CSV file with a header row.
    forecast_cols : (str, str)
        Column names of forecast 1 and forecast 2, in the order that
        defines the loss differential L(e1) - L(e2).
    realization_col : str
        Column name of the realized values.
    na_policy : str
        ``"drop"`` or ``"zero"``; see the module docstring.
    date_col : str, optional
        Textual date column used for filtering and carried through.
    date_range : (str or None, str or None), optional
        Inclusive lower/upper bounds compared lexicographically against the
        date column (requires ``date_col``). Either bound may be None.

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    CsvParseError
        For a malformed row or an unparseable numeric cell, naming the
        1-based row and the column.
    ValueError
        For a missing column, an unknown policy, or a date range without a
        date column.
    """
    if na_policy not in NA_POLICIES:
        raise ValueError(f"unknown na_policy {na_policy!r}; expected one of {NA_POLICIES}")
    if date_range is not None and date_col is None:
        raise ValueError("date_range requires date_col")
    f1_col, f2_col = forecast_cols
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [name.strip() for name in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        positions = {}
        wanted = [f1_col, f2_col, realization_col] + ([date_col] if date_col else [])
        for name in wanted:
            if name not in header:
                raise ValueError(
                    f"{path}: column {name!r} not found; available: {', '.join(header)}"
                )
            positions[name] = header.index(name)
        f1_vals: list[float] = []
        f2_vals: list[float] = []
        realiz_vals: list[float] = []
        dates: list[str] = []
        lo, hi = date_range if date_range is not None else (None, None)
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvParseError(
                    row_num, header[min(len(row), len(header) - 1)],
                    f"expected {len(header)} fields, got {len(row)}",
                )
            if date_col is not None:
                date = row[positions[date_col]].strip()
                if lo is not None and date < lo:
                    continue
                if hi is not None and date > hi:
                    continue
            values = {
                name: _parse_cell(row[positions[name]], row_num, name)
                for name in (f1_col, f2_col, realization_col)
            }
            if na_policy == "drop" and any(np.isnan(v) for v in values.values()):
                continue
            f1_vals.append(values[f1_col])
            f2_vals.append(values[f2_col])
            realiz_vals.append(values[realization_col])
            if date_col is not None:
                dates.append(date)
    return ForecastDataset(
        f1=np.asarray(f1_vals, dtype=float),
        f2=np.asarray(f2_vals, dtype=float),
        realization=np.asarray(realiz_vals, dtype=float),
        dates=tuple(dates) if date_col is not None else None,
        forecast_cols=(f1_col, f2_col),
        realization_col=realization_col,
        na_policy=na_policy,
    )


def forecast_errors(ds: ForecastDataset) -> tuple[np.ndarray, np.ndarray]:
    """Forecast errors (realization minus forecast) under the dataset's policy.

    With the ``zero`` policy an error involving any missing value is set to
    exactly 0.0, which keeps the row in the sample while contributing no
    loss for that forecast.
    """
    e1 = ds.realization - ds.f1
    e2 = ds.realization - ds.f2
    if ds.na_policy == "zero":
        e1 = np.where(np.isnan(e1), 0.0, e1)
        e2 = np.where(np.isnan(e2), 0.0, e2)
    return e1, e2


def loss_series(ds: ForecastDataset, loss: str = "squared") -> np.ndarray:
    """Loss differential L(e1) - L(e2) of the dataset's two forecasts."""
    e1, e2 = forecast_errors(ds)
    return loss_differential(e1, e2, loss)
