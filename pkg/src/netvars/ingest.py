"""Loading, validation and transformation of numeric tabular data."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np


class LoadError(ValueError):
    """Raised when a byte stream cannot be turned into a valid DataTable."""


@dataclass(frozen=True)
class DataTable:
    """A named, dense, all-finite numeric matrix (m rows x d columns)."""

    column_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        if len(self.column_names) != vals.shape[1]:
            raise ValueError("column_names length does not match column count")
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("column names must be unique")
        if any(not name for name in self.column_names):
            raise ValueError("column names must be non-empty")
        if not np.all(np.isfinite(vals)):
            raise ValueError("table contains NaN or infinite entries")

    @property
    def row_count(self) -> int:
        return self.values.shape[0]

    @property
    def col_count(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.column_names.index(name)]

    def select(self, names: list[str] | tuple[str, ...]) -> "DataTable":
        """New table restricted to `names`, in the order given."""
        idx = [self.column_names.index(n) for n in names]
        return DataTable(tuple(names), self.values[:, idx].copy())

    def drop(self, names: set[str]) -> "DataTable":
        keep = [n for n in self.column_names if n not in names]
        return self.select(keep)


@dataclass(frozen=True)
class StandardizationRecord:
    """Per-column mean and population standard deviation, for exact inversion."""

    means: np.ndarray
    stds: np.ndarray

    def inverse(self, t: DataTable) -> DataTable:
        return DataTable(t.column_names, t.values * self.stds + self.means)


@dataclass
class LoadResult:
    table: DataTable
    dropped_columns: list[str] = field(default_factory=list)
    dropped_rows: int = 0
    warnings: list[str] = field(default_factory=list)


def _parse_cell(cell: str) -> float | None:
    """Parse one CSV cell; None marks a missing value. Raises ValueError if non-numeric."""
    s = cell.strip()
    if not s:
        return None
    v = float(s)
    # textual NaN/inf parse as floats but violate the finiteness invariant;
    # treat them as missing so the row gets dropped
    if not math.isfinite(v):
        return None
    return v


def read_csv_rows(data: bytes | str) -> list[list[str]]:
    """Split a CSV byte stream into raw string rows (RFC-4180 style, comma delimiter)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    rows = [row for row in csv.reader(io.StringIO(data)) if row and any(c.strip() for c in row)]
    return rows


def load_csv(data: bytes | str, header: bool = True) -> LoadResult:
    """Load delimiter-separated text into a DataTable.

    Non-numeric columns are dropped with a warning; rows with missing values
    in the retained columns are dropped and counted. Column names come from
    the header row when `header` is set, else V1..Vd.
    """
    rows = read_csv_rows(data)
    if not rows:
        raise LoadError("empty input")

    if header:
        names = [c.strip() for c in rows[0]]
        body = rows[1:]
    else:
        names = [f"V{j + 1}" for j in range(len(rows[0]))]
        body = rows
    if len(set(names)) != len(names):
        raise LoadError("duplicate column names in header")
    if any(not n for n in names):
        raise LoadError("empty column name in header")
    if not body:
        raise LoadError("no data rows")

    width = len(names)
    for i, row in enumerate(body):
        if len(row) != width:
            raise LoadError(f"row {i + 1} has {len(row)} fields, expected {width}")

    # a column is numeric iff every non-empty cell parses as a real
    parsed: list[list[float | None]] = []
    numeric = [True] * width
    for row in body:
        out: list[float | None] = []
        for j, cell in enumerate(row):
            if not numeric[j]:
                out.append(None)
                continue
            try:
                out.append(_parse_cell(cell))
            except ValueError:
                numeric[j] = False
                out.append(None)
        parsed.append(out)

    keep = [j for j in range(width) if numeric[j]]
    dropped_cols = [names[j] for j in range(width) if not numeric[j]]
    warnings = [f"dropped non-numeric column '{names[j]}'" for j in range(width) if not numeric[j]]
    if not keep:
        raise LoadError("no numeric columns in input")

    kept_rows = []
    dropped_rows = 0
    for out in parsed:
        cells = [out[j] for j in keep]
        if any(c is None for c in cells):
            dropped_rows += 1
        else:
            kept_rows.append(cells)
    if dropped_rows:
        warnings.append(f"dropped {dropped_rows} row(s) with missing values")
    if len(kept_rows) < 2:
        raise LoadError("fewer than 2 complete rows after cleaning")

    table = DataTable(tuple(names[j] for j in keep), np.array(kept_rows, dtype=np.float64))
    return LoadResult(table=table, dropped_columns=dropped_cols, dropped_rows=dropped_rows, warnings=warnings)


def drop_constant_columns(t: DataTable) -> tuple[DataTable, list[str]]:
    """Remove columns whose sample variance is <= 1e-12; returns (table, dropped names)."""
    var = t.values.var(axis=0, ddof=1) if t.row_count > 1 else np.zeros(t.col_count)
    dropped = [n for n, v in zip(t.column_names, var) if v <= 1e-12]
    if len(dropped) == t.col_count:
        raise ValueError("all columns are constant")
    if not dropped:
        return t, []
    return t.drop(set(dropped)), dropped


def standardize(t: DataTable) -> tuple[DataTable, StandardizationRecord]:
    """Center each column and scale to unit population standard deviation (divisor m)."""
    means = t.values.mean(axis=0)
    stds = t.values.std(axis=0)  # population, ddof=0
    if np.any(stds <= 0):
        bad = [n for n, s in zip(t.column_names, stds) if s <= 0]
        raise ValueError(f"constant column(s) cannot be standardized: {bad}")
    z = (t.values - means) / stds
    return DataTable(t.column_names, z), StandardizationRecord(means=means, stds=stds)


def compute_returns(
    prices: DataTable,
    lags: int = 0,
    denominator: str = "current",
) -> DataTable:
    """Daily returns plus lagged copies from a price table in chronological order.

    For each column SYM the output holds SYM_RTN and SYM_RTN_LG1..LG<lags>.
    r_t = (v_t - v_{t-1}) / v_t with denominator="current" (the default);
    "previous" uses the conventional v_{t-1}. The first 1+lags rows are
    removed so every output cell is defined.
    """
    if lags < 0:
        raise ValueError("lags must be >= 0")
    if denominator not in ("current", "previous"):
        raise ValueError("denominator must be 'current' or 'previous'")
    m = prices.row_count
    if m < lags + 2:
        raise ValueError(f"need at least {lags + 2} rows for {lags} lag(s), got {m}")
    v = prices.values
    nonpos = np.argwhere(v <= 0)
    if nonpos.size:
        i, j = nonpos[0]
        raise ValueError(
            f"non-positive price at row {int(i) + 1}, column '{prices.column_names[int(j)]}'"
        )

    denom = v[1:] if denominator == "current" else v[:-1]
    r = (v[1:] - v[:-1]) / denom  # (m-1) x d, r[t-1] is the return at time t

    cols: list[np.ndarray] = []
    names: list[str] = []
    start = lags  # first row of r where all lagged values exist
    for j, sym in enumerate(prices.column_names):
        names.append(f"{sym}_RTN")
        cols.append(r[start:, j])
        for lag in range(1, lags + 1):
            names.append(f"{sym}_RTN_LG{lag}")
            cols.append(r[start - lag : r.shape[0] - lag, j])
    return DataTable(tuple(names), np.column_stack(cols))
