"""Result tables and trend analysis.

A sweep produces one row per fragment size: the fragment text, its symbol
count, the backend's result-set size, and log10 of that size (absent for
zero hits).  ``fit_trend`` runs ordinary least squares of log-size on
symbol count — the straight "fitted interpolation" line — and
``threshold_length`` inverts the fit to find the fragment size at which
result sets become manageable.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

from fraglead.errors import (
    DegenerateAbscissa,
    InsufficientPoints,
    NonDecreasingTrend,
    NoPlottablePoints,
)

CSV_HEADER = ["fragment", "symbols", "result_set_size", "log10_size"]


@dataclass(frozen=True)
class ResultRow:
    """One fragment query outcome.

    ``log_size`` is present exactly when ``size`` is a positive count;
    a failed query leaves ``size`` as None and records the failure in
    ``error``.
    """

    fragment: str
    symbols: int
    size: int | None
    log_size: float | None
    error: str | None = None


@dataclass(frozen=True)
class ResultTable:
    rows: tuple[ResultRow, ...]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class TrendFit:
    """Least-squares line log10(size) = intercept + slope * symbols."""

    slope: float
    intercept: float
    r_squared: float
    points_used: int
    excluded_zero_rows: int

    def predict(self, symbols: float) -> float:
        return self.intercept + self.slope * symbols


def make_row(fragment: str, symbols: int, size: int | None, error: str | None = None) -> ResultRow:
    """Build a row, deriving the log column from the size."""
    log_size = math.log10(size) if size is not None and size > 0 else None
    return ResultRow(fragment, symbols, size, log_size, error)


def log_transform(entries: Iterable[tuple[str, int, int]]) -> ResultTable:
    """Turn (fragment, symbols, size) triples into a table with log columns.

    Log values are stored at full precision; display rounding to two
    decimals happens only when the table is emitted.  A size of zero
    leaves the log column absent.
    """
    return ResultTable(tuple(make_row(f, n, s) for f, n, s in entries))


def fit_trend(table: ResultTable) -> TrendFit:
    """Ordinary least squares of log_size on symbols.

    Rows without a log value (zero result sets or failed queries) are
    excluded and counted in ``excluded_zero_rows``.
    """
    points = [(row.symbols, row.log_size) for row in table.rows if row.log_size is not None]
    excluded = len(table.rows) - len(points)
    if len(points) < 2:
        raise InsufficientPoints(
            f"need at least 2 rows with a log value, have {len(points)}"
        )
    xs = [float(x) for x, _ in points]
    ys = [y for _, y in points]
    if len(set(xs)) < 2:
        raise DegenerateAbscissa("all symbol counts are equal")

    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x

    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    r_squared = min(1.0, max(0.0, r_squared))
    return TrendFit(slope, intercept, r_squared, n, excluded)


def threshold_length(fit: TrendFit, manageable: int = 1000) -> int:
    """Smallest fragment size L >= 1 with predicted size <= ``manageable``.

    Only defined for a decreasing trend.
    """
    if fit.slope >= 0:
        raise NonDecreasingTrend(
            f"slope {fit.slope:.4f} is not negative; no threshold exists"
        )
    target = math.log10(manageable)
    exact = (fit.intercept - target) / (-fit.slope)
    return max(1, math.ceil(exact - 1e-9))


def emit_csv(table: ResultTable, fit: TrendFit | None = None) -> str:
    """Render the table as CSV (UTF-8 text, LF endings).

    Columns are ``fragment,symbols,result_set_size,log10_size``; the log
    column shows two decimals.  Failed rows leave size and log empty and
    are echoed as trailing ``#`` comments; a fit, when given, is appended
    as two comment lines.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    failures = []
    for row in table.rows:
        size_cell = "" if row.size is None else str(row.size)
        log_cell = "" if row.log_size is None else f"{row.log_size:.2f}"
        writer.writerow([row.fragment, row.symbols, size_cell, log_cell])
        if row.error is not None:
            failures.append(f"# error at {row.symbols} symbols: {row.error}\n")
    buffer.writelines(failures)
    if fit is not None:
        buffer.write(
            f"# fit slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
            f"r_squared={fit.r_squared:.6f}\n"
        )
        buffer.write(
            f"# fit points_used={fit.points_used} "
            f"excluded_zero_rows={fit.excluded_zero_rows}\n"
        )
    return buffer.getvalue()


def read_csv(text: str) -> ResultTable:
    """Parse a table previously written by :func:`emit_csv`.

    Comment lines are ignored; the log column is recomputed from the size
    so downstream math runs at full precision (the file only keeps two
    decimals).
    """
    rows = []
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    for record in reader:
        if len(record) != 4:
            raise ValueError(f"expected 4 columns, got {record!r}")
        fragment, symbols, size_cell, _ = record
        size = int(size_cell) if size_cell else None
        rows.append(make_row(fragment, int(symbols), size))
    return ResultTable(tuple(rows))


def _tick_step(span: float) -> float:
    if span <= 0:
        return 1.0
    raw = span / 6
    magnitude = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * magnitude:
            return mult * magnitude
    return 10 * magnitude


def emit_plot(table: ResultTable, fit: TrendFit | None = None,
              width: int = 640, height: int = 440) -> str:
    """Standalone SVG: square markers for (symbols, log size) plus the
    fitted line across the symbol range.

    With fewer than two plottable points (or no fit) the line is replaced
    by a notice annotation.
    """
    points = [(row.symbols, row.log_size) for row in table.rows if row.log_size is not None]
    if not points:
        raise NoPlottablePoints("no rows with a log value to plot")

    margin_left, margin_right = 64, 16
    margin_top, margin_bottom = 16, 52
    plot_w = width - margin_left - margin_right
    plot_h = height - margin_top - margin_bottom

    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_min, x_max = min(xs), max(xs)
    if x_min == x_max:
        x_min, x_max = x_min - 1, x_max + 1
    y_min = min(0.0, math.floor(min(ys)))
    y_max = max(1.0, math.ceil(max(ys)))

    def sx(x: float) -> float:
        return margin_left + (x - x_min) / (x_max - x_min) * plot_w

    def sy(y: float) -> float:
        return margin_top + (y_max - y) / (y_max - y_min) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line class="axis" x1="{margin_left}" y1="{sy(y_min):.1f}" '
        f'x2="{margin_left + plot_w}" y2="{sy(y_min):.1f}" stroke="black"/>',
        f'<line class="axis" x1="{margin_left}" y1="{margin_top}" '
        f'x2="{margin_left}" y2="{sy(y_min):.1f}" stroke="black"/>',
    ]

    x_step = max(1, int(_tick_step(x_max - x_min)))
    tick = math.ceil(x_min / x_step) * x_step
    while tick <= x_max:
        parts.append(
            f'<text class="xtick" x="{sx(tick):.1f}" y="{sy(y_min) + 16:.1f}" '
            f'font-size="11" text-anchor="middle">{tick}</text>'
        )
        tick += x_step
    y_tick = y_min
    y_step = _tick_step(y_max - y_min)
    while y_tick <= y_max + 1e-9:
        parts.append(
            f'<text class="ytick" x="{margin_left - 8}" y="{sy(y_tick) + 4:.1f}" '
            f'font-size="11" text-anchor="end">{y_tick:g}</text>'
        )
        y_tick += y_step

    parts.append(
        f'<text class="xlabel" x="{margin_left + plot_w / 2:.1f}" '
        f'y="{height - 12}" font-size="13" text-anchor="middle"># symbols</text>'
    )
    parts.append(
        f'<text class="ylabel" x="14" y="{margin_top + plot_h / 2:.1f}" '
        f'font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {margin_top + plot_h / 2:.1f})">'
        f'log(result set size)</text>'
    )

    if fit is not None and len(points) >= 2:
        x_lo, x_hi = min(xs), max(xs)
        parts.append(
            f'<line class="fit" x1="{sx(x_lo):.1f}" y1="{sy(fit.predict(x_lo)):.1f}" '
            f'x2="{sx(x_hi):.1f}" y2="{sy(fit.predict(x_hi)):.1f}" '
            f'stroke="black" stroke-width="1.5"/>'
        )
    else:
        parts.append(
            f'<text class="notice" x="{margin_left + plot_w / 2:.1f}" '
            f'y="{margin_top + 14}" font-size="11" text-anchor="middle" '
            f'fill="gray">trend line omitted: not enough points</text>'
        )

    half = 4
    for x, y in points:
        parts.append(
            f'<rect class="pt" x="{sx(x) - half:.1f}" y="{sy(y) - half:.1f}" '
            f'width="{2 * half}" height="{2 * half}" fill="royalblue"/>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
