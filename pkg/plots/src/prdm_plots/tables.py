"""Exact readers for the CSV tables the prdm CLI writes.

Both dialects are comma-separated UTF-8 with a header row. Values are
parsed as fractions: the lossless `*_rational` columns are preferred
when present, the 12-place decimal columns otherwise. Errors carry the
1-based file row number (the header is row 1).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple


class TableError(ValueError):
    """A CSV file does not match the expected dialect."""


def _parse_value(text: str, column: str, row_number: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise TableError(
            f"row {row_number}: bad {column} value {text!r}: {exc}"
        ) from exc


def _pick(record: Dict[str, str], exact: str, plain: str) -> str:
    value = record.get(exact)
    if value:
        return value
    return record.get(plain, "")


@dataclass(frozen=True)
class SweepRow:
    scenario: str
    delta: Fraction
    utility: Fraction


@dataclass(frozen=True)
class SweepTable:
    """Attack-utility sweep: one (delta, utility) series per scenario."""

    rows: Tuple[SweepRow, ...]

    @property
    def scenarios(self) -> Tuple[str, ...]:
        seen: List[str] = []
        for row in self.rows:
            if row.scenario not in seen:
                seen.append(row.scenario)
        return tuple(seen)

    def series(self, scenario: str) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return tuple(
            (row.delta, row.utility) for row in self.rows if row.scenario == scenario
        )


def load_sweep(path) -> SweepTable:
    """Read a sweep CSV; deltas must strictly increase within a scenario."""
    rows: List[SweepRow] = []
    last_delta: Dict[str, Fraction] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"scenario", "delta", "utility"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise TableError(
                f"row 1: sweep CSV needs columns {sorted(required)},"
                f" got {reader.fieldnames}"
            )
        for number, record in enumerate(reader, start=2):
            scenario = (record.get("scenario") or "").strip()
            if not scenario:
                raise TableError(f"row {number}: empty scenario name")
            delta = _parse_value(
                _pick(record, "delta_rational", "delta"), "delta", number
            )
            utility = _parse_value(
                _pick(record, "utility_rational", "utility"), "utility", number
            )
            if scenario in last_delta and delta <= last_delta[scenario]:
                raise TableError(
                    f"row {number}: delta {delta} does not increase within"
                    f" scenario {scenario!r}"
                )
            last_delta[scenario] = delta
            rows.append(SweepRow(scenario, delta, utility))
    if not rows:
        raise TableError("row 1: sweep CSV has a header but no data rows")
    return SweepTable(tuple(rows))


@dataclass(frozen=True)
class ResidualTable:
    """Residual budget against a capacity scale factor."""

    points: Tuple[Tuple[Fraction, Fraction], ...]


def load_residuals(path) -> ResidualTable:
    """Read a residual-vs-scale CSV; scales must strictly increase."""
    points: List[Tuple[Fraction, Fraction]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"scale", "residual"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise TableError(
                f"row 1: residual CSV needs columns {sorted(required)},"
                f" got {reader.fieldnames}"
            )
        for number, record in enumerate(reader, start=2):
            scale = _parse_value(
                _pick(record, "scale_rational", "scale"), "scale", number
            )
            residual = _parse_value(
                _pick(record, "residual_rational", "residual"), "residual", number
            )
            if points and scale <= points[-1][0]:
                raise TableError(
                    f"row {number}: scale {scale} does not increase"
                )
            points.append((scale, residual))
    if not points:
        raise TableError("row 1: residual CSV has a header but no data rows")
    return ResidualTable(tuple(points))
