"""Input-output requirement table ingestion.

The canonical CSV layout is: row 1 is a header ``code, code_1, ..., code_N``
and rows 2..N+1 are ``code_i, w_i1, ..., w_iN``. Cell (row i, column j)
holds the input industry i requires from industry j per dollar of i's
output. Blank cells parse as 0.0 (the upstream spreadsheets use blanks
for zero flows). Industry names live in a separate two-column metadata
CSV (``code, name``).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import DuplicateCodeError, ShapeError


@dataclass(frozen=True)
class IndustryMeta:
    """One industry: detail-level code plus human-readable title."""

    code: str
    name: str = ""


@dataclass(frozen=True, eq=False)
class InputOutputTable:
    """Square matrix of non-negative requirement coefficients.

    ``coefficients[i, j]`` is the input industry i requires from industry
    j per dollar of i's output. Immutable after construction; safe to
    share read-only across threads.
    """

    industries: tuple[IndustryMeta, ...]
    coefficients: np.ndarray
    year: int = 0
    source_label: str = ""

    def __post_init__(self):
        coeff = np.array(self.coefficients, dtype=np.float64)  # own copy, kept read-only
        coeff.setflags(write=False)
        object.__setattr__(self, "coefficients", coeff)
        n = len(self.industries)
        if coeff.ndim != 2 or coeff.shape != (n, n):
            raise ShapeError(
                f"coefficient matrix shape {coeff.shape} does not match {n} industries"
            )
        if not np.all(np.isfinite(coeff)):
            raise ValueError("coefficient matrix contains non-finite values")
        if np.any(coeff < 0):
            i, j = np.argwhere(coeff < 0)[0]
            raise ValueError(f"negative coefficient at row {i + 1}, column {j + 1}")
        codes = [m.code for m in self.industries]
        if len(set(codes)) != len(codes):
            raise DuplicateCodeError("duplicate industry code in table")

    @property
    def n(self) -> int:
        return len(self.industries)

    @property
    def codes(self) -> list[str]:
        return [m.code for m in self.industries]

    def __eq__(self, other) -> bool:
        if not isinstance(other, InputOutputTable):
            return NotImplemented
        return (
            self.industries == other.industries
            and self.year == other.year
            and self.source_label == other.source_label
            and np.array_equal(self.coefficients, other.coefficients)
        )


@dataclass(frozen=True)
class TableSummary:
    n: int
    positive_off_diagonal: int
    positive_diagonal: int
    min_positive: float | None
    max_positive: float | None
    mean_positive: float | None

    def lines(self) -> list[str]:
        out = [
            f"N={self.n}",
            f"positive off-diagonal={self.positive_off_diagonal}",
            f"positive diagonal={self.positive_diagonal}",
        ]
        if self.min_positive is not None:
            out += [
                f"min positive={self.min_positive:.6g}",
                f"max positive={self.max_positive:.6g}",
                f"mean positive={self.mean_positive:.6g}",
            ]
        return out


def _rows_from(raw: str | TextIO) -> list[list[str]]:
    stream = io.StringIO(raw) if isinstance(raw, str) else raw
    rows = list(csv.reader(stream))
    # drop trailing blank lines that spreadsheet exports often leave behind
    while rows and all(cell.strip() == "" for cell in rows[-1]):
        rows.pop()
    return rows


def _parse_cell(cell: str, i: int, j: int, row_code: str, col_code: str) -> float:
    text = cell.strip()
    if text == "":
        return 0.0
    try:
        value = float(text)
    except ValueError:
        raise ValueError(
            f"non-numeric cell at row {i + 1}, column {j + 1}"
            f" ({row_code} x {col_code}): {cell!r}"
        ) from None
    if not math.isfinite(value):
        raise ValueError(
            f"non-finite cell at row {i + 1}, column {j + 1} ({row_code} x {col_code})"
        )
    if value < 0:
        raise ValueError(
            f"negative cell at row {i + 1}, column {j + 1}"
            f" ({row_code} x {col_code}): {value}"
        )
    return value


def parse_table(
    raw: str | TextIO,
    fmt: str = "csv",
    *,
    year: int = 0,
    source_label: str = "",
) -> InputOutputTable:
    """Parse a canonical CSV stream into a validated InputOutputTable.

    Row/column ordering is preserved from the source. Raises ShapeError
    for a non-square or ragged body, ValueError for negative or
    non-numeric cells (with coordinates), DuplicateCodeError for repeated
    industry codes.
    """
    if fmt != "csv":
        raise ValueError(f"unsupported table format: {fmt!r}")
    rows = _rows_from(raw)
    if len(rows) < 2:
        raise ShapeError("input has no data rows")

    header = rows[0]
    codes = [c.strip() for c in header[1:]]
    n = len(codes)
    if n == 0:
        raise ShapeError("header row lists no industry codes")
    seen: set[str] = set()
    for k, code in enumerate(codes):
        if code == "":
            raise ShapeError(f"empty industry code in header column {k + 2}")
        if code in seen:
            raise DuplicateCodeError(f"duplicate industry code {code!r}")
        seen.add(code)

    body = rows[1:]
    if len(body) != n:
        raise ShapeError(f"expected {n} data rows to match header, found {len(body)}")

    coeff = np.zeros((n, n), dtype=np.float64)
    for i, row in enumerate(body):
        if not row:
            raise ShapeError(f"empty data row {i + 1}")
        row_code = row[0].strip()
        if row_code != codes[i]:
            raise ShapeError(
                f"row {i + 1} code {row_code!r} does not match header code {codes[i]!r}"
            )
        if len(row) - 1 != n:
            raise ShapeError(
                f"row {i + 1} has {len(row) - 1} cells, expected {n}"
            )
        for j, cell in enumerate(row[1:]):
            coeff[i, j] = _parse_cell(cell, i, j, row_code, codes[j])

    industries = tuple(IndustryMeta(code=c) for c in codes)
    return InputOutputTable(industries, coeff, year=year, source_label=source_label)


def summary(table: InputOutputTable) -> TableSummary:
    """Count positive cells and describe the positive coefficient range."""
    c = table.coefficients
    off_diag = c.copy()
    np.fill_diagonal(off_diag, 0.0)
    pos = c[c > 0]
    return TableSummary(
        n=table.n,
        positive_off_diagonal=int(np.count_nonzero(off_diag > 0)),
        positive_diagonal=int(np.count_nonzero(np.diag(c) > 0)),
        min_positive=float(pos.min()) if pos.size else None,
        max_positive=float(pos.max()) if pos.size else None,
        mean_positive=float(pos.mean()) if pos.size else None,
    )


def write_table(table: InputOutputTable, stream: TextIO) -> None:
    """Write the canonical CSV. Coefficients round-trip bit-exactly."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["code", *table.codes])
    for i, meta in enumerate(table.industries):
        writer.writerow([meta.code, *(repr(float(v)) for v in table.coefficients[i])])


def load_metadata(raw: str | TextIO) -> dict[str, str]:
    """Read a two-column ``code, name`` CSV into a mapping."""
    rows = _rows_from(raw)
    if rows and [c.strip().lower() for c in rows[0][:2]] == ["code", "name"]:
        rows = rows[1:]
    names: dict[str, str] = {}
    for row in rows:
        if not row or row[0].strip() == "":
            continue
        names[row[0].strip()] = row[1].strip() if len(row) > 1 else ""
    return names


def write_metadata(industries: Iterable[IndustryMeta], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["code", "name"])
    for meta in industries:
        writer.writerow([meta.code, meta.name])


def attach_names(table: InputOutputTable, names: Mapping[str, str]) -> InputOutputTable:
    """Return a copy of the table with industry names filled from a mapping."""
    industries = tuple(
        IndustryMeta(m.code, names.get(m.code, m.name)) for m in table.industries
    )
    return InputOutputTable(
        industries, table.coefficients, year=table.year, source_label=table.source_label
    )
