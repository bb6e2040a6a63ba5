"""Ingestion and validation of scored binary-outcome data.

Data enters either as rows of ``(score, label)`` or as grouped counts of
``(score_value, neg_count, pos_count)``.  Both forms produce an immutable
:class:`Dataset`; the count form is never expanded in memory.  Everything
downstream (curves, pair statistics, inference) consumes the canonical
:class:`ScoreGroups` derived here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import DegenerateClassError, IngestError


class Sample(NamedTuple):
    score: float
    label: int


class ScoreGroup(NamedTuple):
    """Per-class counts at one distinct score value."""

    score: float
    neg: int
    pos: int

    @property
    def total(self) -> int:
        return self.neg + self.pos


@dataclass(frozen=True)
class Dataset:
    """Immutable scored binary-outcome data.

    Exactly one of ``rows`` / ``cells`` is populated.  ``rows`` preserves
    ingestion order; ``cells`` holds one (score, neg, pos) cell per distinct
    score and stands for the virtually expanded rows, so memory stays
    O(#distinct scores) no matter how large the counts are.
    """

    n_pos: int
    n_neg: int
    rows: tuple[Sample, ...] | None = None
    cells: tuple[ScoreGroup, ...] | None = None

    def __post_init__(self) -> None:
        if (self.rows is None) == (self.cells is None):
            raise ValueError("exactly one of rows/cells must be set")
        if self.rows is not None:
            n_pos = sum(s.label for s in self.rows)
            n_neg = len(self.rows) - n_pos
        else:
            n_pos = sum(c.pos for c in self.cells)
            n_neg = sum(c.neg for c in self.cells)
        if (n_pos, n_neg) != (self.n_pos, self.n_neg):
            raise ValueError("class counts do not match the stored data")

    @property
    def n(self) -> int:
        return self.n_pos + self.n_neg

    def iter_samples(self) -> Iterator[Sample]:
        """Yield samples; count-form datasets are expanded lazily."""
        if self.rows is not None:
            yield from self.rows
        else:
            for cell in self.cells:
                for _ in range(cell.neg):
                    yield Sample(cell.score, 0)
                for _ in range(cell.pos):
                    yield Sample(cell.score, 1)


@dataclass(frozen=True)
class ScoreGroups:
    """Distinct score values in strictly descending order with class counts.

    This is the tie structure every other module derives from: the number of
    groups is the number of ROC thresholds, and cross-class products of group
    counts give the exact pair statistics.
    """

    groups: tuple[ScoreGroup, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.groups, self.groups[1:]):
            if not a.score > b.score:
                raise ValueError("scores must be strictly descending")
        for g in self.groups:
            if g.neg < 0 or g.pos < 0 or g.total < 1:
                raise ValueError(f"invalid group {g}")

    @property
    def n_pos(self) -> int:
        return sum(g.pos for g in self.groups)

    @property
    def n_neg(self) -> int:
        return sum(g.neg for g in self.groups)

    @property
    def n_distinct(self) -> int:
        return len(self.groups)


@dataclass(frozen=True)
class ConfusionTable:
    """2x2 counts for one thresholded decision rule."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def n_pos(self) -> int:
        return self.tp + self.fn

    @property
    def n_neg(self) -> int:
        return self.tn + self.fp

    @property
    def sensitivity(self) -> float:
        return self.tp / self.n_pos

    @property
    def specificity(self) -> float:
        return self.tn / self.n_neg


def _as_score(value) -> float:
    try:
        score = float(value)
    except (TypeError, ValueError):
        raise IngestError(f"score {value!r} is not a real number") from None
    if not math.isfinite(score):
        # NaN/inf ties are meaningless, so non-finite scores are rejected
        # here rather than ordered.
        raise IngestError(f"score {value!r} is not finite")
    return score


def _as_label(value) -> int:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise IngestError(f"label {value!r} does not parse to 0 or 1") from None
    if number == 0.0:
        return 0
    if number == 1.0:
        return 1
    raise IngestError(f"label {value!r} is not in {{0, 1}}")


def _as_count(value) -> int:
    try:
        count = int(value)
    except (TypeError, ValueError):
        raise IngestError(f"count {value!r} is not an integer") from None
    if count != float(value):
        raise IngestError(f"count {value!r} is not an integer")
    if count < 0:
        raise IngestError(f"count {value!r} is negative")
    return count


def load_rows(records: Iterable[Sequence]) -> Dataset:
    """Build a row-form Dataset from ``(score, label)`` records.

    Input order is preserved.  Raises :class:`IngestError` on non-finite
    scores, labels outside {0, 1}, or empty input.
    """
    rows = []
    for record in records:
        score, label = record
        rows.append(Sample(_as_score(score), _as_label(label)))
    if not rows:
        raise IngestError("no rows in input")
    n_pos = sum(s.label for s in rows)
    return Dataset(n_pos=n_pos, n_neg=len(rows) - n_pos, rows=tuple(rows))


def load_counts(records: Iterable[Sequence]) -> Dataset:
    """Build a count-form Dataset from ``(score_value, neg, pos)`` records.

    Equivalent to expanding every cell to rows, but the expansion is virtual.
    Cells with zero total expand to no rows and are dropped; duplicate score
    values, negative counts, and all-zero inputs raise :class:`IngestError`.
    """
    cells = []
    seen: set[float] = set()
    for record in records:
        value, neg, pos = record
        score = _as_score(value)
        if score in seen:
            raise IngestError(f"duplicate score value {value!r}")
        seen.add(score)
        cell = ScoreGroup(score, _as_count(neg), _as_count(pos))
        if cell.total > 0:
            cells.append(cell)
    if not cells:
        raise IngestError("all counts are zero")
    n_pos = sum(c.pos for c in cells)
    n_neg = sum(c.neg for c in cells)
    return Dataset(n_pos=n_pos, n_neg=n_neg, cells=tuple(cells))


def group_by_score(dataset: Dataset) -> ScoreGroups:
    """Collapse a dataset to its distinct scores, sorted descending."""
    if dataset.cells is not None:
        cells = sorted(dataset.cells, key=lambda c: c.score, reverse=True)
        return ScoreGroups(tuple(cells))
    counts: dict[float, list[int]] = {}
    for sample in dataset.rows:
        pair = counts.setdefault(sample.score, [0, 0])
        pair[sample.label] += 1
    groups = tuple(
        ScoreGroup(score, neg, pos)
        for score, (neg, pos) in sorted(counts.items(), reverse=True)
    )
    return ScoreGroups(groups)


def require_both_classes(n_pos: int, n_neg: int) -> None:
    if n_pos < 1 or n_neg < 1:
        raise DegenerateClassError(
            f"analysis needs both classes, got n_pos={n_pos}, n_neg={n_neg}"
        )


def confusion_at_threshold(dataset: Dataset, threshold: float) -> ConfusionTable:
    """Confusion counts for the rule "predict positive when score >= t".

    ``threshold`` may be +/-inf: +inf is the supra-maximum sentinel (nothing
    predicted positive), -inf predicts everything positive.
    """
    require_both_classes(dataset.n_pos, dataset.n_neg)
    tp = fp = 0
    for group in group_by_score(dataset).groups:
        if group.score >= threshold:
            tp += group.pos
            fp += group.neg
    return ConfusionTable(
        tp=tp, fp=fp, tn=dataset.n_neg - fp, fn=dataset.n_pos - tp
    )


def _detect_header(first_row: Sequence[str]) -> bool:
    for field in first_row:
        try:
            float(field)
        except ValueError:
            return True
    return False


def _read_csv(path: str | Path, n_columns: int) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows:
        raise IngestError(f"{path}: empty file")
    if _detect_header(rows[0]):
        rows = rows[1:]
    if not rows:
        raise IngestError(f"{path}: no data rows")
    for row in rows:
        if len(row) != n_columns:
            raise IngestError(
                f"{path}: expected {n_columns} columns, got {len(row)}: {row!r}"
            )
    return rows


def read_rows_csv(path: str | Path) -> Dataset:
    """Read a two-column ``score,label`` CSV (header optional)."""
    return load_rows(_read_csv(path, 2))


def read_counts_csv(path: str | Path) -> Dataset:
    """Read a three-column ``value,neg,pos`` CSV (header optional)."""
    return load_counts(_read_csv(path, 3))
