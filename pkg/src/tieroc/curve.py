"""ROC curve geometry under explicit tie-path conventions.

A dataset with tied scores does not have one ROC curve; it has a family of
them.  The vertices (one per distinct score, plus the origin) are fixed, but
the path between consecutive vertices is a choice:

* ``LINEAR`` connects vertices directly (the trapezoidal picture drawn by
  most software),
* ``PESSIMISTIC_STEP`` walks right then up (Fawcett's pessimistic ordering:
  every tie misclassifies),
* ``OPTIMISTIC_STEP`` walks up then right (every tie classifies correctly).

Coordinates are exact rationals so that integrating a polyline reproduces
the pair-counting AUC without rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Sequence

from .data import ScoreGroups, require_both_classes


class PathConvention(Enum):
    """Tie handling for a curve and its AUC.

    The same choice has two conventional spellings: a path name (how the
    curve is drawn) and an AUC name (how much credit ties receive).
    ``LINEAR`` is half credit, ``PESSIMISTIC_STEP`` is strict / no credit,
    ``OPTIMISTIC_STEP`` is full credit.
    """

    LINEAR = "linear"
    PESSIMISTIC_STEP = "pessimistic"
    OPTIMISTIC_STEP = "optimistic"

    @property
    def path_name(self) -> str:
        return self.value

    @property
    def auc_name(self) -> str:
        return _AUC_NAMES[self]

    @classmethod
    def from_path_name(cls, name: str) -> "PathConvention":
        return cls(name)

    @classmethod
    def from_auc_name(cls, name: str) -> "PathConvention":
        for convention, auc_name in _AUC_NAMES.items():
            if auc_name == name:
                return convention
        raise ValueError(f"unknown AUC convention {name!r}")


_AUC_NAMES = {
    PathConvention.PESSIMISTIC_STEP: "strict",
    PathConvention.LINEAR: "half_ties",
    PathConvention.OPTIMISTIC_STEP: "optimistic",
}


class RocPoint(NamedTuple):
    """One curve vertex: (false positive rate, true positive rate).

    ``threshold`` is the decision cut ("positive when score >= threshold")
    that realizes the vertex; ``math.inf`` is the supra-maximum sentinel for
    the origin, and ``None`` marks corners inserted by a step convention.
    """

    fpr: Fraction
    tpr: Fraction
    threshold: float | None


@dataclass(frozen=True)
class RocPolyline:
    """An ordered ROC path tagged with the convention that produced it."""

    convention: PathConvention
    points: tuple[RocPoint, ...]

    def __post_init__(self) -> None:
        pts = self.points
        if pts[0][:2] != (0, 0) or pts[-1][:2] != (1, 1):
            raise ValueError("polyline must run from (0,0) to (1,1)")
        for (a, b, _), (a2, b2, _) in zip(pts, pts[1:]):
            if a2 < a or b2 < b:
                raise ValueError("fpr and tpr must be nondecreasing")
            if self.convention is not PathConvention.LINEAR and a2 != a and b2 != b:
                raise ValueError("step polylines must be axis-parallel")


def roc_vertices(groups: ScoreGroups) -> list[RocPoint]:
    """Curve vertices from cumulative group counts, descending score.

    Returns exactly ``n_distinct + 1`` points: the origin at the sentinel
    threshold, then one vertex per distinct score; the last is (1, 1).
    """
    n_pos, n_neg = groups.n_pos, groups.n_neg
    require_both_classes(n_pos, n_neg)
    points = [RocPoint(Fraction(0), Fraction(0), math.inf)]
    cum_fp = cum_tp = 0
    for group in groups.groups:
        cum_fp += group.neg
        cum_tp += group.pos
        points.append(
            RocPoint(Fraction(cum_fp, n_neg), Fraction(cum_tp, n_pos), group.score)
        )
    return points


def roc_path(vertices: Sequence[RocPoint], convention: PathConvention) -> RocPolyline:
    """Render vertices as a polyline under one path convention.

    Step conventions insert one corner per diagonal segment: pessimistic
    moves right then up (lower staircase), optimistic up then right (upper
    staircase).  Axis-parallel segments need no corner.  Linear keeps the
    vertices as-is, collinear ones included, so threshold annotations
    survive.
    """
    if convention is PathConvention.LINEAR:
        return RocPolyline(convention, tuple(vertices))
    points: list[RocPoint] = [vertices[0]]
    for previous, current in zip(vertices, vertices[1:]):
        if current.fpr != previous.fpr and current.tpr != previous.tpr:
            if convention is PathConvention.PESSIMISTIC_STEP:
                points.append(RocPoint(current.fpr, previous.tpr, None))
            else:
                points.append(RocPoint(previous.fpr, current.tpr, None))
        points.append(current)
    return RocPolyline(convention, tuple(points))


def _format_threshold(threshold: float | None) -> str:
    if threshold is None:
        return ""
    if math.isinf(threshold):
        return "inf"
    return repr(threshold)


def polyline_to_csv(polyline: RocPolyline) -> str:
    """CSV with columns ``fpr,tpr,threshold``; threshold blank on corners."""
    lines = ["fpr,tpr,threshold"]
    for point in polyline.points:
        lines.append(
            f"{float(point.fpr)!r},{float(point.tpr)!r},"
            f"{_format_threshold(point.threshold)}"
        )
    return "\n".join(lines) + "\n"


def polyline_to_svg(polyline: RocPolyline, size: int = 600) -> str:
    """Minimal SVG: the polyline plus the identity diagonal, square viewport."""
    def mapped(point: RocPoint) -> str:
        x = float(point.fpr) * size
        y = (1.0 - float(point.tpr)) * size
        return f"{x:.2f},{y:.2f}"

    path = " ".join(mapped(p) for p in polyline.points)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
        f'  <rect width="{size}" height="{size}" fill="white" stroke="black"/>\n'
        f'  <line x1="0" y1="{size}" x2="{size}" y2="0" stroke="gray" '
        f'stroke-dasharray="6,6"/>\n'
        f'  <polyline points="{path}" fill="none" stroke="steelblue" '
        f'stroke-width="2"/>\n'
        f'  <title>ROC ({polyline.convention.path_name} path)</title>\n'
        f"</svg>\n"
    )
