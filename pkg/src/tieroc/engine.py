"""Exact AUC under the three tie conventions.

The combinatorial core is the cross-class pair census: over all
``n_pos * n_neg`` pairs of one positive and one negative, count how many
have the positive scored strictly higher (``gt``), tied (``eq``), or
strictly lower (``lt``).  Every AUC here is a rational function of those
integers:

* strict (pessimistic step):      ``gt / (n_pos * n_neg)``
* half credit (linear/trapezoid): ``(gt + eq/2) / (n_pos * n_neg)``
* optimistic (optimistic step):   ``(gt + eq) / (n_pos * n_neg)``

Counting uses prefix sums over score groups, never row expansion, and all
arithmetic is exact integers/rationals; floats only appear when a result is
rendered.  The same values are recoverable two more ways, by binary
sensitivity/specificity closed forms and by trapezoidal integration of the
matching polyline, which the test suite checks for exact agreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curve import PathConvention, RocPolyline
from .data import ConfusionTable, ScoreGroups, require_both_classes
from .errors import NotBinaryError


@dataclass(frozen=True)
class PairCounts:
    """Exact census of all positive-vs-negative score comparisons."""

    gt: int
    eq: int
    lt: int
    n_pos: int
    n_neg: int

    def __post_init__(self) -> None:
        if self.gt + self.eq + self.lt != self.n_pos * self.n_neg:
            raise ValueError("pair counts must sum to n_pos * n_neg")

    @property
    def pairs(self) -> int:
        return self.n_pos * self.n_neg


@dataclass(frozen=True)
class AucEstimate:
    """An AUC value tagged with the tie convention that defines it.

    ``exact`` carries the underlying rational whenever the value was
    computed combinatorially; ``value`` is its float rendering.
    """

    value: float
    convention: PathConvention
    exact: Fraction | None = None

    def __post_init__(self) -> None:
        if self.exact is not None and abs(self.value - float(self.exact)) >= 1e-15:
            raise ValueError("float value drifted from the exact rational")


def _estimate(exact: Fraction, convention: PathConvention) -> AucEstimate:
    return AucEstimate(value=float(exact), convention=convention, exact=exact)


def pair_statistics(groups: ScoreGroups) -> PairCounts:
    """Count gt/eq/lt cross-class pairs from group products.

    With groups in descending score order, a positive in group k outscores
    exactly the negatives in groups after k, so one suffix sum gives ``gt``
    in O(#groups).
    """
    n_pos, n_neg = groups.n_pos, groups.n_neg
    require_both_classes(n_pos, n_neg)
    gt = eq = 0
    neg_below = n_neg
    for group in groups.groups:
        neg_below -= group.neg
        gt += group.pos * neg_below
        eq += group.pos * group.neg
    return PairCounts(
        gt=gt, eq=eq, lt=n_pos * n_neg - gt - eq, n_pos=n_pos, n_neg=n_neg
    )


def auc_strict(pairs: PairCounts) -> AucEstimate:
    """Strict-inequality AUC: ties earn nothing (pessimistic step area)."""
    return _estimate(
        Fraction(pairs.gt, pairs.pairs), PathConvention.PESSIMISTIC_STEP
    )


def auc_half_ties(pairs: PairCounts) -> AucEstimate:
    """Half-credit AUC: ties count 1/2 (the common software default).

    The rational is kept over a doubled denominator so an odd ``eq`` stays
    exact.
    """
    return _estimate(
        Fraction(2 * pairs.gt + pairs.eq, 2 * pairs.pairs), PathConvention.LINEAR
    )


def auc_optimistic(pairs: PairCounts) -> AucEstimate:
    """Full-credit AUC: every tie counts as correctly ordered."""
    return _estimate(
        Fraction(pairs.gt + pairs.eq, pairs.pairs), PathConvention.OPTIMISTIC_STEP
    )


def auc_by_convention(pairs: PairCounts, convention: PathConvention) -> AucEstimate:
    if convention is PathConvention.PESSIMISTIC_STEP:
        return auc_strict(pairs)
    if convention is PathConvention.LINEAR:
        return auc_half_ties(pairs)
    return auc_optimistic(pairs)


def reversed_strict(pairs: PairCounts) -> AucEstimate:
    """Strict AUC after swapping the outcome labels (= lt / pairs)."""
    return _estimate(
        Fraction(pairs.lt, pairs.pairs), PathConvention.PESSIMISTIC_STEP
    )


def binary_confusion(groups: ScoreGroups) -> ConfusionTable:
    """The single 2x2 table of a two-valued predictor.

    The decision rule thresholds at the upper score.  Raises
    :class:`NotBinaryError` unless exactly two distinct scores are present.
    """
    if groups.n_distinct != 2:
        raise NotBinaryError(
            f"predictor has {groups.n_distinct} distinct values, need exactly 2"
        )
    upper, lower = groups.groups
    return ConfusionTable(tp=upper.pos, fp=upper.neg, tn=lower.neg, fn=lower.pos)


def auc_binary_closed_form(
    table: ConfusionTable, convention: PathConvention
) -> AucEstimate:
    """AUC of a binary predictor straight from sensitivity and specificity.

    strict = sens * spec; half credit = (sens + spec) / 2; optimistic adds
    full tie mass, sens*spec + sens*(1-spec) + (1-sens)*spec.  Computed as
    exact rationals so they agree with pair counting bit for bit.
    """
    sens = Fraction(table.tp, table.n_pos)
    spec = Fraction(table.tn, table.n_neg)
    if convention is PathConvention.PESSIMISTIC_STEP:
        exact = sens * spec
    elif convention is PathConvention.LINEAR:
        exact = (sens + spec) / 2
    else:
        exact = sens * spec + sens * (1 - spec) + (1 - sens) * spec
    return _estimate(exact, convention)


def auc_from_polyline(polyline: RocPolyline) -> AucEstimate:
    """Trapezoidal integral of a polyline, exact in rational arithmetic.

    Coordinates are converted with ``Fraction`` (exact for floats too), so
    integrating a freshly built polyline returns the same rational as the
    pair census for its convention.
    """
    area = Fraction(0)
    points = polyline.points
    for (a, b, _), (a2, b2, _) in zip(points, points[1:]):
        area += (Fraction(a2) - Fraction(a)) * (Fraction(b) + Fraction(b2)) / 2
    return _estimate(area, polyline.convention)
