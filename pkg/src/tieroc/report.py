"""Convention-disclosure reports.

A single AUC number hides the tie convention that produced it, and on
discrete predictors the conventions disagree by exactly the tie mass.  The
report therefore always carries all three values side by side, tags every
number with its convention, and attaches warnings when the predictor is
binary or discrete enough for the choice to matter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import inference
from .curve import PathConvention, RocPolyline, roc_path, roc_vertices
from .data import Dataset, ScoreGroups, group_by_score
from .engine import (
    AucEstimate,
    auc_half_ties,
    auc_optimistic,
    auc_strict,
    pair_statistics,
    reversed_strict,
)

BINARY_PREDICTOR = "BINARY_PREDICTOR"
HIGH_TIE_MASS = "HIGH_TIE_MASS"
DISCRETE_PREDICTOR = "DISCRETE_PREDICTOR"


class DiagnosticWarning(NamedTuple):
    code: str
    message: str


@dataclass(frozen=True)
class Diagnostics:
    """Discreteness indicators for one dataset.

    ``convention_spread`` (optimistic minus strict AUC) equals ``tie_mass``
    identically; both are rendered from the same rational so the floats
    agree bit for bit.
    """

    n_distinct: int
    tie_mass: float
    is_binary: bool
    convention_spread: float
    warnings: tuple[DiagnosticWarning, ...]


def diagnose(
    groups: ScoreGroups,
    *,
    tie_mass_threshold: float = 0.1,
    discrete_max_distinct: int = 10,
) -> Diagnostics:
    """Tie diagnostics plus coded warnings.

    Thresholds are policy, not theory, so both are configurable: warn on
    tie mass above ``tie_mass_threshold`` and on predictors with at most
    ``discrete_max_distinct`` distinct values.
    """
    pairs = pair_statistics(groups)
    tie_mass = Fraction(pairs.eq, pairs.pairs)
    n_distinct = groups.n_distinct
    warnings = []
    if n_distinct == 2:
        warnings.append(
            DiagnosticWarning(
                BINARY_PREDICTOR,
                "predictor is binary: the half-tie AUC is just "
                "(sensitivity + specificity)/2 at the single operating "
                "point, not a threshold sweep",
            )
        )
    if n_distinct <= discrete_max_distinct:
        warnings.append(
            DiagnosticWarning(
                DISCRETE_PREDICTOR,
                f"predictor has only {n_distinct} distinct values; AUC "
                f"depends materially on the tie convention",
            )
        )
    if tie_mass > Fraction(tie_mass_threshold):
        warnings.append(
            DiagnosticWarning(
                HIGH_TIE_MASS,
                f"{float(tie_mass):.1%} of cross-class pairs are tied; "
                f"report the tie convention alongside any AUC",
            )
        )
    return Diagnostics(
        n_distinct=n_distinct,
        tie_mass=float(tie_mass),
        is_binary=n_distinct == 2,
        convention_spread=float(tie_mass),
        warnings=tuple(warnings),
    )


@dataclass
class ReportOptions:
    """What to compute alongside the always-on AUC triple."""

    level: float = 0.95
    asymptotic: bool = True  # skipped silently when a class has < 2 subjects
    bootstrap_replicates: int | None = None
    bootstrap_conventions: tuple[PathConvention, ...] = (
        PathConvention.PESSIMISTIC_STEP,
        PathConvention.LINEAR,
        PathConvention.OPTIMISTIC_STEP,
    )
    seed: int | None = None
    workers: int = 1
    include_curves: tuple[PathConvention, ...] = ()
    tie_mass_threshold: float = 0.1
    discrete_max_distinct: int = 10


@dataclass(frozen=True)
class Report:
    """Everything the analysis produced, every AUC convention-tagged."""

    n: int
    n_pos: int
    n_neg: int
    auc_strict: AucEstimate
    auc_half_ties: AucEstimate
    auc_optimistic: AucEstimate
    reversed_strict: AucEstimate
    diagnostics: Diagnostics
    asymptotic: inference.AsymptoticResult | None = None
    bootstraps: tuple[inference.BootstrapResult, ...] = ()
    curves: tuple[RocPolyline, ...] = ()


def build_report(dataset: Dataset, options: ReportOptions | None = None) -> Report:
    """Assemble the full disclosure report for one dataset.

    Requires both classes.  Bootstrap runs only when
    ``options.bootstrap_replicates`` is set, and then needs a seed; the
    asymptotic interval is included whenever each class has two subjects.
    """
    options = options or ReportOptions()
    groups = group_by_score(dataset)
    pairs = pair_statistics(groups)

    asymptotic = None
    if options.asymptotic and dataset.n_pos >= 2 and dataset.n_neg >= 2:
        asymptotic = inference.asymptotic_normal_ci(groups, options.level)

    bootstraps = ()
    if options.bootstrap_replicates is not None:
        if options.seed is None:
            raise ValueError("bootstrap requested without a seed")
        bootstraps = tuple(
            inference.bootstrap_auc(
                dataset,
                convention,
                replicates=options.bootstrap_replicates,
                seed=options.seed,
                level=options.level,
                workers=options.workers,
            )
            for convention in options.bootstrap_conventions
        )

    curves = tuple(
        roc_path(roc_vertices(groups), convention)
        for convention in options.include_curves
    )

    return Report(
        n=dataset.n,
        n_pos=dataset.n_pos,
        n_neg=dataset.n_neg,
        auc_strict=auc_strict(pairs),
        auc_half_ties=auc_half_ties(pairs),
        auc_optimistic=auc_optimistic(pairs),
        reversed_strict=reversed_strict(pairs),
        diagnostics=diagnose(
            groups,
            tie_mass_threshold=options.tie_mass_threshold,
            discrete_max_distinct=options.discrete_max_distinct,
        ),
        asymptotic=asymptotic,
        bootstraps=bootstraps,
        curves=curves,
    )


# --------------------------------------------------------------------------
# Serialization.  Field names are a stable interface; see README.
# --------------------------------------------------------------------------


def estimate_to_dict(estimate: AucEstimate) -> dict:
    payload: dict = {
        "value": estimate.value,
        "convention": estimate.convention.auc_name,
    }
    if estimate.exact is not None:
        payload["num"] = estimate.exact.numerator
        payload["den"] = estimate.exact.denominator
    return payload


def _asymptotic_to_dict(result: inference.AsymptoticResult) -> dict:
    return {
        "auc": result.auc,
        "convention": "half_ties",
        "se": result.se,
        "ci_lower": result.ci_lower,
        "ci_upper": result.ci_upper,
        "level": result.level,
    }


def bootstrap_to_dict(result: inference.BootstrapResult) -> dict:
    return {
        "observed": result.observed,
        "convention": result.convention.auc_name,
        "bias": result.bias,
        "se": result.se,
        "ci_normal": list(result.ci_normal),
        "ci_percentile": list(result.ci_percentile),
        "ci_bc": list(result.ci_bc),
        "replicates": result.replicates,
        "seed": result.seed,
        "level": result.level,
        "n_redrawn": result.n_redrawn,
    }


def report_to_dict(report: Report) -> dict:
    payload: dict = {
        "n": report.n,
        "n_pos": report.n_pos,
        "n_neg": report.n_neg,
        "auc": {
            "strict": estimate_to_dict(report.auc_strict),
            "half_ties": estimate_to_dict(report.auc_half_ties),
            "optimistic": estimate_to_dict(report.auc_optimistic),
        },
        "reversed_strict": estimate_to_dict(report.reversed_strict),
        "diagnostics": {
            "n_distinct": report.diagnostics.n_distinct,
            "tie_mass": report.diagnostics.tie_mass,
            "is_binary": report.diagnostics.is_binary,
            "convention_spread": report.diagnostics.convention_spread,
            "warnings": [
                {"code": w.code, "message": w.message}
                for w in report.diagnostics.warnings
            ],
        },
        "asymptotic": (
            _asymptotic_to_dict(report.asymptotic) if report.asymptotic else None
        ),
        "bootstrap": (
            {
                b.convention.auc_name: bootstrap_to_dict(b)
                for b in report.bootstraps
            }
            if report.bootstraps
            else None
        ),
    }
    if report.curves:
        payload["curves"] = {
            c.convention.path_name: [
                [float(p.fpr), float(p.tpr)] for p in c.points
            ]
            for c in report.curves
        }
    return payload


def report_to_json(report: Report) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_to_text(report: Report) -> str:
    """Fixed-width table mode for terminals."""
    d = report.diagnostics
    lines = [
        f"n={report.n}  positives={report.n_pos}  negatives={report.n_neg}  "
        f"distinct scores={d.n_distinct}",
        "",
        f"{'convention':<12} {'auc':>10} {'exact':>12}",
    ]
    for estimate in (report.auc_strict, report.auc_half_ties, report.auc_optimistic):
        exact = estimate.exact
        lines.append(
            f"{estimate.convention.auc_name:<12} {estimate.value:>10.7f} "
            f"{f'{exact.numerator}/{exact.denominator}':>12}"
        )
    rev = report.reversed_strict
    lines.append(
        f"{'rev. strict':<12} {rev.value:>10.7f} "
        f"{f'{rev.exact.numerator}/{rev.exact.denominator}':>12}"
    )
    lines.append("")
    lines.append(
        f"tie mass = {d.tie_mass:.7f} "
        f"(= optimistic - strict = {d.convention_spread:.7f})"
    )
    if report.asymptotic is not None:
        a = report.asymptotic
        lines.append(
            f"asymptotic (half_ties): se={a.se:.4f}  "
            f"{a.level:.0%} CI [{a.ci_lower:.5f}, {a.ci_upper:.5f}]"
        )
    for b in report.bootstraps:
        lines.append(
            f"bootstrap ({b.convention.auc_name}, B={b.replicates}, "
            f"seed={b.seed}): observed={b.observed:.7f} bias={b.bias:+.7f} "
            f"se={b.se:.7f}"
        )
        lines.append(
            f"  {b.level:.0%} CI  normal [{b.ci_normal[0]:.7f}, "
            f"{b.ci_normal[1]:.7f}]  percentile [{b.ci_percentile[0]:.7f}, "
            f"{b.ci_percentile[1]:.7f}]  bc [{b.ci_bc[0]:.7f}, {b.ci_bc[1]:.7f}]"
        )
    for warning in d.warnings:
        lines.append(f"warning {warning.code}: {warning.message}")
    return "\n".join(lines) + "\n"
