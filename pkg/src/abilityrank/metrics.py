"""Classical bibliometric indicators and rank-correlation statistics.

Fractional citation counts come in two variants that differ only in the
per-paper denominator: the count of coauthors surviving the prune, or the
count of coauthors in the original dataset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UndefinedCorrelationError
from .model import AbilityVector, Dataset

SCOPE_TOP_K = "top_k"
SCOPE_FULL = "full_dataset"

QUANTITY_PAPER_CITATIONS = "paper_citations"
QUANTITY_AUTHOR_CITATIONS = "author_citations"
QUANTITY_NA_VALUES = "na_values"


@dataclass(frozen=True)
class AuthorStats:
    """Per-author indicators over the pruned dataset."""

    author_id: str
    n: int
    total_citations: float
    frac_citations_excl: float
    frac_citations_incl: float
    h_index: int
    na_score: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("paper count must be >= 1")
        if self.h_index > self.n:
            raise ValueError("h-index cannot exceed the paper count")


@dataclass(frozen=True)
class ComparisonReport:
    """Correlations between the n*a ranking and citation-based rankings."""

    pearson_na_total: float
    pearson_na_frac_excl: float
    pearson_na_frac_incl: float
    spearman_na_total: float
    spearman_na_frac_excl: float
    spearman_na_frac_incl: float
    scope: str


@dataclass(frozen=True)
class Histogram:
    """Uniform-width histogram; bin i covers [edges[i], edges[i+1])."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    quantity: str


def _h_index(citations: Sequence[float]) -> int:
    ordered = sorted(citations, reverse=True)
    h = 0
    for i, q in enumerate(ordered, start=1):
        if q >= i:
            h = i
        else:
            break
    return h


def author_stats(
    pruned: Dataset, original: Dataset, abilities: AbilityVector
) -> list[AuthorStats]:
    """Compute per-author indicators, ranked by n*a (ties by author id).

    Paper counts, citation totals, and the h-index are taken over the pruned
    dataset the abilities were fitted on. The inclusive fractional count
    divides by each paper's author count in the original (unpruned) dataset.
    """
    pruned_ids = {a.author_id for a in pruned.authors}
    fitted_ids = set(abilities.log_abilities)
    if fitted_ids != pruned_ids:
        extra = sorted(fitted_ids - pruned_ids)[:5]
        missing = sorted(pruned_ids - fitted_ids)[:5]
        raise ValueError(
            f"abilities do not match the pruned dataset "
            f"(unknown: {extra}, unfitted: {missing})"
        )

    stats = []
    for author in pruned.authors:
        aid = author.author_id
        papers = [p for p in pruned.papers if aid in p.author_ids]
        total = sum(p.citation_count for p in papers)
        frac_excl = sum(p.citation_count / len(p.author_ids) for p in papers)
        frac_incl = 0.0
        for p in papers:
            orig = original.paper_by_id.get(p.paper_id)
            if orig is None:
                raise ValueError(
                    f"paper {p.paper_id!r} missing from the original dataset"
                )
            frac_incl += p.citation_count / len(orig.author_ids)
        n = len(papers)
        stats.append(
            AuthorStats(
                author_id=aid,
                n=n,
                total_citations=total,
                frac_citations_excl=frac_excl,
                frac_citations_incl=frac_incl,
                h_index=_h_index([p.citation_count for p in papers]),
                na_score=n * math.exp(abilities.log_abilities[aid]),
            )
        )
    return rank_authors(stats)


def rank_authors(stats: Sequence[AuthorStats]) -> list[AuthorStats]:
    """Total order: n*a descending, ties broken by author id."""
    return sorted(stats, key=lambda s: (-s.na_score, s.author_id))


def _validate_pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if xs.size < 2:
        raise ValueError("need at least two points")
    return xs, ys


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation coefficient.

    Raises ``UndefinedCorrelationError`` when either input is constant.
    """
    xs, ys = _validate_pair(xs, ys)
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for constant input")
    r = float(dx @ dy) / math.sqrt(sx * sy)
    return min(1.0, max(-1.0, r))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties sharing the average of their positions."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation: Pearson coefficient of the average-rank vectors."""
    xs, ys = _validate_pair(xs, ys)
    return pearson(average_ranks(xs), average_ranks(ys))


def histogram(
    values: Sequence[float],
    bin_width: float = 1.0,
    quantity: str = QUANTITY_PAPER_CITATIONS,
) -> Histogram:
    """Histogram with uniform bins anchored at floor(min).

    n*a values are rounded to the nearest integer before binning; the other
    quantities are binned as-is. Every value lands in some bin, so counts
    always sum to the population size.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be > 0")
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        raise ValueError("values must be non-empty")
    if quantity == QUANTITY_NA_VALUES:
        vals = np.rint(vals)
    start = math.floor(vals.min())
    n_bins = int(math.floor((vals.max() - start) / bin_width)) + 1
    edges = start + bin_width * np.arange(n_bins + 1)
    counts, _ = np.histogram(vals, bins=edges)
    return Histogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        quantity=quantity,
    )


def comparison_report(
    stats: Sequence[AuthorStats], scope: str = SCOPE_FULL, top_k: int | None = None
) -> ComparisonReport:
    """Correlate n*a with total and fractional citation counts.

    With ``scope="top_k"`` only the top ``top_k`` authors of the n*a ranking
    enter the correlations, mirroring a top-ten table; the full scope uses
    every author.
    """
    ranked = rank_authors(stats)
    if scope == SCOPE_TOP_K:
        if not top_k or top_k < 2:
            raise ValueError("top_k scope needs top_k >= 2")
        ranked = ranked[:top_k]
    elif scope != SCOPE_FULL:
        raise ValueError(f"unknown scope {scope!r}")
    na = [s.na_score for s in ranked]
    total = [s.total_citations for s in ranked]
    excl = [s.frac_citations_excl for s in ranked]
    incl = [s.frac_citations_incl for s in ranked]
    return ComparisonReport(
        pearson_na_total=pearson(na, total),
        pearson_na_frac_excl=pearson(na, excl),
        pearson_na_frac_incl=pearson(na, incl),
        spearman_na_total=spearman(na, total),
        spearman_na_frac_excl=spearman(na, excl),
        spearman_na_frac_incl=spearman(na, incl),
        scope=scope,
    )
