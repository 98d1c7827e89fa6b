"""Core domain types: publications, authors, and the coauthor incidence matrix.

Everything here is immutable after construction and safe to share across
threads. The incidence matrix is kept sparse (entry list plus index maps);
dense arrays are materialized on demand for numerical work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptyDatasetError

CONSTRAINED = "constrained"
UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True)
class Author:
    """An author, identified by an opaque unique id."""

    author_id: str
    display_name: str = ""

    def __post_init__(self):
        if not self.author_id:
            raise ValueError("author_id must be a non-empty string")
        if not self.display_name:
            object.__setattr__(self, "display_name", self.author_id)


@dataclass(frozen=True)
class Publication:
    """A paper with its citation count and ordered list of author ids.

    Author order is preserved for display purposes only; the regression is
    order-independent. ``citation_count`` is an integer for real data but may
    be any non-negative real for synthetic inputs.
    """

    paper_id: str
    citation_count: float
    author_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.paper_id:
            raise ValueError("paper_id must be a non-empty string")
        object.__setattr__(self, "author_ids", tuple(self.author_ids))
        if len(self.author_ids) == 0:
            raise ValueError(f"paper {self.paper_id!r} has an empty author list")
        if len(set(self.author_ids)) != len(self.author_ids):
            raise ValueError(f"paper {self.paper_id!r} lists a duplicate author")
        q = self.citation_count
        if not (isinstance(q, (int, float)) and math.isfinite(q) and q >= 0):
            raise ValueError(
                f"paper {self.paper_id!r} has invalid citation count {q!r}"
            )


@dataclass(frozen=True)
class Dataset:
    """A set of publications plus the authors they reference.

    Paper order is preserved and defines the row order of the incidence
    matrix built from this dataset.
    """

    papers: tuple[Publication, ...]
    authors: tuple[Author, ...]
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "papers", tuple(self.papers))
        object.__setattr__(
            self, "authors", tuple(sorted(self.authors, key=lambda a: a.author_id))
        )
        seen_papers = set()
        for p in self.papers:
            if p.paper_id in seen_papers:
                raise ValueError(f"duplicate paper_id {p.paper_id!r}")
            seen_papers.add(p.paper_id)
        ids = [a.author_id for a in self.authors]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate author_id in dataset")
        known = set(ids)
        for p in self.papers:
            missing = [i for i in p.author_ids if i not in known]
            if missing:
                raise ValueError(
                    f"paper {p.paper_id!r} references unknown author(s) {missing}"
                )

    @classmethod
    def from_papers(
        cls,
        papers: Iterable[Publication],
        provenance: str = "",
        display_names: Mapping[str, str] | None = None,
    ) -> "Dataset":
        """Build a dataset whose author set is exactly the referenced ids."""
        papers = tuple(papers)
        names = display_names or {}
        ids = sorted({i for p in papers for i in p.author_ids})
        authors = tuple(Author(i, names.get(i, i)) for i in ids)
        return cls(papers=papers, authors=authors, provenance=provenance)

    @cached_property
    def author_by_id(self) -> dict[str, Author]:
        return {a.author_id: a for a in self.authors}

    @cached_property
    def paper_by_id(self) -> dict[str, Publication]:
        return {p.paper_id: p for p in self.papers}

    @property
    def n_papers(self) -> int:
        return len(self.papers)

    @property
    def n_authors(self) -> int:
        return len(self.authors)


@dataclass(frozen=True)
class AuthorshipMatrix:
    """Sparse binary paper-by-author incidence matrix.

    ``entries`` holds (row, col) pairs, each meaning the author of column
    ``col`` is on the paper of row ``row``. Rows follow dataset paper order;
    columns are sorted by author id.
    """

    paper_ids: tuple[str, ...]
    author_ids: tuple[str, ...]
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "paper_ids", tuple(self.paper_ids))
        object.__setattr__(self, "author_ids", tuple(self.author_ids))
        object.__setattr__(self, "entries", tuple(sorted(set(self.entries))))
        n_p, n_a = len(self.paper_ids), len(self.author_ids)
        rows_seen = set()
        for r, c in self.entries:
            if not (0 <= r < n_p and 0 <= c < n_a):
                raise ValueError(f"entry ({r}, {c}) out of range for {n_p}x{n_a}")
            rows_seen.add(r)
        if len(rows_seen) != n_p:
            empty = sorted(set(range(n_p)) - rows_seen)
            raise ValueError(f"authorless paper rows {empty[:5]}")

    @property
    def n_papers(self) -> int:
        return len(self.paper_ids)

    @property
    def n_authors(self) -> int:
        return len(self.author_ids)

    @cached_property
    def paper_index(self) -> dict[str, int]:
        return {p: r for r, p in enumerate(self.paper_ids)}

    @cached_property
    def author_index(self) -> dict[str, int]:
        return {a: c for c, a in enumerate(self.author_ids)}

    @cached_property
    def column_rows(self) -> tuple[frozenset[int], ...]:
        """Per-column sets of row indices (an author's papers)."""
        cols: list[set[int]] = [set() for _ in range(self.n_authors)]
        for r, c in self.entries:
            cols[c].add(r)
        return tuple(frozenset(s) for s in cols)

    def to_dense(self) -> np.ndarray:
        """Materialize the matrix as a float64 array (0/1 entries)."""
        dense = np.zeros((self.n_papers, self.n_authors))
        for r, c in self.entries:
            dense[r, c] = 1.0
        return dense

    def rows_to_author_lists(self) -> dict[str, tuple[str, ...]]:
        """Reconstruct the paper -> author-id map encoded by the entries."""
        by_row: list[list[int]] = [[] for _ in range(self.n_papers)]
        for r, c in self.entries:
            by_row[r].append(c)
        return {
            self.paper_ids[r]: tuple(self.author_ids[c] for c in sorted(cols))
            for r, cols in enumerate(by_row)
        }


@dataclass(frozen=True)
class AbilityVector:
    """Fitted log-abilities with solve-level diagnostics.

    ``log_abilities`` maps author_id to x = ln(a). In constrained mode every
    x is >= 0 exactly; ``residual`` is the sum of squared log-residuals at
    the returned point.
    """

    log_abilities: dict[str, float]
    residual: float
    iterations: int
    converged: bool
    mode: str

    def __post_init__(self):
        if self.mode not in (CONSTRAINED, UNCONSTRAINED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.residual < 0 or not math.isfinite(self.residual):
            raise ValueError(f"invalid residual {self.residual!r}")
        if self.mode == CONSTRAINED:
            bad = {k: v for k, v in self.log_abilities.items() if v < 0}
            if bad:
                raise ValueError(f"negative log-ability in constrained mode: {bad}")

    def ability(self, author_id: str) -> float:
        """The multiplicative ability a = exp(x) for one author."""
        return math.exp(self.log_abilities[author_id])

    def abilities(self) -> dict[str, float]:
        return {k: math.exp(v) for k, v in self.log_abilities.items()}


def build_matrix(dataset: Dataset) -> AuthorshipMatrix:
    """Build the binary incidence matrix of a dataset.

    Entry (row(paper), col(author)) is present iff the author is listed on
    the paper. Rows follow dataset paper order, columns sorted author-id
    order, so the construction is deterministic.
    """
    if dataset.n_papers == 0 or dataset.n_authors == 0:
        raise EmptyDatasetError("cannot build a matrix without papers and authors")
    author_ids = tuple(a.author_id for a in dataset.authors)
    col = {a: c for c, a in enumerate(author_ids)}
    entries = []
    for r, paper in enumerate(dataset.papers):
        for i in paper.author_ids:
            entries.append((r, col[i]))
    return AuthorshipMatrix(
        paper_ids=tuple(p.paper_id for p in dataset.papers),
        author_ids=author_ids,
        entries=tuple(entries),
    )


def find_inseparable_groups(matrix: AuthorshipMatrix) -> list[tuple[str, ...]]:
    """Find maximal groups of authors with identical matrix columns.

    Such authors always publish together within the sample, so their
    individual abilities cannot be told apart by any fit; they are reported
    as diagnostics and never merged automatically.
    """
    by_rows: dict[frozenset[int], list[str]] = {}
    for c, rows in enumerate(matrix.column_rows):
        by_rows.setdefault(rows, []).append(matrix.author_ids[c])
    groups = [tuple(sorted(ids)) for ids in by_rows.values() if len(ids) >= 2]
    return sorted(groups)
