"""Parsing, name normalization, and pruning of publication records.

Supported inputs are JSONL (one object per line with ``title``, ``authors``,
``citations``) and CSV (header ``title,citations,authors`` with a
semicolon-separated authors cell, RFC 4180 quoting). Malformed rows are
skipped and reported with their line numbers; only an unreadable stream is
fatal.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

from .errors import ConfigError, EmptyDatasetError, ParseError
from .model import Author, Dataset, Publication

FORMAT_JSONL = "jsonl"
FORMAT_CSV = "csv"

# Characters treated as punctuation by the fold rule (replaced by a space).
_PUNCT = str.maketrans({c: " " for c in ".,;:!?'\"()[]{}<>/\\|`~@#$%^&*+=_-"})


@dataclass(frozen=True)
class RawRecord:
    """One publication record as read from an input file."""

    title: str
    author_names: tuple[str, ...]
    citation_count: float
    source_line: int


@dataclass
class ParseResult:
    """Parsed records plus line-numbered warnings for skipped rows."""

    records: list[RawRecord]
    warnings: list[str]


@dataclass(frozen=True)
class NormalizationRules:
    """Name normalization config: exact alias mapping plus an optional fold.

    The fold lowercases, strips punctuation, and collapses whitespace. With
    ``fold=False`` and no aliases the transformation is the identity.
    """

    fold: bool = False
    aliases: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class PruneReport:
    """Counts of what pruning removed and how many passes it took."""

    removed_single_occurrence_authors: int = 0
    removed_zero_citation_papers: int = 0
    removed_empty_papers: int = 0
    passes: int = 0

    def __post_init__(self):
        for name in (
            "removed_single_occurrence_authors",
            "removed_zero_citation_papers",
            "removed_empty_papers",
            "passes",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def _as_citations(value) -> float:
    """Validate and canonicalize a citation count (int kept as int)."""
    if isinstance(value, bool):
        raise ValueError("citations must be a number")
    if isinstance(value, int):
        q = value
    elif isinstance(value, float):
        q = int(value) if value.is_integer() else value
    elif isinstance(value, str):
        q = float(value)
        q = int(q) if q.is_integer() else q
    else:
        raise ValueError("citations must be a number")
    if not math.isfinite(q) or q < 0:
        raise ValueError("citations must be non-negative and finite")
    return q


def _parse_jsonl(text: str) -> ParseResult:
    records, warnings = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("line is not a JSON object")
            title = obj["title"]
            authors = obj["authors"]
            if not isinstance(title, str):
                raise ValueError("title must be a string")
            if not isinstance(authors, list) or not authors:
                raise ValueError("authors must be a non-empty array")
            if not all(isinstance(a, str) and a.strip() for a in authors):
                raise ValueError("authors must be non-blank strings")
            q = _as_citations(obj["citations"])
        except KeyError as exc:
            warnings.append(f"line {lineno}: missing key {exc.args[0]!r}")
            continue
        except (ValueError, json.JSONDecodeError) as exc:
            warnings.append(f"line {lineno}: {exc}")
            continue
        records.append(
            RawRecord(
                title=title,
                author_names=tuple(a.strip() for a in authors),
                citation_count=q,
                source_line=lineno,
            )
        )
    return ParseResult(records, warnings)


def _parse_csv(text: str) -> ParseResult:
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        return ParseResult([], [])
    if [h.strip() for h in header] != ["title", "citations", "authors"]:
        raise ParseError(
            f"expected CSV header 'title,citations,authors', got {header!r}"
        )
    records, warnings = [], []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            warnings.append(f"line {lineno}: expected 3 columns, got {len(row)}")
            continue
        title, cit_cell, authors_cell = row
        try:
            q = _as_citations(cit_cell.strip())
        except ValueError as exc:
            warnings.append(f"line {lineno}: {exc}")
            continue
        names = tuple(n.strip() for n in authors_cell.split(";") if n.strip())
        if not names:
            warnings.append(f"line {lineno}: empty author list")
            continue
        records.append(
            RawRecord(
                title=title, author_names=names, citation_count=q, source_line=lineno
            )
        )
    return ParseResult(records, warnings)


def parse_records(stream: IO[bytes], format: str = FORMAT_JSONL) -> ParseResult:
    """Parse publication records from a byte stream.

    Returns the well-formed records plus a warning per skipped row. Raises
    ``ParseError`` if the stream cannot be read or decoded at all.
    """
    try:
        data = stream.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc}") from exc
    if format == FORMAT_JSONL:
        return _parse_jsonl(text)
    if format == FORMAT_CSV:
        return _parse_csv(text)
    raise ConfigError(f"unknown input format {format!r}")


def fold_name(name: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    return " ".join(name.casefold().translate(_PUNCT).split())


def resolve_aliases(aliases: Mapping[str, str], fold: bool = False) -> dict[str, str]:
    """Flatten alias chains (a->b, b->c becomes a->c), rejecting cycles."""
    prepared: dict[str, str] = {}
    for variant, canonical in aliases.items():
        if fold:
            variant, canonical = fold_name(variant), fold_name(canonical)
        if variant == canonical:
            continue
        if variant in prepared and prepared[variant] != canonical:
            raise ConfigError(f"conflicting aliases for {variant!r}")
        prepared[variant] = canonical
    resolved: dict[str, str] = {}
    for start in prepared:
        seen = [start]
        target = prepared[start]
        while target in prepared:
            if target in seen:
                raise ConfigError(f"alias cycle: {' -> '.join(seen + [target])}")
            seen.append(target)
            target = prepared[target]
        for variant in seen:
            resolved[variant] = target
    return resolved


def normalize_names(
    records: Iterable[RawRecord], rules: NormalizationRules | None = None
) -> list[RawRecord]:
    """Canonicalize author names by fold and exact alias substitution.

    No fuzzy matching is performed. Names that normalize to the empty string
    are dropped; duplicates within one record are collapsed to the first
    occurrence. Raises ``ConfigError`` on alias cycles.
    """
    rules = rules or NormalizationRules()
    alias = resolve_aliases(rules.aliases, fold=rules.fold)
    out = []
    for rec in records:
        names = []
        for name in rec.author_names:
            canon = fold_name(name) if rules.fold else name
            canon = alias.get(canon, canon)
            if canon and canon not in names:
                names.append(canon)
        if not names:
            continue
        if tuple(names) == rec.author_names:
            out.append(rec)
        else:
            out.append(
                RawRecord(
                    title=rec.title,
                    author_names=tuple(names),
                    citation_count=rec.citation_count,
                    source_line=rec.source_line,
                )
            )
    return out


def load_alias_map(stream: IO[bytes]) -> dict[str, str]:
    """Read a two-column alias CSV (``variant,canonical``), header optional."""
    try:
        data = stream.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    except UnicodeDecodeError as exc:
        raise ConfigError(f"alias map is not valid UTF-8: {exc}") from exc
    aliases: dict[str, str] = {}
    for i, row in enumerate(csv.reader(io.StringIO(text, newline=""))):
        if not row or all(not c.strip() for c in row):
            continue
        if i == 0 and [c.strip().lower() for c in row] == ["variant", "canonical"]:
            continue
        if len(row) != 2:
            raise ConfigError(f"alias map row {i + 1}: expected 2 columns")
        variant, canonical = row[0].strip(), row[1].strip()
        if not variant or not canonical:
            raise ConfigError(f"alias map row {i + 1}: empty name")
        if variant in aliases and aliases[variant] != canonical:
            raise ConfigError(f"conflicting aliases for {variant!r}")
        aliases[variant] = canonical
    return aliases


def dataset_from_records(
    records: Iterable[RawRecord], provenance: str = ""
) -> Dataset:
    """Assemble a dataset from parsed (and normalized) records.

    Paper ids are derived from source line numbers; author ids are the
    canonical name strings.
    """
    papers = []
    for rec in records:
        papers.append(
            Publication(
                paper_id=f"p{rec.source_line:06d}",
                citation_count=rec.citation_count,
                author_ids=rec.author_names,
            )
        )
    return Dataset.from_papers(papers, provenance=provenance)


def write_jsonl(dataset: Dataset, stream: IO[str]) -> None:
    """Write a dataset in the JSONL input format (titles are paper ids)."""
    for p in dataset.papers:
        obj = {
            "title": p.paper_id,
            "authors": list(p.author_ids),
            "citations": p.citation_count,
        }
        stream.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _prune_single_occurrence(papers: list[Publication]):
    """Batch-remove authors on <= 1 paper until a fixed point.

    Returns the surviving papers, the set of removed author ids, the number
    of papers dropped because they lost every author, and the pass count
    (the final no-change pass included).
    """
    removed: set[str] = set()
    dropped_papers = 0
    passes = 0
    while True:
        passes += 1
        counts: dict[str, int] = {}
        for p in papers:
            for a in p.author_ids:
                counts[a] = counts.get(a, 0) + 1
        singles = {a for a, n in counts.items() if n <= 1}
        if not singles:
            break
        removed |= singles
        kept: list[Publication] = []
        for p in papers:
            names = tuple(a for a in p.author_ids if a not in singles)
            if not names:
                dropped_papers += 1
                continue
            if names == p.author_ids:
                kept.append(p)
            else:
                kept.append(
                    Publication(
                        paper_id=p.paper_id,
                        citation_count=p.citation_count,
                        author_ids=names,
                    )
                )
        papers = kept
        if not papers:
            break
    return papers, removed, dropped_papers, passes


def prune(
    dataset: Dataset,
    drop_zero_cited: bool = True,
    drop_single_occurrence: bool = True,
) -> tuple[Dataset, PruneReport]:
    """Apply the standard filtering steps before the regression.

    Zero-cited papers are removed first (their log-quality is undefined
    without an offset); authors appearing on at most one paper are then
    removed repeatedly until every surviving author has at least two
    surviving papers. Raises ``EmptyDatasetError`` if nothing survives.
    """
    papers = list(dataset.papers)
    zero_removed = 0
    if drop_zero_cited:
        kept = [p for p in papers if p.citation_count > 0]
        zero_removed = len(papers) - len(kept)
        papers = kept

    removed_authors: set[str] = set()
    dropped_empty = 0
    passes = 0
    if drop_single_occurrence:
        papers, removed_authors, dropped_empty, passes = _prune_single_occurrence(
            papers
        )

    referenced = {a for p in papers for a in p.author_ids}
    if not papers or not referenced:
        raise EmptyDatasetError("empty after pruning")

    authors = tuple(a for a in dataset.authors if a.author_id in referenced)
    report = PruneReport(
        removed_single_occurrence_authors=len(removed_authors),
        removed_zero_citation_papers=zero_removed,
        removed_empty_papers=dropped_empty,
        passes=passes,
    )
    return Dataset(tuple(papers), authors, provenance=dataset.provenance), report
