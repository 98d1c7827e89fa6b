"""Estimate per-author ability from coauthored publication records.

The model assumes every paper's log citation count is the sum of its
authors' log-abilities. Fitting that relation by least squares over a whole
coauthor network yields one ability value per author; authors are then
ranked by paper count times ability, which rewards both productivity and
consistently good papers. Fits can be constrained (abilities at least one,
so adding an author never predicts a worse paper) or unconstrained.

Typical use::

    from abilityrank import (
        build_matrix, prune, solve, SolveConfig, author_stats,
    )

or through the ``abilityrank`` command-line tool.
"""

from .errors import (
    AbilityRankError,
    ConfigError,
    EmptyDatasetError,
    NumericError,
    ParseError,
    UndefinedCorrelationError,
)
from .ingest import (
    NormalizationRules,
    ParseResult,
    PruneReport,
    RawRecord,
    dataset_from_records,
    load_alias_map,
    normalize_names,
    parse_records,
    prune,
    write_jsonl,
)
from .metrics import (
    AuthorStats,
    ComparisonReport,
    Histogram,
    author_stats,
    average_ranks,
    comparison_report,
    histogram,
    pearson,
    rank_authors,
    spearman,
)
from .model import (
    AbilityVector,
    Author,
    AuthorshipMatrix,
    Dataset,
    Publication,
    build_matrix,
    find_inseparable_groups,
)
from .solver import (
    SolveConfig,
    SolveDiagnostics,
    gradient,
    initialize,
    objective,
    solve,
)
from .synth import LogNormalAbility, SynthConfig, UniformAbility, generate

__version__ = "0.1.0"

__all__ = [
    "AbilityRankError",
    "AbilityVector",
    "Author",
    "AuthorStats",
    "AuthorshipMatrix",
    "ComparisonReport",
    "ConfigError",
    "Dataset",
    "EmptyDatasetError",
    "Histogram",
    "LogNormalAbility",
    "NormalizationRules",
    "NumericError",
    "ParseError",
    "ParseResult",
    "PruneReport",
    "Publication",
    "RawRecord",
    "SolveConfig",
    "SolveDiagnostics",
    "SynthConfig",
    "UndefinedCorrelationError",
    "UniformAbility",
    "author_stats",
    "average_ranks",
    "build_matrix",
    "comparison_report",
    "dataset_from_records",
    "find_inseparable_groups",
    "generate",
    "gradient",
    "histogram",
    "initialize",
    "load_alias_map",
    "normalize_names",
    "objective",
    "parse_records",
    "pearson",
    "prune",
    "rank_authors",
    "solve",
    "spearman",
    "write_jsonl",
    "__version__",
]
