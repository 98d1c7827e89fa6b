"""Command-line interface: rank authors from a records file, or generate
synthetic benchmark data.

Exit codes for ``rank``: 1 for unusable input or bad configuration, 2 when
nothing survives pruning, 3 on numeric failure. A solve that stops at the
iteration cap is reported as a warning, not a failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass
from io import BytesIO
from pathlib import Path

import numpy as np

from . import __version__
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
    dataset_from_records,
    load_alias_map,
    normalize_names,
    parse_records,
    prune,
    write_jsonl,
)
from .metrics import (
    QUANTITY_AUTHOR_CITATIONS,
    QUANTITY_NA_VALUES,
    QUANTITY_PAPER_CITATIONS,
    SCOPE_FULL,
    SCOPE_TOP_K,
    author_stats,
    comparison_report,
    histogram,
)
from .model import CONSTRAINED, UNCONSTRAINED, build_matrix, find_inseparable_groups
from .solver import SolveConfig, solve
from .synth import LogNormalAbility, SynthConfig, UniformAbility, generate


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines a rank run's outputs."""

    input_path: str
    format: str
    drop_zero_cited: bool
    drop_single_occurrence: bool
    log_offset: bool
    mode: str
    init: str
    max_iterations: int
    gradient_tolerance: float
    objective_tolerance: float
    top_k: int
    output_dir: str
    tool_version: str
    content_hash: str


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _bool_flag(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {value!r}")


def _int_range(value: str) -> tuple[int, int]:
    """Parse '2..5' (or a single '3') into an inclusive range."""
    parts = value.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {value!r}") from None
    return lo, hi


def _ability_dist(value: str):
    name, _, rest = value.partition(":")
    params = rest.split(":") if rest else []
    try:
        if name == "lognormal":
            return LogNormalAbility(*(float(p) for p in params))
        if name == "uniform":
            return UniformAbility(*(float(p) for p in params))
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"bad distribution spec {value!r}") from None
    raise argparse.ArgumentTypeError(
        f"unknown distribution {name!r} (use lognormal:MU:SIGMA or uniform:LO:HI)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abilityrank")
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="fit abilities and rank authors by n*a")
    rank.add_argument("--input", required=True, help="records file (jsonl or csv)")
    rank.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    rank.add_argument("--drop-zero-cited", type=_bool_flag, default=True,
                      metavar="BOOL")
    rank.add_argument("--drop-single-occurrence", type=_bool_flag, default=True,
                      metavar="BOOL")
    rank.add_argument("--mode", choices=[CONSTRAINED, UNCONSTRAINED, "both"],
                      default=CONSTRAINED)
    rank.add_argument("--init", choices=["fractional", "ones"], default="fractional")
    rank.add_argument("--max-iters", type=int, default=10000)
    rank.add_argument("--grad-tol", type=float, default=1e-8)
    rank.add_argument("--obj-tol", type=float, default=1e-12)
    rank.add_argument("--top", type=int, default=10)
    rank.add_argument("--out", default=".", help="output directory")
    rank.add_argument("--log-offset", type=_bool_flag, default=False, metavar="BOOL",
                      help="fit ln(q+1) so zero-cited papers stay usable")
    rank.add_argument("--alias-map", default=None,
                      help="CSV of name aliases (variant,canonical)")
    rank.set_defaults(func=cmd_rank)

    syn = sub.add_parser("synth", help="generate a synthetic benchmark dataset")
    syn.add_argument("--authors", type=int, required=True)
    syn.add_argument("--papers", type=int, required=True)
    syn.add_argument("--authors-per-paper", type=_int_range, default=(1, 3),
                     metavar="LO..HI")
    syn.add_argument("--ability", type=_ability_dist, default=LogNormalAbility(),
                     metavar="DIST", help="lognormal:MU:SIGMA or uniform:LO:HI")
    syn.add_argument("--noise", type=float, default=0.0)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--integer-citations", type=_bool_flag, default=False,
                     metavar="BOOL")
    syn.add_argument("--out", default=".", help="output directory")
    syn.set_defaults(func=cmd_synth)
    return parser


def _float_str(v: float) -> str:
    return repr(float(v))


def _num_str(v) -> str:
    """Integers verbatim, reals as shortest round-trip repr."""
    return str(v) if isinstance(v, int) else repr(float(v))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_histogram(path: Path, hist) -> None:
    rows = [
        [_float_str(hist.bin_edges[i]), _float_str(hist.bin_edges[i + 1]), c]
        for i, c in enumerate(hist.counts)
    ]
    _write_csv(path, ["bin_start", "bin_end", "count"], rows)


def _comparisons(stats, top_k):
    """Correlation blocks for the report; undefined correlations become None."""
    out = {}
    for scope, k in ((SCOPE_TOP_K, min(top_k, len(stats))), (SCOPE_FULL, None)):
        try:
            rep = comparison_report(stats, scope=scope, top_k=k)
            block = {
                "pearson_na_total": rep.pearson_na_total,
                "pearson_na_frac_excl": rep.pearson_na_frac_excl,
                "pearson_na_frac_incl": rep.pearson_na_frac_incl,
                "spearman_na_total": rep.spearman_na_total,
                "spearman_na_frac_excl": rep.spearman_na_frac_excl,
                "spearman_na_frac_incl": rep.spearman_na_frac_incl,
            }
        except (UndefinedCorrelationError, ValueError) as exc:
            block = dict.fromkeys(
                (
                    "pearson_na_total",
                    "pearson_na_frac_excl",
                    "pearson_na_frac_incl",
                    "spearman_na_total",
                    "spearman_na_frac_excl",
                    "spearman_na_frac_incl",
                ),
                None,
            )
            block["note"] = str(exc)
        if scope == SCOPE_TOP_K:
            block["k"] = k
        out[scope] = block
    return out


def _print_table(mode, stats, dataset, top_k, out=sys.stdout):
    names = {a.author_id: a.display_name for a in dataset.authors}
    print(f"top {min(top_k, len(stats))} authors by n*a ({mode})", file=out)
    header = f"{'rank':>4}  {'author':<28} {'n':>5} {'na':>8} {'citations':>10} " \
             f"{'frac_excl':>10} {'frac_incl':>10} {'h':>4}"
    print(header, file=out)
    for i, s in enumerate(stats[:top_k], start=1):
        name = names.get(s.author_id, s.author_id)
        cites = _num_str(round(s.total_citations) if isinstance(s.total_citations, float)
                         else s.total_citations)
        print(
            f"{i:>4}  {name:<28.28} {s.n:>5} {round(s.na_score):>8} "
            f"{cites:>10} {round(s.frac_citations_excl):>10} "
            f"{round(s.frac_citations_incl):>10} {s.h_index:>4}",
            file=out,
        )


def cmd_rank(args) -> int:
    input_path = Path(args.input)
    try:
        raw = input_path.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {args.input}: {exc}") from exc
    content_hash = hashlib.sha256(raw).hexdigest()

    result = parse_records(BytesIO(raw), format=args.format)
    for w in result.warnings:
        print(f"warning: {args.input}: {w}", file=sys.stderr)
    if not result.records:
        raise ParseError(
            f"{args.input}: no usable records "
            f"({len(result.warnings)} malformed, file may be empty)"
        )

    aliases = {}
    if args.alias_map:
        with open(args.alias_map, "rb") as fh:
            aliases = load_alias_map(fh)
    records = normalize_names(
        result.records, NormalizationRules(fold=True, aliases=aliases)
    )
    if not records:
        raise ParseError(f"{args.input}: no records left after name normalization")
    original = dataset_from_records(records, provenance=str(args.input))

    pruned, prune_report = prune(
        original,
        drop_zero_cited=args.drop_zero_cited,
        drop_single_occurrence=args.drop_single_occurrence,
    )

    matrix = build_matrix(pruned)
    groups = find_inseparable_groups(matrix)
    for g in groups:
        print(
            f"warning: inseparable coauthors {', '.join(g)}: "
            "their individual abilities cannot be distinguished",
            file=sys.stderr,
        )

    q = np.array(
        [pruned.paper_by_id[p].citation_count for p in matrix.paper_ids], dtype=float
    )
    if args.log_offset:
        log_q = np.log1p(q)
    else:
        if np.any(q <= 0):
            raise NumericError(
                "zero-cited papers present; rerun with --drop-zero-cited true "
                "or --log-offset true"
            )
        log_q = np.log(q)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    modes = [CONSTRAINED, UNCONSTRAINED] if args.mode == "both" else [args.mode]
    init = "fractional_citations" if args.init == "fractional" else "ones"

    manifest = RunManifest(
        input_path=str(args.input),
        format=args.format,
        drop_zero_cited=args.drop_zero_cited,
        drop_single_occurrence=args.drop_single_occurrence,
        log_offset=args.log_offset,
        mode=args.mode,
        init=args.init,
        max_iterations=args.max_iters,
        gradient_tolerance=args.grad_tol,
        objective_tolerance=args.obj_tol,
        top_k=args.top,
        output_dir=str(args.out),
        tool_version=__version__,
        content_hash=content_hash,
    )

    report = {
        "manifest": asdict(manifest),
        "prune": asdict(prune_report),
        "inseparable_groups": [list(g) for g in groups],
        "parse_warnings": result.warnings,
        "modes": {},
    }

    suffix = (lambda m: f"_{m}") if len(modes) > 1 else (lambda m: "")
    for mode in modes:
        config = SolveConfig(
            mode=mode,
            max_iterations=args.max_iters,
            gradient_tolerance=args.grad_tol,
            objective_tolerance=args.obj_tol,
            initialization=init,
        )
        abilities, diag = solve(matrix, log_q, config)
        if not abilities.converged:
            print(
                f"warning: {mode} solve did not converge within "
                f"{args.max_iters} iterations (KKT violation "
                f"{diag.kkt_violation:.3e})",
                file=sys.stderr,
            )
        stats = author_stats(pruned, original, abilities)

        _write_csv(
            out_dir / f"abilities{suffix(mode)}.csv",
            ["author_id", "n", "a", "na", "converged"],
            [
                [
                    s.author_id,
                    s.n,
                    _float_str(math.exp(abilities.log_abilities[s.author_id])),
                    _float_str(s.na_score),
                    str(abilities.converged).lower(),
                ]
                for s in stats
            ],
        )
        _write_csv(
            out_dir / f"stats{suffix(mode)}.csv",
            [
                "author_id",
                "n",
                "total_citations",
                "frac_citations_excl",
                "frac_citations_incl",
                "h_index",
                "na_score",
            ],
            [
                [
                    s.author_id,
                    s.n,
                    _num_str(s.total_citations),
                    _float_str(s.frac_citations_excl),
                    _float_str(s.frac_citations_incl),
                    s.h_index,
                    _float_str(s.na_score),
                ]
                for s in stats
            ],
        )
        _write_histogram(
            out_dir / f"hist_na_values{suffix(mode)}.csv",
            histogram([s.na_score for s in stats], 1.0, QUANTITY_NA_VALUES),
        )

        report["modes"][mode] = {
            "solve": {
                "residual": abilities.residual,
                "iterations": abilities.iterations,
                "converged": abilities.converged,
                "kkt_violation": diag.kkt_violation,
                "stop_reason": diag.stop_reason,
                "active_constraints": len(diag.active_constraints),
                "objective_initial": diag.objective_trace[0],
                "objective_final": diag.objective_trace[-1],
            },
            "comparisons": _comparisons(stats, args.top),
        }
        _print_table(mode, stats, pruned, args.top)

    _write_histogram(
        out_dir / "hist_paper_citations.csv",
        histogram(
            [p.citation_count for p in pruned.papers], 1.0, QUANTITY_PAPER_CITATIONS
        ),
    )
    totals_by_author = {}
    for p in pruned.papers:
        for a in p.author_ids:
            totals_by_author[a] = totals_by_author.get(a, 0) + p.citation_count
    _write_histogram(
        out_dir / "hist_author_citations.csv",
        histogram(
            [totals_by_author[a.author_id] for a in pruned.authors],
            1.0,
            QUANTITY_AUTHOR_CITATIONS,
        ),
    )

    with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_synth(args) -> int:
    config = SynthConfig(
        n_authors=args.authors,
        n_papers=args.papers,
        authors_per_paper=args.authors_per_paper,
        ability_distribution=args.ability,
        noise_sigma=args.noise,
        seed=args.seed,
        integer_citations=args.integer_citations,
    )
    dataset, truth = generate(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "dataset.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(dataset, fh)
    _write_csv(
        out_dir / "ground_truth.csv",
        ["author_id", "ability"],
        [[a, _float_str(v)] for a, v in sorted(truth.items())],
    )
    print(
        f"wrote {dataset.n_papers} papers / {dataset.n_authors} authors to "
        f"{out_dir / 'dataset.jsonl'}",
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EmptyDatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except AbilityRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
