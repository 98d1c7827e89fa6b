"""Synthetic coauthor networks with planted ground-truth abilities.

The generator runs the regression model forwards: draw per-author
abilities, pick uniform random author subsets per paper, and emit citation
counts whose log equals the sum of the authors' log-abilities plus optional
Gaussian noise. Citation counts are real-valued by default so that rounding
can be studied as a separate noise source; integer mode rounds to the
nearest integer, floored at one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError
from .model import Dataset, Publication


@dataclass(frozen=True)
class LogNormalAbility:
    """Abilities a = exp(N(mu, sigma)); log-abilities may fall below zero."""

    mu: float = 0.5
    sigma: float = 0.5

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigError("sigma must be >= 0")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.lognormal(self.mu, self.sigma, n)


@dataclass(frozen=True)
class UniformAbility:
    """Abilities uniform on [lo, hi] with lo >= 1, keeping log-abilities >= 0."""

    lo: float = 1.0
    hi: float = 10.0

    def __post_init__(self):
        if self.lo < 1.0:
            raise ConfigError("uniform ability lower bound must be >= 1")
        if self.hi < self.lo:
            raise ConfigError("uniform ability bounds out of order")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, n)


AbilityDistribution = Union[LogNormalAbility, UniformAbility]


@dataclass(frozen=True)
class SynthConfig:
    """Generator settings; identical configs yield bit-identical datasets."""

    n_authors: int
    n_papers: int
    authors_per_paper: tuple[int, int] = (1, 3)
    ability_distribution: AbilityDistribution = LogNormalAbility()
    noise_sigma: float = 0.0
    seed: int = 0
    integer_citations: bool = False

    def __post_init__(self):
        if self.n_authors < 1 or self.n_papers < 1:
            raise ConfigError("need at least one author and one paper")
        lo, hi = self.authors_per_paper
        if lo < 1 or hi < lo:
            raise ConfigError(f"invalid authors_per_paper range {lo}..{hi}")
        if hi > self.n_authors:
            raise ConfigError(
                f"authors_per_paper upper bound {hi} exceeds n_authors "
                f"{self.n_authors}"
            )
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")


def generate(config: SynthConfig) -> tuple[Dataset, dict[str, float]]:
    """Generate a dataset plus the planted author -> ability map.

    Authors that end up on no paper are omitted from both the dataset and
    the ground-truth map.
    """
    rng = np.random.default_rng(config.seed)
    abilities = config.ability_distribution.sample(rng, config.n_authors)
    log_abilities = np.log(abilities)
    ids = [f"a{i:06d}" for i in range(config.n_authors)]

    lo, hi = config.authors_per_paper
    papers = []
    for j in range(config.n_papers):
        k = int(rng.integers(lo, hi + 1))
        cols = np.sort(rng.choice(config.n_authors, size=k, replace=False))
        log_q = float(log_abilities[cols].sum()) + float(
            rng.normal(0.0, config.noise_sigma)
        )
        q: float = math.exp(log_q)
        if config.integer_citations:
            q = max(1, round(q))
        papers.append(
            Publication(
                paper_id=f"s{j:06d}",
                citation_count=q,
                author_ids=tuple(ids[c] for c in cols),
            )
        )

    used = {a for p in papers for a in p.author_ids}
    truth = {ids[i]: float(abilities[i]) for i in range(config.n_authors) if ids[i] in used}
    dataset = Dataset.from_papers(
        papers, provenance=f"synthetic(seed={config.seed})"
    )
    return dataset, truth
