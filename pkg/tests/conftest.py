import numpy as np

from abilityrank import AuthorshipMatrix, Dataset, Publication


def dataset_of(*papers, provenance=""):
    """Shorthand: dataset_of(('P1', 5, ['A', 'B']), ...)."""
    return Dataset.from_papers(
        [Publication(pid, q, tuple(authors)) for pid, q, authors in papers],
        provenance=provenance,
    )


def matrix_from_dense(dense):
    """Wrap a 0/1 array as an AuthorshipMatrix with synthetic ids."""
    dense = np.asarray(dense)
    n_p, n_a = dense.shape
    entries = tuple(
        (r, c) for r in range(n_p) for c in range(n_a) if dense[r, c]
    )
    return AuthorshipMatrix(
        paper_ids=tuple(f"P{r}" for r in range(n_p)),
        author_ids=tuple(f"A{c}" for c in range(n_a)),
        entries=entries,
    )


def random_instance(rng, max_authors=6, max_papers=10, q_lo=0.0, q_hi=5.0):
    """Random binary incidence matrix (no empty rows) plus log-quality."""
    n_a = int(rng.integers(1, max_authors + 1))
    n_p = int(rng.integers(1, max_papers + 1))
    dense = np.zeros((n_p, n_a))
    for r in range(n_p):
        k = int(rng.integers(1, n_a + 1))
        dense[r, rng.choice(n_a, size=k, replace=False)] = 1.0
    log_q = rng.uniform(q_lo, q_hi, size=n_p)
    return dense, log_q


try:
    from hypothesis import strategies as st

    @st.composite
    def small_datasets(draw, max_authors=6, max_papers=8, q_max=50):
        """Random small datasets for property tests."""
        n_authors = draw(st.integers(1, max_authors))
        pool = [f"A{i}" for i in range(n_authors)]
        n_papers = draw(st.integers(1, max_papers))
        papers = []
        for j in range(n_papers):
            subset = draw(st.sets(st.sampled_from(pool), min_size=1))
            q = draw(st.integers(0, q_max))
            papers.append(Publication(f"P{j}", q, tuple(sorted(subset))))
        return Dataset.from_papers(papers)
except ImportError:  # pragma: no cover
    pass
