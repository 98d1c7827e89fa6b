import numpy as np
import pytest
from hypothesis import given

import abilityrank as ar
from conftest import dataset_of, matrix_from_dense, small_datasets
from oracles import duplicate_column_pairs


class TestTypes:
    def test_publication_rejects_empty_author_list(self):
        with pytest.raises(ValueError, match="empty author list"):
            ar.Publication("P1", 1, ())

    def test_publication_rejects_duplicate_author(self):
        with pytest.raises(ValueError, match="duplicate"):
            ar.Publication("P1", 1, ("A", "A"))

    def test_publication_rejects_negative_citations(self):
        with pytest.raises(ValueError, match="citation"):
            ar.Publication("P1", -1, ("A",))

    def test_dataset_rejects_unknown_author_reference(self):
        with pytest.raises(ValueError, match="unknown author"):
            ar.Dataset(
                papers=(ar.Publication("P1", 1, ("A", "B")),),
                authors=(ar.Author("A"),),
            )

    def test_dataset_rejects_duplicate_paper_id(self):
        with pytest.raises(ValueError, match="duplicate paper_id"):
            dataset_of(("P1", 1, ["A"]), ("P1", 2, ["A"]))

    def test_ability_vector_rejects_negative_in_constrained_mode(self):
        with pytest.raises(ValueError, match="negative log-ability"):
            ar.AbilityVector({"A": -0.1}, 0.0, 1, True, "constrained")
        ar.AbilityVector({"A": -0.1}, 0.0, 1, True, "unconstrained")

    def test_matrix_rejects_authorless_row(self):
        with pytest.raises(ValueError, match="authorless"):
            ar.AuthorshipMatrix(("P0", "P1"), ("A0",), ((0, 0),))


class TestBuildMatrix:
    def test_single_paper_single_author(self):
        m = ar.build_matrix(dataset_of(("P1", 3, ["A"])))
        assert (m.n_papers, m.n_authors) == (1, 1)
        assert m.entries == ((0, 0),)

    def test_three_papers_two_authors(self):
        ds = dataset_of(("P1", 1, ["A"]), ("P2", 1, ["B"]), ("P3", 1, ["A", "B"]))
        m = ar.build_matrix(ds)
        assert (m.n_papers, m.n_authors) == (3, 2)
        a, b = m.author_index["A"], m.author_index["B"]
        assert set(m.entries) == {(0, a), (1, b), (2, a), (2, b)}

    def test_snapshot_scale_shape(self):
        # Same shape profile as a realistic snapshot: 1228 papers covering
        # 1416 authors gives a 1228 x 1416 sparse matrix.
        n_papers, n_authors = 1228, 1416
        papers = [
            ar.Publication(
                f"P{j}",
                j + 1,
                tuple(
                    sorted({f"A{(2 * j) % n_authors:04d}", f"A{(2 * j + 1) % n_authors:04d}"})
                ),
            )
            for j in range(n_papers)
        ]
        m = ar.build_matrix(ar.Dataset.from_papers(papers))
        assert (m.n_papers, m.n_authors) == (n_papers, n_authors)
        assert len(m.entries) == 2 * n_papers

    def test_rejects_empty_dataset(self):
        with pytest.raises(ar.EmptyDatasetError):
            ar.build_matrix(ar.Dataset(papers=(), authors=(ar.Author("A"),)))

    @given(small_datasets())
    def test_lossless_and_entry_count(self, ds):
        m = ar.build_matrix(ds)
        rebuilt = m.rows_to_author_lists()
        expected = {p.paper_id: tuple(sorted(p.author_ids)) for p in ds.papers}
        assert rebuilt == expected
        assert len(m.entries) == sum(len(p.author_ids) for p in ds.papers)

    @given(small_datasets())
    def test_dense_matches_entries(self, ds):
        m = ar.build_matrix(ds)
        dense = m.to_dense()
        assert dense.sum() == len(m.entries)
        for r, c in m.entries:
            assert dense[r, c] == 1.0


class TestInseparableGroups:
    def test_pair_always_together(self):
        ds = dataset_of(("P1", 1, ["A", "B"]), ("P2", 2, ["A", "B"]))
        assert ar.find_inseparable_groups(ar.build_matrix(ds)) == [("A", "B")]

    def test_no_groups_when_columns_differ(self):
        ds = dataset_of(("P1", 1, ["A", "B"]), ("P2", 2, ["A"]))
        assert ar.find_inseparable_groups(ar.build_matrix(ds)) == []

    def test_planted_duplicate_columns_found(self):
        rng = np.random.default_rng(42)
        dense = (rng.random((20, 10)) < 0.35).astype(float)
        for r in range(20):
            if not dense[r].any():
                dense[r, int(rng.integers(0, 10))] = 1.0
        dense[:, 7] = dense[:, 3]
        if not dense[:, 3].any():
            dense[:, 3] = dense[:, 7] = 0.0
            dense[0, 3] = dense[0, 7] = 1.0
        m = matrix_from_dense(dense)
        groups = ar.find_inseparable_groups(m)
        assert any({"A3", "A7"} <= set(g) for g in groups)
        found_pairs = set()
        for g in groups:
            idx = sorted(m.author_index[a] for a in g)
            found_pairs |= {(i, j) for i in idx for j in idx if i < j}
        assert found_pairs == set(duplicate_column_pairs(dense))

    @given(small_datasets())
    def test_groups_disjoint_with_identical_columns(self, ds):
        m = ar.build_matrix(ds)
        dense = m.to_dense()
        seen = set()
        for g in ar.find_inseparable_groups(m):
            assert len(g) >= 2
            assert not (set(g) & seen)
            seen |= set(g)
            cols = [m.author_index[a] for a in g]
            for c in cols[1:]:
                assert np.array_equal(dense[:, cols[0]], dense[:, c])
