import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbce.penalty import estimate_data_driven, fixed_penalties
from hbce.taxonomy import Taxonomy

PAIR = Taxonomy.from_names(["P", "C"], [("P", "C")])


def counting_oracle(labels, p, c, eps):
    """Direct loop over rows, kept deliberately naive."""
    n_p0 = n_p0c1 = 0
    for row in labels:
        if row[p] == 0:
            n_p0 += 1
            n_p0c1 += row[c] == 1
    return (n_p0c1 + eps) / (n_p0 + 2 * eps)


class TestFixed:
    def test_beta_one(self, default_tax):
        table = fixed_penalties(default_tax, 1.0)
        assert set(table.entries) == set(default_tax.edges)
        assert all(v == 1.0 for v in table.entries.values())

    def test_beta_zero(self, default_tax):
        assert all(v == 0.0 for v in fixed_penalties(default_tax, 0.0).entries.values())

    def test_five_edges(self):
        t = Taxonomy.from_names(list("ABCDEF"), [("A", x) for x in "BCDEF"])
        table = fixed_penalties(t, 0.3)
        assert len(table) == 5 and set(table.entries.values()) == {0.3}

    def test_negative_beta(self, default_tax):
        with pytest.raises(ValueError):
            fixed_penalties(default_tax, -0.1)


class TestDataDriven:
    def test_hand_built_counts(self):
        # 10 rows with parent 0 (2 of them child 1) and 2 rows with parent 1
        rows = [[0, 1]] * 2 + [[0, 0]] * 8 + [[1, 1], [1, 0]]
        table = estimate_data_driven(np.array(rows), PAIR, epsilon=1.0)
        assert table.entries[(0, 1)] == pytest.approx(0.25, abs=1e-15)

    def test_no_evidence_gives_half(self):
        table = estimate_data_driven(np.array([[1, 0], [1, 1]]), PAIR, epsilon=0.3)
        assert table.entries[(0, 1)] == 0.5

    def test_consistent_matrix_goes_to_zero(self, rng):
        parent = rng.random(10_000) < 0.5
        child = parent & (rng.random(10_000) < 0.5)
        table = estimate_data_driven(np.c_[parent, child].astype(int), PAIR, epsilon=1.0)
        assert table.entries[(0, 1)] < 0.01

    def test_dimension_mismatch(self, default_tax):
        with pytest.raises(ValueError):
            estimate_data_driven(np.zeros((5, 3)), default_tax)

    @pytest.mark.parametrize("eps", [0.0, -1.0])
    def test_bad_epsilon(self, eps):
        with pytest.raises(ValueError):
            estimate_data_driven(np.zeros((3, 2)), PAIR, epsilon=eps)

    def test_csv_format(self, default_tax):
        text = fixed_penalties(default_tax, 1.0).to_csv(default_tax)
        lines = text.splitlines()
        assert lines[0] == "parent,child,penalty"
        assert len(lines) == 1 + len(default_tax.edges)
        assert lines[1].endswith(",1.000000")

    @pytest.mark.parametrize("q", [0.0, 0.1, 0.25, 0.5])
    def test_consistency_at_10k(self, q):
        rng = np.random.default_rng(int(q * 100))
        parent = rng.random(10_000) < 0.5
        child = np.where(parent, rng.random(10_000) < 0.7, rng.random(10_000) < q)
        table = estimate_data_driven(np.c_[parent, child].astype(int), PAIR)
        assert abs(table.entries[(0, 1)] - q) < 0.02


binary_rows = st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=0, max_size=60)


class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(binary_rows, st.floats(1e-3, 10))
    def test_matches_counting_oracle_and_in_open_unit_interval(self, rows, eps):
        labels = np.array(rows, dtype=int).reshape(-1, 2)
        value = estimate_data_driven(labels, PAIR, eps).entries[(0, 1)]
        assert value == pytest.approx(counting_oracle(labels, 0, 1, eps), rel=1e-12)
        assert 0 < value < 1

    @settings(max_examples=100, deadline=None)
    @given(binary_rows, st.floats(1e-3, 10))
    def test_adding_violating_row_never_decreases(self, rows, eps):
        labels = np.array(rows, dtype=int).reshape(-1, 2)
        before = estimate_data_driven(labels, PAIR, eps).entries[(0, 1)]
        after = estimate_data_driven(np.vstack([labels, [[0, 1]]]), PAIR, eps).entries[(0, 1)]
        assert after >= before
