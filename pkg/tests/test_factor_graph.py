"""Tests for the factor graph, stopping trees, g(.) and the MVSS oracle."""

from itertools import combinations

import numpy as np
import pytest

from errors import IndexRangeError, NoStoppingSetError, OracleLimitError
from polar.core import generator_row, row_weight, support
from polar.factor_graph import (
    SubmatrixSelector,
    build_graph,
    g_bound,
    g_bound_multi,
    is_stopping_set,
    mvss_exact,
    peel,
    stopping_tree,
)


class TestBuildGraph:
    """Graph sizes and structure."""

    def test_single_butterfly(self):
        """n=1: 4 variables, one check of each degree."""
        graph = build_graph(1)
        assert graph.num_variables == 4
        assert len(graph.deg3) == 1 and len(graph.deg2) == 1

    def test_n3_counts(self):
        """n=3: 32 variables and N/2 * n = 12 butterflies."""
        graph = build_graph(3)
        assert graph.num_variables == 32
        assert graph.num_butterflies == 12

    def test_node_bounds(self):
        """Out-of-range nodes are rejected."""
        graph = build_graph(2)
        with pytest.raises(IndexRangeError):
            graph.node(5, 1)
        assert graph.locate(graph.node(3, 2)) == (3, 2)

    def test_limits(self):
        """n=0 has no graph."""
        with pytest.raises(IndexRangeError):
            build_graph(0)


class TestStoppingTree:
    """Leaves of ST(i)."""

    def test_examples(self):
        """ST(3) and ST(7) at n=3, ST(1) at any n."""
        graph = build_graph(3)
        assert stopping_tree(3, graph).leaf_set == (1, 3)
        assert stopping_tree(7, graph).leaf_set == (1, 3, 5, 7)
        assert stopping_tree(7, graph).leaf_count == 4
        for n in range(1, 5):
            assert stopping_tree(1, build_graph(n)).leaf_set == (1,)

    def test_row_support_lemma(self):
        """Leaves of ST(i) are the support of row i, exhaustively for n <= 6."""
        for n in range(1, 7):
            graph = build_graph(n)
            for i in range(1, (1 << n) + 1):
                assert stopping_tree(i, graph).leaf_set == support(generator_row(i, n))


class TestGBound:
    """Weight-one column counts."""

    def test_examples(self):
        """J={2,6} gives 2; J={2,7,8} gives 3."""
        assert g_bound([2, 6], 3) == 2
        assert g_bound(SubmatrixSelector(rows=(8, 7, 2)), 3) == 3

    def test_singleton_is_row_weight(self):
        """g({i}) equals the row weight."""
        for i in range(1, 17):
            assert g_bound([i], 4) == row_weight(i, 4)

    def test_multi(self):
        """Additivity over inner codes; empty parts count zero."""
        assert g_bound_multi([[2, 6], []], 3) == 2
        assert g_bound_multi([[2, 6], [2, 6]], 3) == 4
        assert g_bound_multi([[8], [8]], 3) == 16

    def test_empty(self):
        """An empty J is rejected."""
        with pytest.raises(IndexRangeError):
            g_bound([], 3)
        with pytest.raises(IndexRangeError):
            g_bound_multi([[], []], 3)


class TestPeeling:
    """Erasure peeling and the stopping-set predicate."""

    def test_known_leftmost_resolves_everything(self):
        """With every observed node known, nothing survives."""
        graph = build_graph(3)
        erased = ~graph.observed_mask
        assert not peel(graph, erased).any()

    def test_stopping_tree_is_stopping_set(self):
        """ST(i) survives peeling when its leaves and hidden nodes are erased."""
        graph = build_graph(3)
        erased = np.zeros(graph.num_variables, dtype=bool)
        erased[graph.N:] = True
        erased[np.array(stopping_tree(6, graph).leaf_set) - 1] = True
        survivors = peel(graph, erased)
        assert survivors[graph.node(6, 4)]
        assert is_stopping_set(graph, survivors)

    def test_empty_is_not_stopping_set(self):
        """The empty set does not count."""
        graph = build_graph(2)
        assert not is_stopping_set(graph, np.zeros(graph.num_variables, dtype=bool))

    @staticmethod
    def tree_survivors(graph, i: int) -> np.ndarray:
        erased = np.zeros(graph.num_variables, dtype=bool)
        erased[graph.N:] = True
        erased[np.array(stopping_tree(i, graph).leaf_set) - 1] = True
        return peel(graph, erased)

    @pytest.mark.parametrize("i,j", [(6, 3), (8, 5), (2, 7), (4, 4)])
    def test_union_of_stopping_sets(self, i, j):
        """A union of stopping sets is a stopping set and a fixed point of peeling."""
        graph = build_graph(3)
        first, second = self.tree_survivors(graph, i), self.tree_survivors(graph, j)
        union = first | second
        assert is_stopping_set(graph, first) and is_stopping_set(graph, second)
        assert is_stopping_set(graph, union)
        assert np.array_equal(peel(graph, union), union)
        assert union[graph.node(i, 4)] and union[graph.node(j, 4)]


class TestMvssExact:
    """Exhaustive minimum VSS."""

    def test_pair_example(self):
        """J={3,7} at n=3 needs two observed nodes."""
        size, witness = mvss_exact([3, 7], build_graph(3), range(1, 9))
        assert size == 2
        assert set(witness) <= {1, 3, 5, 7}

    def test_singleton_is_stopping_tree(self):
        """The MVSS of {i} is the leaf set of ST(i)."""
        graph = build_graph(3)
        for i in range(1, 9):
            size, witness = mvss_exact([i], graph, range(1, 9))
            assert size == row_weight(i, 3)
            assert witness == stopping_tree(i, graph).leaf_set

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_bound_tight_for_pairs(self, n):
        """MVSS >= g for singletons and equality for every pair."""
        graph = build_graph(n)
        everything = range(1, graph.N + 1)
        for i in everything:
            assert mvss_exact([i], graph, everything)[0] >= g_bound([i], n)
        for pair in combinations(everything, 2):
            assert mvss_exact(pair, graph, everything)[0] == g_bound(pair, n)

    def test_three_rows_strictly_above_bound(self):
        """J={2,7,8} at n=3 needs more than g = 3 nodes."""
        size, _ = mvss_exact([2, 7, 8], build_graph(3), range(1, 9))
        assert g_bound([2, 7, 8], 3) == 3
        assert size > 3

    def test_limits(self):
        """N above the oracle limit, or J outside the information set."""
        with pytest.raises(OracleLimitError):
            mvss_exact([1], build_graph(5), range(1, 33))
        with pytest.raises(IndexRangeError):
            mvss_exact([1], build_graph(3), [2, 3])
        with pytest.raises(IndexRangeError):
            mvss_exact([], build_graph(3), range(1, 9))

    def test_error_type_is_value_error(self):
        """Oracle errors also satisfy ValueError handlers."""
        assert issubclass(NoStoppingSetError, ValueError)
