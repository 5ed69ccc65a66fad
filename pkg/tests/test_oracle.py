import random
from fractions import Fraction as F

import pytest

from polytrope.enumeration import ResourceLimit
from polytrope.oracle import (bf_eigenvalue, bf_linearity_check, bf_longest_path, bf_lp_longest_path,
                              check_pair, geometric_join, random_matrix)
from polytrope.relations import join
from polytrope.tropical import PositiveCycle, TropMatrix, kleene_star, normalize


class TestEigenvalue:
    def test_examples(self):
        assert bf_eigenvalue(TropMatrix.of([[0, 3], [2, 1]])) == F(5, 2)
        assert bf_eigenvalue(TropMatrix.zeros(4)) == 0

    def test_guard(self):
        with pytest.raises(ResourceLimit):
            bf_eigenvalue(TropMatrix.zeros(7))


class TestLongestPath:
    def test_swap(self):
        A = TropMatrix.of([[0, -1], [-1, 0]])
        S = kleene_star(A)
        assert all(bf_longest_path(A, u, v) == S.rows[u][v] for u in range(2) for v in range(2))

    def test_single_node(self):
        assert bf_longest_path(TropMatrix.of([["-3"]]), 0, 0) == 0

    def test_errors(self):
        with pytest.raises(PositiveCycle):
            bf_longest_path(TropMatrix.of([[1]]), 0, 0)
        with pytest.raises(ResourceLimit):
            bf_longest_path(TropMatrix.zeros(6), 0, 1)


class TestLinearity:
    def test_n2_cones(self, ccf2):
        for G in ccf2:
            assert bf_linearity_check(G, trials=5, seed=1).passed

    def test_negative_control(self):
        A1 = TropMatrix.of([[0, -1], [-1, -1]])
        A2 = TropMatrix.of([[-1, -1], [-1, 0]])
        assert check_pair(A1, A2) is not None

    def test_rejects_lower_dimensional(self, two_loops):
        with pytest.raises(ValueError):
            bf_linearity_check(two_loops)


class TestLP:
    @pytest.mark.parametrize("rows", [[[0, -1], [-1, 0]], [[0, 3], [2, 1]], [[0, -1], [-1, -1]]])
    def test_n2(self, rows):
        A = normalize(TropMatrix.of(rows))
        S = kleene_star(A)
        for t in range(2):
            rep = bf_lp_longest_path(A, t)
            assert rep.node_values == tuple(S.rows[u][t] for u in range(2))
            assert rep.value == sum(rep.node_values)

    def test_generic_unique_tree(self):
        rng = random.Random(1)
        A = normalize(random_matrix(rng, 3))
        rep = bf_lp_longest_path(A, 2)
        assert rep.optimal_trees == (((0, 1), (1, 2)),)

    def test_ties_report_every_tree(self):
        rep = bf_lp_longest_path(TropMatrix.zeros(3), 0)
        assert len(rep.optimal_trees) == 3

    def test_agrees_with_star(self):
        rng = random.Random(9)
        for n in (2, 3, 4):
            for _ in range(20):
                A = normalize(random_matrix(rng, n))
                S = kleene_star(A)
                for t in range(n):
                    assert bf_lp_longest_path(A, t).node_values == tuple(S.rows[u][t] for u in range(n))

    def test_errors(self):
        with pytest.raises(ResourceLimit):
            bf_lp_longest_path(TropMatrix.zeros(5), 0)
        with pytest.raises(PositiveCycle):
            bf_lp_longest_path(TropMatrix.of([[1, 0], [0, 0]]), 0)


class TestGeometricJoin:
    def test_n2_all_pairs(self, lattice2):
        for a in lattice2.elements:
            for b in lattice2.elements:
                assert geometric_join(a, b) == join(a, b)

    def test_n3_sampled(self, ccf3):
        rng = random.Random(8)
        for _ in range(60):
            a, b = rng.sample(ccf3, 2)
            assert geometric_join(a, b) == join(a, b)
