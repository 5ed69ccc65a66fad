from itertools import permutations, product
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from polytrope.digraph import (Digraph, contraction, enumerate_in_trees, enumerate_simple_cycles,
                               is_circled_tree, is_connected_relation, rooted_subgraph, sink_components,
                               strong_components)


def g(n, *edges):
    return Digraph.from_edges(n, [(u - 1, v - 1) for u, v in edges])


def blocks(*sets):
    return [frozenset(x - 1 for x in s) for s in sets]


@st.composite
def digraphs(draw, nmax=4):
    n = draw(st.integers(1, nmax))
    return Digraph(n, draw(st.integers(0, (1 << (n * n)) - 1)))


class TestComponents:
    def test_strong(self):
        assert strong_components(g(3, (1, 2), (2, 1), (3, 1))) == blocks({1, 2}, {3})
        assert strong_components(g(3)) == blocks({1}, {2}, {3})
        assert strong_components(g(3, (1, 2), (2, 3), (3, 1))) == blocks({1, 2, 3})

    def test_sinks(self):
        assert sink_components(g(2, (2, 1), (1, 1))) == blocks({1})
        assert sink_components(g(3, (1, 2), (2, 3), (3, 1))) == blocks({1, 2, 3})
        assert sink_components(g(3, (1, 2), (2, 1), (3, 1))) == blocks({1, 2})

    @settings(max_examples=200, deadline=None)
    @given(digraphs())
    def test_sinks_have_no_exit(self, G):
        comps = strong_components(G)
        assert sorted(u for c in comps for u in c) == list(range(G.n))
        sinks = sink_components(G)
        assert sinks
        for c in comps:
            leaves = any(u in c and v not in c for u, v in G.edges)
            assert (c in sinks) == (not leaves)


class TestContraction:
    def test_parallel_edges_kept(self):
        M = contraction(g(3, (1, 2), (2, 1), (3, 1), (3, 2)), blocks({1, 2}, {3}))
        assert sorted((s, t) for _, s, t in M.edges) == [(1, 0), (1, 0)]

    def test_singletons(self):
        G = g(3, (1, 2), (2, 3), (3, 3))
        M = contraction(G, blocks({1}, {2}, {3}), keep_loops=True)
        assert sorted(e for e, _, _ in M.edges) == G.edges

    def test_empty(self):
        assert contraction(g(2), blocks({1}, {2})).edges == ()

    def test_bad_partition(self):
        with pytest.raises(ValueError):
            contraction(g(2), blocks({1}))


class TestRooted:
    def test_examples(self):
        G = g(3, (2, 3), (3, 1), (1, 2))
        assert rooted_subgraph(G, 2)[1] == G
        nodes, sub = rooted_subgraph(g(3, (1, 2), (3, 2)), 0)
        assert nodes == {0} and not sub.edges
        nodes, sub = rooted_subgraph(g(3, (2, 1), (3, 2)), 0)
        assert nodes == {0, 1, 2} and sub == g(3, (2, 1), (3, 2))


def brute_cycles(G):
    out = set()
    for k in range(1, G.n + 1):
        for seq in permutations(range(G.n), k):
            if seq[0] == min(seq) and all(G.has_edge(seq[i], seq[(i + 1) % k]) for i in range(k)):
                out.add(seq)
    return out


class TestCycles:
    def test_small(self):
        assert enumerate_simple_cycles(Digraph.complete(2)) == [(0,), (1,), (0, 1)]
        assert len(enumerate_simple_cycles(Digraph.complete(3))) == 8
        assert enumerate_simple_cycles(g(3)) == []

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_complete_count(self, n):
        expect = sum(comb(n, k) * factorial(k - 1) for k in range(1, n + 1))
        assert len(enumerate_simple_cycles(Digraph.complete(n))) == expect

    @settings(max_examples=150, deadline=None)
    @given(digraphs())
    def test_matches_brute_force(self, G):
        assert set(enumerate_simple_cycles(G)) == brute_cycles(G)


def matrix_tree_count(G, root):
    n = G.n
    L = sympy.zeros(n, n)
    for u, v in G.edges:
        if u != v:
            L[u, u] += 1
            L[u, v] -= 1
    keep = [i for i in range(n) if i != root]
    return int(L.extract(keep, keep).det()) if keep else 1


class TestInTrees:
    def test_complete3(self):
        assert len(enumerate_in_trees(Digraph.complete(3, loops=False), 0)) == 3

    def test_single_tree(self):
        T = g(3, (2, 1), (3, 2))
        assert enumerate_in_trees(T, 0) == [T]

    def test_unreachable_root(self):
        assert enumerate_in_trees(g(3, (2, 1)), 0) == []

    @settings(max_examples=120, deadline=None)
    @given(digraphs(nmax=5), st.data())
    def test_matrix_tree_theorem(self, G, data):
        root = data.draw(st.integers(0, G.n - 1))
        trees = enumerate_in_trees(G, root)
        assert len(trees) == matrix_tree_count(G, root)
        for T in trees:
            assert T.issubset(G) and len(T) == G.n - 1


class TestCircledTrees:
    def test_examples(self):
        assert is_circled_tree(g(2, (2, 1), (1, 1)))
        assert is_circled_tree(g(2, (2, 1), (1, 2)))
        assert not is_circled_tree(g(2, (1, 1), (2, 2)))

    def test_connected_relations(self):
        assert is_connected_relation(g(2, (2, 1), (1, 1)))
        assert is_connected_relation(g(2, (1, 1), (2, 1), (2, 2)))
        assert not is_connected_relation(g(3, (1, 2)))
        assert not is_connected_relation(g(2))

    def test_union_of_circled_trees_brute(self):
        # every subgraph of the complete graph on 3 nodes, against a direct union of circled subgraphs
        K = Digraph.complete(3)
        circled = [Digraph(3, m) for m in range(1, 1 << 9) if is_circled_tree(Digraph(3, m))]
        for m in range(1, 1 << 9):
            G = Digraph(3, m)
            union = 0
            for T in circled:
                if T.issubset(G):
                    union |= T.mask
            assert is_connected_relation(G) == (union == m)
            if is_connected_relation(G):
                assert len(sink_components(G)) == 1
        assert K.mask == (1 << 9) - 1

    @pytest.mark.parametrize("n", [2, 3])
    def test_circled_tree_definition(self, n):
        # a circled tree is an in-tree plus a cycle with exactly one cycle overall
        K = Digraph.complete(n, loops=False)
        cycles = enumerate_simple_cycles(Digraph.complete(n))
        built = set()
        for r, c in product(range(n), cycles):
            for T in enumerate_in_trees(K, r):
                G = Digraph(n, T.mask)
                for i in range(len(c)):
                    G = G | Digraph.from_edges(n, [(c[i], c[(i + 1) % len(c)])])
                if len(enumerate_simple_cycles(G)) == 1:
                    built.add(G)
        found = {Digraph(n, m) for m in range(1 << (n * n)) if is_circled_tree(Digraph(n, m))}
        assert built == found


def test_json_and_dot():
    G = g(3, (3, 1), (1, 2))
    assert G.to_json() == {"n": 3, "edges": [[1, 2], [3, 1]]}
    assert Digraph.from_json(G.to_json()) == G
    assert "3 -> 1" in G.to_dot()
    assert str(G) == "{1->2, 3->1}"
