import random
from collections import Counter
from functools import reduce
from itertools import product

import pytest

from conftest import cs
from polytrope.digraph import Digraph, is_connected_relation
from polytrope.relations import (CompleteSet, ConnectedRelation, JoinTrace, Violation, decompose,
                                 is_complete_connected_function, join, leq, validate_complete)


def rel(n, *edges):
    return ConnectedRelation.from_edges(n, [(u - 1, v - 1) for u, v in edges])


# an incomplete pair on 3 nodes: sinks {2} and {3}, nothing sinks at 1
D_INCOMPLETE = rel(3, (1, 2), (2, 2), (3, 2))
E_INCOMPLETE = rel(3, (1, 3), (2, 2), (2, 3))


class TestValidate:
    def test_missing_sink(self):
        v = validate_complete([D_INCOMPLETE, E_INCOMPLETE])
        assert isinstance(v, Violation) and v.clause == "a"
        assert "containing 1" in v.message

    def test_overlapping_sinks(self):
        v = validate_complete([D_INCOMPLETE, E_INCOMPLETE, rel(3, (1, 2), (2, 1), (3, 1))])
        assert isinstance(v, Violation) and v.clause == "a"
        assert "overlap" in v.message

    def test_two_cycle_ccf_valid(self, two_cycle_ccf):
        assert validate_complete(two_cycle_ccf) == two_cycle_ccf

    def test_two_loops_valid(self, two_loops):
        assert validate_complete(two_loops) == two_loops

    def test_clause_b(self):
        # each part keeps only its own loop, but both loops are then critical
        v = validate_complete([rel(2, (1, 1), (2, 1)), rel(2, (1, 2), (2, 2))])
        assert isinstance(v, Violation) and v.clause == "b"

    def test_n2_exhaustive(self, lattice2):
        rels = {}
        for m in range(1, 16):
            g = Digraph(2, m)
            if is_connected_relation(g):
                r = ConnectedRelation.of(g)
                rels.setdefault(r.sink, []).append(r)
        cands = [[p] for p in rels[frozenset({0, 1})]]
        cands += [[a, b] for a in rels[frozenset({0})] for b in rels[frozenset({1})]]
        valid = {v for v in map(validate_complete, cands) if not isinstance(v, Violation)}
        assert valid == set(lattice2.elements)

    def test_clause_c(self):
        parts = [rel(3, (1, 1), (2, 1), (3, 1)), rel(3, (1, 1), (1, 2), (1, 3), (3, 2)),
                 rel(3, (1, 1), (1, 2), (1, 3), (2, 3))]
        v = validate_complete(parts)
        assert isinstance(v, Violation) and v.clause == "c"

    @pytest.mark.slow
    def test_n3_exhaustive(self, lattice3):
        rels = {}
        for m in range(1, 1 << 9):
            g = Digraph(3, m)
            if is_connected_relation(g):
                r = ConnectedRelation.of(g)
                rels.setdefault(r.sink, []).append(r)
        fs = frozenset
        partitions = [[fs({0, 1, 2})], [fs({0, 1}), fs({2})], [fs({0, 2}), fs({1})], [fs({1, 2}), fs({0})],
                      [fs({0}), fs({1}), fs({2})]]
        valid = set()
        clauses = Counter()
        for P in partitions:
            for parts in product(*(rels[b] for b in P)):
                v = validate_complete(list(parts), check_parts=False)
                if isinstance(v, Violation):
                    clauses[v.clause] += 1
                else:
                    valid.add(v)
        assert valid == set(lattice3.elements)
        assert clauses["c"] > 0

    def test_not_a_relation(self):
        bad = ConnectedRelation(Digraph.from_edges(2, [(0, 1)]), frozenset({1}))
        v = validate_complete([bad, rel(2, (1, 1), (2, 1))])
        assert isinstance(v, Violation) and v.clause == "part"

    def test_every_lattice_element_valid(self, lattice3):
        assert all(validate_complete(G) == G for G in lattice3.elements)


class TestOrder:
    def test_reflexive(self, ccf3):
        assert all(leq(G, G) for G in ccf3)

    def test_open_cones_incomparable(self, ccf2):
        for a in ccf2:
            for b in ccf2:
                if a != b:
                    assert not leq(a, b)

    def test_partial_order(self, lattice2):
        E = lattice2.elements
        for a in E:
            for b in E:
                if a != b and leq(a, b):
                    assert not leq(b, a)
                for c in E:
                    if leq(a, b) and leq(b, c):
                        assert leq(a, c)


class TestJoin:
    def test_two_loops(self, ccf2, two_loops):
        loop1 = cs(2, [(1, 1), (2, 1)], [(1, 1), (1, 2)])
        loop2 = cs(2, [(2, 2), (2, 1)], [(2, 2), (1, 2)])
        assert loop1 in ccf2 and loop2 in ccf2
        assert join(loop1, loop2) == two_loops

    def test_idempotent_commutative(self, ccf3):
        for a in ccf3:
            assert join(a, a) == a
            for b in ccf3:
                assert join(a, b) == join(b, a)

    def test_upper_bound(self, ccf3):
        for a in ccf3:
            for b in ccf3:
                j = join(a, b)
                assert leq(a, j) and leq(b, j)
                assert leq(a, b) == (join(a, b) == b)

    def test_least(self, lattice2):
        E = lattice2.elements
        for a in E:
            for b in E:
                j = join(a, b)
                for k in E:
                    if leq(a, k) and leq(b, k):
                        assert leq(j, k)

    def test_associative_sampled(self, lattice3):
        rng = random.Random(7)
        E = lattice3.elements
        for _ in range(2000):
            a, b, c = (rng.choice(E) for _ in range(3))
            assert join(join(a, b), c) == join(a, join(b, c))

    def test_rounds_bounded(self, ccf3):
        for a in ccf3:
            for b in ccf3:
                t = JoinTrace()
                join(a, b, t)
                assert t.rounds <= 9

    @pytest.mark.parametrize("n", [2, 3])
    def test_generated_by_open_cones(self, n, lattice2, lattice3):
        L = lattice2 if n == 2 else lattice3
        gens = [G for G in L.elements if is_complete_connected_function(G)]
        for G in L.elements:
            below = [g for g in gens if leq(g, G)]
            assert reduce(join, below) == G


class TestDecompose:
    def test_two_cycle_sink(self, two_cycle_ccf):
        D, E = decompose(two_cycle_ccf)
        assert len(D) == 1 and len(E) == 1
        assert D[0].sink == {0, 1}

    def test_two_loops(self, two_loops):
        D, E = decompose(two_loops)
        assert len(D) == 2 and not E

    def test_some_cycle_always(self, lattice3):
        assert all(decompose(G)[0] for G in lattice3.elements)


class TestCompleteConnectedFunction:
    def test_examples(self, two_cycle_ccf, two_loops):
        assert is_complete_connected_function(two_cycle_ccf)
        assert not is_complete_connected_function(two_loops)

    def test_joins_are_not(self, ccf3):
        rng = random.Random(3)
        for _ in range(300):
            a, b = rng.sample(ccf3, 2)
            assert not is_complete_connected_function(join(a, b))

    def test_exact_generators(self, lattice3, ccf3):
        assert {G for G in lattice3.elements if is_complete_connected_function(G)} == set(ccf3)


class TestSerialization:
    def test_round_trip(self, two_cycle_ccf):
        obj = two_cycle_ccf.to_json()
        assert obj["parts"][0]["sink"] == [1, 2]
        assert CompleteSet.from_json(obj) == two_cycle_ccf

    def test_relabel(self, two_cycle_ccf):
        back = two_cycle_ccf.relabel((1, 0, 2)).relabel((1, 0, 2))
        assert back == two_cycle_ccf
