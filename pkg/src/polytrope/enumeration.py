"""Exhaustive enumeration of the fan at small n."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Hashable, Iterable, Sequence

from .classify import classify
from .cones import CYCLE, Degenerate, codim_rank, interior_point, intersect, psi, psi_complete
from .digraph import Digraph, cycle_mask, enumerate_in_trees, enumerate_simple_cycles, has_at_most_one_cycle
from .relations import CompleteSet, ConnectedRelation, join, leq

__all__ = [
    "ResourceLimit",
    "FaceLattice",
    "ReversalWitness",
    "enumerate_ccf",
    "ccf_candidates",
    "face_lattice",
    "n_table",
    "orbits",
    "reverse",
    "edge_reversal_fixed",
    "element_stats",
    "join_closure",
]

MAX_CCF_N = 4
MAX_LATTICE_N = 3


class ResourceLimit(RuntimeError):
    pass


# ---------------------------------------------------------------- open cones

def _functions_into_cycle(n: int, cyc: tuple[int, ...]) -> Iterable[dict[int, int]]:
    on = set(cyc)
    rest = [u for u in range(n) if u not in on]
    for pick in product(*[[v for v in range(n) if v != u] for u in rest]):
        f = dict(zip(rest, pick))
        ok = True
        for u in rest:
            x, steps = u, 0
            while x not in on and steps <= n:
                x = f[x]
                steps += 1
            if x not in on:
                ok = False
                break
        if ok:
            yield f


def _path(nxt: dict[int, int], x: int, stop: Callable[[int], bool]) -> tuple[int, ...]:
    out = [x]
    while not stop(out[-1]):
        out.append(nxt[out[-1]])
    return tuple(out)


def _consistent(n: int, cyc: tuple[int, ...], f: dict[int, int], trees: dict[int, dict[int, int]]) -> bool:
    """Every subpath of a chosen longest path is the chosen longest path between its ends."""
    on = set(cyc)
    k = len(cyc)
    succ_c = {cyc[i]: cyc[(i + 1) % k] for i in range(k)}

    def path_to(x: int, t: int) -> tuple[int, ...]:
        if x == t:
            return (x,)
        if t in on:
            p = _path(f, x, lambda y: y in on) if x not in on else (x,)
            q = list(p)
            while q[-1] != t:
                q.append(succ_c[q[-1]])
            return tuple(q)
        return _path(trees[t], x, lambda y: y == t)

    cache = {(x, t): path_to(x, t) for x in range(n) for t in range(n)}
    for (x, t), p in cache.items():
        for idx in range(1, len(p) - 1):
            if cache[(x, p[idx])] != p[:idx + 1]:
                return False
    return True


def ccf_candidates(n: int) -> Iterable[CompleteSet]:
    """Path-consistent choices of one cycle plus one longest-path tree per root."""
    K = Digraph.complete(n, loops=False)
    for cyc in enumerate_simple_cycles(Digraph.complete(n)):
        on = set(cyc)
        cm = cycle_mask(n, cyc)
        roots = [r for r in range(n) if r not in on]
        tree_opts = []
        for r in roots:
            opts = []
            for t in enumerate_in_trees(K, r):
                # the tree must run along the cycle except for one edge
                if bin(t.mask | cm).count("1") == n and has_at_most_one_cycle(Digraph(n, t.mask | cm)):
                    nxt = {u: v for u, v in t.edges}
                    opts.append((t.mask, nxt))
            tree_opts.append(opts)
        for f in _functions_into_cycle(n, cyc):
            fmask = cm
            for u, v in f.items():
                fmask |= 1 << (u * n + v)
            for choice in product(*tree_opts):
                trees = {r: c[1] for r, c in zip(roots, choice)}
                if not _consistent(n, cyc, f, trees):
                    continue
                parts = [ConnectedRelation(Digraph(n, fmask), frozenset(cyc))]
                parts += [ConnectedRelation(Digraph(n, c[0] | cm), frozenset((r,))) for r, c in zip(roots, choice)]
                yield CompleteSet(n, tuple(parts))


def _realized(G: CompleteSet) -> bool:
    K = intersect(*(psi(p) for p in G.parts))
    if K.equalities:
        return False
    try:
        A = interior_point(K)
    except Degenerate:
        return False
    return classify(A) == G


def enumerate_ccf(n: int) -> list[CompleteSet]:
    """All complete connected functions (the open cones), each confirmed by an interior point."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_CCF_N:
        raise ResourceLimit(f"open-cone enumeration is limited to n <= {MAX_CCF_N}")
    out = {G for G in ccf_candidates(n) if _realized(G)}
    return sorted(out, key=lambda G: G.key)


# ---------------------------------------------------------------- lattice

@dataclass(frozen=True)
class FaceLattice:
    n: int
    elements: tuple[CompleteSet, ...]
    codims: tuple[int, ...]
    order: tuple[tuple[bool, ...], ...]  # order[i][j] iff elements[i] <= elements[j]

    def f_vector(self) -> tuple[int, ...]:
        c = Counter(self.codims)
        return tuple(c.get(k, 0) for k in range(max(self.codims) + 1))

    def index(self, G: CompleteSet) -> int:
        return self.elements.index(G)

    def interval_above(self, G: CompleteSet) -> list[int]:
        """Elements ``H >= G``: the faces of the cone of ``G``."""
        i = self.index(G)
        return [j for j in range(len(self.elements)) if self.order[i][j]]


def _codim(G: CompleteSet) -> int:
    return codim_rank(psi_complete(G))


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("POLYTROPE_THREADS", "1") or 1)
    return max(1, threads)


def join_closure(gens: Sequence[CompleteSet], limit: int | None = None) -> set[CompleteSet]:
    """Close ``gens`` under join; ``limit`` caps the element count."""
    elements = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                j = join(x, g)
                if j not in elements:
                    elements.add(j)
                    nxt.append(j)
                    if limit is not None and len(elements) > limit:
                        raise ResourceLimit(f"join closure exceeded {limit} elements")
        frontier = nxt
    return elements


def face_lattice(n: int, threads: int | None = None, with_order: bool = True,
                 limit: int | None = None) -> FaceLattice:
    if n > MAX_LATTICE_N:
        raise ResourceLimit(f"lattice closure is limited to n <= {MAX_LATTICE_N}")
    gens = enumerate_ccf(n)
    elements = join_closure(gens, limit)
    elems = sorted(elements, key=lambda G: G.key)
    workers = _threads(threads)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            codims = list(ex.map(_codim, elems, chunksize=16))
    else:
        codims = [_codim(G) for G in elems]
    order_idx = sorted(range(len(elems)), key=lambda i: (codims[i], elems[i].key))
    elems = [elems[i] for i in order_idx]
    codims = [codims[i] for i in order_idx]
    if with_order:
        order = tuple(tuple(leq(a, b) for b in elems) for a in elems)
    else:
        order = ()
    return FaceLattice(n, tuple(elems), tuple(codims), order)


def element_stats(G: CompleteSet) -> tuple[int, tuple[int, ...], int | None, int | None]:
    """(codim, sink partition, path equalities, cycle equalities)."""
    K = psi_complete(G)
    codim = len(K.equalities)
    lam = G.sink_partition()
    if lam == (G.n,):
        return codim, lam, None, None
    c = sum(t.kind == CYCLE for t in K.tags)
    return codim, lam, codim - c, c


def n_table(n: int, lattice: FaceLattice | None = None, threads: int | None = None) -> Counter:
    """Counts of lattice elements by (codim, sink partition, p, c)."""
    if n != 3:
        raise ResourceLimit("the table is defined for n = 3")
    lattice = lattice or face_lattice(n, threads, with_order=False)
    workers = _threads(threads)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            stats = list(ex.map(element_stats, lattice.elements, chunksize=16))
    else:
        stats = [element_stats(G) for G in lattice.elements]
    return Counter(stats)


# ---------------------------------------------------------------- symmetry

def reverse(G: CompleteSet) -> CompleteSet:
    """Image under transposition, read off a relative-interior point."""
    A = interior_point(psi_complete(G))
    return classify(A.transpose())


@dataclass(frozen=True)
class ReversalWitness:
    fixed: bool
    permutation: tuple[int, ...] | None


def edge_reversal_fixed(G: CompleteSet) -> ReversalWitness:
    R = reverse(G)
    for perm in permutations(range(G.n)):
        if G.relabel(perm) == R:
            return ReversalWitness(True, perm)
    return ReversalWitness(False, None)


def orbits(elements: Sequence[CompleteSet], include_reversal: bool = False,
           key: Callable[[CompleteSet], Hashable] | None = None) -> list[list[Hashable]]:
    """Orbit classes of ``key(element)`` under relabeling (and transposition)."""
    key = key or (lambda G: G)
    keys = {}
    for G in elements:
        keys.setdefault(key(G), G)
    parent = {k: k for k in keys}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for G in elements:
        k = key(G)
        images = [G.relabel(p) for p in permutations(range(G.n))]
        if include_reversal:
            images.append(reverse(G))
        for H in images:
            kh = key(H)
            if kh in parent:
                union(k, kh)
    classes: dict = {}
    for k in keys:
        classes.setdefault(find(k), []).append(k)
    return sorted(classes.values(), key=len)
