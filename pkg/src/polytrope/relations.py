"""Connected relations and complete sets of them.

A complete set assigns to every node ``u`` the part whose sink contains ``u``
(``owner``).  Parts are kept in canonical order (by smallest sink node) so
that equal sets compare and hash equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from .digraph import (
    Digraph,
    contraction,
    cycle_mask,
    enumerate_simple_cycles,
    is_circled_tree,
    is_connected_relation,
    sink_components,
)

__all__ = [
    "ConnectedRelation",
    "CompleteSet",
    "Violation",
    "validate_complete",
    "leq",
    "join",
    "decompose",
    "is_complete_connected_function",
    "path_edges_into",
    "simple_paths",
]


@dataclass(frozen=True, order=True)
class ConnectedRelation:
    graph: Digraph
    sink: frozenset[int] = field(compare=False)

    @classmethod
    def of(cls, graph: Digraph, check: bool = True) -> "ConnectedRelation":
        if check and not is_connected_relation(graph):
            raise ValueError(f"{graph} is not a connected relation")
        sinks = sink_components(graph)
        if len(sinks) != 1:
            raise ValueError(f"{graph} has {len(sinks)} sink components")
        return cls(graph, sinks[0])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], check: bool = True) -> "ConnectedRelation":
        return cls.of(Digraph.from_edges(n, edges), check)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def sink_subgraph(self) -> Digraph:
        return self.graph.induced(self.sink)

    def has_sink_cycle(self) -> bool:
        return self.sink_subgraph.mask != 0


@dataclass(frozen=True)
class CompleteSet:
    n: int
    parts: tuple[ConnectedRelation, ...]

    def __post_init__(self):
        parts = tuple(sorted(self.parts, key=lambda p: min(p.sink)))
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_graphs(cls, n: int, graphs: Iterable[Digraph], check: bool = False) -> "CompleteSet":
        return cls(n, tuple(ConnectedRelation.of(g, check) for g in graphs))

    @classmethod
    def from_edge_lists(cls, n: int, parts: Iterable[Iterable[tuple[int, int]]], one_based: bool = True,
                        check: bool = False) -> "CompleteSet":
        off = 1 if one_based else 0
        return cls.from_graphs(n, (Digraph.from_edges(n, ((u - off, v - off) for u, v in p)) for p in parts), check)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(p.graph.mask for p in self.parts)

    def __eq__(self, other):
        return isinstance(other, CompleteSet) and self.n == other.n and self.key == other.key

    def __hash__(self):
        return hash((self.n, self.key))

    @property
    def owner(self) -> tuple[int, ...]:
        own = [-1] * self.n
        for i, p in enumerate(self.parts):
            for u in p.sink:
                own[u] = i
        return tuple(own)

    def part_of(self, u: int) -> ConnectedRelation:
        return self.parts[self.owner[u]]

    @property
    def sinks(self) -> list[frozenset[int]]:
        return [p.sink for p in self.parts]

    def sink_partition(self) -> tuple[int, ...]:
        """Sink sizes in decreasing order."""
        return tuple(sorted((len(s) for s in self.sinks), reverse=True))

    def relabel(self, perm: Sequence[int]) -> "CompleteSet":
        return CompleteSet(self.n, tuple(ConnectedRelation(p.graph.relabel(perm), frozenset(perm[u] for u in p.sink))
                                         for p in self.parts))

    def without_loops(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Hashable structure with self-loops removed (sinks kept)."""
        return (tuple(p.graph.without_loops().mask for p in self.parts),
                tuple(sum(1 << u for u in p.sink) for p in self.parts))

    def to_json(self) -> dict:
        return {"n": self.n, "parts": [{"edges": p.graph.to_json()["edges"],
                                        "sink": sorted(u + 1 for u in p.sink)} for p in self.parts]}

    @classmethod
    def from_json(cls, obj: dict, check: bool = True) -> "CompleteSet":
        n = int(obj["n"])
        graphs = [Digraph.from_edges(n, ((int(u) - 1, int(v) - 1) for u, v in p["edges"])) for p in obj["parts"]]
        return cls.from_graphs(n, graphs, check)

    def __str__(self) -> str:
        return " | ".join(f"s={{{','.join(str(u + 1) for u in sorted(p.sink))}}}: {p.graph}" for p in self.parts)


@dataclass(frozen=True)
class Violation:
    clause: str  # "a", "b", "c" or "part"
    message: str
    witness: tuple = ()


# ---------------------------------------------------------------- paths

@lru_cache(maxsize=None)
def _simple_paths(n: int, mask: int, u: int, v: int) -> tuple[tuple[int, ...], ...]:
    G = Digraph(n, mask)
    succ = [G.successors(x) for x in range(n)]
    out = []

    def go(path: list[int], on: int):
        for y in succ[path[-1]]:
            if y == v:
                out.append(tuple(path) + (v,))
            elif not on >> y & 1:
                path.append(y)
                go(path, on | 1 << y)
                path.pop()

    if u == v:
        go([u], 1 << u)  # simple cycles through u
    else:
        go([u], 1 << u | 1 << v)
    return tuple(out)


def simple_paths(G: Digraph, u: int, v: int) -> list[tuple[int, ...]]:
    """Simple paths ``u -> v``; for ``u == v`` the simple cycles through ``v``."""
    return list(_simple_paths(G.n, G.mask, u, v))


def _pmask(n: int, path: Sequence[int]) -> int:
    m = 0
    for a, b in zip(path, path[1:]):
        m |= 1 << (a * n + b)
    return m


@lru_cache(maxsize=None)
def _path_edges_into(n: int, mask: int, v: int) -> int:
    acc = 0
    for u in range(n):
        for p in _simple_paths(n, mask, u, v):
            acc |= _pmask(n, p)
    return acc


def path_edges_into(G: Digraph, v: int) -> Digraph:
    """Edges lying on some simple path (or simple cycle) that ends at ``v``."""
    return Digraph(G.n, _path_edges_into(G.n, G.mask, v))


# ---------------------------------------------------------------- validation

def _check_b(parts: Sequence[ConnectedRelation], blocks: Sequence[frozenset[int]]) -> Violation | None:
    # sink cycles survive as loops on the contracted node
    contr = [contraction(p.graph, blocks, keep_loops=True) for p in parts]
    for j, Cj in enumerate(contr):
        bedges = Cj.block_edges()
        k = len(blocks)
        pred = [set() for _ in range(k)]
        for s, t in bedges:
            pred[t].add(s)
        for i in range(len(parts)):
            # blocks that reach block i in the contraction of part j
            reach = {i}
            frontier = [i]
            while frontier:
                x = frontier.pop()
                for y in pred[x]:
                    if y not in reach:
                        reach.add(y)
                        frontier.append(y)
            rooted = {e for e, s, t in Cj.edges if t in reach}
            induced = {e for e, s, t in contr[i].edges if s in reach and t in reach}
            if rooted != induced:
                extra = sorted(rooted - induced)
                missing = sorted(induced - rooted)
                return Violation("b", f"part {j + 1} rooted at sink of part {i + 1} differs from the induced "
                                      f"subgraph of part {i + 1}",
                                 (i, j, tuple(extra), tuple(missing)))
    return None


def _check_c(parts: Sequence[ConnectedRelation], owner: Sequence[int]) -> Violation | None:
    n = parts[0].n
    for u, v, w in permutations(range(n), 3):
        if owner[u] == owner[v]:
            continue
        Gv = parts[owner[v]].graph
        Gu = parts[owner[u]].graph
        Ps = _simple_paths(n, Gv.mask, w, v)
        if not Ps:
            continue
        Qs = _simple_paths(n, Gv.mask, w, u)
        for P in Ps:
            pm = _pmask(n, P)
            if pm & ~Gu.mask:
                continue
            for Q in Qs:
                if P[:len(Q)] != Q:
                    return Violation("c", f"path {_fmt(P)} of the part owning {v + 1} appears in the part "
                                          f"owning {u + 1} although {_fmt(Q)} branches off it",
                                     (u, v, w, P, Q))
    return None


def _fmt(path: Sequence[int]) -> str:
    return "->".join(str(x + 1) for x in path)


def validate_complete(parts: Sequence[ConnectedRelation] | CompleteSet, check_parts: bool = True
                      ) -> CompleteSet | Violation:
    """Return the complete set, or the first violated clause with a witness."""
    if isinstance(parts, CompleteSet):
        parts = parts.parts
    parts = list(parts)
    if not parts:
        return Violation("a", "no parts")
    n = parts[0].n
    if check_parts:
        for idx, p in enumerate(parts):
            if not is_connected_relation(p.graph):
                return Violation("part", f"part {idx + 1} is not a connected relation", (idx,))
    cover = [0] * n
    for p in parts:
        for u in p.sink:
            cover[u] += 1
    missing = [u for u in range(n) if cover[u] == 0]
    doubled = [u for u in range(n) if cover[u] > 1]
    if missing or doubled:
        msg = []
        if missing:
            msg.append("no part has a sink containing " + ", ".join(str(u + 1) for u in missing))
        if doubled:
            msg.append("sinks overlap at " + ", ".join(str(u + 1) for u in doubled))
        return Violation("a", "sinks do not partition the nodes: " + "; ".join(msg),
                         (tuple(missing), tuple(doubled)))
    G = CompleteSet(n, tuple(parts))
    v = _check_b(G.parts, G.sinks)
    if v is not None:
        return v
    v = _check_c(G.parts, G.owner)
    if v is not None:
        return v
    return G


# ---------------------------------------------------------------- order

def leq(G: CompleteSet, H: CompleteSet) -> bool:
    """``G <= H``: every path into ``v`` inside G's part for ``v`` lies in H's part for ``v``."""
    if G.n != H.n:
        raise ValueError("different node counts")
    n = G.n
    og, oh = G.owner, H.owner
    for v in range(n):
        gm = G.parts[og[v]].graph.mask
        if _path_edges_into(n, gm, v) & ~H.parts[oh[v]].graph.mask:
            return False
    return True


def decompose(G: CompleteSet) -> tuple[tuple[ConnectedRelation, ...], tuple[ConnectedRelation, ...]]:
    D = tuple(p for p in G.parts if p.has_sink_cycle())
    E = tuple(p for p in G.parts if not p.has_sink_cycle())
    return D, E


def is_complete_connected_function(G: CompleteSet) -> bool:
    """One cycle shared by every part, and every part a circled tree with exactly n edges."""
    D, _ = decompose(G)
    if len(D) != 1:
        return False
    n = G.n
    cycles = enumerate_simple_cycles(D[0].graph)
    if len(cycles) != 1:
        return False
    cm = cycle_mask(n, cycles[0])
    for p in G.parts:
        cs = enumerate_simple_cycles(p.graph)
        if len(cs) != 1 or cycle_mask(n, cs[0]) != cm or len(p.graph) != n or not is_circled_tree(p.graph):
            return False
    return True


# ---------------------------------------------------------------- join

class _UF:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[max(ra, rb)] = min(ra, rb)
        return True

    def blocks(self) -> list[frozenset[int]]:
        out: dict[int, set[int]] = {}
        for x in range(len(self.p)):
            out.setdefault(self.find(x), set()).add(x)
        return sorted((frozenset(b) for b in out.values()), key=min)


@dataclass
class JoinTrace:
    rounds: int = 0
    step2_cycles: int = 0
    step3_triples: int = 0
    sink_merges: int = 0


def join(G: CompleteSet, H: CompleteSet, trace: JoinTrace | None = None) -> CompleteSet:
    """Least upper bound of two complete sets (iterated graph union with sink merging)."""
    if G.n != H.n:
        raise ValueError("different node counts")
    n = G.n
    og, oh = G.owner, H.owner
    gm = [G.parts[og[u]].graph.mask for u in range(n)]
    hm = [H.parts[oh[u]].graph.mask for u in range(n)]

    uf = _UF(n)
    for X in (G, H):
        for s in X.sinks:
            first = min(s)
            for u in s:
                uf.union(first, u)
    blocks = uf.blocks()
    B = 0
    for rnd in range(n * n + 2):
        if trace is not None:
            trace.rounds = rnd + 1
        # step 1
        I = []
        for blk in blocks:
            m = B
            for u in blk:
                m |= gm[u] | hm[u]
            I.append(m)
        where = [0] * n
        for i, blk in enumerate(blocks):
            for u in blk:
                where[u] = i
        Bp = 0
        merges: list[frozenset[int]] = []
        # sinks of the candidate parts must be exactly the blocks
        sink_masks = []
        for i, m in enumerate(I):
            sks = sink_components(Digraph(n, m))
            for s in sks:
                if s != blocks[i]:
                    merges.append(s | blocks[i])
                    if trace is not None:
                        trace.sink_merges += 1
            sink_masks.append(Digraph(n, m).induced(blocks[i]).mask)
        # step 2: cycles outside every sink subgraph
        for m in I:
            for c in enumerate_simple_cycles(Digraph(n, m)):
                cm = cycle_mask(n, c)
                if not any(cm & ~sm == 0 for sm in sink_masks):
                    Bp |= cm
                    merges.append(frozenset(c))
                    if trace is not None:
                        trace.step2_cycles += 1
        # step 3: triples violating clause (c)
        for u, v, w in permutations(range(n), 3):
            iu, iv = where[u], where[v]
            if iu == iv:
                continue
            Gv, Gu = I[iv], I[iu]
            Ps = _simple_paths(n, Gv, w, v)
            if not Ps:
                continue
            Qs = _simple_paths(n, Gv, w, u)
            bad = False
            for P in Ps:
                if _pmask(n, P) & ~Gu:
                    continue
                if any(P[:len(Q)] != Q for Q in Qs):
                    bad = True
                    break
            if bad:
                for P in _simple_paths(n, Gv, u, v):
                    Bp |= _pmask(n, P)
                for Q in _simple_paths(n, Gu, v, u):
                    Bp |= _pmask(n, Q)
                merges.append(frozenset((u, v)))
                if trace is not None:
                    trace.step3_triples += 1
        uf = _UF(n)
        for blk in blocks:
            f = min(blk)
            for u in blk:
                uf.union(f, u)
        for s in merges:
            f = min(s)
            for u in s:
                uf.union(f, u)
        new_blocks = uf.blocks()
        if B | Bp == B and new_blocks == blocks:
            parts = tuple(ConnectedRelation(Digraph(n, m), blocks[i]) for i, m in enumerate(I))
            return CompleteSet(n, parts)
        B |= Bp
        blocks = new_blocks
    raise RuntimeError("join did not converge")
