"""Small directed graphs on nodes ``0..n-1`` stored as edge bitmasks.

Edge ``u -> v`` is bit ``u*n + v``.  Self-loops are allowed, multi-edges are
not.  Every enumeration here is exponential in the worst case and is meant for
the desk-scale range ``n <= 6``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

Path = tuple[int, ...]

__all__ = [
    "Digraph",
    "MultiGraph",
    "Path",
    "strong_components",
    "sink_components",
    "contraction",
    "rooted_subgraph",
    "enumerate_simple_cycles",
    "enumerate_in_trees",
    "is_circled_tree",
    "is_connected_relation",
    "circled_tree_union",
    "cycle_mask",
    "path_mask",
    "reach_sets",
]


def _bit(n: int, u: int, v: int) -> int:
    return 1 << (u * n + v)


@dataclass(frozen=True, order=True)
class Digraph:
    n: int
    mask: int = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            m |= _bit(n, u, v)
        return cls(n, m)

    @classmethod
    def complete(cls, n: int, loops: bool = True) -> "Digraph":
        return cls.from_edges(n, ((u, v) for u in range(n) for v in range(n) if loops or u != v))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.mask >> (u * self.n + v) & 1)

    @property
    def edges(self) -> list[tuple[int, int]]:
        n, m = self.n, self.mask
        return [(u, v) for u in range(n) for v in range(n) if m >> (u * n + v) & 1]

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __or__(self, other: "Digraph") -> "Digraph":
        return Digraph(self.n, self.mask | other.mask)

    def __and__(self, other: "Digraph") -> "Digraph":
        return Digraph(self.n, self.mask & other.mask)

    def issubset(self, other: "Digraph") -> bool:
        return self.mask & ~other.mask == 0

    def successors(self, u: int) -> list[int]:
        row = self.mask >> (u * self.n)
        return [v for v in range(self.n) if row >> v & 1]

    def predecessors(self, v: int) -> list[int]:
        return [u for u in range(self.n) if self.has_edge(u, v)]

    def induced(self, nodes: Iterable[int]) -> "Digraph":
        ns = set(nodes)
        return Digraph.from_edges(self.n, ((u, v) for u, v in self.edges if u in ns and v in ns))

    def without_loops(self) -> "Digraph":
        return Digraph.from_edges(self.n, ((u, v) for u, v in self.edges if u != v))

    def reversed(self) -> "Digraph":
        return Digraph.from_edges(self.n, ((v, u) for u, v in self.edges))

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        return Digraph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u + 1, v + 1] for u, v in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "Digraph":
        n = int(obj["n"])
        return cls.from_edges(n, ((int(u) - 1, int(v) - 1) for u, v in obj["edges"]))

    def to_dot(self, name: str = "G", highlight: "Digraph | None" = None) -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {u + 1};" for u in range(self.n)]
        for u, v in self.edges:
            attr = " [color=red]" if highlight is not None and highlight.has_edge(u, v) else ""
            lines.append(f"  {u + 1} -> {v + 1}{attr};")
        lines.append("}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{u + 1}->{v + 1}" for u, v in self.edges) + "}"


@dataclass(frozen=True)
class MultiGraph:
    """Quotient of a digraph by a node partition; parallel edges are kept."""

    nodes: tuple[frozenset[int], ...]
    edges: tuple[tuple[tuple[int, int], int, int], ...]  # (original edge, source block, target block)

    def block_edges(self) -> set[tuple[int, int]]:
        return {(s, t) for _, s, t in self.edges}


def reach_sets(G: Digraph) -> list[int]:
    """``reach[u]`` is the bitmask of nodes reachable from ``u`` by a walk of length >= 0."""
    n = G.n
    succ = [0] * n
    for u, v in G.edges:
        succ[u] |= 1 << v
    reach = [1 << u for u in range(n)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            r = reach[u]
            acc = r
            x = r
            while x:
                low = x & -x
                acc |= succ[low.bit_length() - 1]
                x ^= low
            if acc != r:
                reach[u] = acc
                changed = True
    return reach


def _members(bits: int) -> frozenset[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return frozenset(out)


def strong_components(G: Digraph) -> list[frozenset[int]]:
    """Strong components, ordered by smallest member."""
    reach = reach_sets(G)
    n = G.n
    seen = 0
    comps = []
    for u in range(n):
        if seen >> u & 1:
            continue
        comp = 0
        for v in range(n):
            if reach[u] >> v & 1 and reach[v] >> u & 1:
                comp |= 1 << v
        seen |= comp
        comps.append(_members(comp))
    return comps


def sink_components(G: Digraph) -> list[frozenset[int]]:
    out = []
    for comp in strong_components(G):
        if all(v in comp for u in comp for v in G.successors(u)):
            out.append(comp)
    return out


def contraction(G: Digraph, blocks: Sequence[Iterable[int]], keep_loops: bool = False) -> MultiGraph:
    """Contract each block to a node; intra-block edges are dropped unless ``keep_loops``."""
    blocks = tuple(frozenset(b) for b in blocks)
    where = {}
    for i, b in enumerate(blocks):
        for u in b:
            if u in where or not 0 <= u < G.n:
                raise ValueError("blocks must partition the node set")
            where[u] = i
    if len(where) != G.n:
        raise ValueError("blocks must partition the node set")
    edges = []
    for u, v in G.edges:
        s, t = where[u], where[v]
        if s != t or keep_loops:
            edges.append(((u, v), s, t))
    return MultiGraph(blocks, tuple(edges))


def rooted_subgraph(G: Digraph, u: int) -> tuple[frozenset[int], Digraph]:
    """Nodes that can reach ``u``, and every edge whose head can reach ``u``."""
    reach = reach_sets(G)
    nodes = frozenset(x for x in range(G.n) if reach[x] >> u & 1)
    sub = Digraph.from_edges(G.n, ((a, b) for a, b in G.edges if b in nodes))
    return nodes, sub


def cycle_mask(n: int, cycle: Path) -> int:
    m = 0
    k = len(cycle)
    for i in range(k):
        m |= _bit(n, cycle[i], cycle[(i + 1) % k])
    return m


def path_mask(n: int, path: Path) -> int:
    m = 0
    for a, b in zip(path, path[1:]):
        m |= _bit(n, a, b)
    return m


def _cycles(n: int, mask: int, limit: int | None = None) -> list[Path]:
    G = Digraph(n, mask)
    succ = [G.successors(u) for u in range(n)]
    out: list[Path] = []

    def extend(start: int, path: list[int], on: int) -> bool:
        for v in succ[path[-1]]:
            if v == start:
                out.append(tuple(path))
                if limit is not None and len(out) >= limit:
                    return True
            elif v > start and not on >> v & 1:
                path.append(v)
                if extend(start, path, on | 1 << v):
                    return True
                path.pop()
        return False

    for s in range(n):
        if extend(s, [s], 1 << s):
            break
    return out


@lru_cache(maxsize=None)
def _cycles_cached(n: int, mask: int) -> tuple[Path, ...]:
    return tuple(sorted(_cycles(n, mask), key=lambda c: (len(c), c)))


def enumerate_simple_cycles(G: Digraph) -> list[Path]:
    """Each simple cycle once, rotated to start at its smallest node; sorted by length then nodes."""
    return list(_cycles_cached(G.n, G.mask))


def has_at_most_one_cycle(G: Digraph) -> bool:
    return len(_cycles(G.n, G.mask, limit=2)) <= 1


def _in_trees(n: int, mask: int, root: int) -> Iterator[int]:
    G = Digraph(n, mask)
    others = [u for u in range(n) if u != root]
    choices = [[v for v in G.successors(u) if v != u] for u in others]
    for pick in product(*choices):
        nxt = dict(zip(others, pick))
        ok = True
        for u in others:
            x, steps = u, 0
            while x != root and steps <= n:
                x = nxt[x]
                steps += 1
            if x != root:
                ok = False
                break
        if ok:
            m = 0
            for u, v in nxt.items():
                m |= _bit(n, u, v)
            yield m


def enumerate_in_trees(G: Digraph, root: int) -> list[Digraph]:
    """All spanning arborescences of ``G`` directed into ``root``."""
    return [Digraph(G.n, m) for m in _in_trees(G.n, G.mask, root)]


def is_circled_tree(G: Digraph) -> bool:
    cycles = _cycles(G.n, G.mask, limit=2)
    if len(cycles) != 1:
        return False
    cm = cycle_mask(G.n, cycles[0])
    for r in range(G.n):
        for t in _in_trees(G.n, G.mask, r):
            if t | cm == G.mask:
                return True
    return False


@lru_cache(maxsize=None)
def _circled_union(n: int, mask: int) -> int:
    cyc = [cycle_mask(n, c) for c in _cycles_cached(n, mask)]
    acc = 0
    for r in range(n):
        for t in _in_trees(n, mask, r):
            for cm in cyc:
                u = t | cm
                if u & ~acc and has_at_most_one_cycle(Digraph(n, u)):
                    acc |= u
    return acc


def circled_tree_union(G: Digraph) -> Digraph:
    """Union of all circled trees contained in ``G``."""
    return Digraph(G.n, _circled_union(G.n, G.mask))


def is_connected_relation(G: Digraph) -> bool:
    return G.mask != 0 and _circled_union(G.n, G.mask) == G.mask
