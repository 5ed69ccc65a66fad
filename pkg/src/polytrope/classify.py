"""From a matrix to the complete set indexing the cone that contains it."""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, strong_components
from .relations import CompleteSet, ConnectedRelation, decompose
from .tropical import TropMatrix, kleene_star, normalize

__all__ = ["CriticalGraph", "critical_graph", "classify", "eigen_type", "tight_part"]


@dataclass(frozen=True)
class CriticalGraph:
    graph: Digraph
    classes: tuple[frozenset[int], ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return self.graph.edges

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset().union(*self.classes)


def _critical(Abar: TropMatrix, star: TropMatrix) -> CriticalGraph:
    n = Abar.n
    g = Digraph.from_edges(n, ((u, v) for u in range(n) for v in range(n)
                               if Abar.rows[u][v] + star.rows[v][u] == 0))
    classes = tuple(c for c in strong_components(g) if g.induced(c).mask)
    return CriticalGraph(g, classes)


def critical_graph(A: TropMatrix) -> CriticalGraph:
    """Edges lying on a cycle of maximum mean, and their strong classes."""
    Abar = normalize(A)
    return _critical(Abar, kleene_star(Abar))


def tight_part(Abar: TropMatrix, star: TropMatrix, r: int) -> Digraph:
    """Edges that start some maximum-weight path into ``r``."""
    n = Abar.n
    a, s = Abar.rows, star.rows
    return Digraph.from_edges(n, ((u, w) for u in range(n) for w in range(n)
                                  if a[u][w] + s[w][r] == s[u][r]))


def classify(A: TropMatrix) -> CompleteSet:
    Abar = normalize(A)
    star = kleene_star(Abar)
    crit = _critical(Abar, star)
    covered = crit.nodes
    sinks = list(crit.classes) + [frozenset((j,)) for j in range(A.n) if j not in covered]
    parts = []
    for s in sinks:
        r = min(s)
        g = tight_part(Abar, star, r)
        parts.append(ConnectedRelation(g, s))
    return CompleteSet(A.n, tuple(parts))


def eigen_type(A: TropMatrix) -> tuple[ConnectedRelation, ...]:
    return decompose(classify(A))[0]
