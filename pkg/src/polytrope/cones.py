"""Polyhedral cones cut out by integer linear forms on matrix entries.

A form is an integer vector ``c`` of length ``n*n`` (row-major, entry
``u*n + v`` multiplies ``A[u][v]``) read as ``c.A == 0`` or ``c.A <= 0``.
Forms are first written over the normalized entries ``A[u][v] - lambda`` with
``lambda`` the mean of a chosen cycle, then multiplied by the cycle length so
that only integers remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, isqrt
from typing import Iterable, Sequence

from .digraph import Digraph, contraction, cycle_mask, enumerate_simple_cycles
from .lp import nullspace, rank, rref, solve_max
from .relations import CompleteSet, ConnectedRelation, decompose
from .tropical import TropMatrix

__all__ = [
    "EQ",
    "LEQ",
    "LinearForm",
    "EqualityTag",
    "Cone",
    "Degenerate",
    "psi",
    "psi_complete",
    "min_psi_forms",
    "intersect",
    "contains",
    "strictly_contains",
    "codim_formula",
    "codim_rank",
    "codim_report",
    "interior_point",
    "cone_equal",
    "cycle_polytope_support",
    "reference_cycle",
]

EQ = "EQ"
LEQ = "LEQ"
PATH = "PATH"
CYCLE = "CYCLE"


class Degenerate(ValueError):
    """The inequalities cannot all be strict at once."""


def _primitive(coeffs: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(c) for c in coeffs), 0)
    if g == 0:
        return tuple(coeffs)
    return tuple(c // g for c in coeffs)


@dataclass(frozen=True, order=True)
class LinearForm:
    coeffs: tuple[int, ...]
    relation: str

    @classmethod
    def make(cls, coeffs: Sequence[int], relation: str) -> "LinearForm":
        c = _primitive([int(x) for x in coeffs])
        if not any(c):
            raise ValueError("zero form")
        if relation == EQ:
            first = next(x for x in c if x)
            if first < 0:
                c = tuple(-x for x in c)
        elif relation != LEQ:
            raise ValueError(relation)
        return cls(c, relation)

    @property
    def n(self) -> int:
        return isqrt(len(self.coeffs))

    def evaluate(self, A: TropMatrix) -> Fraction:
        v = A.vector()
        return sum((c * x for c, x in zip(self.coeffs, v) if c), Fraction(0))

    def holds(self, A: TropMatrix, strict: bool = False) -> bool:
        val = self.evaluate(A)
        if self.relation == EQ:
            return val == 0
        return val < 0 if strict else val <= 0

    def pretty(self) -> str:
        n = self.n
        pos, neg = [], []
        for idx, c in enumerate(self.coeffs):
            if not c:
                continue
            term = f"A{idx // n + 1}{idx % n + 1}"
            k = abs(c)
            term = term if k == 1 else f"{k}*{term}"
            (pos if c > 0 else neg).append(term)
        lhs = " + ".join(pos) or "0"
        rhs = " + ".join(neg) or "0"
        return f"{lhs} {'=' if self.relation == EQ else '<='} {rhs}"


@dataclass(frozen=True)
class EqualityTag:
    kind: str  # PATH or CYCLE
    source: str


@dataclass(frozen=True)
class Cone:
    n: int
    equalities: tuple[LinearForm, ...]
    inequalities: tuple[LinearForm, ...]
    tags: tuple[EqualityTag, ...] = ()
    provenance: CompleteSet | None = field(default=None, compare=False)
    reduced: bool = field(default=False, compare=False)

    def forms(self) -> tuple[LinearForm, ...]:
        return self.equalities + self.inequalities

    def to_json(self) -> dict:
        out = {"n": self.n,
               "equalities": [list(f.coeffs) for f in self.equalities],
               "inequalities": [list(f.coeffs) for f in self.inequalities]}
        if self.tags:
            out["tags"] = [t.kind for t in self.tags]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Cone":
        n = int(obj["n"])
        eqs = tuple(LinearForm.make(c, EQ) for c in obj.get("equalities", []))
        ineqs = tuple(LinearForm.make(c, LEQ) for c in obj.get("inequalities", []))
        tags = tuple(EqualityTag(t, "input") for t in obj.get("tags", []))
        return cls(n, eqs, ineqs, tags)


def _make_cone(n: int, eqs: Iterable[LinearForm], ineqs: Iterable[LinearForm], **kw) -> Cone:
    return Cone(n, tuple(sorted(set(eqs))), tuple(sorted(set(ineqs))), **kw)


# ---------------------------------------------------------------- trees and cycles

def _tree_with_cycle(G: Digraph, root: int, cycle: tuple[int, ...] | None,
                     within: frozenset[int] | None = None,
                     seed: dict[int, int] | None = None) -> dict[int, int]:
    """Parent map of an in-tree of ``G`` into ``root``.

    If the cycle is given, the tree contains all of its edges but one: the
    first time a cycle node is reached, the rest of the cycle is threaded in
    behind it.  ``within`` restricts the tree to a node subset; ``seed`` is a
    partial tree to extend.
    """
    n = G.n
    nodes = set(range(n)) if within is None else set(within)
    parent: dict[int, int] = dict(seed or {})
    done = {root} | set(parent)
    queue = [root] + sorted(parent)
    cyc_pos = {c: i for i, c in enumerate(cycle)} if cycle else {}
    threaded = cycle is None or bool(set(parent) & set(cyc_pos))

    def thread(c: int):
        k = len(cycle)
        i = cyc_pos[c]
        for step in range(1, k):
            x = cycle[(i - step) % k]
            if x in done:
                break
            parent[x] = cycle[(i - step + 1) % k]
            done.add(x)
            queue.append(x)

    head = 0
    if not threaded and root in cyc_pos:
        thread(root)
        threaded = True
    while head < len(queue):
        x = queue[head]
        head += 1
        for u in sorted(G.predecessors(x)):
            if u in done or u not in nodes:
                continue
            parent[u] = x
            done.add(u)
            queue.append(u)
            if not threaded and u in cyc_pos:
                thread(u)
                threaded = True
    if len(done & nodes) != len(nodes):
        raise ValueError("no spanning in-tree")
    return parent


def _tree_paths(parent: dict[int, int], root: int, n: int) -> dict[int, list[tuple[int, int]]]:
    paths = {root: []}

    def get(u: int):
        if u not in paths:
            paths[u] = [(u, parent[u])] + get(parent[u])
        return paths[u]

    for u in parent:
        get(u)
    return paths


def _abar_to_a(abar: Sequence[int], cycle: tuple[int, ...], n: int) -> list[int]:
    """Clear lambda = A(C)/|C| from a form in normalized entries."""
    total = sum(abar)
    k = len(cycle)
    out = [k * c for c in abar]
    for i in range(k):
        out[cycle[i] * n + cycle[(i + 1) % k]] -= total
    return out


def _edge_form(n: int, u: int, v: int, paths, cycle) -> list[int]:
    ab = [0] * (n * n)
    ab[u * n + v] += 1
    for a, b in paths[v]:
        ab[a * n + b] += 1
    for a, b in paths[u]:
        ab[a * n + b] -= 1
    return _abar_to_a(ab, cycle, n)


def _first_cycle(G: Digraph) -> tuple[int, ...]:
    cs = enumerate_simple_cycles(G)
    if not cs:
        raise ValueError("graph has no cycle")
    return cs[0]


def reference_cycle(G: CompleteSet) -> tuple[int, ...]:
    """First cycle of the sink of the first part whose sink carries a cycle."""
    D, _ = decompose(G)
    return _first_cycle(D[0].sink_subgraph)


def psi(G: ConnectedRelation, cycle: tuple[int, ...] | None = None,
        root: int | None = None) -> Cone:
    """Cone on which ``G`` collects exactly the edges of maximum-weight paths into its sink."""
    n = G.n
    g = G.graph
    if cycle is None:
        sub = G.sink_subgraph
        cycle = _first_cycle(sub) if sub.mask else _first_cycle(g)
    r = min(G.sink) if root is None else root
    parent = _tree_with_cycle(g, r, cycle)
    paths = _tree_paths(parent, r, n)
    eqs, ineqs = [], []
    for u in range(n):
        for v in range(n):
            if parent.get(u) == v:
                continue
            form = _edge_form(n, u, v, paths, cycle)
            if not any(form):
                continue
            if g.has_edge(u, v):
                eqs.append(LinearForm.make(form, EQ))
            else:
                ineqs.append(LinearForm.make(form, LEQ))
    return _make_cone(n, eqs, ineqs)


def min_psi_forms(G: CompleteSet) -> list[tuple[LinearForm, str]]:
    """The relations printed by the per-part minimal-representation procedure.

    For every part: the sink subgraph's own relations, then one relation per
    edge entering the sink from another sink outside the spanning tree.  The
    second component is PATH or CYCLE.  The result need not cut out the whole
    cone; :func:`psi_complete` completes it.
    """
    n = G.n
    C = reference_cycle(G)
    owner = G.owner
    out: list[tuple[LinearForm, str]] = []
    for i, part in enumerate(G.parts):
        s = part.sink
        r = min(s)
        S = part.sink_subgraph
        local_cycle = C if set(C) <= s else None
        seed = _tree_with_cycle(S, r, local_cycle, within=s)
        spaths = _tree_paths(seed, r, n)
        for u in sorted(s):
            for v in sorted(s):
                if seed.get(u) == v:
                    continue
                form = _edge_form(n, u, v, spaths, C)
                if not any(form):
                    continue
                rel = EQ if S.has_edge(u, v) else LEQ
                out.append((LinearForm.make(form, rel), CYCLE))
        parent = _tree_with_cycle(part.graph, r, None, seed=seed)
        paths = _tree_paths(parent, r, n)
        for u in range(n):
            if owner[u] == i:
                continue
            for v in sorted(s):
                if parent.get(u) == v:
                    continue
                form = _edge_form(n, u, v, paths, C)
                if not any(form):
                    continue
                rel = EQ if part.graph.has_edge(u, v) else LEQ
                out.append((LinearForm.make(form, rel), PATH))
    return out


def intersect(*cones: Cone) -> Cone:
    n = cones[0].n
    return _make_cone(n, (f for K in cones for f in K.equalities), (f for K in cones for f in K.inequalities))


# ---------------------------------------------------------------- exact LP helpers

def _vec(f: LinearForm) -> list[Fraction]:
    return [Fraction(c) for c in f.coeffs]


def _project(forms: Sequence[LinearForm], basis: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return [[sum((c * b for c, b in zip(f.coeffs, col) if c), Fraction(0)) for col in basis] for f in forms]


def _relint_lp(g: list[list[Fraction]], d: int) -> tuple[list[Fraction], list[bool]]:
    """Point y and strictness flags maximizing the number of strict rows ``g y < 0``."""
    m = len(g)
    if m == 0:
        return [Fraction(0)] * d, []
    nv = 2 * d + m
    c = [Fraction(0)] * (2 * d) + [Fraction(1)] * m
    A, b = [], []
    for k, row in enumerate(g):
        r = list(row) + [-x for x in row] + [Fraction(0)] * m
        r[2 * d + k] = Fraction(1)
        A.append(r)
        b.append(Fraction(0))
    for k in range(m):
        r = [Fraction(0)] * nv
        r[2 * d + k] = Fraction(1)
        A.append(r)
        b.append(Fraction(1))
    res = solve_max(c, A, b)
    y = [res.x[i] - res.x[d + i] for i in range(d)]
    strict = [res.x[2 * d + k] == 1 for k in range(m)]
    return y, strict


def _max_over_box(obj: Sequence[Fraction], g: list[list[Fraction]], d: int) -> Fraction:
    """max obj.y over {g y <= 0, -1 <= y <= 1}."""
    nv = 2 * d
    c = list(obj) + [-x for x in obj]
    A, b = [], []
    for row in g:
        A.append(list(row) + [-x for x in row])
        b.append(Fraction(0))
    for i in range(nv):
        r = [Fraction(0)] * nv
        r[i] = Fraction(1)
        A.append(r)
        b.append(Fraction(1))
    return solve_max(c, A, b).value


def _affine_basis(n: int, eqs: Sequence[LinearForm]) -> list[list[Fraction]]:
    return nullspace([_vec(f) for f in eqs], n * n)


def _residue_key(f: LinearForm, R: list[list[Fraction]], piv: list[int]) -> tuple:
    """Form reduced modulo the equality span, scaled to a canonical representative."""
    v = _vec(f)
    for row, p in zip(R, piv):
        if v[p] != 0:
            k = v[p]
            v = [a - k * b for a, b in zip(v, row)]
    nz = [abs(x) for x in v if x != 0]
    if not nz:
        return ()
    s = nz[0]
    return tuple(x / s for x in v)


def reduce_cone(K: Cone, tags_for: dict[LinearForm, EqualityTag] | None = None) -> Cone:
    """Minimal H-representation: implicit equalities found, redundant forms dropped."""
    if K.reduced:
        return K
    n = K.n
    eqs = list(K.equalities)
    ineqs = list(K.inequalities)
    # implicit equalities
    while True:
        basis = _affine_basis(n, eqs)
        d = len(basis)
        g = _project(ineqs, basis)
        live = [(f, row) for f, row in zip(ineqs, g) if any(row)]
        if not live:
            ineqs = []
            break
        _, strict = _relint_lp([row for _, row in live], d)
        implicit = [f for (f, _), s in zip(live, strict) if not s]
        ineqs = [f for f, _ in live]
        if not implicit:
            break
        eqs += [LinearForm.make(f.coeffs, EQ) for f in implicit]
        ineqs = [f for f in ineqs if f not in implicit]
    # equality basis, tagged forms first in the given order
    chosen: list[LinearForm] = []
    rows: list[list[Fraction]] = []
    for f in eqs:
        if rank(rows + [_vec(f)]) > len(rows):
            rows.append(_vec(f))
            chosen.append(f)
    R, piv = rref(rows) if rows else ([], [])
    # deduplicate inequalities up to the equality span
    seen = {}
    for f in ineqs:
        key = _residue_key(f, R, piv)
        if key and key not in seen:
            seen[key] = f
    cand = list(seen.values())
    basis = _affine_basis(n, chosen)
    d = len(basis)
    kept = list(cand)
    for f in cand:
        others = [h for h in kept if h is not f]
        g = _project(others, basis)
        obj = _project([f], basis)[0]
        if _max_over_box(obj, g, d) <= 0:
            kept = others
    tags = ()
    if tags_for is not None:
        tags = tuple(tags_for.get(f, EqualityTag(PATH, "implicit")) for f in chosen)
        order = sorted(range(len(chosen)), key=lambda i: chosen[i])
        chosen = [chosen[i] for i in order]
        tags = tuple(tags[i] for i in order)
    else:
        chosen.sort()
    return Cone(n, tuple(chosen), tuple(sorted(kept)), tags, K.provenance, True)


def _cycle_equalities(G: CompleteSet, C: tuple[int, ...]) -> list[LinearForm]:
    n = G.n
    out = []
    for p in G.parts:
        for c in enumerate_simple_cycles(p.sink_subgraph):
            ab = [0] * (n * n)
            k = len(c)
            for i in range(k):
                ab[c[i] * n + c[(i + 1) % k]] += 1
            form = _abar_to_a(ab, C, n)
            if any(form):
                out.append(LinearForm.make(form, EQ))
    return out


@lru_cache(maxsize=4096)
def psi_complete(G: CompleteSet) -> Cone:
    """Minimal tagged H-representation of the intersection of psi over the parts."""
    n = G.n
    C = reference_cycle(G)
    tags: dict[LinearForm, EqualityTag] = {}
    eqs: list[LinearForm] = []
    for f in _cycle_equalities(G, C):
        tags.setdefault(f, EqualityTag(CYCLE, "cycle mean"))
        eqs.append(f)
    printed = min_psi_forms(G)
    ineqs: list[LinearForm] = []
    for f, kind in printed:
        if f.relation == EQ:
            tags.setdefault(f, EqualityTag(kind, "min-psi"))
            eqs.append(f)
        else:
            ineqs.append(f)
    for part in G.parts:
        K = psi(part)
        for f in K.equalities:
            tags.setdefault(f, EqualityTag(PATH, "part"))
            eqs.append(f)
        ineqs += K.inequalities
    eqs = list(dict.fromkeys(eqs))
    ineqs = list(dict.fromkeys(ineqs))
    return reduce_cone(Cone(n, tuple(eqs), tuple(ineqs), (), G), tags)


# ---------------------------------------------------------------- queries

def contains(K: Cone, A: TropMatrix) -> bool:
    if A.n != K.n:
        raise ValueError("dimension mismatch")
    return all(f.holds(A) for f in K.forms())


def strictly_contains(K: Cone, A: TropMatrix) -> bool:
    """In the relative interior: equalities exact, every listed inequality strict."""
    if A.n != K.n:
        raise ValueError("dimension mismatch")
    return all(f.holds(A) for f in K.equalities) and all(f.holds(A, strict=True) for f in K.inequalities)


def codim_rank(K: Cone) -> int:
    if not K.reduced:
        K = reduce_cone(K)
    return rank([_vec(f) for f in K.equalities]) if K.equalities else 0


def codim_formula(G: CompleteSet) -> int:
    """Closed-form codimension, read literally.

    Per part: (edges - nodes) of the sink subgraph when the sink carries a
    cycle, plus (out-degree total - count) over the contracted sinks that have
    an edge straight into this part's sink.
    """
    total = 0
    blocks = G.sinks
    for i, part in enumerate(G.parts):
        S = part.sink_subgraph
        if S.mask:
            total += len(S) - len(part.sink)
        Mg = contraction(part.graph, blocks)
        outdeg = [0] * len(blocks)
        feeds = [False] * len(blocks)
        for _, s, t in Mg.edges:
            outdeg[s] += 1
            if t == i:
                feeds[s] = True
        for j in range(len(blocks)):
            if j != i and feeds[j]:
                total += outdeg[j] - 1
    return total


def codim_report(G: CompleteSet) -> dict:
    """Rank versus closed form, with the cycle-mean correction that explains the gap."""
    r = codim_rank(psi_complete(G))
    f = codim_formula(G)
    D, _ = decompose(G)
    return {"element": G.to_json(), "codim_rank": r, "codim_formula": f,
            "match": r == f, "cycle_mean_equalities": len(D) - 1,
            "explained": r == f + len(D) - 1}


def interior_point(K: Cone) -> TropMatrix:
    """A rational matrix meeting every equality and every inequality strictly."""
    n = K.n
    basis = _affine_basis(n, K.equalities)
    d = len(basis)
    g = _project(K.inequalities, basis)
    for f, row in zip(K.inequalities, g):
        if not any(row):
            raise Degenerate(f"{f.pretty()} is an equality on the cone")
    y, strict = _relint_lp(g, d)
    if not all(strict):
        bad = [f.pretty() for f, s in zip(K.inequalities, strict) if not s]
        raise Degenerate("cannot be strict: " + "; ".join(bad))
    x = [sum((b[i] * y[j] for j, b in enumerate(basis)), Fraction(0)) for i in range(n * n)]
    A = TropMatrix.from_vector(n, x)
    assert strictly_contains(K, A)
    return A


def cone_equal(K1: Cone, K2: Cone) -> bool:
    """Same point set.  Minimal representations of equal cones agree up to the equality span."""
    if K1.n != K2.n:
        return False
    R1, R2 = reduce_cone(K1), reduce_cone(K2)
    e1 = [_vec(f) for f in R1.equalities]
    e2 = [_vec(f) for f in R2.equalities]
    r = rank(e1) if e1 else 0
    if (rank(e2) if e2 else 0) != r or (rank(e1 + e2) if e1 + e2 else 0) != r:
        return False
    R, piv = rref(e1) if e1 else ([], [])
    k1 = {_residue_key(f, R, piv) for f in R1.inequalities}
    k2 = {_residue_key(f, R, piv) for f in R2.inequalities}
    return k1 == k2


def cycle_polytope_support(A: TropMatrix) -> Fraction:
    """Max of <A, chi_C>/|C| over the vertices of the normalized cycle polytope."""
    n = A.n
    best = None
    for c in enumerate_simple_cycles(Digraph.complete(n)):
        k = len(c)
        val = sum((A.rows[c[i]][c[(i + 1) % k]] for i in range(k)), Fraction(0)) / k
        if best is None or val > best:
            best = val
    return best
