"""Brute-force references.  Exponential on purpose; never used by the fast paths."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from .classify import classify
from .cones import Cone, interior_point, intersect, psi_complete, reduce_cone
from .enumeration import ResourceLimit
from .relations import CompleteSet
from .tropical import PositiveCycle, TropMatrix, TropPoint, kleene_star, normalize

__all__ = [
    "bf_eigenvalue",
    "bf_longest_path",
    "bf_linearity_check",
    "bf_lp_longest_path",
    "check_pair",
    "sample_interior",
    "geometric_join",
    "random_matrix",
    "LinearityReport",
    "LPReport",
]


def _cycles(n: int):
    for k in range(1, n + 1):
        for nodes in combinations(range(n), k):
            first, rest = nodes[0], nodes[1:]
            for tail in permutations(rest):
                yield (first,) + tail


def bf_eigenvalue(A: TropMatrix) -> Fraction:
    n = A.n
    if n > 6:
        raise ResourceLimit("bf_eigenvalue is limited to n <= 6")
    best = None
    for c in _cycles(n):
        k = len(c)
        m = sum((A.rows[c[i]][c[(i + 1) % k]] for i in range(k)), Fraction(0)) / k
        if best is None or m > best:
            best = m
    return best


def _walk(A: TropMatrix, nodes) -> Fraction:
    return sum((A.rows[a][b] for a, b in zip(nodes, nodes[1:])), Fraction(0))


def bf_longest_path(A: TropMatrix, u: int, v: int) -> Fraction:
    """Best simple path ``u -> v``; for ``u == v`` the best simple cycle or the empty path."""
    n = A.n
    if n > 5:
        raise ResourceLimit("bf_longest_path is limited to n <= 5")
    if bf_eigenvalue(A) > 0:
        raise PositiveCycle("positive cycle")
    others = [x for x in range(n) if x not in (u, v)]
    best = Fraction(0) if u == v else None
    for k in range(len(others) + 1):
        for mid in permutations(others, k):
            w = _walk(A, (u,) + mid + (v,))
            if best is None or w > best:
                best = w
    return best


def random_matrix(rng: random.Random, n: int, lo: int = -9, hi: int = 9, den: int = 4) -> TropMatrix:
    return TropMatrix.of([[Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den)) for _ in range(n)]
                          for _ in range(n)])


# ---------------------------------------------------------------- linearity

@dataclass(frozen=True)
class LinearityReport:
    passed: bool
    pairs: int
    counterexample: tuple[TropMatrix, TropMatrix, Fraction] | None = None


def _vertex_columns(A: TropMatrix) -> tuple[TropPoint, ...]:
    # column r of the normalized star is the vertex of the sink containing r
    S = kleene_star(normalize(A))
    return tuple(TropPoint(tuple(S.rows[i][r] for i in range(A.n))) for r in range(A.n))


def _affine_ok(A1: TropMatrix, A2: TropMatrix, t: Fraction) -> bool:
    V1, V2 = _vertex_columns(A1), _vertex_columns(A2)
    Vt = _vertex_columns(A1.scale(t) + A2.scale(1 - t))
    for p1, p2, pt in zip(V1, V2, Vt):
        want = tuple(t * a + (1 - t) * b for a, b in zip(p1.coords, p2.coords))
        if pt.coords != want:
            return False
    return True


def check_pair(A1: TropMatrix, A2: TropMatrix,
               ts=(Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))) -> Fraction | None:
    """First ``t`` at which the vertex map is not affine along the segment, else None."""
    for t in ts:
        if not _affine_ok(A1, A2, t):
            return t
    return None


def sample_interior(K: Cone, rng: random.Random, base: TropMatrix | None = None) -> TropMatrix:
    """Strict interior point: a fixed interior point plus a small random push."""
    P = base if base is not None else interior_point(K)
    n = K.n
    # every inequality has slack >= 1 at P after the LP; keep the push smaller than that
    bound = max((sum(abs(c) for c in f.coeffs) for f in K.inequalities), default=1)
    eps = Fraction(1, 2 * bound)
    R = TropMatrix.of([[Fraction(rng.randint(-8, 8), 8) * eps for _ in range(n)] for _ in range(n)])
    # lineality moves: a diagonal similarity and a constant shift
    x = [Fraction(rng.randint(-6, 6), 3) for _ in range(n)]
    Lin = TropMatrix.of([[x[i] - x[j] for j in range(n)] for i in range(n)])
    scale = Fraction(rng.randint(1, 6), 2)
    A = P.scale(scale) + R.scale(scale) + Lin.shift(Fraction(rng.randint(-6, 6), 5))
    return A


def bf_linearity_check(G: CompleteSet, trials: int = 5, seed: int = 0) -> LinearityReport:
    K = psi_complete(G)
    if K.equalities:
        raise ValueError("linearity check needs a full-dimensional cone")
    rng = random.Random(seed)
    P = interior_point(K)
    slack = min(-f.evaluate(P) for f in K.inequalities)
    if slack < 1:
        P = P.scale(1 / slack)
    for _ in range(trials):
        A1 = sample_interior(K, rng, P)
        A2 = sample_interior(K, rng, P)
        assert classify(A1) == G and classify(A2) == G
        t = check_pair(A1, A2)
        if t is not None:
            return LinearityReport(False, trials, (A1, A2, t))
    return LinearityReport(True, trials)


# ---------------------------------------------------------------- longest-path LP

@dataclass(frozen=True)
class LPReport:
    value: Fraction
    node_values: tuple[Fraction, ...]
    optimal_trees: tuple[tuple[tuple[int, int], ...], ...]


def bf_lp_longest_path(A: TropMatrix, target: int) -> LPReport:
    """Single-target longest-path LP solved by scanning its vertices, the in-trees at ``target``.

    Each non-target node ships one unit to ``target``; the objective of a tree
    is the sum of its root paths' weights.
    """
    n = A.n
    if n > 4:
        raise ResourceLimit("bf_lp_longest_path is limited to n <= 4")
    if bf_eigenvalue(A) > 0:
        raise PositiveCycle("positive cycle")
    others = [u for u in range(n) if u != target]
    best = None
    trees = []
    values = None
    for pick in product(*[[v for v in range(n) if v != u] for u in others]):
        nxt = dict(zip(others, pick))
        total = Fraction(0)
        per = [Fraction(0)] * n
        ok = True
        for u in others:
            x, w, steps = u, Fraction(0), 0
            while x != target:
                w += A.rows[x][nxt[x]]
                x = nxt[x]
                steps += 1
                if steps > n:
                    ok = False
                    break
            if not ok:
                break
            per[u] = w
            total += w
        if not ok:
            continue
        edges = tuple(sorted(nxt.items()))
        if best is None or total > best:
            best, trees, values = total, [edges], per
        elif total == best:
            trees.append(edges)
    return LPReport(best, tuple(values), tuple(trees))


# ---------------------------------------------------------------- geometric join

def geometric_join(G: CompleteSet, H: CompleteSet) -> CompleteSet:
    """Type of a relative-interior point of the intersection of the two cones."""
    K = reduce_cone(intersect(psi_complete(G), psi_complete(H)))
    return classify(interior_point(K))
