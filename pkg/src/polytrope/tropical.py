"""Exact max-plus matrix algebra.

All scalars are :class:`fractions.Fraction`.  Matrices are finite; the
tropical zero (minus infinity) is never stored and only appears implicitly
inside :func:`trop_mat_mul` (as an identity sentinel) and :func:`kleene_star`
(the diagonal of the tropical identity).

Nodes are 0-based internally.  Row ``i``, column ``j`` of a matrix is the
weight of the edge ``i -> j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "TropMatrix",
    "TropPoint",
    "TropPolytopeVertices",
    "PositiveCycle",
    "DimensionMismatch",
    "as_rational",
    "rational_str",
    "eigenvalue",
    "normalize",
    "trop_mat_mul",
    "trop_identity",
    "kleene_plus",
    "kleene_star",
    "polytrope_vertices",
    "eigenspace_vertices",
    "check_eigenpair",
    "check_polytrope_member",
]


class PositiveCycle(ValueError):
    """The matrix has a cycle of positive weight, so its Kleene star diverges."""


class DimensionMismatch(ValueError):
    pass


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction.

    Floats are rejected: a float literal rarely means the rational the user
    had in mind, and ties between cycle means must be decided exactly.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float entry {x!r}; pass a string or Fraction")
    return Fraction(x)


def rational_str(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class TropMatrix:
    """A finite square matrix of rationals, read as a complete weighted digraph."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise ValueError("empty matrix")
        for row in self.rows:
            if len(row) != n:
                raise ValueError("matrix must be square")
            for x in row:
                if not isinstance(x, Fraction):
                    raise TypeError("entries must be Fractions; use TropMatrix.of()")

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> "TropMatrix":
        return cls(tuple(tuple(as_rational(x) for x in row) for row in rows))

    @classmethod
    def zeros(cls, n: int) -> "TropMatrix":
        z = Fraction(0)
        return cls(tuple((z,) * n for _ in range(n)))

    @classmethod
    def from_vector(cls, n: int, vec: Sequence) -> "TropMatrix":
        """Row-major length ``n*n`` vector to matrix."""
        if len(vec) != n * n:
            raise DimensionMismatch(f"expected {n * n} entries, got {len(vec)}")
        return cls.of(vec[i * n:(i + 1) * n] for i in range(n))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(x for row in self.rows for x in row)

    def transpose(self) -> "TropMatrix":
        return TropMatrix(tuple(zip(*self.rows)))

    def shift(self, c) -> "TropMatrix":
        """Tropical scaling ``A ⊙ c``: add ``c`` to every entry."""
        c = as_rational(c)
        return TropMatrix(tuple(tuple(x + c for x in row) for row in self.rows))

    def permute(self, perm: Sequence[int]) -> "TropMatrix":
        """Relabel nodes: node ``i`` becomes ``perm[i]``."""
        n = self.n
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out[perm[i]][perm[j]] = self.rows[i][j]
        return TropMatrix(tuple(tuple(r) for r in out))

    def __add__(self, other: "TropMatrix") -> "TropMatrix":
        _check_same(self, other)
        return TropMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                                for r, s in zip(self.rows, other.rows)))

    def scale(self, t) -> "TropMatrix":
        """Ordinary scalar multiple (used for convex combinations, not tropical)."""
        t = as_rational(t)
        return TropMatrix(tuple(tuple(t * x for x in row) for row in self.rows))

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[rational_str(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "TropMatrix":
        rows = obj["entries"]
        if "n" in obj and int(obj["n"]) != len(rows):
            raise DimensionMismatch(f"n={obj['n']} but {len(rows)} rows")
        for row in rows:
            for x in row:
                if isinstance(x, float):
                    raise TypeError("matrix entries must be strings or integers")
        return cls.of(rows)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]"
                               for row in self.rows) + "]"


def _check_same(a: TropMatrix, b: TropMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n}x{a.n} vs {b.n}x{b.n}")


@dataclass(frozen=True, order=True)
class TropPoint:
    """A point of the tropical torus, stored with first coordinate 0."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("empty point")
        base = self.coords[0]
        if base != 0:
            object.__setattr__(self, "coords", tuple(as_rational(x) - base for x in self.coords))
        else:
            object.__setattr__(self, "coords", tuple(as_rational(x) for x in self.coords))

    @classmethod
    def of(cls, coords: Iterable) -> "TropPoint":
        return cls(tuple(as_rational(x) for x in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def to_json(self) -> list[str]:
        return [rational_str(x) for x in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


@dataclass(frozen=True)
class TropPolytopeVertices:
    vertices: tuple[TropPoint, ...]
    source: str  # "polytrope" or "eigenspace"

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, p) -> bool:
        return p in self.vertices

    def __iter__(self):
        return iter(self.vertices)


def eigenvalue(A: TropMatrix) -> Fraction:
    """Maximum cycle mean, by Karp's recurrence over walk lengths.

    ``D[k][v]`` is the best weight of a walk with exactly ``k`` edges ending
    at ``v`` (walks may start anywhere).  Then
    ``max_v min_{k<n} (D[n][v] - D[k][v]) / (n - k)`` is the answer.
    """
    n = A.n
    rows = A.rows
    D = [[Fraction(0)] * n]
    for _ in range(n):
        prev = D[-1]
        D.append([max(prev[u] + rows[u][v] for u in range(n)) for v in range(n)])
    Dn = D[n]
    return max(min((Dn[v] - D[k][v]) / (n - k) for k in range(n)) for v in range(n))


def normalize(A: TropMatrix) -> TropMatrix:
    return A.shift(-eigenvalue(A))


def trop_mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    _check_same(A, B)
    n = A.n
    a, b = A.rows, B.rows
    return TropMatrix(tuple(
        tuple(max(a[i][k] + b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)))


def trop_identity(n: int) -> list[list[Fraction | None]]:
    """The tropical identity with ``None`` standing for minus infinity.

    Only useful as an argument to :func:`trop_mat_mul_partial`; it is not a
    :class:`TropMatrix` because those are finite by construction.
    """
    return [[Fraction(0) if i == j else None for j in range(n)] for i in range(n)]


def trop_mat_mul_partial(A: TropMatrix, B: list[list[Fraction | None]]) -> TropMatrix:
    """``A ⊙ B`` where ``B`` may hold ``None`` (absent edge) entries."""
    n = A.n
    if len(B) != n:
        raise DimensionMismatch(f"{n} vs {len(B)}")
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = [A.rows[i][k] + B[k][j] for k in range(n) if B[k][j] is not None]
            if not terms:
                raise ValueError("product has an infinite entry")
            row.append(max(terms))
        out.append(tuple(row))
    return TropMatrix(tuple(out))


def _closure(A: TropMatrix) -> list[list[Fraction]]:
    # Floyd-Warshall for best walks with at least one edge; valid when no
    # cycle is positive, so best walks are attained by simple paths/cycles.
    n = A.n
    W = [list(r) for r in A.rows]
    for k in range(n):
        Wk = W[k]
        for i in range(n):
            wik = W[i][k]
            Wi = W[i]
            for j in range(n):
                c = wik + Wk[j]
                if c > Wi[j]:
                    Wi[j] = c
    return W


def kleene_plus(A: TropMatrix) -> TropMatrix:
    """``A⁺ = A ⊕ A² ⊕ …``: best weight of a path with at least one edge."""
    if eigenvalue(A) > 0:
        raise PositiveCycle("kleene_plus needs eigenvalue(A) <= 0")
    return TropMatrix(tuple(tuple(r) for r in _closure(A)))


def kleene_star(A: TropMatrix) -> TropMatrix:
    """``A* = I ⊕ A⁺``; the identity's minus-infinity entries never win."""
    if eigenvalue(A) > 0:
        raise PositiveCycle("kleene_star needs eigenvalue(A) <= 0")
    W = _closure(A)
    for i in range(A.n):
        if W[i][i] < 0:
            W[i][i] = Fraction(0)
    return TropMatrix(tuple(tuple(r) for r in W))


def _columns(M: TropMatrix, js: Iterable[int]) -> tuple[TropPoint, ...]:
    seen = {}
    for j in js:
        p = TropPoint(tuple(M.rows[i][j] for i in range(M.n)))
        seen.setdefault(p, None)
    return tuple(sorted(seen))


def polytrope_vertices(A: TropMatrix) -> TropPolytopeVertices:
    star = kleene_star(normalize(A))
    return TropPolytopeVertices(_columns(star, range(A.n)), "polytrope")


def eigenspace_vertices(A: TropMatrix) -> TropPolytopeVertices:
    """Columns of the normalized star whose node lies on a critical cycle."""
    Abar = normalize(A)
    plus = kleene_plus(Abar)
    star = kleene_star(Abar)
    crit = [j for j in range(A.n) if plus.rows[j][j] == 0]
    return TropPolytopeVertices(_columns(star, crit), "eigenspace")


def _check_point(A: TropMatrix, x) -> tuple[Fraction, ...]:
    coords = x.coords if isinstance(x, TropPoint) else tuple(as_rational(v) for v in x)
    if len(coords) != A.n:
        raise DimensionMismatch(f"point of length {len(coords)} for {A.n}x{A.n} matrix")
    return coords


def check_eigenpair(A: TropMatrix, x) -> bool:
    x = _check_point(A, x)
    lam = eigenvalue(A)
    n = A.n
    return all(max(A.rows[i][j] + x[j] for j in range(n)) == lam + x[i] for i in range(n))


def check_polytrope_member(A: TropMatrix, x) -> bool:
    x = _check_point(A, x)
    n = A.n
    best = max(A.rows[i][j] + x[j] - x[i] for i in range(n) for j in range(n))
    return best == eigenvalue(A)
