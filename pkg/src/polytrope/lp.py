"""Exact rational linear algebra and a small simplex solver.

Everything works on lists of :class:`fractions.Fraction` (ints are accepted and
promoted).  Problems in this package have at most a few dozen variables, so a
dense tableau with Bland's anti-cycling rule is plenty.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["rref", "rank", "nullspace", "solve_max", "LPResult", "Unbounded"]


class Unbounded(ArithmeticError):
    pass


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return [], []
    m, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        if piv != 1:
            M[r] = [x / piv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [a - f * b for a, b in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    R, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]


def solve_max(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Maximize ``c.x`` subject to ``A x <= b``, ``x >= 0``, with ``b >= 0``.

    The origin is feasible by assumption, so the slack basis starts the
    simplex directly.  Raises :class:`Unbounded` if the objective is unbounded.
    """
    m = len(A)
    nv = len(c)
    if any(Fraction(bi) < 0 for bi in b):
        raise ValueError("solve_max needs b >= 0")
    width = nv + m + 1
    # rows: [A | I | b]; objective row holds reduced costs -c
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[nv + i] = Fraction(1)
        T.append(row)
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
    basis = [nv + i for i in range(m)]

    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = -1
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if best is None:
            raise Unbounded("objective unbounded")
        piv = T[leave][enter]
        prow = [x / piv for x in T[leave]] if piv != 1 else T[leave]
        T[leave] = prow
        nz = [j for j in range(width) if prow[j] != 0]
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f != 0:
                    Ti = T[i]
                    for j in nz:
                        Ti[j] -= f * prow[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * prow[j]
        basis[leave] = enter

    x = [Fraction(0)] * nv
    for i, bv in enumerate(basis):
        if bv < nv:
            x[bv] = T[i][-1]
    return LPResult(obj[-1], tuple(x))
