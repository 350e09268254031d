"""Exact determinants over Z[u,u^-1] (and its localizations) and ranks over fields."""

from __future__ import annotations

from typing import Sequence

from .exactring import LaurentPoly, Localized

__all__ = ["bareiss_det", "localized_det", "field_rank", "is_lower_triangular"]

_ZERO = LaurentPoly()
_ONE = LaurentPoly.const(1)
_U_PLUS_1 = LaurentPoly({0: 1, 1: 1})
_U_MINUS_1 = LaurentPoly({0: -1, 1: 1})


def _size(p: LaurentPoly) -> tuple[int, int, int]:
    span = p.max_exp - p.min_exp
    return (len(p), span, max(abs(c) for _, c in p.terms()))


def bareiss_det(matrix: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free Gaussian elimination with full pivoting.

    Every intermediate entry is a minor of the input, so each division by
    the previous pivot is exact in Z[u,u^-1].  Pivots are chosen smallest
    first, which keeps unit-vector columns cheap.
    """
    n = len(matrix)
    if n == 0:
        return _ONE
    a = [[LaurentPoly._coerce(x) for x in row] for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = _ONE
    for k in range(n):
        best = None
        for i in range(k, n):
            row = a[i]
            for j in range(k, n):
                x = row[j]
                if x:
                    key = _size(x)
                    if best is None or key < best[0]:
                        best = (key, i, j)
                        if key == (1, 0, 1):
                            break
            if best is not None and best[0] == (1, 0, 1):
                break
        if best is None:
            return _ZERO
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        p = a[k][k]
        pivot_row = a[k]
        same = p == prev
        for i in range(k + 1, n):
            row = a[i]
            aik = row[k]
            if not aik:
                if same:
                    continue
                for j in range(k + 1, n):
                    if row[j]:
                        row[j] = (p * row[j]).exact_div(prev)
            else:
                for j in range(k + 1, n):
                    akj = pivot_row[j]
                    x = p * row[j] if row[j] else _ZERO
                    if akj:
                        x = x - aik * akj
                    row[j] = x.exact_div(prev) if x else _ZERO
            row[k] = _ZERO
        prev = p
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def localized_det(matrix: Sequence[Sequence[Localized]]) -> Localized:
    """Determinant over the localized ring: clear each row's denominator first."""
    rows = []
    den_a = den_b = 0
    for row in matrix:
        xs = [Localized._coerce(x) for x in row]
        A = max((x.a for x in xs), default=0)
        B = max((x.b for x in xs), default=0)
        rows.append([x.num * (_U_PLUS_1 ** (A - x.a)) * (_U_MINUS_1 ** (B - x.b)) for x in xs])
        den_a += A
        den_b += B
    return Localized(bareiss_det(rows), den_a, den_b)


def field_rank(matrix: Sequence[Sequence]) -> int:
    """Rank over a field (entries Fraction or Residue) by Gaussian elimination."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        inv = 1 / pr[c]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv
                r = rows[i]
                for j in range(c, ncols):
                    if pr[j]:
                        r[j] = r[j] - f * pr[j]
        rank += 1
        if rank == len(rows):
            break
    return rank


def is_lower_triangular(matrix: Sequence[Sequence]) -> tuple[bool, tuple[int, int] | None]:
    """(True, None) or (False, first nonzero (i, j) above the diagonal)."""
    for i, row in enumerate(matrix):
        for j in range(i + 1, len(row)):
            if row[j]:
                return False, (i, j)
    return True, None
