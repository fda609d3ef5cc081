"""Exact linear algebra over a finite field, over F[z] and over F(z)."""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .gf import FieldSpec
from .poly import Poly
from .ratfun import RatFunc


# ---------------------------------------------------------------------------
# matrices of field-element indices

def field_rref(M, spec: FieldSpec):
    """Return ``(R, pivots)`` with R the reduced row echelon form of M (not modified)."""
    t = spec.tables
    R = np.array(M, dtype=np.int64, copy=True).reshape(len(M), -1) if not isinstance(M, np.ndarray) else M.astype(np.int64, copy=True)
    if R.size == 0:
        return R, np.zeros(0, dtype=np.int64)
    piv = K.rref(R, t.add, t.mul, t.neg, t.inv)
    return R, piv


def field_rank(M, spec: FieldSpec) -> int:
    return len(field_rref(M, spec)[1])


def field_kernel(M, spec: FieldSpec) -> np.ndarray:
    """Basis (as rows) of the right null space of M."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, piv = field_rref(M, spec)
    t = spec.tables
    pivset = set(int(c) for c in piv)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        out[k, fc] = 1
        for r, pc in enumerate(piv):
            out[k, pc] = t.neg[R[r, fc]]
    return out


def field_solve(M, rhs, spec: FieldSpec):
    """One solution x of ``M x = rhs`` or None when inconsistent."""
    M = np.asarray(M, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64)
    rows, cols = M.shape
    aug = np.zeros((rows, cols + 1), dtype=np.int64)
    aug[:, :cols] = M
    aug[:, cols] = rhs
    R, piv = field_rref(aug, spec)
    if len(piv) and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(piv):
        x[pc] = R[r, cols]
    return x


# ---------------------------------------------------------------------------
# matrices over F(z)

def rat_rref(M):
    """Gauss-Jordan elimination on a list-of-lists of RatFunc."""
    A = [list(row) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        k = next((i for i in range(r, rows) if not A[i][c].is_zero()), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rat_rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rat_rref(M)[1])


def rat_kernel(M):
    """Basis of ``{x : M x = 0}`` as a list of RatFunc vectors."""
    A, piv = rat_rref(M)
    cols = len(M[0])
    spec = M[0][0].spec
    free = [c for c in range(cols) if c not in piv]
    out = []
    for fc in free:
        v = [RatFunc.zero(spec) for _ in range(cols)]
        v[fc] = RatFunc.one(spec)
        for r, pc in enumerate(piv):
            v[pc] = -A[r][fc]
        out.append(v)
    return out


def poly_det(M) -> Poly:
    """Determinant of a square matrix of Poly by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    spec = M[0][0].spec
    A = [list(row) for row in M]
    sign = 1
    prev = Poly.one(spec)
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if swap is None:
                return Poly.zero(spec)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def rat_det(M) -> RatFunc:
    """Determinant over F(z): clear column denominators, then :func:`poly_det`."""
    n = len(M)
    spec = M[0][0].spec
    scale = Poly.one(spec)
    cols = []
    for j in range(n):
        d = Poly.one(spec)
        for i in range(n):
            den = M[i][j].den
            d = (d * den).exact_div(d.gcd(den))
        scale = scale * d
        cols.append([(M[i][j] * RatFunc(d)).num for i in range(n)])
    P = [[cols[j][i] for j in range(n)] for i in range(n)]
    return RatFunc(poly_det(P), scale)
