"""Exact linear algebra over prime fields F_p and over the rationals.

All F_p matrices are numpy int64 arrays with entries reduced into [0, p).
Nothing here ever touches floating point; rational work uses
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np


def modp(a: np.ndarray, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two F_p matrices (shapes may be degenerate)."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return modp(a @ b, p)


def inv_scalar(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p.

    Returns (R, pivot_columns).  R has zero rows trimmed.
    """
    a = modp(np.array(mat, dtype=np.int64, copy=True), p)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        sub = a[r:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = modp(a[r] * inv_scalar(a[r, c], p), p)
        col = a[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if mask.size:
            a[mask] = modp(a[mask] - np.outer(col[mask], a[r]), p)
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat, p)[1])


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel; columns of the result span {x : mat x = 0}."""
    mat = np.asarray(mat, dtype=np.int64)
    rows, cols = mat.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return eye(cols)
    r, pivots = rref(mat, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(pivots):
            basis[c, k] = (-int(r[i, f])) % p
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> Optional[np.ndarray]:
    """One solution x of mat x = rhs, or None when inconsistent.

    rhs may be a vector or a matrix of stacked right-hand sides.
    """
    mat = np.asarray(mat, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64)
    single = rhs.ndim == 1
    b = modp(rhs.reshape(-1, 1) if single else rhs, p)
    rows, cols = mat.shape
    if rows == 0:
        x = zeros(cols, b.shape[1])
        return x[:, 0] if single else x
    aug = np.concatenate([modp(mat, p), b], axis=1)
    r, pivots = rref(aug, p)
    if any(c >= cols for c in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for i, c in enumerate(pivots):
        x[c] = r[i, cols:]
    return x[:, 0] if single else x


def inverse(mat: np.ndarray, p: int) -> Optional[np.ndarray]:
    n = mat.shape[0]
    if mat.shape != (n, n):
        return None
    if n == 0:
        return zeros(0, 0)
    x = solve(mat, eye(n), p)
    return x


def column_space_basis(mat: np.ndarray, p: int) -> np.ndarray:
    """Matrix whose columns are a canonical basis of the column space."""
    r, pivots = rref(mat.T, p)
    return r.T


def row_space_key(mat: np.ndarray, p: int) -> bytes:
    """Canonical byte key identifying the row space (for dedup)."""
    r, _ = rref(mat, p)
    return np.asarray(r.shape, dtype=np.int64).tobytes() + r.tobytes()


def in_column_space(mat: np.ndarray, vec: np.ndarray, p: int) -> bool:
    return solve(mat, vec, p) is not None


def kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return modp(np.kron(a, b), p)


# ---------------------------------------------------------------------------
# Rational (Fraction) elimination, used for g-vector cone arithmetic.
# ---------------------------------------------------------------------------

def frac_solve(cols: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Solve sum_j x_j * cols[j] = rhs exactly over Q.

    Returns the coefficient list when the system is consistent and the
    columns are linearly independent; None when inconsistent.  Raises
    ValueError on dependent columns (callers pass independent families).
    """
    m = len(rhs)
    k = len(cols)
    a = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(rhs[i])] for i in range(m)]
    row = 0
    piv_of_col = []
    for c in range(k):
        piv = next((i for i in range(row, m) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("dependent columns in exact solve")
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][c]
        a[row] = [x * inv for x in a[row]]
        for i in range(m):
            if i != row and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        piv_of_col.append(row)
        row += 1
    for i in range(row, m):
        if a[i][k] != 0:
            return None
    return [a[piv_of_col[c]][k] for c in range(k)]


def frac_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
