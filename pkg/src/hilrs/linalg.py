"""Dense linear algebra over F_{q^m} (and, by restriction, over F_q).

Matrices are 2-D int64 arrays in the element encoding of :mod:`hilrs.ff`.
"""

from __future__ import annotations

import numpy as np

from .ff import FieldTower


def as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A


def rref(F: FieldTower, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = as_matrix(M).copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        if A[r, c] != 1:
            A[r] = F.mul(A[r], F.inv(A[r, c]))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = F.sub(A[hit], F.mul(col[hit, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldTower, M) -> int:
    A = as_matrix(M)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def kernel_basis(F: FieldTower, M) -> np.ndarray:
    """Rows spanning the right kernel {x : M x = 0}, one per free column."""
    A = as_matrix(M)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref(F, A)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    K = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        K[np.arange(len(free)), free] = 1
        if pivots:
            K[:, pivots] = F.neg(R[: len(pivots)][:, free].T)
    return K


def matmul(F: FieldTower, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, i, None], B[None, i, :]))
    return out[:, 0] if vec else out


def vecmat(F: FieldTower, x, A) -> np.ndarray:
    """Row vector times matrix."""
    return matmul(F, np.asarray(x, dtype=np.int64)[None, :], A)[0]


def inverse(F: FieldTower, M) -> np.ndarray:
    A = as_matrix(M)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    R, pivots = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return R[:, n:]


def solve(F: FieldTower, A, b) -> np.ndarray:
    """Unique solution of A x = b for square nonsingular A."""
    A = as_matrix(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    aug = np.hstack([A, np.asarray(b, dtype=np.int64).reshape(n, 1)])
    R, pivots = rref(F, aug)
    if pivots != list(range(n)):
        raise np.linalg.LinAlgError("singular system")
    return R[:, n].copy()


def expand_over_base(F: FieldTower, M) -> np.ndarray:
    """Replace every entry by its length-m F_q coordinate column."""
    A = as_matrix(M)
    C = F.coords(A)  # rows x cols x m
    return C.transpose(0, 2, 1).reshape(A.shape[0] * F.m, A.shape[1])


def rank_over_base(F: FieldTower, M) -> int:
    """rk_q: the F_q-rank of the coordinate expansion of M."""
    A = as_matrix(M)
    if A.size == 0:
        return 0
    return rank(F, expand_over_base(F, A))
