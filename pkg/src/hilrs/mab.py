"""Shifted row degrees, weak-Popov form and left approximant bases over F_{q^m}[x; theta].

A skew-polynomial matrix is held as a 3-D coefficient array ``A[i, j, deg]``
(rows x cols x coefficients); helpers convert to and from nested SkewPoly lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .code import HilrsCode
from .decode import KeyEquationFailure, KeyEquationSolution, decoding_radius, receive_polys
from .ff import NEG_INF, FieldTower
from .skew import SkewPoly


def shifted_rdeg(row: Sequence[SkewPoly], v: Sequence[int]):
    if len(row) != len(v):
        raise ValueError("row and shift have different lengths")
    return max((p.deg + vj for p, vj in zip(row, v)), default=NEG_INF)


def pivot_index(row: Sequence[SkewPoly], v: Sequence[int]) -> int:
    """Largest (0-based) index attaining the shifted row degree."""
    d = shifted_rdeg(row, v)
    if d == NEG_INF:
        raise ValueError("zero row has no pivot")
    return max(j for j, (p, vj) in enumerate(zip(row, v)) if p.deg + vj == d)


def is_weak_popov(M: Sequence[Sequence[SkewPoly]], v: Sequence[int]) -> bool:
    if any(all(p.is_zero() for p in row) for row in M):
        return False
    piv = [pivot_index(row, v) for row in M]
    return all(a < b for a, b in zip(piv, piv[1:]))


# -- coefficient-array form ----------------------------------------------------


def to_array(M: Sequence[Sequence[SkewPoly]], length: int | None = None) -> np.ndarray:
    rows, cols = len(M), len(M[0])
    if length is None:
        length = max([len(p.coeffs) for row in M for p in row] + [1])
    A = np.zeros((rows, cols, length), dtype=np.int64)
    for i, row in enumerate(M):
        for j, p in enumerate(row):
            c = p.coeffs[:length]
            A[i, j, : len(c)] = c
    return A


def from_array(F: FieldTower, A: np.ndarray) -> list[list[SkewPoly]]:
    return [[SkewPoly(F, A[i, j]) for j in range(A.shape[1])] for i in range(A.shape[0])]


def _times_x(F: FieldTower, A: np.ndarray) -> np.ndarray:
    """x * A for a coefficient block, truncating at the array length."""
    out = np.zeros_like(A)
    out[..., 1:] = F.theta(A[..., :-1])
    return out


def mat_mul(F: FieldTower, A, B) -> list[list[SkewPoly]]:
    """Product of two skew-polynomial matrices given as nested SkewPoly lists."""
    from .skew import skew_mul

    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = SkewPoly(F)
            for t in range(inner):
                acc = acc + skew_mul(A[i][t], B[t][j])
            row.append(acc)
        out.append(row)
    return out


def truncate(p: SkewPoly, d: int) -> SkewPoly:
    """p mod_r x^d: the terms of degree below d."""
    return SkewPoly(p.F, p.coeffs[:d])


@dataclass(frozen=True, eq=False)
class ApproximantBasis:
    rows: list[list[SkewPoly]]
    order: int
    shift: tuple[int, ...]
    rdeg: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rows)


def left_approximant_basis(F: FieldTower, W, d: int, v: Sequence[int]) -> ApproximantBasis:
    """Left v-ordered weak-Popov approximant basis of W of order d.

    Iterative order raising: at each order and column, the row of smallest
    shifted degree (smallest pivot index on ties) with a nonzero residual
    eliminates the others by constant multiples and is then multiplied by x.
    Row i keeps pivot index i throughout.
    """
    W_arr = W if isinstance(W, np.ndarray) else to_array(W, max(d, 1))
    a, b = W_arr.shape[:2]
    v = tuple(int(x) for x in v)
    if len(v) != a:
        raise ValueError("shift length must equal the number of rows of W")
    if d < 0:
        raise ValueError("order must be non-negative")
    cap = d * b + max(v) - min(v) + 1
    B = np.zeros((a, a, cap), dtype=np.int64)
    B[np.arange(a), np.arange(a), 0] = 1
    res = np.zeros((a, b, max(d, 1)), dtype=np.int64)
    L = min(d, W_arr.shape[2])
    res[:, :, :L] = W_arr[:, :, :L]
    rdeg = list(v)

    for order in range(d):
        for col in range(b):
            r = res[:, col, order]
            nz = np.flatnonzero(r)
            if nz.size == 0:
                continue
            piv = min(nz, key=lambda i: (rdeg[i], i))
            others = nz[nz != piv]
            if others.size:
                c = F.div(r[others], int(r[piv]))
                B[others] = F.sub(B[others], F.mul(c[:, None, None], B[piv][None]))
                res[others] = F.sub(res[others], F.mul(c[:, None, None], res[piv][None]))
            B[piv] = _times_x(F, B[piv])
            res[piv] = _times_x(F, res[piv])
            rdeg[piv] += 1

    return ApproximantBasis(from_array(F, B), d, v, tuple(rdeg))


def reduce_against(F: FieldTower, row: Sequence[SkewPoly], basis: ApproximantBasis):
    """Left row reduction of ``row`` by the basis; zero iff row lies in its row module."""
    row = list(row)
    v = basis.shift
    while not all(p.is_zero() for p in row):
        j = pivot_index(row, v)
        target = basis.rows[j]
        if pivot_index(target, v) != j:
            raise ValueError("basis is not in v-ordered weak-Popov form")
        u = shifted_rdeg(row, v) - basis.rdeg[j]
        if u < 0:
            return row
        c = F.div(row[j].lead, F.theta(target[j].lead, u))
        mult = SkewPoly.x_power(F, u, c)
        from .skew import skew_mul

        row = [p - skew_mul(mult, t) for p, t in zip(row, target)]
    return row


# -- key equation ----------------------------------------------------------------


def key_equation_shift(s: int, k: int) -> tuple[int, ...]:
    """(0_s, k-1, k 1_s): chi entries are weighted so that rdeg < D + k bounds deg chi < D."""
    return (0,) * s + (k - 1,) + (k,) * s


def gao_matrix(code: HilrsCode, R: Sequence[SkewPoly]) -> list[list[SkewPoly]]:
    """W = (-I_s ; R_1 ... R_s ; diag(G_1, ..., G_s)), of size (2s+1) x s."""
    F, s = code.F, code.s
    zero, minus_one = SkewPoly(F), SkewPoly(F, [F.neg(1)])
    W = [[minus_one if i == j else zero for j in range(s)] for i in range(s)]
    W.append(list(R))
    W.extend([[code.G[i] if i == j else zero for j in range(s)] for i in range(s)])
    return W


def solve_key_equation_mab(code: HilrsCode, y) -> KeyEquationSolution:
    F, s, n, k = code.F, code.s, code.n, code.k
    R = receive_polys(code, y)
    D = decoding_radius(n, k, s)
    d = D + n
    v = key_equation_shift(s, k)
    basis = left_approximant_basis(F, gao_matrix(code, R), d, v)
    best = min(range(len(basis.rows)), key=lambda i: (basis.rdeg[i], i))
    if basis.rdeg[best] >= D + k:
        raise KeyEquationFailure("no-solution")
    row = basis.rows[best]
    sigma = row[s]
    if sigma.is_zero():
        raise KeyEquationFailure("zero-sigma")
    c = F.inv(sigma.lead)
    return KeyEquationSolution(tuple(p.scale(c) for p in row[:s]), sigma.scale(c))
