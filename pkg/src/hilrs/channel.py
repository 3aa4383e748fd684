"""Sum-rank weights, uniform error sampling and the error factorization e = a B."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .ff import FieldTower


class ChannelError(ValueError):
    pass


def _blocks(partition):
    start = 0
    for size in partition:
        yield start, start + size
        start += size


def sum_rank_weight(F: FieldTower, x, partition) -> int:
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if len(x) != sum(partition):
        raise ChannelError(f"vector length {len(x)} does not match partition sum {sum(partition)}")
    return sum(linalg.rank_over_base(F, x[a:b]) for a, b in _blocks(partition))


def regroup_indices(s: int, partition) -> list[np.ndarray]:
    """Positions of block i across all s components (block-ordered layout)."""
    n = sum(partition)
    return [
        np.concatenate([np.arange(j * n + a, j * n + b) for j in range(s)])
        for a, b in _blocks(partition)
    ]


def interleaved_weight(F: FieldTower, x, s: int, partition) -> int:
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if len(x) != s * sum(partition):
        raise ChannelError(f"vector length {len(x)} does not match s * n = {s * sum(partition)}")
    return sum(linalg.rank_over_base(F, x[idx]) for idx in regroup_indices(s, partition))


def interleaved_distance(F: FieldTower, x, y, s: int, partition) -> int:
    return interleaved_weight(F, F.sub(np.asarray(x), np.asarray(y)), s, partition)


# -- counting ---------------------------------------------------------------


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rank_count(rows: int, cols: int, t: int, q: int) -> int:
    """Number of rows x cols matrices over F_q of rank exactly t."""
    if t > min(rows, cols):
        return 0
    count = gaussian_binomial(cols, t, q)
    for j in range(t):
        count *= q**rows - q**j
    return count


@lru_cache(maxsize=256)
def _suffix_counts(q: int, m: int, widths: tuple[int, ...], t: int):
    """S[i][r]: number of weight-r patterns on blocks i, i+1, ... (exact ints)."""
    ell = len(widths)
    S = [[0] * (t + 1) for _ in range(ell + 1)]
    S[ell][0] = 1
    for i in range(ell - 1, -1, -1):
        w = [rank_count(m, widths[i], ti, q) for ti in range(min(widths[i], m, t) + 1)]
        for r in range(t + 1):
            S[i][r] = sum(w[ti] * S[i + 1][r - ti] for ti in range(min(len(w) - 1, r) + 1))
    return S


def partition_count(q: int, m: int, widths, t: int) -> int:
    """Number of vectors of weight t over blocks of the given widths."""
    return _suffix_counts(q, m, tuple(widths), t)[0][t]


def _sample_rank_partition(rng, q: int, m: int, widths: tuple[int, ...], t: int) -> tuple[int, ...]:
    """Draw t_1, ..., t_ell block by block with probability proportional to their counts."""
    S = _suffix_counts(q, m, widths, t)
    out, rest = [], t
    for i, w in enumerate(widths):
        options = [
            (ti, rank_count(m, w, ti, q) * S[i + 1][rest - ti])
            for ti in range(min(w, m, rest) + 1)
        ]
        pick = _randbelow(rng, sum(c for _, c in options))
        for ti, c in options:
            if pick < c:
                break
            pick -= c
        out.append(ti)
        rest -= ti
    return tuple(out)


def max_weight(F: FieldTower, s: int, partition) -> int:
    return sum(min(s * ni, F.m) for ni in partition)


def _randbelow(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrarily large bound."""
    nbits = max(bound.bit_length(), 1)
    nbytes = (nbits + 7) // 8
    excess = nbytes * 8 - nbits
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "little") >> excess
        if v < bound:
            return v


# -- error decomposition -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ErrorDecomposition:
    """Rank partition t, error values a (over F_{q^m}) and locations B (over F_q)."""

    t: tuple[int, ...]
    a: np.ndarray
    B: np.ndarray

    @property
    def weight(self) -> int:
        return sum(self.t)

    def blocks(self):
        start = 0
        for ti in self.t:
            yield start, start + ti
            start += ti

    def assemble(self, F: FieldTower) -> np.ndarray:
        if self.weight == 0:
            return np.zeros(self.B.shape[1], dtype=np.int64)
        return linalg.vecmat(F, self.a, self.B)


def _full_rank_base_matrix(F: FieldTower, rows: int, cols: int, rng) -> np.ndarray:
    while True:
        X = F.random_base(rng, size=(rows, cols))
        if linalg.rank(F, X) == rows:
            return X


def _independent_values(F: FieldTower, count: int, rng) -> np.ndarray:
    while True:
        a = F.random(rng, size=count)
        if linalg.rank_over_base(F, a) == count:
            return a


def sample_error(F: FieldTower, s: int, partition, t: int, rng: np.random.Generator):
    """Uniform draw from the vectors of interleaved sum-rank weight exactly t.

    Returns ``(e, decomposition)``.
    """
    partition = tuple(partition)
    n = sum(partition)
    if not 0 <= t <= max_weight(F, s, partition):
        raise ChannelError(f"weight {t} outside [0, {max_weight(F, s, partition)}]")
    widths = tuple(s * ni for ni in partition)
    tp = _sample_rank_partition(rng, F.q, F.m, widths, t)

    groups = regroup_indices(s, partition)
    a_parts, B = [], np.zeros((t, s * n), dtype=np.int64)
    row = 0
    for ti, idx in zip(tp, groups):
        if ti == 0:
            continue
        a_parts.append(_independent_values(F, ti, rng))
        B[row : row + ti][:, idx] = _full_rank_base_matrix(F, ti, len(idx), rng)
        row += ti
    a = np.concatenate(a_parts) if a_parts else np.zeros(0, dtype=np.int64)
    dec = ErrorDecomposition(tuple(tp), a, B)
    return dec.assemble(F), dec


def decompose(F: FieldTower, e, s: int, partition) -> ErrorDecomposition:
    """Canonical factorization: B is the reduced echelon row basis of each block."""
    e = np.asarray(e, dtype=np.int64).reshape(-1)
    if len(e) != s * sum(partition):
        raise ChannelError("length mismatch")
    ts, a_parts, B_rows = [], [], []
    for idx in regroup_indices(s, partition):
        block = e[idx]
        X = linalg.expand_over_base(F, block)  # m x width over F_q
        R, piv = linalg.rref(F, X)
        ts.append(len(piv))
        if not piv:
            continue
        a_parts.append(block[piv])
        rows = np.zeros((len(piv), len(e)), dtype=np.int64)
        rows[:, idx] = R[: len(piv)]
        B_rows.append(rows)
    a = np.concatenate(a_parts) if a_parts else np.zeros(0, dtype=np.int64)
    B = np.vstack(B_rows) if B_rows else np.zeros((0, len(e)), dtype=np.int64)
    return ErrorDecomposition(tuple(ts), a, B)


def transmit(F: FieldTower, c, e) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    e = np.asarray(e, dtype=np.int64)
    if c.shape != e.shape:
        raise ChannelError(f"codeword length {c.shape} differs from error length {e.shape}")
    return F.add(c, e)
