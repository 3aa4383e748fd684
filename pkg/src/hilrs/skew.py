"""Skew polynomials in F_{q^m}[x; theta] (zero derivation) and operator evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ff import NEG_INF, FieldTower


class SkewPoly:
    """Ascending coefficients; coeffs[i] multiplies x^i.

    Canonical form has no trailing zeros, so the zero polynomial has an empty
    coefficient array and degree -inf.
    """

    __slots__ = ("F", "coeffs")

    def __init__(self, F: FieldTower, coeffs=()):
        c = np.array(coeffs, dtype=np.int64).reshape(-1)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self.F = F
        self.coeffs = c

    @classmethod
    def zero(cls, F):
        return cls(F)

    @classmethod
    def one(cls, F):
        return cls(F, [1])

    @classmethod
    def x_power(cls, F, i: int, c: int = 1):
        coeffs = np.zeros(i + 1, dtype=np.int64)
        coeffs[i] = c
        return cls(F, coeffs)

    @classmethod
    def random(cls, F, rng, below: int):
        """Uniform polynomial of degree < below."""
        return cls(F, F.random(rng, size=max(below, 0)))

    @property
    def deg(self):
        return len(self.coeffs) - 1 if len(self.coeffs) else NEG_INF

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lead(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def coeff(self, i: int) -> int:
        return int(self.coeffs[i]) if 0 <= i < len(self.coeffs) else 0

    def padded(self, length: int) -> np.ndarray:
        if len(self.coeffs) > length:
            raise ValueError(f"degree {self.deg} does not fit in {length} coefficients")
        out = np.zeros(length, dtype=np.int64)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def __add__(self, other: SkewPoly) -> SkewPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.F, self.F.add(self.padded(n), other.padded(n)))

    def __sub__(self, other: SkewPoly) -> SkewPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.F, self.F.sub(self.padded(n), other.padded(n)))

    def __neg__(self) -> SkewPoly:
        return SkewPoly(self.F, self.F.neg(self.coeffs))

    def __mul__(self, other) -> SkewPoly:
        if isinstance(other, SkewPoly):
            return skew_mul(self, other)
        return NotImplemented

    def scale(self, c: int) -> SkewPoly:
        """Left multiplication by the constant c."""
        return SkewPoly(self.F, self.F.mul(c, self.coeffs))

    def monic(self) -> SkewPoly:
        return self.scale(self.F.inv(self.lead))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.F is other.F and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        if self.is_zero():
            return "SkewPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(f"({self.F.fmt(int(c))}){mono}")
        return "SkewPoly(" + " + ".join(reversed(terms)) + ")"


def _shift_twist(F: FieldTower, coeffs: np.ndarray, i: int) -> np.ndarray:
    """Coefficients of x^i * g given those of g."""
    out = np.zeros(len(coeffs) + i, dtype=np.int64)
    out[i:] = F.theta(coeffs, i)
    return out


def skew_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """Schoolbook product under x a = theta(a) x."""
    F = f.F
    if f.is_zero() or g.is_zero():
        return SkewPoly(F)
    out = np.zeros(len(f.coeffs) + len(g.coeffs) - 1, dtype=np.int64)
    ng = len(g.coeffs)
    for i, fi in enumerate(f.coeffs):
        if fi:
            out[i : i + ng] = F.add(out[i : i + ng], F.mul(int(fi), F.theta(g.coeffs, i)))
    return SkewPoly(F, out)


def right_divide(f: SkewPoly, g: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """(quo, rem) with f = quo * g + rem and deg rem < deg g."""
    if g.is_zero():
        raise ZeroDivisionError("right division by the zero skew polynomial")
    F = f.F
    dg = len(g.coeffs) - 1
    rem = f.coeffs.copy()
    if len(rem) - 1 < dg:
        return SkewPoly(F), f
    quo = np.zeros(len(rem) - dg, dtype=np.int64)
    for k in range(len(rem) - 1 - dg, -1, -1):
        top = rem[k + dg]
        if top == 0:
            continue
        # (c x^k) g has leading coefficient c theta^k(g_lead)
        c = F.div(int(top), F.theta(g.lead, k))
        quo[k] = c
        rem[k : k + dg + 1] = F.sub(rem[k : k + dg + 1], F.mul(c, F.theta(g.coeffs, k)))
    return SkewPoly(F, quo), SkewPoly(F, rem[:dg])


def left_divide(f: SkewPoly, g: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """(quo, rem) with f = g * quo + rem and deg rem < deg g."""
    if g.is_zero():
        raise ZeroDivisionError("left division by the zero skew polynomial")
    F = f.F
    dg = len(g.coeffs) - 1
    rem = f.coeffs.copy()
    if len(rem) - 1 < dg:
        return SkewPoly(F), f
    quo = np.zeros(len(rem) - dg, dtype=np.int64)
    # g (c x^k) = sum_i g_i theta^i(c) x^(i+k); the leading term is g_lead theta^dg(c)
    lead_inv = F.inv(g.lead)
    for k in range(len(rem) - 1 - dg, -1, -1):
        top = rem[k + dg]
        if top == 0:
            continue
        c = F.theta(F.mul(top, lead_inv), -dg)
        quo[k] = c
        twisted = F.mul(g.coeffs, _theta_powers(F, c, dg + 1))
        rem[k : k + dg + 1] = F.sub(rem[k : k + dg + 1], twisted)
    return SkewPoly(F, quo), SkewPoly(F, rem[:dg])


def _theta_powers(F: FieldTower, c: int, count: int) -> np.ndarray:
    return np.array([F.theta(c, i) for i in range(count)], dtype=np.int64)


def mod_r(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    return right_divide(f, g)[1]


def op_power(F: FieldTower, a, b, i: int):
    """D_a^i(b) = theta^i(b) N_i(a); works elementwise on arrays."""
    if i < 0:
        raise ValueError("operator power must be non-negative")
    return F.mul(F.theta(b, i), F.norm(a, i))


@dataclass(frozen=True)
class EvalParams:
    """Points split into blocks by a length partition, one parameter per block."""

    points: np.ndarray
    partition: tuple[int, ...]
    params: np.ndarray
    _expanded: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1)
        prm = np.asarray(self.params, dtype=np.int64).reshape(-1)
        parts = tuple(int(n) for n in self.partition)
        if any(n <= 0 for n in parts) or not parts:
            raise ValueError("length partition must have positive parts")
        if len(prm) != len(parts):
            raise ValueError(f"{len(parts)} blocks but {len(prm)} evaluation parameters")
        if sum(parts) != len(pts):
            raise ValueError(f"partition sums to {sum(parts)} but there are {len(pts)} points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "params", prm)
        object.__setattr__(self, "partition", parts)
        object.__setattr__(self, "_expanded", np.repeat(prm, parts))

    @property
    def n(self) -> int:
        return len(self.points)

    def blocks(self):
        start = 0
        for size, a in zip(self.partition, self.params):
            yield self.points[start : start + size], int(a)
            start += size

    def with_points(self, points) -> EvalParams:
        return EvalParams(points, self.partition, self.params)


def _operator_rows(F: FieldTower, ep: EvalParams, d: int) -> np.ndarray:
    """Row i holds D_{a}^i(b) for every point b with its block parameter a."""
    out = np.zeros((d, ep.n), dtype=np.int64)
    cur = ep.points
    for i in range(d):
        out[i] = cur
        if i + 1 < d:
            cur = F.mul(F.theta(cur), ep._expanded)
    return out


def op_eval(f: SkewPoly, ep: EvalParams) -> np.ndarray:
    """Generalized operator evaluation, blockwise."""
    F = f.F
    acc = np.zeros(ep.n, dtype=np.int64)
    cur = ep.points
    for i, c in enumerate(f.coeffs):
        if c:
            acc = F.add(acc, F.mul(int(c), cur))
        if i + 1 < len(f.coeffs):
            cur = F.mul(F.theta(cur), ep._expanded)
    return acc


def moore_matrix(F: FieldTower, d: int, ep: EvalParams) -> np.ndarray:
    """d x n generalized Moore matrix of the points of ep."""
    if d < 1:
        raise ValueError("Moore matrix needs at least one row")
    return _operator_rows(F, ep, d)


def min_poly(F: FieldTower, ep: EvalParams) -> SkewPoly:
    """Monic minimal skew polynomial vanishing on every block (iterative lclm)."""
    M = SkewPoly.one(F)
    for b_block, a in ep.blocks():
        single = EvalParams(np.zeros(1, dtype=np.int64), (1,), [a])
        for b in b_block:
            if b == 0:
                continue
            v = int(op_eval(M, single.with_points([int(b)]))[0])
            if v == 0:
                continue
            c = F.div(F.mul(F.theta(v), a), v)
            M = skew_mul(SkewPoly(F, [F.neg(c), 1]), M)
    return M


def interp_poly(F: FieldTower, ep: EvalParams, values) -> SkewPoly:
    """Unique f with deg f < n and op_eval(f, ep) = values."""
    values = np.asarray(values, dtype=np.int64).reshape(-1)
    if len(values) != ep.n:
        raise ValueError("need one value per point")
    A = moore_matrix(F, ep.n, ep).T
    try:
        coeffs = linalg.solve(F, A, values)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "interpolation points must be F_q-independent per block with "
            "parameters in distinct nontrivial conjugacy classes"
        ) from exc
    return SkewPoly(F, coeffs)
