"""Gao-like decoding of HILRS codes with a Gaussian-elimination key-equation solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .channel import interleaved_distance, interleaved_weight
from .code import HilrsCode, parity_check
from .skew import EvalParams, SkewPoly, left_divide, moore_matrix

FAILURE_REASONS = ("nonzero-remainder", "degree-overflow", "zero-sigma", "no-solution")


class KeyEquationFailure(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class KeyEquationSolution:
    p: tuple[SkewPoly, ...]
    sigma: SkewPoly


@dataclass(frozen=True)
class DecodeResult:
    messages: tuple[SkewPoly, ...] | None = None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.messages is not None


def decoding_radius(n: int, k: int, s: int) -> int:
    if not 0 <= k < n or s < 1:
        raise ValueError(f"need 0 <= k < n and s >= 1, got n={n}, k={k}, s={s}")
    return s * (n - k) // (s + 1)


def receive_polys(code: HilrsCode, y) -> tuple[SkewPoly, ...]:
    """R_j: the interpolation polynomial of y_j at the locators of component j."""
    F = code.F
    return tuple(
        SkewPoly(F, linalg.vecmat(F, yj, inv)) for yj, inv in zip(code.split(y), code._interp)
    )


def key_equation_matrix(code: HilrsCode, y, t: int) -> np.ndarray:
    """M^T: rows are the s n evaluation equations, unknowns (sigma f_1, ..., sigma f_s, sigma)."""
    F, s, n, k = code.F, code.s, code.n, code.k
    cols = s * (t + k) + t + 1
    MT = np.zeros((s * n, cols), dtype=np.int64)
    for j, (comp, yj) in enumerate(zip(code.components, code.split(y))):
        rows = slice(j * n, (j + 1) * n)
        MT[rows, j * (t + k) : (j + 1) * (t + k)] = moore_matrix(F, t + k, comp.eval_params).T
        y_ep = comp.eval_params.with_points(yj)
        MT[rows, s * (t + k) :] = F.neg(moore_matrix(F, t + 1, y_ep).T)
    return MT


def solve_key_equation_gauss(code: HilrsCode, y) -> KeyEquationSolution:
    """Kernel of the linear system at the decoding radius; minimal deg sigma, monic."""
    F, s, k = code.F, code.s, code.k
    t = decoding_radius(code.n, k, s)
    MT = key_equation_matrix(code, y, t)
    K = linalg.kernel_basis(F, MT)
    if K.shape[0] == 0:
        raise KeyEquationFailure("no-solution")
    # order sigma coefficients from the top degree down, so the last echelon row
    # with a sigma pivot has the smallest possible degree and a unit leading coefficient
    sig0 = s * (t + k)
    order = list(range(sig0 + t, sig0 - 1, -1)) + list(range(sig0))
    R, piv = linalg.rref(F, K[:, order])
    sigma_rows = [i for i, c in enumerate(piv) if c <= t]
    if not sigma_rows:
        raise KeyEquationFailure("zero-sigma")
    vec = np.zeros(len(order), dtype=np.int64)
    vec[order] = R[sigma_rows[-1]]
    p = tuple(SkewPoly(F, vec[j * (t + k) : (j + 1) * (t + k)]) for j in range(s))
    return KeyEquationSolution(p, SkewPoly(F, vec[sig0:]))


def _solver(name: str) -> Callable[[HilrsCode, np.ndarray], KeyEquationSolution]:
    if name == "gauss":
        return solve_key_equation_gauss
    if name == "mab":
        from .mab import solve_key_equation_mab

        return solve_key_equation_mab
    raise ValueError(f"unknown solver {name!r}")


def gao_decode(code: HilrsCode, y, solver: str = "gauss", strict: bool = False) -> DecodeResult:
    """Interpolate, solve the key equation, left-divide."""
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    if len(y) != code.length:
        raise ValueError(f"received vector must have length {code.length}")
    try:
        sol = _solver(solver)(code, y)
    except KeyEquationFailure as exc:
        return DecodeResult(reason=exc.reason)
    if sol.sigma.is_zero():
        return DecodeResult(reason="zero-sigma")
    msgs = []
    for pj in sol.p:
        fj, rj = left_divide(pj, sol.sigma)
        if not rj.is_zero():
            return DecodeResult(reason="nonzero-remainder")
        if fj.deg >= code.k:
            return DecodeResult(reason="degree-overflow")
        msgs.append(fj)
    msgs = tuple(msgs)
    if strict:
        t_max = decoding_radius(code.n, code.k, code.s)
        c_hat = code.encode(msgs)
        if interleaved_distance(code.F, y, c_hat, code.s, code.partition) > t_max:
            return DecodeResult(reason="no-solution")
    return DecodeResult(messages=msgs)


# -- failure probability -------------------------------------------------------


def kappa(q: int, tol: float = 1e-12) -> float:
    """prod_{i >= 1} 1 / (1 - q^-i), truncated once a factor is within tol of 1."""
    out, i = 1.0, 1
    while True:
        factor = 1.0 / (1.0 - float(q) ** -i)
        if abs(factor - 1.0) < tol:
            return out
        out *= factor
        i += 1


def failure_bound(code: HilrsCode, t: int, mode: str = "paper-3.5") -> float:
    """kappa^(ell+1) q^(-m((s+1)(t_max - t) + 1)) with the rational radius s(n-k)/(s+1)."""
    F, s, n, k = code.F, code.s, code.n, code.k
    if t > decoding_radius(n, k, s):
        raise ValueError(f"t = {t} exceeds the decoding radius")
    if mode == "paper-3.5":
        kap = 3.5
    elif mode == "exact-kappa":
        kap = kappa(F.q)
    else:
        raise ValueError(f"unknown bound mode {mode!r}")
    t_max = Fraction(s * (n - k), s + 1)
    expo = F.m * ((s + 1) * (t_max - t) + 1)
    return kap ** (code.ell + 1) * math.exp(-float(expo) * math.log(F.q))


def failure_bound_exponent(code: HilrsCode, t: int) -> Fraction:
    """Exponent E with bound = kappa^(ell+1) q^-E, kept exact."""
    t_max = Fraction(code.s * (code.n - code.k), code.s + 1)
    return code.F.m * ((code.s + 1) * (t_max - t) + 1)


# -- rank structure of the key-equation system ---------------------------------


def rank_criterion_matrix(code: HilrsCode, e, t: int) -> np.ndarray:
    """Upper part diag(Moore(t+k, beta_j)), lower part (Moore(t+1, e_1) | ... | Moore(t+1, e_s))."""
    F, s, n, k = code.F, code.s, code.n, code.k
    top = np.zeros((s * (t + k), s * n), dtype=np.int64)
    bottom = np.zeros((t + 1, s * n), dtype=np.int64)
    for j, (comp, ej) in enumerate(zip(code.components, code.split(e))):
        top[j * (t + k) : (j + 1) * (t + k), j * n : (j + 1) * n] = moore_matrix(
            F, t + k, comp.eval_params
        )
        bottom[:, j * n : (j + 1) * n] = moore_matrix(F, t + 1, comp.eval_params.with_points(ej))
    return np.vstack([top, bottom])


def lemma1_rank_check(code: HilrsCode, e, t: int, B: np.ndarray | None = None):
    """(rank of the system matrix, rank of B H^T, whether the two conditions agree)."""
    from .channel import decompose

    F, s, n, k = code.F, code.s, code.n, code.k
    if interleaved_weight(F, e, s, code.partition) != t:
        raise ValueError("error weight differs from t")
    if t > n - k:
        raise ValueError(f"t = {t} exceeds n - k = {n - k}")
    rank_M = linalg.rank(F, rank_criterion_matrix(code, e, t))
    if B is None:
        B = decompose(F, e, s, code.partition).B
    if t == 0 or k + t == n:
        rank_BHT = 0  # no rows in B, or H has no rows
    else:
        H_blocks = [parity_check(c, k + t) for c in code.components]
        H = np.zeros((sum(h.shape[0] for h in H_blocks), s * n), dtype=np.int64)
        r = 0
        for j, h in enumerate(H_blocks):
            H[r : r + h.shape[0], j * n : (j + 1) * n] = h
            r += h.shape[0]
        rank_BHT = linalg.rank(F, linalg.matmul(F, B, H.T)) if H.shape[0] else 0
    full = (s + 1) * t + s * k
    return rank_M, rank_BHT, (rank_M == full) == (rank_BHT == t)


def esp(code: HilrsCode, a, t_partition: Sequence[int]) -> SkewPoly:
    """Error-span polynomial: minimal polynomial of the error values with parameters xi."""
    from .skew import min_poly

    F = code.F
    ti = [x for x in t_partition]
    if sum(ti) == 0:
        return SkewPoly.one(F)
    parts = tuple(x for x in ti if x > 0)
    params = [int(xi) for xi, x in zip(code.params, ti) if x > 0]
    return min_poly(F, EvalParams(a, parts, params))
