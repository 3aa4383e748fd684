"""Finite field tower F_p <= F_q <= F_{q^m} with a Frobenius-type automorphism.

Elements of F_{q^m} are plain integers holding their coordinate vector in
the polynomial basis 1, z, ..., z^{m-1} of the top modulus:

    a = c_0 + c_1 q + ... + c_{m-1} q^{m-1},   c_i in F_q = {0, ..., q-1}

and every c_i is itself the base-p encoding of an element of F_p[w]/(g).
With this layout F_q sits inside F_{q^m} as the integers 0..q-1, so matrices
over F_q are handled by the same routines as matrices over F_{q^m}.

Arithmetic is table driven (exp/log plus Zech logarithms), vectorised with
numpy, so every operation accepts scalars or integer arrays.
"""

from __future__ import annotations

import functools
import math

import numpy as np
from sympy import factorint, isprime

NEG_INF = float("-inf")

MAX_ORDER = 1 << 20


class FieldError(ValueError):
    pass


# -- polynomial helpers over F_q, used only while building a tower ----------


class _SmallField:
    """F_q given by explicit add/mul tables (q is small)."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] | None):
        self.p, self.e, self.q = p, e, p**e
        q = self.q
        digits = np.array([[(x // p**i) % p for i in range(e)] for x in range(q)])
        weights = p ** np.arange(e)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        if e == 1:
            xs = np.arange(q)
            self.mul = (xs[:, None] * xs[None, :]) % p
        else:
            self.mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    prod = _polymulmod_p(digits[a], digits[b], modulus, p)
                    self.mul[a, b] = int(np.dot(prod, weights))
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.nonzero(self.mul[a] == 1)[0][0])


def _polymulmod_p(a, b, modulus, p):
    e = len(modulus) - 1
    res = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            res[i + j] = (res[i + j] + int(ai) * int(bj)) % p
    for top in range(len(res) - 1, e - 1, -1):
        c = res[top]
        if c:
            for i in range(e + 1):
                res[top - e + i] = (res[top - e + i] - c * modulus[i]) % p
    return res[:e]


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], F: _SmallField) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = F.inv[f[-1]]
    while len(a) - 1 >= df:
        c = F.mul[a[-1], inv_lead]
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = F.add[a[shift + i], F.neg[F.mul[c, fi]]]
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], F: _SmallField) -> list[int]:
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = F.add[res[i + j], F.mul[ai, bj]]
    return _pmod(res, f, F)


def _ppowmod(a: list[int], n: int, f: list[int], F: _SmallField) -> list[int]:
    result = [1]
    base = _pmod(a, f, F)
    while n:
        if n & 1:
            result = _pmulmod(result, base, f, F)
        base = _pmulmod(base, base, f, F)
        n >>= 1
    return result


def _pgcd(a: list[int], b: list[int], F: _SmallField) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, F)
    return a


def _psub(a: list[int], b: list[int], F: _SmallField) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([F.add[x, F.neg[y]] for x, y in zip(a, b)])


def _is_irreducible(f: list[int], F: _SmallField) -> bool:
    """Rabin's test for a monic polynomial f of degree m over F_q."""
    m = len(f) - 1
    if m == 1:
        return True
    z = [0, 1]
    if _psub(_ppowmod(z, F.q**m, f, F), z, F):
        return False
    for r in factorint(m):
        h = _psub(_ppowmod(z, F.q ** (m // r), f, F), z, F)
        if len(_pgcd(f, h, F)) != 1:
            return False
    return True


def _first_irreducible(m: int, F: _SmallField) -> tuple[int, ...]:
    # enumerate lower coefficients by their integer encoding sum c_i q^i
    for code in range(F.q**m):
        low = [(code // F.q**i) % F.q for i in range(m)]
        if m > 1 and low[0] == 0:
            continue
        f = low + [1]
        if _is_irreducible(f, F):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{F.q}")


# -- the tower ---------------------------------------------------------------


class FieldTower:
    """The chain F_p <= F_q <= F_{q^m} together with theta: a -> a^(q^r).

    Build instances through :func:`make_tower`; they are immutable and safe to
    share. All arithmetic methods accept ints or integer numpy arrays.
    """

    def __init__(self, p: int, e: int, m: int, r: int):
        if not isprime(p):
            raise FieldError("p must be prime")
        if e < 1 or m < 1:
            raise FieldError("extension degrees must be positive")
        if math.gcd(r, m) != 1:
            raise FieldError(f"gcd(r, m) must be 1, got r={r}, m={m}")
        q = p**e
        if q**m > MAX_ORDER:
            raise FieldError(f"field of order {q}^{m} is too large for table arithmetic")
        self.p, self.e, self.m, self.r = p, e, m, r % m if m > 1 else r
        self.q = q
        self.order = q**m
        self.N = self.order - 1

        if e == 1:
            self.base_modulus = None
            Fq = _SmallField(p, 1, None)
        else:
            Fp = _SmallField(p, 1, None)
            self.base_modulus = _first_irreducible(e, Fp)
            Fq = _SmallField(p, e, self.base_modulus)
        self._Fq = Fq
        self.top_modulus = _first_irreducible(m, Fq) if m > 1 else (0, 1)
        self.primitive = self._find_primitive()
        self._build_tables()
        self._frob_cache: dict[int, np.ndarray] = {}

    # construction

    def _poly_of(self, a: int) -> list[int]:
        return _trim([(a // self.q**i) % self.q for i in range(self.m)])

    def _int_of(self, poly) -> int:
        return sum(int(c) * self.q**i for i, c in enumerate(poly))

    def _find_primitive(self) -> int:
        f = list(self.top_modulus)
        if self.order == 2:
            return 1
        exps = [self.N // ell for ell in factorint(self.N)]
        for a in range(2, self.order):
            g = self._poly_of(a)
            if all(_ppowmod(g, x, f, self._Fq) != [1] for x in exps):
                return a
        raise FieldError("no primitive element found")

    def _build_tables(self) -> None:
        N, q, m, Fq = self.N, self.q, self.m, self._Fq
        f = list(self.top_modulus)
        g = self._poly_of(self.primitive)
        exp = np.zeros(2 * N + 1, dtype=np.int64)
        cur = [1]
        for i in range(N):
            exp[i] = self._int_of(cur)
            cur = _pmulmod(cur, g, f, Fq)
        exp[N : 2 * N] = exp[:N]
        exp[2 * N] = exp[0]
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:N]] = np.arange(N)
        if len(np.unique(exp[:N])) != N:
            raise FieldError("primitive element does not generate the field")

        allx = np.arange(self.order, dtype=np.int64)
        digits = (allx[:, None] // q ** np.arange(m)) % q
        self._weights = q ** np.arange(m, dtype=np.int64)
        self.neg_table = Fq.neg[digits] @ self._weights

        # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
        powers = exp[:N]
        c0 = powers % q
        one_plus = powers - c0 + Fq.add[c0, 1]
        zech = np.where(one_plus == 0, -1, log[one_plus])
        self._exp, self._log, self._zech = exp, log, zech

    # basic arithmetic

    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        if self.p == 2:
            return self._out(np.bitwise_xor(a, b))
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % self.N] if self.N else np.zeros_like(a)
        s = np.where(z < 0, 0, self._exp[la + np.maximum(z, 0)])
        return self._out(np.where(a == 0, b, np.where(b == 0, a, s)))

    def neg(self, a):
        return self._out(self.neg_table[a])

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return self._out(np.where((a == 0) | (b == 0), 0, out))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_{q^m}")
        return self._out(self._exp[(self.N - self._log[a]) % self.N])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if n < 0:
            a, n = np.asarray(self.inv(a)), -n
        out = self._exp[(self._log[a] * n) % self.N] if self.N else np.ones_like(a)
        return self._out(np.where(a == 0, 1 if n == 0 else 0, out))

    def log(self, a):
        if np.any(np.asarray(a) == 0):
            raise ValueError("log of zero")
        return self._out(self._log[a])

    def exp(self, i):
        return self._out(self._exp[np.asarray(i) % self.N])

    # automorphism

    def _frob_table(self, i: int) -> np.ndarray:
        tab = self._frob_cache.get(i)
        if tab is None:
            power = pow(self.q, self.r * i, self.N)
            tab = self._exp[(self._log * power) % self.N]
            tab[0] = 0
            self._frob_cache[i] = tab
        return tab

    def theta(self, a, i: int = 1):
        """theta^i(a) = a^(q^(r i)); negative i gives the inverse automorphism."""
        i %= self.m
        if i == 0:
            return self._out(np.asarray(a, dtype=np.int64))
        return self._out(self._frob_table(i)[a])

    def norm(self, a, i: int):
        """Truncated norm N_i(a) = a theta(a) ... theta^(i-1)(a)."""
        out = 1
        for k in range(i):
            out = self.mul(out, self.theta(a, k))
        return out

    # coordinates and sampling

    def coords(self, a) -> np.ndarray:
        """F_q coordinates of a in the polynomial basis (trailing axis of length m)."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._weights) % self.q

    def from_coords(self, c) -> int | np.ndarray:
        return self._out(np.asarray(c, dtype=np.int64) @ self._weights)

    def basis(self) -> list[int]:
        return [self.q**i for i in range(self.m)]

    def random(self, rng: np.random.Generator, size=None, nonzero: bool = False):
        lo = 1 if nonzero else 0
        return self._out(rng.integers(lo, self.order, size=size, dtype=np.int64))

    def random_base(self, rng: np.random.Generator, size=None):
        return self._out(rng.integers(0, self.q, size=size, dtype=np.int64))

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def is_base(self, a) -> bool:
        return bool(np.all((np.asarray(a) >= 0) & (np.asarray(a) < self.q)))

    def fmt(self, a: int) -> str:
        terms = []
        for i, c in enumerate(self.coords(a)):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            coef = "" if (c == 1 and i > 0) else str(int(c))
            terms.append(f"{coef}{mono}")
        return " + ".join(reversed(terms)) or "0"

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, e={self.e}, m={self.m}, r={self.r})"

    def params(self) -> dict:
        return {"p": self.p, "e": self.e, "m": self.m, "r": self.r}


@functools.lru_cache(maxsize=None)
def make_tower(p: int, e: int = 1, m: int = 1, r: int = 1) -> FieldTower:
    """Deterministic tower: smallest irreducible moduli and smallest primitive element."""
    return FieldTower(p, e, m, r)


def conjugacy_representatives(tower: FieldTower, ell: int) -> np.ndarray:
    """xi_i = primitive^(i-1); for zero derivation these lie in distinct nontrivial classes."""
    if ell < 1:
        raise FieldError("need at least one block")
    if ell > tower.q - 1:
        raise FieldError(
            f"not enough nontrivial conjugacy classes: {ell} requested, q - 1 = {tower.q - 1}"
        )
    return np.array([tower.exp(i) for i in range(ell)], dtype=np.int64)
