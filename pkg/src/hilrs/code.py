"""Linearized Reed-Solomon codes and their horizontal interleaving."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .ff import FieldTower, conjugacy_representatives
from .skew import EvalParams, SkewPoly, min_poly, moore_matrix, op_eval


class CodeError(ValueError):
    pass


def check_partition(partition) -> tuple[int, ...]:
    parts = tuple(int(n) for n in partition)
    if not parts:
        raise CodeError("length partition must have at least one block")
    if any(n <= 0 for n in parts):
        raise CodeError(f"length partition parts must be positive, got {parts}")
    return parts


def default_locators(F: FieldTower, partition, component: int = 0) -> np.ndarray:
    """Block i gets n_i consecutive basis monomials z^u, rotated by the component index."""
    blocks = []
    for ni in partition:
        blocks.extend(F.q ** ((component + u) % F.m) for u in range(ni))
    return np.array(blocks, dtype=np.int64)


def random_locators(F: FieldTower, partition, rng: np.random.Generator) -> np.ndarray:
    """Seeded draw of an F_q-independent set per block (rejection)."""
    out = []
    for ni in partition:
        while True:
            cand = F.random(rng, size=ni)
            if linalg.rank_over_base(F, cand) == ni:
                out.extend(int(c) for c in cand)
                break
    return np.array(out, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class LrsCode:
    F: FieldTower
    partition: tuple[int, ...]
    locators: np.ndarray
    params: np.ndarray
    k: int

    def __post_init__(self):
        parts = check_partition(self.partition)
        object.__setattr__(self, "partition", parts)
        n = sum(parts)
        if not 1 <= self.k < n:
            raise CodeError(f"dimension must satisfy 1 <= k < n, got k={self.k}, n={n}")
        if len(parts) > self.F.q - 1:
            raise CodeError(
                f"{len(parts)} blocks need distinct nontrivial conjugacy classes, "
                f"only q - 1 = {self.F.q - 1} exist"
            )
        if max(parts) > self.F.m:
            raise CodeError(
                f"block length {max(parts)} exceeds m = {self.F.m}; "
                "no F_q-independent locators exist"
            )
        ep = EvalParams(self.locators, parts, self.params)
        for i, (blk, _) in enumerate(ep.blocks()):
            if linalg.rank_over_base(self.F, blk) != len(blk):
                raise CodeError(f"locators of block {i} are not F_q-linearly independent")
        object.__setattr__(self, "locators", ep.points)
        object.__setattr__(self, "params", ep.params)

    @property
    def n(self) -> int:
        return sum(self.partition)

    @property
    def ell(self) -> int:
        return len(self.partition)

    @property
    def eval_params(self) -> EvalParams:
        return EvalParams(self.locators, self.partition, self.params)

    def generator_matrix(self) -> np.ndarray:
        return generator_matrix(self)

    def encode(self, f: SkewPoly) -> np.ndarray:
        return encode_lrs(self, f)


def build_lrs(
    F: FieldTower,
    partition: Sequence[int],
    k: int,
    locator_source="default",
    component: int = 0,
) -> LrsCode:
    """LRS code with conjugacy representatives as parameters.

    ``locator_source`` is ``"default"``, an explicit locator vector, or a numpy
    Generator for seeded random locators.
    """
    parts = check_partition(partition)
    if len(parts) > F.q - 1:
        raise CodeError(
            f"{len(parts)} blocks need distinct nontrivial conjugacy classes, "
            f"only q - 1 = {F.q - 1} exist"
        )
    if max(parts) > F.m:
        raise CodeError(f"block length {max(parts)} exceeds m = {F.m}")
    xi = conjugacy_representatives(F, len(parts))
    if isinstance(locator_source, str):
        if locator_source != "default":
            raise CodeError(f"unknown locator source {locator_source!r}")
        beta = default_locators(F, parts, component)
    elif isinstance(locator_source, np.random.Generator):
        beta = random_locators(F, parts, locator_source)
    else:
        beta = np.asarray(locator_source, dtype=np.int64)
    return LrsCode(F, parts, beta, xi, k)


def generator_matrix(code: LrsCode) -> np.ndarray:
    return moore_matrix(code.F, code.k, code.eval_params)


def encode_lrs(code: LrsCode, f: SkewPoly) -> np.ndarray:
    if f.deg >= code.k:
        raise CodeError(f"message degree {f.deg} must be below k = {code.k}")
    return op_eval(f, code.eval_params)


def parity_check(code: LrsCode, dim: int) -> np.ndarray:
    """(n - dim) x n full-rank H with Moore(dim) H^T = 0."""
    if not 0 <= dim < code.n:
        raise CodeError(f"parity-check dimension must be in [0, n), got {dim}")
    if dim == 0:
        return np.eye(code.n, dtype=np.int64)
    G = moore_matrix(code.F, dim, code.eval_params)
    return linalg.kernel_basis(code.F, G)


@dataclass(frozen=True, eq=False)
class HilrsCode:
    components: tuple[LrsCode, ...]
    G: tuple[SkewPoly, ...] = field(init=False)
    _interp: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise CodeError("interleaving order must be at least 1")
        c0 = comps[0]
        for c in comps[1:]:
            if (
                c.F is not c0.F
                or c.partition != c0.partition
                or c.k != c0.k
                or not np.array_equal(c.params, c0.params)
            ):
                raise CodeError("component codes must share field, partition, xi and k")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "G", tuple(min_poly(c.F, c.eval_params) for c in comps))
        # inverse transposed Moore matrices turn received words into R_j directly
        inv = tuple(
            linalg.inverse(c.F, moore_matrix(c.F, c.n, c.eval_params)) for c in comps
        )
        object.__setattr__(self, "_interp", inv)

    @property
    def F(self) -> FieldTower:
        return self.components[0].F

    @property
    def s(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def k(self) -> int:
        return self.components[0].k

    @property
    def partition(self) -> tuple[int, ...]:
        return self.components[0].partition

    @property
    def ell(self) -> int:
        return len(self.partition)

    @property
    def params(self) -> np.ndarray:
        return self.components[0].params

    @property
    def length(self) -> int:
        return self.s * self.n

    def split(self, y) -> list[np.ndarray]:
        y = np.asarray(y, dtype=np.int64).reshape(-1)
        if len(y) != self.length:
            raise CodeError(f"expected a vector of length {self.length}, got {len(y)}")
        return [y[j * self.n : (j + 1) * self.n] for j in range(self.s)]

    def encode(self, msg: Sequence[SkewPoly]) -> np.ndarray:
        return encode_hilrs(self, msg)

    def random_message(self, rng: np.random.Generator) -> tuple[SkewPoly, ...]:
        return tuple(SkewPoly.random(self.F, rng, self.k) for _ in range(self.s))

    def serialize(self) -> str:
        """Plain-text key=value description of the code parameters."""
        F = self.F
        lines = [
            f"p={F.p}",
            f"e={F.e}",
            f"m={F.m}",
            f"r={F.r}",
            f"parts={','.join(map(str, self.partition))}",
            f"k={self.k}",
            f"s={self.s}",
            f"xi={','.join(map(str, self.params))}",
        ]
        for j, c in enumerate(self.components):
            lines.append(f"beta{j + 1}={','.join(map(str, c.locators))}")
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()[:16]


def build_hilrs(
    F: FieldTower,
    partition: Sequence[int],
    k: int,
    s: int,
    rng: np.random.Generator | None = None,
) -> HilrsCode:
    """s component LRS codes; deterministic locators unless an rng is given."""
    if s < 1:
        raise CodeError("interleaving order must be at least 1")
    comps = tuple(
        build_lrs(F, partition, k, rng if rng is not None else "default", component=j)
        for j in range(s)
    )
    return HilrsCode(comps)


def encode_hilrs(code: HilrsCode, msg: Sequence[SkewPoly]) -> np.ndarray:
    if len(msg) != code.s:
        raise CodeError(f"need {code.s} message polynomials, got {len(msg)}")
    return np.concatenate([encode_lrs(c, f) for c, f in zip(code.components, msg)])
