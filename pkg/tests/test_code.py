import itertools

import numpy as np
import pytest

from hilrs import linalg
from hilrs.channel import interleaved_weight, sum_rank_weight
from hilrs.code import CodeError, build_hilrs, build_lrs, parity_check
from hilrs.ff import make_tower
from hilrs.skew import SkewPoly, min_poly, op_eval


def test_reference_shape(F3_8):
    code = build_hilrs(F3_8, (8, 8), 4, 3)
    assert (code.n, code.k, code.s, code.ell) == (16, 4, 3, 2)
    assert all(G.deg == 16 and G.lead == 1 for G in code.G)
    msg = tuple(SkewPoly.zero(F3_8) for _ in range(3))
    c = code.encode(msg)
    assert c.shape == (48,) and not c.any()


def test_parameter_errors(F9, F16):
    with pytest.raises(CodeError):
        build_lrs(F16, (5,), 2)  # n_i > m
    with pytest.raises(CodeError):
        build_lrs(F9, (1, 1, 1), 1)  # ell = q
    with pytest.raises(CodeError):
        build_lrs(F16, (4,), 4)  # k = n
    with pytest.raises(CodeError):
        build_lrs(F16, (4,), 0)
    with pytest.raises(CodeError):
        build_lrs(F16, (2, 0), 1)
    with pytest.raises(CodeError):
        build_lrs(F16, (2,), 1, np.array([3, 3]))  # dependent locators
    with pytest.raises(CodeError):
        build_hilrs(F16, (4,), 1, 0)


def test_generator_and_encoding_examples(F16, rng):
    code = build_lrs(F16, (4,), 1)
    assert np.array_equal(code.generator_matrix(), code.locators[None, :])
    assert not code.encode(SkewPoly.zero(F16)).any()
    c = int(F16.random(rng, nonzero=True))
    assert np.array_equal(code.encode(SkewPoly(F16, [c])), F16.mul(c, code.locators))
    with pytest.raises(CodeError):
        code.encode(SkewPoly.x_power(F16, 1))


@pytest.mark.parametrize("spec,parts,k", [((3, 1, 8), (8, 8), 4), ((2, 2, 2), (2, 2, 1), 2), ((3, 1, 2), (2, 1), 1)])
def test_encoding_is_message_times_generator(spec, parts, k, rng):
    F = make_tower(*spec)
    for source in ("default", rng):
        code = build_lrs(F, parts, k, source)
        Gm = code.generator_matrix()
        for _ in range(10):
            f = SkewPoly.random(F, rng, k)
            assert np.array_equal(code.encode(f), linalg.vecmat(F, f.padded(k), Gm))


def test_parity_check(F3_8, rng):
    code = build_lrs(F3_8, (8, 8), 4)
    H = parity_check(code, code.n - 1)
    assert H.shape == (1, 16)
    assert not linalg.matmul(F3_8, code.generator_matrix(), H.T).any()
    for dim in (0, 4, 9):
        H = parity_check(code, dim)
        assert H.shape == (16 - dim, 16) and linalg.rank(F3_8, H) == 16 - dim
        if dim:
            from hilrs.skew import moore_matrix

            assert not linalg.matmul(F3_8, moore_matrix(F3_8, dim, code.eval_params), H.T).any()


def test_min_polys_annihilate_locators(F3_8, rng):
    code = build_hilrs(F3_8, (8, 8), 4, 3, rng)
    for comp, G in zip(code.components, code.G):
        assert not op_eval(G, comp.eval_params).any()
        assert G == min_poly(F3_8, comp.eval_params)


def test_components_distinct_by_default(F3_8):
    code = build_hilrs(F3_8, (8, 8), 4, 3)
    locs = [tuple(c.locators) for c in code.components]
    assert len(set(locs)) == 3


def _all_messages(F, k, s):
    polys = [SkewPoly(F, c) for c in itertools.product(range(F.order), repeat=k)]
    return itertools.product(polys, repeat=s)


@pytest.mark.parametrize(
    "spec,parts,k,s",
    [
        ((2, 1, 4), (4,), 1, 1),
        ((2, 1, 4), (4,), 2, 1),
        ((3, 1, 2), (2, 2), 2, 1),
        ((3, 1, 2), (1, 1), 1, 1),
        ((2, 1, 4), (4,), 1, 2),
        ((3, 1, 2), (2, 1), 1, 2),
    ],
)
def test_minimum_distance_exhaustive(spec, parts, k, s):
    F = make_tower(*spec)
    code = build_hilrs(F, parts, k, s)
    n = sum(parts)
    weights = set()
    for msg in _all_messages(F, k, s):
        c = code.encode(msg)
        w = interleaved_weight(F, c, s, parts)
        assert (w == 0) == (not c.any())
        if c.any():
            weights.add(w)
    # MSRD, and interleaving does not raise the distance
    assert min(weights) == n - k + 1


def test_serialize_and_fingerprint(F3_8, rng):
    a = build_hilrs(F3_8, (8, 8), 4, 3)
    b = build_hilrs(F3_8, (8, 8), 4, 3)
    assert a.serialize() == b.serialize() and a.fingerprint() == b.fingerprint()
    assert "parts=8,8" in a.serialize()
    c = build_hilrs(F3_8, (8, 8), 4, 3, rng)
    assert c.fingerprint() != a.fingerprint()


def test_split_length_check(F16):
    code = build_hilrs(F16, (4,), 1, 2)
    with pytest.raises(CodeError):
        code.split(np.zeros(5, dtype=np.int64))
    assert sum_rank_weight(F16, code.encode(code.random_message(np.random.default_rng(1)))[:4], (4,)) in (0, 4)
