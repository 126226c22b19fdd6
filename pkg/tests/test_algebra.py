import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmonomial.algebra import (
    MAX_ALGEBRA_DIM, SMALLEST_IRREDUCIBLE, AlgElem, FieldCtx, GroupAlgebraRing, alg_mul,
    alg_mul_baseline, alg_span_product, alg_span_product_closed, gf2_rank, is_irreducible,
    make_field, span,
)
from qmonomial.errors import CapError, ParameterError


# -- independent references ---------------------------------------------------


def ref_field_mul(a: int, b: int, d: int, modulus: int) -> int:
    """Carry-less product followed by long division, written out plainly."""
    prod = 0
    for i in range(d):
        if (b >> i) & 1:
            prod ^= a << i
    for bit in range(2 * d - 2, d - 1, -1):
        if (prod >> bit) & 1:
            prod ^= modulus << (bit - d)
    return prod


def ref_alg_mul(u: AlgElem, w: AlgElem) -> list[int]:
    f = u.field
    out = [0] * (1 << u.k)
    for a in range(1 << u.k):
        for b in range(1 << u.k):
            out[a ^ b] ^= ref_field_mul(int(u.coeffs[a]), int(w.coeffs[b]), f.d, f.modulus)
    return out


def brute_independent(vs) -> bool:
    sums = set()
    for r in range(len(vs) + 1):
        for sub in itertools.combinations(vs, r):
            acc = 0
            for v in sub:
                acc ^= v
            sums.add(acc)
    return len(sums) == 2 ** len(vs)


def brute_span(vs) -> set[int]:
    out = {0}
    for v in vs:
        out |= {x ^ v for x in out}
    return out


def random_elem(rng: random.Random, field: FieldCtx, k: int, density: float = 1.0) -> AlgElem:
    return AlgElem(field, k, [rng.randrange(field.order) if rng.random() < density else 0
                              for _ in range(1 << k)])


# -- field --------------------------------------------------------------------


def test_tabulated_moduli_are_irreducible_and_smallest():
    for d, m in SMALLEST_IRREDUCIBLE.items():
        assert m.bit_length() - 1 == d
        assert is_irreducible(m)
        # d=1 uses x+1 rather than x; both give GF(2)
        if 2 <= d <= 12:
            assert not any(is_irreducible(c) for c in range(1 << d, m))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_field_axioms_exhaustive(d):
    f = make_field(d)
    els = range(f.order)
    for a in els:
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in els:
            ab = f.mul(a, b)
            assert ab == f.mul(b, a) == ref_field_mul(a, b, d, f.modulus)
            for c in els:
                assert f.mul(ab, c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        make_field(8).inv(0)


def test_aes_field_known_product():
    # GF(2^8) with x^8+x^4+x^3+x+1: 0x53 * 0xCA = 1
    f = make_field(8)
    assert f.modulus == 0x11B
    assert f.mul(0x53, 0xCA) == 1


@pytest.mark.parametrize("d", [5, 13, 16, 17, 24, 32])
def test_vector_mul_matches_scalar(d):
    f = make_field(d)
    rng = np.random.default_rng(d)
    a = rng.integers(0, f.order, 300)
    b = rng.integers(0, f.order, 300)
    a[:5] = 0
    got = f.mul_vec(a, b)
    assert got.tolist() == [ref_field_mul(int(x), int(y), d, f.modulus) for x, y in zip(a, b)]


def test_bad_field_parameters():
    with pytest.raises(ParameterError):
        make_field(0)
    with pytest.raises(ParameterError):
        make_field(33)
    with pytest.raises(ParameterError):
        FieldCtx(4, 0b10101)  # (x^2+x+1)^2
    with pytest.raises(ParameterError):
        make_field(8).element(256)


# -- group algebra -------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(d=st.sampled_from([1, 3, 8, 20]), k=st.integers(0, 5), seed=st.integers(0, 2**32 - 1),
       density=st.sampled_from([0.1, 0.5, 1.0]))
def test_alg_mul_matches_double_loop(d, k, seed, density):
    rng = random.Random(seed)
    f = make_field(d)
    u, w = random_elem(rng, f, k, density), random_elem(rng, f, k, density)
    expected = ref_alg_mul(u, w)
    assert alg_mul(u, w).coeffs.tolist() == expected
    assert alg_mul_baseline(u, w).coeffs.tolist() == expected


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_ring_laws(k, seed):
    rng = random.Random(seed)
    f = make_field(4)
    a, b, c = (random_elem(rng, f, k, 0.6) for _ in range(3))
    one = AlgElem.identity(f, k)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * one == a
    assert (a + a).is_zero()


@pytest.mark.parametrize("k", range(0, 9))
def test_shifted_basis_squares_to_zero(k):
    f = make_field(5)
    for v in range(1 << k):
        y = AlgElem.shifted_basis(f, k, v)
        assert (y * y).is_zero()


@pytest.mark.parametrize("k", [1, 3, 5, 8])
def test_span_product_against_brute_force(k):
    rng = random.Random(100 + k)
    f = make_field(4)
    for _ in range(60):
        size = rng.randint(1, k + 1)
        vs = [rng.randrange(1 << k) for _ in range(size)]
        got = alg_span_product(vs, f, k)
        assert got == alg_span_product_closed(vs, f, k)
        if brute_independent(vs):
            assert set(got.support()) == brute_span(vs)
            assert all(int(got.coeffs[i]) == 1 for i in got.support())
        else:
            assert got.is_zero()
        assert (gf2_rank(vs) == len(vs)) == brute_independent(vs)
        assert span(vs) == brute_span(vs)


def test_render_and_hash():
    f = make_field(8)
    x = AlgElem(f, 2, [0, 0x1F, 0, 3])
    assert x.render() == "[1:1f 3:3]"
    assert AlgElem.zero(f, 2).render() == "[]"
    assert hash(x) == hash(AlgElem(f, 2, [0, 0x1F, 0, 3]))
    assert x.nnz() == 2


def test_algebra_errors():
    f = make_field(3)
    with pytest.raises(CapError):
        AlgElem.zero(f, MAX_ALGEBRA_DIM + 1)
    with pytest.raises(ParameterError):
        AlgElem(f, 2, [0, 1, 2])
    with pytest.raises(ParameterError):
        AlgElem(f, 1, [0, 8])
    with pytest.raises(ParameterError):
        AlgElem.basis(f, 2, 4)
    with pytest.raises(ParameterError):
        alg_mul(AlgElem.zero(f, 2), AlgElem.zero(f, 3))
    with pytest.raises(ParameterError):
        alg_mul(AlgElem.zero(f, 2), AlgElem.zero(make_field(4), 2))


def test_coefficients_are_read_only():
    x = AlgElem.identity(make_field(3), 2)
    with pytest.raises(ValueError):
        x.coeffs[0] = 5


def test_group_algebra_ring():
    ring = GroupAlgebraRing(make_field(3), 2)
    assert ring.is_zero(ring.zero)
    assert ring.mul(ring.one, ring.one) == ring.one
