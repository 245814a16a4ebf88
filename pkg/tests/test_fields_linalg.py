from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinor10 import gf2
from spinor10.fields import GF, QQ, field_from_spec
from spinor10.linalg import (
    DegenerateInput,
    ExactMatrix,
    content_normalize,
    determinant,
    hermite_normal_form,
    kernel,
    matmul,
    rank,
    rational_kernel,
    rref,
    rref_mod_p,
    rref_rank_kernel,
    saturate,
)

FIELDS = [GF(2), GF(3), GF(7), GF(101), GF(2, 2), GF(3, 2), GF(5, 2), GF(7, 2), QQ]


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_field_axioms_on_random_elements(F):
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (F.random_element(rng) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == F.zero
        if not F.is_zero(a):
            assert F.mul(a, F.inv(a)) == F.one


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_quadratic_extension_is_a_field_of_order_p_squared(p):
    F = GF(p, 2)
    elems = list(F.elements())
    assert len(set(elems)) == p * p
    # every nonzero element has order dividing p^2 - 1
    for a in elems:
        if not F.is_zero(a):
            assert F.pow(a, p * p - 1) == F.one


def test_field_specs():
    assert field_from_spec("Q") is QQ
    assert field_from_spec("7") == GF(7)
    assert field_from_spec("3:2") == GF(3, 2)


def test_rref_identity_and_zero():
    red, rk, ker = rref_rank_kernel(ExactMatrix.from_rows(GF(2), [[1, 0], [0, 1]]))
    assert rk == 2 and ker == []
    red, rk, ker = rref_rank_kernel(ExactMatrix.from_rows(QQ, [[0] * 5] * 3))
    assert rk == 0 and len(ker) == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 7), st.sampled_from([2, 3, 5, 0]), st.integers(0, 10**6))
def test_rank_nullity_and_kernel_annihilation(nrows, ncols, p, seed):
    F = QQ if p == 0 else GF(p)
    rng = random.Random(seed)
    rows = [[F(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)]
    red, rk, ker = rref_rank_kernel(ExactMatrix.from_rows(F, rows))
    assert rk + len(ker) == ncols
    for v in ker:
        for r in rows:
            acc = F.zero
            for x, y in zip(r, v):
                acc = F.add(acc, F.mul(x, y))
            assert F.is_zero(acc)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_prime_rref_matches_numpy_rref(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 7, 101])
    rows = [[rng.randrange(p) for _ in range(9)] for _ in range(6)]
    red, piv = rref(rows, GF(p))
    red2, piv2 = rref_mod_p(np.array(rows, dtype=np.int64), p)
    assert list(piv) == list(piv2)
    assert [[int(x) for x in r] for r in red] == [[int(x) for x in r] for r in red2[: len(piv2)]]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=8, max_size=8).map(tuple), st.integers(0, 10**6))
def test_bitpacked_gf2_matches_generic(first, seed):
    rng = random.Random(seed)
    rows = [list(first)] + [[rng.randrange(2) for _ in range(8)] for _ in range(rng.randint(0, 7))]
    assert gf2.rank([gf2.pack(r) for r in rows]) == rank(rows, GF(2))
    ker = gf2.kernel([gf2.pack(r) for r in rows], 8)
    assert len(ker) == len(kernel(rows, 8, GF(2)))
    for v in ker:
        bits = gf2.unpack(v, 8)
        assert all(sum(a * b for a, b in zip(r, bits)) % 2 == 0 for r in rows)
    red, piv = gf2.rref([gf2.pack(r) for r in rows], 8)
    red2, piv2 = rref(rows, GF(2))
    assert piv == list(piv2)
    assert [gf2.unpack(r, 8) for r in red] == [[int(x) for x in r] for r in red2]


def test_content_normalize_examples():
    assert content_normalize([Fraction(1, 2), Fraction(1, 3)]) == (3, 2)
    assert content_normalize([-2, -4, -6]) == (1, 2, 3)
    with pytest.raises(DegenerateInput):
        content_normalize([0, 0])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6).filter(lambda v: any(v)),
    st.fractions(max_denominator=30).filter(lambda c: c != 0),
)
def test_content_normalize_idempotent_and_scale_invariant(v, c):
    n = content_normalize(v)
    assert content_normalize(n) == n
    assert content_normalize([c * x for x in v]) == n


def test_determinant_and_matmul():
    F = QQ
    a = [[F(2), F(1)], [F(1), F(3)]]
    assert determinant(a, F) == 5
    assert matmul(a, [[F(1), F(0)], [F(0), F(1)]], F) == a


def test_hnf_and_saturation_preserve_the_rational_span():
    rows = [[2, 4, 6], [1, 1, 1]]
    sat = saturate(rows)
    assert rank(rows + sat, QQ) == 2
    # saturated lattices stay independent modulo every prime
    for p in (2, 3, 5):
        assert rank([[x % p for x in r] for r in sat], GF(p)) == 2
    assert len(hermite_normal_form(rows)) == 2


def test_rational_kernel_is_exact():
    rows = [[1, 2, 3, 4], [2, 3, 4, 5]]
    ker = rational_kernel(rows, 4)
    assert len(ker) == 2
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)
