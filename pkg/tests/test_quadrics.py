from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from spinor10.clifford import EVEN, ODD, pure_spinor, random_skew
from spinor10.fields import GF, QQ
from spinor10.quadforms import diagonalize, local_profile
from spinor10.quadrics import (
    NotAMukaiSection,
    QuadricSystem,
    SamplingDegenerate,
    canonical_system,
    clifford_quadrics,
    interpolate_quadrics,
    monomial_pairs,
    recover_quadratic_form,
    restrict_to_span,
    spans_equal,
)


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_interpolation_finds_exactly_the_clifford_span(parity):
    sysi = interpolate_quadrics(parity, 200, seed=0)
    assert len(sysi) == 10 and sysi.is_integral
    assert spans_equal(sysi, clifford_quadrics(parity), QQ)


@pytest.mark.parametrize("parity", [EVEN, ODD])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_spans_agree_after_reduction(parity, p):
    a = interpolate_quadrics(parity, 200, seed=1).reduce(GF(p))
    b = canonical_system(parity).reduce(GF(p))
    assert a.span_rank() == b.span_rank() == 10
    assert spans_equal(a, b, GF(p))


def test_canonical_rows_are_primitive():
    from math import gcd

    for q in canonical_system(EVEN).coeffs:
        g = 0
        for c in q:
            g = gcd(g, c)
        assert g == 1


def test_sample_budget_floor():
    with pytest.raises(ValueError):
        interpolate_quadrics(EVEN, 100)


def test_quadrics_vanish_at_fresh_pure_spinors():
    sys = canonical_system(EVEN)
    rng = random.Random(12345)
    for _ in range(500):
        s = pure_spinor(random_skew(rng, QQ))
        assert all(v == 0 for v in sys.evaluate(s.coords))


def test_a_non_pure_vector_is_detected():
    v1 = [0] * 16
    v1[0] = v1[15] = 1
    assert any(v != 0 for v in canonical_system(EVEN).evaluate(v1))


def test_jacobian_matches_polar_matrix():
    sys = canonical_system(EVEN)
    x = list(range(1, 17))
    jac = sys.jacobian(x)
    for i in range(10):
        P = sys.polar_matrix(i)
        assert jac[i] == [sum(P[a][b] * x[b] for b in range(16)) for a in range(16)]


def test_distinguished_relation_is_a_split_tenfold_form():
    rec = recover_quadratic_form(canonical_system(EVEN))
    assert rec.rank() == 10
    prof = local_profile(diagonalize([list(r) for r in rec.matrix]))
    assert prof.disc == 1 and not prof.hasse_minus


@pytest.mark.parametrize("p", [3, 5, 7])
def test_relation_rank_mod_p(p):
    assert recover_quadratic_form(canonical_system(EVEN).reduce(GF(p))).rank() == 10


def test_relation_exists_in_characteristic_two():
    rec = recover_quadratic_form(canonical_system(EVEN).reduce(GF(2)))
    assert rec.matrix is None
    with pytest.raises(ValueError):
        rec.rank()


def test_random_quadrics_are_not_a_section():
    rng = random.Random(0)
    rows = tuple(tuple(rng.randint(-3, 3) for _ in range(136)) for _ in range(10))
    with pytest.raises(NotAMukaiSection) as info:
        recover_quadratic_form(QuadricSystem(16, rows, QQ))
    assert info.value.dimension == 0


def test_json_roundtrip():
    sys = canonical_system(ODD)
    back = QuadricSystem.from_json(sys.to_json())
    assert back.coeffs == sys.coeffs and back.parity == ODD
    bad = sys.to_json()
    bad["quadrics"][0] = bad["quadrics"][0][:-1]
    with pytest.raises(ValueError):
        QuadricSystem.from_json(bad)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=16, max_size=16), min_size=1, max_size=4), st.data())
def test_restriction_commutes_with_evaluation(basis, data):
    sys = canonical_system(EVEN)
    r = restrict_to_span(sys, basis)
    y = data.draw(st.lists(st.integers(-5, 5), min_size=len(basis), max_size=len(basis)))
    x = [sum(y[i] * basis[i][a] for i in range(len(basis))) for a in range(16)]
    assert r.evaluate(y) == sys.evaluate(x)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=16, max_size=16), min_size=2, max_size=3), st.data())
def test_restriction_commutes_with_reduction_mod_5(basis, data):
    F = GF(5)
    a = restrict_to_span(canonical_system(EVEN), basis).reduce(F)
    b = restrict_to_span(canonical_system(EVEN).reduce(F), basis)
    assert a.coeffs == b.coeffs


def test_monomial_order():
    pairs = monomial_pairs(16)
    assert len(pairs) == 136 and pairs[0] == (0, 0) and pairs[1] == (0, 1) and pairs[16] == (1, 1)


def test_degenerate_sampling_is_reported(monkeypatch):
    import spinor10.quadrics as q

    monkeypatch.setattr(q, "_sample_spinor", lambda rng, parity: [1] + [0] * 15)
    with pytest.raises(SamplingDegenerate):
        q.interpolate_quadrics(EVEN, 150)
