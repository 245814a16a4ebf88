from __future__ import annotations

import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from spinor10.fields import GF, QQ
from spinor10.groebner import (
    EmptinessCertificate,
    F2LeadingIdeal,
    NonEmpty,
    Polynomial,
    buchberger,
    hilbert_dimension_degree,
    hilbert_function,
    normal_form,
    polynomials_from_quadrics,
    projective_emptiness_certificate,
)
from spinor10.quadrics import QuadricSystem, monomial_pairs


def poly(n, terms, F=QQ):
    return Polynomial.from_dict(n, {tuple(e): F(c) for e, c in terms.items()}, F)


def random_quadrics(rng, n, m, F):
    out = []
    for _ in range(m):
        terms = {}
        for a, b in monomial_pairs(n):
            e = [0] * n
            e[a] += 1
            e[b] += 1
            terms[tuple(e)] = rng.randrange(F.p) if hasattr(F, "p") else rng.randint(-3, 3)
        out.append(poly(n, terms, F))
    return out


def test_rejects_inhomogeneous_input():
    with pytest.raises(ValueError):
        poly(2, {(2, 0): 1, (1, 0): 1})


def test_monomial_ideal_is_its_own_basis():
    gb = buchberger([poly(2, {(2, 0): 1}), poly(2, {(1, 1): 1})])
    assert sorted(gb.leading_monomials) == [(1, 1), (2, 0)]
    assert hilbert_dimension_degree(gb) == (0, 1)
    assert hilbert_function(gb, 4) == [1, 2, 1, 1, 1]


def test_conic_over_f7_matches_exhaustive_search():
    F = GF(7)
    f = poly(3, {(2, 0, 0): 1, (0, 1, 1): -1}, F)
    gb = buchberger([f])
    assert hilbert_dimension_degree(gb) == (1, 2)
    pts = 0
    for x in itertools.product(range(7), repeat=3):
        first = next((c for c in x if c), None)
        if first == 1 and f.evaluate([F(c) for c in x]) == 0:
            pts += 1
    assert pts == 8


def test_emptiness_certificate_and_nonempty():
    cert = projective_emptiness_certificate(buchberger([poly(2, {(1, 0): 1}), poly(2, {(0, 1): 1})]))
    assert isinstance(cert, EmptinessCertificate) and cert.exponents == (1, 1)
    res = projective_emptiness_certificate(buchberger([poly(2, {(1, 1): 1})]))
    assert isinstance(res, NonEmpty) and not res


def test_hilbert_edge_cases():
    assert hilbert_dimension_degree([(0, 0, 0)], 3) == (-1, 0)
    assert hilbert_dimension_degree([], 6) == (5, 1)


def test_unit_ideal_from_a_complete_intersection_of_everything():
    gens = [poly(3, {tuple(2 if i == j else 0 for i in range(3)): 1}) for j in range(3)]
    gb = buchberger(gens)
    assert hilbert_dimension_degree(gb) == (-1, 0)
    assert isinstance(projective_emptiness_certificate(gb), EmptinessCertificate)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_reduced_basis_is_independent_of_strategy(seed, m):
    F = GF(7)
    gens = random_quadrics(random.Random(seed), 4, m, F)
    ref = buchberger(gens)
    for kwargs in ({"criteria": False}, {"selection": "fifo"}, {"selection": "random", "seed": seed}):
        assert buchberger(gens, **kwargs).generators == ref.generators


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_generators_reduce_to_zero(seed):
    F = GF(11)
    gens = random_quadrics(random.Random(seed), 4, 3, F)
    gb = buchberger(gens)
    for g in gens:
        assert normal_form(g, gb).is_zero()


def _to_sympy(p, xs):
    return sum(sympy.Rational(str(c)) * sympy.Mul(*[x**k for x, k in zip(xs, e)]) for e, c in p.terms)


@pytest.mark.parametrize("seed", range(4))
def test_agrees_with_sympy_over_q(seed):
    xs = sympy.symbols("x0:4")
    gens = random_quadrics(random.Random(seed), 4, 3, QQ)
    ours = buchberger(gens)
    theirs = sympy.groebner([_to_sympy(g, xs) for g in gens], *xs, order="grevlex", domain="QQ")
    for g in ours.generators:
        assert theirs.contains(_to_sympy(g, xs))
    for t in theirs.exprs:
        p = sympy.Poly(t, *xs)
        back = poly(4, {m: c for m, c in p.terms()})
        assert normal_form(back, ours).is_zero()
    assert len(ours.generators) == len(theirs.exprs)


def test_quadric_conversion():
    sys = QuadricSystem(2, ((1, 2, 3),), QQ)
    (p,) = polynomials_from_quadrics(sys)
    assert p.as_dict() == {(2, 0): 1, (1, 1): 2, (0, 2): 3}


@pytest.mark.parametrize("seed", range(6))
def test_f2_leading_bound_dominates_exact_dimension(seed):
    rng = random.Random(seed)
    m = rng.choice([4, 5, 6])
    rows = tuple(tuple(rng.randrange(2) for _ in range(21)) for _ in range(m))
    sys = QuadricSystem(6, rows, QQ)
    bound, _, _ = F2LeadingIdeal(6).dimension_bound(sys)
    gb = buchberger(polynomials_from_quadrics(sys.reduce(GF(2))), GF(2))
    assert bound >= hilbert_dimension_degree(gb)[0]


def test_vanishing_system_keeps_its_ring():
    sys = QuadricSystem(3, ((0,) * 6, (0,) * 6), QQ)
    gb = buchberger(polynomials_from_quadrics(sys))
    assert gb.nvars == 3 and hilbert_dimension_degree(gb) == (2, 1)
    assert isinstance(projective_emptiness_certificate(gb), NonEmpty)
