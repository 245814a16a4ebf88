from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinor10.clifford import (
    EVEN,
    ODD,
    HalfSpinor,
    NotPure,
    SkewMatrix5,
    annihilator_of,
    basis_labels,
    bilinear_form,
    chart_point,
    gamma_apply,
    gamma_matrix,
    pairing_matrix,
    pfaffian4,
    pure_spinor,
    quadratic_form_value,
    random_skew,
    spinor_pairing,
)
from spinor10.fields import GF, QQ
from spinor10.linalg import determinant, rank
from spinor10.quadrics import DEFAULT_TRANSLATOR, canonical_system


def _label(label):
    return "xi_" + (label or "phi")


def _unit(parity, label, F=QQ):
    label = _label(label)
    coords = [F.one if lab == label else F.zero for lab in basis_labels(parity)]
    return HalfSpinor(parity, tuple(coords), F)


def test_basis_orders():
    assert basis_labels(EVEN)[:2] == ("xi_phi", "xi_12") and basis_labels(EVEN)[-1] == "xi_2345"
    assert basis_labels(ODD)[:5] == tuple(_label(str(k)) for k in range(1, 6))
    assert basis_labels(ODD)[-1] == "xi_12345"


def test_wedge_and_contraction_on_the_vacuum():
    vac = _unit(EVEN, "")
    assert not vac.is_zero()
    out = gamma_apply(2, vac)
    assert out.parity == ODD and out.coords == _unit(ODD, "1").coords
    assert gamma_apply(1, vac).is_zero()


@pytest.mark.parametrize("p", [0, 2, 3, 5, 7, 101])
def test_clifford_relations_for_all_generator_pairs(p):
    for j in range(1, 11):
        for k in range(j, 11):
            for parity, other in ((EVEN, ODD), (ODD, EVEN)):
                gj, gk = np.array(gamma_matrix(j, parity)), np.array(gamma_matrix(k, parity))
                hj, hk = np.array(gamma_matrix(j, other)), np.array(gamma_matrix(k, other))
                anti = hj @ gk + hk @ gj
                u = [0] * 10
                v = [0] * 10
                u[j - 1] = 1
                v[k - 1] = 1
                b = bilinear_form(u, v)
                target = b * np.eye(16, dtype=np.int64)
                diff = anti - target
                assert not (diff % p if p else diff).any()


def test_pfaffian_examples():
    assert pfaffian4(SkewMatrix5.zero(), (1, 2, 3, 4)) == 0
    a = SkewMatrix5((1,) + (0,) * 9)
    assert pfaffian4(a, (1, 2, 3, 4)) == 0
    with pytest.raises(ValueError):
        pfaffian4(a, (1, 2, 3))


def test_pfaffian_squared_is_the_skew_determinant_over_f7():
    F = GF(7)
    rng = random.Random(0)
    for _ in range(1000):
        a = random_skew(rng, F)
        rows = sorted(rng.sample(range(1, 6), 4))
        m = [[F(a[i, j]) if i != j else F.zero for j in rows] for i in rows]
        pf = pfaffian4(a, rows, F)
        assert F.mul(pf, pf) == determinant(m, F)


def test_big_cell_base_points():
    s = pure_spinor(SkewMatrix5.zero())
    assert s.coords[0] == 1 and all(c == 0 for c in s.coords[1:])
    s = pure_spinor(SkewMatrix5((1,) + (0,) * 9))
    assert s.coordinate((1, 2)) == 1 and all(s.coords[i] == 0 for i in range(11, 16))


def test_vacuum_annihilator_is_spanned_by_contractions():
    ann = annihilator_of(pure_spinor(SkewMatrix5.zero()))
    assert ann.dim == 5
    for k in range(1, 6):
        e = [0] * 10
        e[2 * k - 2] = 1
        assert ann.contains(e)


def test_non_pure_spinor_has_small_annihilator():
    F = QQ
    coords = [F.zero] * 16
    coords[0] = F.one
    coords[basis_labels(EVEN).index("xi_1234")] = F.one
    s = HalfSpinor(EVEN, tuple(coords), F)
    assert annihilator_of(s).dim < 5
    with pytest.raises(NotPure):
        annihilator_of(s, strict=True)


@pytest.mark.parametrize("p", [5, 0])
def test_pure_spinors_have_isotropic_five_dimensional_annihilators(p):
    F = QQ if p == 0 else GF(p)
    rng = random.Random(p)
    for _ in range(30):
        s = pure_spinor(random_skew(rng, F), field=F)
        ann = annihilator_of(s, strict=True)
        for u in ann.basis:
            assert F.is_zero(quadratic_form_value(u, F))
            for w in ann.basis:
                assert F.is_zero(bilinear_form(u, w, F))


def test_gamma_images_of_pure_spinors_stay_pure():
    F = GF(7)
    rng = random.Random(3)
    checked = 0
    while checked < 100:
        s = pure_spinor(random_skew(rng, F), field=F)
        t = gamma_apply(rng.randrange(1, 11), s)
        if t.is_zero():
            continue
        assert annihilator_of(t).dim == 5
        checked += 1


@pytest.mark.parametrize("p", [0, 2, 3, 7])
def test_pure_spinors_satisfy_the_canonical_quadrics(p):
    F = QQ if p == 0 else GF(p)
    rng = random.Random(11)
    even = canonical_system(EVEN).reduce(F)
    odd = canonical_system(ODD).reduce(F)
    for _ in range(200):
        a = random_skew(rng, F)
        assert all(F.is_zero(v) for v in even.evaluate(pure_spinor(a, field=F).coords))
        t = pure_spinor(a, ODD, DEFAULT_TRANSLATOR, F)
        assert all(F.is_zero(v) for v in odd.evaluate(t.coords))
        c = chart_point(a, rng.randrange(16), EVEN, F)
        assert all(F.is_zero(v) for v in even.evaluate(c.coords))


def test_pairing_is_a_signed_permutation_of_complements():
    B = np.array(pairing_matrix())
    assert (np.abs(B).sum(axis=0) == 1).all() and (np.abs(B).sum(axis=1) == 1).all()
    assert rank(B.tolist(), QQ) == 16
    assert spinor_pairing(_unit(ODD, "12345"), _unit(EVEN, "")) in (1, -1)
    assert spinor_pairing(_unit(ODD, "1"), _unit(EVEN, "")) == 0
    with pytest.raises(ValueError):
        spinor_pairing(_unit(EVEN, ""), _unit(EVEN, ""))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=16, max_size=16), st.lists(st.integers(-4, 4), min_size=16, max_size=16), st.integers(-3, 3))
def test_pairing_is_bilinear(t, s, c):
    T = HalfSpinor(ODD, tuple(QQ(x) for x in t), QQ)
    S = HalfSpinor(EVEN, tuple(QQ(x) for x in s), QQ)
    S2 = HalfSpinor(EVEN, tuple(QQ(c * x) for x in s), QQ)
    assert spinor_pairing(T, S2) == c * spinor_pairing(T, S)
