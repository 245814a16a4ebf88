from __future__ import annotations

import random
from itertools import combinations

import pytest

from spinor10 import gf2
from spinor10.clifford import pure_spinor, random_skew
from spinor10.fields import GF, QQ
from spinor10.linalg import rank
from spinor10.z_models import (
    ZModelSpec,
    build_and_verify_section,
    certify_emptiness,
    dimension_audit,
    f2_max_independent_set,
    f2_secant_bound_check,
    four_subsets_independent,
    section_conditions,
    verify_twelve_point_plane,
)


def test_standard_vectors_are_independent_everywhere():
    vs = [list(v) for v in ZModelSpec.standard().vectors]
    assert all(set(v) <= {0, 1} and sum(v) == 2 for v in vs)
    assert rank(vs, QQ) == 5 and rank(vs, GF(2)) == 5
    with pytest.raises(ValueError):
        ZModelSpec.standard().first(6)


@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_spans_miss_the_tenfold(i):
    rep = certify_emptiness(i)
    assert rep.status == "pass" and rep.rational is not None
    assert rep.denominator_primes == ()
    assert all(rep.prime_results.values()) and 47 in rep.prime_results


def test_a_pure_vector_breaks_the_certificate():
    vs = [list(v) for v in ZModelSpec.standard().vectors]
    vac = [1] + [0] * 15
    rep = certify_emptiness(2, [vac, vs[1]])
    assert rep.status == "fail" and rep.rational is None


def test_dependent_vectors_are_rejected():
    v = list(ZModelSpec.standard().vectors[0])
    with pytest.raises(ValueError):
        certify_emptiness(2, [v, [2 * x for x in v]])


def test_section_conditions_are_independent():
    rows = section_conditions(5)
    assert rank(rows, QQ) == 5 and rank([[x % 2 for x in r] for r in rows], GF(2)) == 5


@pytest.mark.parametrize("i,p", [(5, 2), (5, 3), (4, 5), (3, 7)])
def test_sections_are_smooth_of_the_right_dimension(i, p):
    rep = build_and_verify_section(i, p, seed=0, samples=4)
    assert rep.passed, rep.failures
    assert rep.dimension == 10 - i
    assert (rep.form_rank == 10) if p != 2 else rep.form_rank is None


def test_section_scan_counts_over_f2():
    rep = build_and_verify_section(5, 2, samples=2)
    assert rep.audit["2:scan"] == {"points": 63, "smooth": 63}


def test_dimension_audit():
    a = dimension_audit()
    assert (a["dim_spin"], a["dim_grassmannian"], a["dim_meeting_locus"]) == (45, 48, 46)
    assert a["orbits_cannot_cover"]


def test_eight_vector_set_in_dimension_six():
    res = f2_max_independent_set(6)
    assert res.maximum == 8 and len(res.witness) == 8
    assert sum(1 for _ in combinations(res.witness, 4)) == 70
    assert four_subsets_independent(res.witness)
    assert gf2.rank(list(res.witness)) == 6


@pytest.mark.parametrize("dim,expected", [(4, 5), (5, 6)])
def test_small_dimensions(dim, expected):
    assert f2_max_independent_set(dim).maximum == expected
    assert f2_max_independent_set(dim, fixed_prefix=1).maximum == expected


def test_search_is_deterministic():
    a, b = f2_max_independent_set(6), f2_max_independent_set(6)
    assert a.token == b.token and a.witness == b.witness


def test_nine_vectors_fail_somewhere():
    rng = random.Random(0)
    for _ in range(50):
        vs = rng.sample(range(1, 64), 9)
        assert not four_subsets_independent(vs)


def test_secant_bound_small_run():
    rep = f2_secant_bound_check(trials=300, seed=1, stress_trials=30)
    assert rep.status == "pass" and rep.maximum <= 8
    assert all(c >= 6 for c in rep.stress_counts)


def _pure(rng):
    return [int(x) for x in pure_spinor(random_skew(rng, QQ)).coords]


def test_plane_through_random_pure_spinors_is_not_twelve_rational_points():
    rng = random.Random(5)
    rep = verify_twelve_point_plane([_pure(rng) for _ in range(6)])
    assert rep.dimension == 0 and rep.degree == 12
    assert rep.failure == "rational-count" and len(rep.points) == 6
    assert set(rep.ranks) == {5}


def test_plane_containing_a_line_is_positive_dimensional():
    rng = random.Random(6)
    vac = [1] + [0] * 15
    e12 = [0, 1] + [0] * 14
    rep = verify_twelve_point_plane([vac, e12] + [_pure(rng) for _ in range(4)])
    assert rep.failure == "not-zero-dimensional" and rep.status == "fail"


def test_standard_span_plus_generic_vector():
    rng = random.Random(7)
    basis = [list(v) for v in ZModelSpec.standard().vectors] + [[rng.randint(-3, 3) for _ in range(16)]]
    rep = verify_twelve_point_plane(basis)
    assert rep.dimension == 0 and rep.degree == 12
    assert rep.failure == "rational-count"


def test_plane_input_validation():
    with pytest.raises(ValueError):
        verify_twelve_point_plane([[1] * 16] * 5)
    with pytest.raises(ValueError):
        verify_twelve_point_plane([[1] + [0] * 15] * 6)


def test_first_vector_alone_is_cut_out_by_a_nonzero_square():
    from spinor10.clifford import EVEN
    from spinor10.quadrics import canonical_system, restrict_to_span

    v1 = list(ZModelSpec.standard().vectors[0])
    r = restrict_to_span(canonical_system(EVEN), [v1])
    assert any(q[0] != 0 for q in r.coeffs)


def test_a_single_pure_vector_is_not_empty():
    rep = certify_emptiness(1, [[1] + [0] * 15])
    assert rep.status == "fail"


def test_search_tree_depth_is_bounded():
    res = f2_max_independent_set(6)
    assert res.max_depth <= 8 and res.nodes > 0
