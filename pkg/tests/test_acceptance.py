"""One test per acceptance criterion; each prints a PASS/FAIL line."""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest
from sympy import primerange

from spinor10.cli import DEFAULT_QS_SETS, RunConfig, run, strip_wall_clock
from spinor10.clifford import EVEN, ODD
from spinor10.fields import GF, QQ
from spinor10.quadforms import (
    INF,
    DiagonalForm,
    count_similarity_classes,
    diagonalize,
    hilbert_symbol,
    local_profile,
    local_solvable,
    qS_family,
    similar,
    square_class,
)
from spinor10.quadrics import canonical_system, clifford_quadrics, interpolate_quadrics, recover_quadratic_form, spans_equal
from spinor10.variety import cell_count, dual_transport_test, enumerate_points, slice_degree
from spinor10.z_models import (
    build_and_verify_section,
    certify_emptiness,
    dimension_audit,
    f2_max_independent_set,
    f2_secant_bound_check,
    four_subsets_independent,
)


@pytest.fixture
def verdict(capsys):
    def report(n: int, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}{' ' + detail if detail else ''}")
        assert ok, detail

    return report


def test_criterion_1_quadric_derivation(verdict):
    start = time.perf_counter()
    ok = True
    for parity in (EVEN, ODD):
        sysi = interpolate_quadrics(parity, 200, seed=0)
        ok &= len(sysi) == 10
        ok &= spans_equal(sysi, clifford_quadrics(parity), QQ)
        ok &= canonical_system(parity).reduce(GF(2)).span_rank() == 10
    elapsed = time.perf_counter() - start
    verdict(1, ok and elapsed < 30, f"({elapsed:.1f} s)")


def test_criterion_2_point_counts(verdict):
    sys = canonical_system(EVEN)
    start = time.perf_counter()
    r2, _ = enumerate_points(sys, GF(2))
    t2 = time.perf_counter() - start
    start = time.perf_counter()
    r3, _ = enumerate_points(sys, GF(3))
    t3 = time.perf_counter() - start
    ok = r2.total == cell_count(2) == 2295 and r2.smooth == r2.total
    ok &= r3.total == cell_count(3) == 91840 and r3.smooth == r3.total
    verdict(2, ok and t2 < 1 and t3 < 300, f"(F2 {r2.total} in {t2:.2f} s, F3 {r3.total} in {t3:.1f} s)")


def test_criterion_3_slice_degree(verdict):
    start = time.perf_counter()
    rep = slice_degree(canonical_system(EVEN), 3, seed=0, trials=20)
    elapsed = time.perf_counter() - start
    ok = len(rep.multiplicities) == 20 and set(rep.multiplicities) == {12}
    verdict(3, ok and elapsed < 120, f"(multiplicities {sorted(set(rep.multiplicities))}, {elapsed:.1f} s)")


def test_criterion_4_distinguished_relation(verdict):
    start = time.perf_counter()
    # recover_quadratic_form raises unless the relation space is exactly one-dimensional
    rec = recover_quadratic_form(canonical_system(EVEN))
    prof = local_profile(diagonalize([list(r) for r in rec.matrix]))
    elapsed = time.perf_counter() - start
    ok = rec.rank() == 10 and prof.disc == 1 and prof.hasse_minus == ()
    verdict(4, ok and elapsed < 120, f"(disc {prof.disc}, hasse_minus {list(prof.hasse_minus)}, {elapsed:.1f} s)")


def test_criterion_5_integral_models(verdict):
    start = time.perf_counter()
    bad = []
    for i in range(1, 6):
        rep = certify_emptiness(i, prime_bound=50)
        covered = set(primerange(2, 51)) | set(rep.denominator_primes)
        if rep.status != "pass" or rep.rational is None or set(rep.prime_results) != covered:
            bad.append(f"emptiness i={i}")
        for p in (2, 3, 5, 7):
            sec = build_and_verify_section(i, p, seed=0)
            smooth = all(a["points"] == a["smooth"] for a in sec.audit.values())
            if not sec.passed or sec.dimension != 10 - i or not smooth:
                bad.append(f"section i={i} p={p}")
    elapsed = time.perf_counter() - start
    verdict(5, not bad and elapsed < 900, f"({elapsed:.1f} s) {bad or ''}".strip())


def test_criterion_6_f2_lemma(verdict):
    start = time.perf_counter()
    res = f2_max_independent_set(6)
    ok = res.maximum == 8 and four_subsets_independent(res.witness)
    sec = f2_secant_bound_check(10**4, seed=0)
    ok &= sec.trials == 10**4 and sec.maximum <= 8
    elapsed = time.perf_counter() - start
    verdict(6, ok and elapsed < 120, f"(max set {res.maximum}, max points {sec.maximum}, {elapsed:.1f} s)")


def test_criterion_7_duality(verdict):
    start = time.perf_counter()
    rep = dual_transport_test(seed=0, trials=100, p=101)
    elapsed = time.perf_counter() - start
    ok = rep.passes == 100 and rep.status == "pass"
    verdict(7, ok and elapsed < 60, f"({rep.passes}/100, {elapsed:.1f} s)")


def _nonzero(rng, bound):
    return rng.choice([-1, 1]) * rng.randint(1, bound)


def test_criterion_8_quadratic_forms(verdict):
    start = time.perf_counter()
    rng = random.Random(8)
    places = list(primerange(2, 51)) + [INF]
    oracle_bad = 0
    for _ in range(500):
        a, b, v = _nonzero(rng, 50), _nonzero(rng, 50), rng.choice(places)
        oracle_bad += (hilbert_symbol(a, b, v) == 1) != local_solvable(a, b, v)
    recip_bad = 0
    for _ in range(200):
        f = DiagonalForm.of(_nonzero(rng, 300) for _ in range(rng.randint(2, 10)))
        prod = 1
        for v in f.relevant_places():
            prod *= f.hasse(v)
        recip_bad += prod != 1
    scale_bad = 0
    for _ in range(500):
        head = DiagonalForm.of(_nonzero(rng, 100) for _ in range(9))
        f = DiagonalForm(head.diag + (square_class(-head.det),))
        c = Fraction(_nonzero(rng, 100), rng.randint(1, 100))
        scale_bad += f.disc != 1 or local_profile(f).finite_hasse_minus() != local_profile(f.scaled(c)).finite_hasse_minus()
    counts_ok = True
    for family in ("tenfold-O1", "ninefold"):
        one = count_similarity_classes(family, 1)
        counts_ok &= one.count == 2 and len(one.representatives) == 2
        counts_ok &= not similar(*one.representatives)
        counts_ok &= all(count_similarity_classes(family, r).count == 2**r for r in range(1, 11))
    sets = [()] + [tuple(int(x) for x in s.split(",")) for s in DEFAULT_QS_SETS.split(";")]
    fam = qS_family(sets, "disc")
    fam_ok = len(fam.forms) == 10 and fam.pairwise_non_similar
    elapsed = time.perf_counter() - start
    ok = not (oracle_bad or recip_bad or scale_bad) and counts_ok and fam_ok
    detail = f"(oracle {oracle_bad}, reciprocity {recip_bad}, scaling {scale_bad} mismatches; {elapsed:.1f} s)"
    verdict(8, ok and elapsed < 60, detail)


def test_criterion_9_dimension_audit(verdict):
    a = dimension_audit()
    values = sorted((a["dim_sigma"], a["dim_spin"], a["dim_meeting_locus"], a["dim_grassmannian"]))
    ok = values == [10, 45, 46, 48] and a["dim_spin"] < a["dim_grassmannian"] and a["orbits_cannot_cover"]
    verdict(9, ok, f"{values}")


def test_criterion_10_reproducibility(verdict):
    first = run(RunConfig("all", seed=0))
    second = run(RunConfig("all", seed=0))
    ok = strip_wall_clock(first) == strip_wall_clock(second)
    verdict(10, ok, f"(overall {first['status']}, {len(first['claims'])} claims)")
