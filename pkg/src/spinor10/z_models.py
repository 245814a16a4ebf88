"""Integral models: the v-vectors, emptiness certificates, dual sections and the F_2 arguments."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
from sympy import primerange

from . import gf2
from .clifford import EVEN, ODD, SkewMatrix5, affine_spinor_family, basis_subsets, pairing_matrix
from .fields import QQ, GF, Field
from .groebner import (
    F2LeadingIdeal,
    Polynomial,
    buchberger,
    hilbert_dimension_degree,
    normal_form,
    polynomials_from_quadrics,
    projective_emptiness_certificate,
)
from .linalg import kernel, rank, rref, saturate
from .quadrics import NotAMukaiSection, QuadricSystem, canonical_system, recover_quadratic_form, restrict_to_span
from .variety import enumerate_points, random_subspace_mod_p, restrict_mod_p, upper_matrices

__all__ = [
    "ZModelSpec",
    "EmptinessReport",
    "certify_emptiness",
    "SectionReport",
    "section_conditions",
    "build_and_verify_section",
    "dimension_audit",
    "FourIndependenceResult",
    "f2_max_independent_set",
    "four_subsets_independent",
    "SecantReport",
    "f2_secant_bound_check",
    "PlaneReport",
    "verify_twelve_point_plane",
]


# ------------------------------------------------------------- v-vectors


@dataclass(frozen=True)
class ZModelSpec:
    """The five {0,1}-vectors in even coordinates, each a sum of two complementary-looking basis spinors."""

    SUPPORTS = (((), (2, 3, 4, 5)), ((1, 3), (4, 5)), ((1, 4), (2, 5)), ((1, 5), (2, 3)), ((1, 2), (1, 3, 4, 5)))

    vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def standard(cls) -> "ZModelSpec":
        index = {m: i for i, m in enumerate(basis_subsets(EVEN))}
        out = []
        for a, b in cls.SUPPORTS:
            v = [0] * 16
            for s in (a, b):
                v[index[sum(1 << (k - 1) for k in s)]] = 1
            out.append(tuple(v))
        return cls(tuple(out))

    def first(self, i: int) -> list[tuple[int, ...]]:
        if not 1 <= i <= len(self.vectors):
            raise ValueError(f"index must lie in 1..{len(self.vectors)}")
        return list(self.vectors[:i])


# ------------------------------------------------------ emptiness certificates


@dataclass(frozen=True)
class EmptinessReport:
    i: int
    rational: dict | None
    denominator_primes: tuple[int, ...]
    prime_results: dict
    failures: tuple[str, ...]

    @property
    def status(self) -> str:
        return "pass" if not self.failures else "fail"

    def to_json(self) -> dict:
        return {
            "i": str(self.i),
            "rational_certificate": self.rational,
            "denominator_primes": [str(p) for p in self.denominator_primes],
            "primes_checked": [str(p) for p in sorted(self.prime_results)],
            "prime_failures": [str(p) for p, ok in sorted(self.prime_results.items()) if not ok],
            "failures": list(self.failures),
            "status": self.status,
        }


def _emptiness(sys: QuadricSystem, field: Field):
    gb = buchberger(polynomials_from_quadrics(sys), field)
    return gb, projective_emptiness_certificate(gb)


def certify_emptiness(i: int, vectors: Sequence[Sequence[int]] | None = None, prime_bound: int = 50) -> EmptinessReport:
    """Show that ``P(span(v_1..v_i))`` misses the even tenfold over Q and over F_p.

    The Q basis tracks every prime that enters a denominator or a leading
    coefficient; outside those primes the computation specializes verbatim.
    Those primes and all ``p <= prime_bound`` are then checked directly.
    """
    vecs = list(vectors)[:i] if vectors is not None else ZModelSpec.standard().first(i)
    if len(vecs) != i:
        raise ValueError("not enough vectors")
    if rank([list(v) for v in vecs], QQ) != i:
        raise ValueError("vectors are linearly dependent over Q")
    even = canonical_system(EVEN)
    sys = restrict_to_span(even, vecs)
    failures = []
    gb, cert = _emptiness(sys, QQ)
    rational = cert.to_json() if cert else None
    if not cert:
        failures.append(f"Q: variable {cert.variable} has no pure-power leading term")
    dens = tuple(gb.denominator_primes)
    results = {}
    for p in sorted(set(primerange(2, prime_bound + 1)) | set(dens)):
        F = GF(p)
        if rank([[x % p for x in v] for v in vecs], F) < i:
            results[p] = False
            failures.append(f"F_{p}: vectors become dependent")
            continue
        _, c = _emptiness(sys.reduce(F), F)
        results[p] = bool(c)
        if not c:
            failures.append(f"F_{p}: variable {c.variable} has no pure-power leading term")
    return EmptinessReport(i, rational, dens, results, tuple(failures))


# ------------------------------------------------------------ dual sections


def section_conditions(i: int) -> list[list[int]]:
    """Rows ``r_j`` with ``beta(t, v_j) = r_j . t`` on the odd space."""
    B = pairing_matrix()
    out = []
    for v in ZModelSpec.standard().first(i):
        out.append([sum(B[a][b] * v[b] for b in range(16)) for a in range(16)])
    return out


@lru_cache(maxsize=None)
def _section_system(i: int) -> tuple[QuadricSystem, tuple]:
    K = saturate(kernel(section_conditions(i), 16, QQ))
    return restrict_to_span(canonical_system(ODD), K), tuple(tuple(r) for r in K)


@dataclass(frozen=True)
class SectionReport:
    i: int
    field: str
    dimension: int
    degree: int
    expected: int
    audit: dict
    form_rank: int | None
    failures: tuple[str, ...] = ()
    scope: str = "smoothness audited at rational points only"

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "i": str(self.i),
            "field": self.field,
            "dimension": str(self.dimension),
            "expected_dimension": str(self.expected),
            "degree": str(self.degree),
            "audit": {k: {a: str(b) for a, b in v.items()} for k, v in self.audit.items()},
            "recovered_form_rank": None if self.form_rank is None else str(self.form_rank),
            "failures": list(self.failures),
            "scope": self.scope,
            "status": "pass" if self.passed else "fail",
        }


def _dot(F, u, v):
    acc = F.zero
    for x, y in zip(u, v):
        acc = F.add(acc, F.mul(x, y))
    return acc


def _normalize(F, coords):
    lead = next(x for x in coords if not F.is_zero(x))
    inv = F.inv(lead)
    return tuple(F.mul(x, inv) for x in coords)


def _chart_sample(i: int, F: Field, rng: random.Random, want: int, attempts: int) -> list[tuple]:
    """Points of the section found inside random affine 4-spaces of pure spinors."""
    conds = [[F(c) for c in r] for r in section_conditions(i)]
    found = {}
    for _ in range(attempts):
        if len(found) >= want:
            break
        chart = rng.randrange(16)
        pivot = rng.randrange(1, 6)
        fixed = {ij: F.random_element(rng) for ij in SkewMatrix5.PAIRS if pivot not in ij}
        base, dirs = affine_spinor_family(fixed, pivot, chart, ODD, F)
        # r . (base + sum x_u d_u) = 0 for every condition r
        aug = [[_dot(F, r, d) for d in dirs] + [F.neg(_dot(F, r, base.coords))] for r in conds]
        red, piv = rref(aug, F)
        if 4 in piv:
            continue
        x = [F.random_element(rng) for _ in range(4)]
        for row, pc in zip(red, piv):
            acc = row[4]
            for u in range(4):
                if u != pc and u not in piv:
                    acc = F.sub(acc, F.mul(row[u], x[u]))
            x[pc] = acc
        t = list(base.coords)
        for xu, d in zip(x, dirs):
            t = [F.add(a, F.mul(xu, b)) for a, b in zip(t, d)]
        if all(F.is_zero(c) for c in t):
            continue
        pt = _normalize(F, t)
        found.setdefault(pt, None)
    return list(found)


def _ambient_smooth(i: int, F: Field, pts: list[tuple]) -> tuple[int, int]:
    """(points on the section, points where tangent and linear conditions have full rank 5 + i)."""
    odd = canonical_system(ODD).reduce(F)
    conds = [[F(c) for c in r] for r in section_conditions(i)]
    on = smooth = 0
    for t in pts:
        if any(not F.is_zero(v) for v in odd.evaluate(t)) or any(not F.is_zero(_dot(F, r, t)) for r in conds):
            continue
        on += 1
        smooth += rank(odd.jacobian(t) + conds, F) == 5 + i
    return on, smooth


def build_and_verify_section(i: int, p: int, seed: int = 0, samples: int = 12, scan: bool = True) -> SectionReport:
    """Cut the odd tenfold by ``beta(., v_j) = 0`` for ``j <= i`` and check it over ``F_p``.

    Dimension and degree come from a Groebner basis of the restricted system.
    Smoothness is audited at rational points over ``F_p`` and ``F_{p^2}``
    found by chart sampling, plus a full scan of ``F_p``-points for p = 2, 3.
    In odd characteristic the quadratic relation must have rank 10.
    """
    if not 1 <= i <= 5:
        raise ValueError("i must lie in 1..5")
    F = GF(p)
    B = [[F(c) for c in row] for row in pairing_matrix()]
    if rank(B, F) != 16:
        raise ZeroDivisionError(f"pairing matrix is singular mod {p}")
    sysq, _ = _section_system(i)
    sys = sysq.reduce(F)
    failures = []
    gb = buchberger(polynomials_from_quadrics(sys), F)
    dim, deg = hilbert_dimension_degree(gb)
    if dim != 10 - i:
        failures.append(f"dimension {dim} != {10 - i}")
    rng = random.Random(seed * 1000 + 17 * i + p)
    audit = {}
    if scan and p in (2, 3):
        rep, _ = enumerate_points(sys, F)
        audit[f"{p}:scan"] = {"points": rep.total, "smooth": rep.smooth}
        if rep.singular:
            failures.append(f"F_{p} scan: {rep.singular} singular points")
    for spec, K in ((str(p), F), (f"{p}:2", GF(p, 2))):
        pts = _chart_sample(i, K, rng, samples, 60 * samples)
        on, smooth = _ambient_smooth(i, K, pts)
        audit[f"{spec}:charts"] = {"points": on, "smooth": smooth}
        if on != len(pts):
            failures.append(f"F_{spec}: sampled point off the section")
        if smooth != on:
            failures.append(f"F_{spec}: {on - smooth} singular sampled points")
        if on == 0:
            failures.append(f"F_{spec}: no points sampled")
    form_rank = None
    if p != 2:
        try:
            form_rank = recover_quadratic_form(sys).rank()
        except NotAMukaiSection as exc:
            failures.append(f"quadratic relations: {exc}")
        else:
            if form_rank != 10:
                failures.append(f"recovered form has rank {form_rank}")
    return SectionReport(i, str(p), dim, deg, 10 - i, audit, form_rank, tuple(failures))


# ------------------------------------------------------------ dimension audit


def dimension_audit() -> dict:
    """Dimension count behind infinitely many non-isomorphic integral sixfolds."""
    spin = 10 * 9 // 2
    sigma = 5 * 4 // 2
    grass = 4 * (16 - 4)
    # a P^3 meets a codimension-5 subvariety of P^15 in codimension 5 - 3
    meeting = grass - (5 - 3)
    return {
        "dim_sigma": sigma,
        "dim_grassmannian": grass,
        "dim_meeting_locus": meeting,
        "dim_spin": spin,
        "orbits_cannot_cover": spin < grass,
    }


# ------------------------------------------------------------ F_2 arguments


@dataclass(frozen=True)
class FourIndependenceResult:
    dimension: int
    maximum: int
    witness: tuple[int, ...]
    nodes: int
    dead_ends: int
    bound_prunes: int
    max_depth: int
    token: str

    def to_json(self) -> dict:
        return {
            "dimension": str(self.dimension),
            "maximum": str(self.maximum),
            "witness": [format(v, f"0{self.dimension}b") for v in self.witness],
            "search": {
                "nodes": str(self.nodes),
                "dead_ends": str(self.dead_ends),
                "bound_prunes": str(self.bound_prunes),
                "max_depth": str(self.max_depth),
                "token": self.token,
            },
        }


def _translate(mask: int, v: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << ((low.bit_length() - 1) ^ v)
        mask ^= low
    return out


def f2_max_independent_set(dim: int = 6, fixed_prefix: int = 4) -> FourIndependenceResult:
    """Largest set of nonzero vectors of F_2^dim whose 4-subsets are all independent.

    Equivalently no sum of at most 4 distinct members vanishes. Any 4 members
    are independent, so GL moves them to ``e_1..e_4``; the sums 3, 5, 6, 7 are
    then excluded and the sorted set starts ``1, 2, 4, 8``. The search fixes
    that prefix and goes depth-first in increasing order; a candidate is
    allowed iff it is not a sum of at most 3 chosen vectors. Branches that
    cannot beat the best size are cut, so the run proves nothing larger exists.
    ``fixed_prefix`` (1..4) keeps fewer of the prefix vectors, for cross-checks.
    """
    full = (1 << (1 << dim)) - 1
    best: list[int] = []
    stats = {"nodes": 0, "dead": 0, "bound": 0, "depth": 0}
    digest = hashlib.sha256()

    def rec(chosen, a1, a2, a3, last):
        stats["nodes"] += 1
        stats["depth"] = max(stats["depth"], len(chosen))
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
            digest.update(bytes(chosen))
        forbidden = 1 | a1 | a2 | a3
        allowed = full & ~forbidden & ~((1 << (last + 1)) - 1)
        if not allowed:
            stats["dead"] += 1
            return
        if len(chosen) + allowed.bit_count() <= len(best):
            stats["bound"] += 1
            return
        while allowed:
            if len(chosen) + allowed.bit_count() <= len(best):
                stats["bound"] += 1
                return
            low = allowed & -allowed
            v = low.bit_length() - 1
            allowed ^= low
            rec(chosen + [v], a1 | low, a2 | _translate(a1, v), a3 | _translate(a2, v), v)

    a1 = a2 = a3 = 0
    prefix = [1 << k for k in range(max(1, min(fixed_prefix, 4, dim)))]
    for v in prefix:
        a1, a2, a3 = a1 | (1 << v), a2 | _translate(a1, v), a3 | _translate(a2, v)
    rec(prefix, a1, a2, a3, prefix[-1])
    digest.update(f"{stats['nodes']}:{stats['dead']}:{stats['bound']}".encode())
    return FourIndependenceResult(
        dim, len(best), tuple(best), stats["nodes"], stats["dead"], stats["bound"], stats["depth"], digest.hexdigest()
    )


def four_subsets_independent(vectors: Sequence[int]) -> bool:
    return all(gf2.rank(list(c)) == 4 for c in combinations(vectors, 4))


@lru_cache(maxsize=1)
def _sigma_f2_table() -> np.ndarray:
    """Boolean lookup over the 2^16 bit-encoded vectors: True on points of the even tenfold."""
    _, pts = enumerate_points(canonical_system(EVEN), GF(2))
    codes = (pts.astype(np.int64) << np.arange(16, dtype=np.int64)).sum(axis=1)
    table = np.zeros(1 << 16, dtype=bool)
    table[codes] = True
    return table


@dataclass(frozen=True)
class SecantReport:
    trials: int
    counts: dict
    positive_dimensional: int
    fallback_runs: int
    stress_trials: int
    stress_counts: dict
    stress_positive_dimensional: int

    @property
    def maximum(self) -> int:
        return max(list(self.counts) + list(self.stress_counts) + [0])

    @property
    def status(self) -> str:
        if self.maximum > 8:
            return "fail"
        if any(c < 6 for c in self.stress_counts):
            return "fail"
        return "pass"

    def to_json(self) -> dict:
        return {
            "trials": str(self.trials),
            "counts": {str(k): str(v) for k, v in sorted(self.counts.items())},
            "positive_dimensional": str(self.positive_dimensional),
            "groebner_fallbacks": str(self.fallback_runs),
            "stress_trials": str(self.stress_trials),
            "stress_counts": {str(k): str(v) for k, v in sorted(self.stress_counts.items())},
            "stress_positive_dimensional": str(self.stress_positive_dimensional),
            "maximum": str(self.maximum),
            "status": self.status,
        }


_COMBOS = np.array([[(k >> b) & 1 for b in range(6)] for k in range(1, 64)], dtype=np.int64)


def _slice_count(W: np.ndarray, U, ideal: F2LeadingIdeal, table: np.ndarray) -> tuple[int | None, bool]:
    """(rational point count or None if positive-dimensional, whether Buchberger was needed)."""
    r = restrict_mod_p(U, W, 2)
    bound, _, _ = ideal.dimension_bound(r)
    fallback = False
    if bound > 0:
        fallback = True
        dim, _ = hilbert_dimension_degree(buchberger(polynomials_from_quadrics(r), r.field))
        if dim > 0:
            return None, fallback
    vecs = _COMBOS @ W % 2
    codes = (vecs << np.arange(16, dtype=np.int64)).sum(axis=1)
    return int(table[codes].sum()), fallback


def f2_secant_bound_check(trials: int, seed: int, stress_trials: int = 100) -> SecantReport:
    """Count F_2-points on random zero-dimensional P^5-sections of the even tenfold.

    Random subspaces come first; the stress test then uses spans of six
    independent F_2-points of the tenfold, which must carry at least six.
    """
    rng = random.Random(seed)
    table = _sigma_f2_table()
    U = upper_matrices(canonical_system(EVEN), 2)
    ideal = F2LeadingIdeal(6)
    counts: dict[int, int] = {}
    positive = fallbacks = 0
    for _ in range(trials):
        W = random_subspace_mod_p(rng, 2, 6, 16)
        c, fb = _slice_count(W, U, ideal, table)
        fallbacks += fb
        if c is None:
            positive += 1
        else:
            counts[c] = counts.get(c, 0) + 1
    codes = np.nonzero(table)[0]
    stress: dict[int, int] = {}
    stress_pos = 0
    for _ in range(stress_trials):
        while True:
            pick = [int(codes[rng.randrange(len(codes))]) for _ in range(6)]
            if gf2.rank(pick) == 6:
                break
        W = np.array([[(c >> b) & 1 for b in range(16)] for c in pick], dtype=np.int64)
        c, fb = _slice_count(W, U, ideal, table)
        fallbacks += fb
        if c is None:
            stress_pos += 1
        else:
            stress[c] = stress.get(c, 0) + 1
    return SecantReport(trials, counts, positive, fallbacks, stress_trials, stress, stress_pos)


# ------------------------------------------------------- twelve-point planes


@dataclass(frozen=True)
class PlaneReport:
    dimension: int
    degree: int
    points: tuple[tuple[Fraction, ...], ...]
    multiplicities: tuple[int, ...]
    ranks: tuple[int, ...]
    failure: str | None

    @property
    def status(self) -> str:
        return "pass" if self.failure is None else "fail"

    def to_json(self) -> dict:
        return {
            "dimension": str(self.dimension),
            "degree": str(self.degree),
            "rational_points": [[str(x) for x in pt] for pt in self.points],
            "multiplicities": [str(m) for m in self.multiplicities],
            "jacobian_ranks": [str(r) for r in self.ranks],
            "failure": self.failure,
            "status": self.status,
        }


def _monomials(n: int, d: int) -> list[tuple]:
    if n == 1:
        return [(d,)]
    return [(k,) + rest for k in range(d, -1, -1) for rest in _monomials(n - 1, d - k)]


def _standard(gb, n: int, d: int) -> list[tuple]:
    lms = gb.leading_monomials
    return [m for m in _monomials(n, d) if not any(all(a <= b for a, b in zip(lm, m)) for lm in lms)]


def _coordinates(poly: Polynomial, index: dict) -> list[Fraction]:
    out = [Fraction(0)] * len(index)
    for e, c in poly.terms:
        out[index[e]] = Fraction(c)
    return out


def _rational_points(gb, n: int, deg: int, rng: random.Random):
    """Rational points and their multiplicities via commuting multiplication operators.

    In a degree ``D`` where the Hilbert function has stabilized at ``deg``,
    evaluation at a point ``P`` is a left eigenvector of ``N_i = X_i L^{-1}``
    with eigenvalue ``P_i / l(P)``, where ``X_i`` and ``L`` multiply by
    ``x_i`` and a linear form ``l`` from degree ``D`` to ``D + 1``.
    """
    from sympy import Matrix, Poly, Rational, symbols

    D = max(g.degree for g in gb.generators)
    while not (len(_standard(gb, n, D)) == deg and len(_standard(gb, n, D + 1)) == deg):
        D += 1
    lo = _standard(gb, n, D)
    hi = _standard(gb, n, D + 1)
    hi_index = {m: k for k, m in enumerate(hi)}

    def mult(coeffs):
        cols = []
        for m in lo:
            terms = {}
            for j, c in enumerate(coeffs):
                if c:
                    e = list(m)
                    e[j] += 1
                    terms[tuple(e)] = terms.get(tuple(e), 0) + Fraction(c)
            nf = normal_form(Polynomial.from_dict(n, terms, QQ), gb)
            cols.append(_coordinates(nf, hi_index))
        return Matrix([[Rational(c.numerator, c.denominator) for c in col] for col in cols]).T

    X = [mult([1 if k == j else 0 for k in range(n)]) for j in range(n)]
    for _ in range(20):
        ell = [rng.randint(-5, 5) for _ in range(n)]
        Lm = sum((c * x for c, x in zip(ell, X)), Matrix.zeros(deg, deg))
        if Lm.det() != 0:
            break
    else:
        raise RuntimeError("no linear form avoids every point")
    Linv = Lm.inv()
    N = [x * Linv for x in X]
    lam = symbols("lam")
    for _ in range(20):
        c = [rng.randint(-7, 7) for _ in range(n)]
        M = sum((a * b for a, b in zip(c, N)), Matrix.zeros(deg, deg))
        factors = Poly(M.charpoly(lam).as_expr(), lam).factor_list()[1]
        roots = [(-f.all_coeffs()[1] / f.all_coeffs()[0], k) for f, k in factors if f.degree() == 1]
        points, mults, ok = [], [], True
        for r, k in roots:
            ns = (M - r * Matrix.eye(deg)).T.nullspace()
            if len(ns) != 1:
                ok = False
                break
            w = ns[0].T
            piv = next(t for t in range(deg) if w[t] != 0)
            pt = [(w * Ni)[piv] / w[piv] for Ni in N]
            points.append(tuple(Fraction(int(x.p), int(x.q)) for x in pt))
            mults.append(k)
        if ok:
            return points, mults
    raise RuntimeError("could not separate the rational points")


def verify_twelve_point_plane(basis: Sequence[Sequence], seed: int = 0) -> PlaneReport:
    """Check that ``P(span(basis))`` meets the even tenfold in 12 reduced rational points."""
    rows = [[Fraction(x) for x in r] for r in basis]
    if len(rows) != 6 or any(len(r) != 16 for r in rows):
        raise ValueError("expected 6 vectors of length 16")
    if rank(rows, QQ) != 6:
        raise ValueError("basis vectors are linearly dependent over Q")
    ints = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // np.gcd(den, x.denominator)
        ints.append([int(x * den) for x in r])
    even = canonical_system(EVEN)
    sys = restrict_to_span(even, ints)
    gb = buchberger(polynomials_from_quadrics(sys), QQ)
    dim, deg = hilbert_dimension_degree(gb)
    if dim != 0:
        # an empty intersection has degree 0
        failure = "degree" if dim < 0 else "not-zero-dimensional"
        return PlaneReport(dim, deg, (), (), (), failure)
    pts, mults = _rational_points(gb, 6, deg, random.Random(seed))
    ambient, ranks = [], []
    for y, m in zip(pts, mults):
        if any(v != 0 for v in sys.evaluate(list(y))):
            raise RuntimeError("recovered point does not satisfy the restricted system")
        x = [sum(yi * r[k] for yi, r in zip(y, ints)) for k in range(16)]
        x = list(_normalize(QQ, x))
        ambient.append(tuple(x))
        ranks.append(rank(even.jacobian(x), QQ))
    failure = None
    if deg != 12:
        failure = "degree"
    elif len(pts) < 12 or any(m != 1 for m in mults):
        failure = "rational-count"
    elif any(r != 5 for r in ranks):
        failure = "singular"
    return PlaneReport(dim, deg, tuple(ambient), tuple(mults), tuple(ranks), failure)
