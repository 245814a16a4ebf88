"""Quadratic forms over Q: diagonal forms, Hilbert symbols, Hasse invariants.

Conventions: a place is a prime ``p`` (an int) or the string ``"inf"``.
Square classes are represented by squarefree integers (sign included). The
Hasse invariant of ``<a_1, ..., a_n>`` is ``prod_{i<j} (a_i, a_j)_v``, and
``disc = (-1)^(n(n-1)/2) det``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import factorint, primerange

__all__ = [
    "INF",
    "square_class",
    "is_local_square",
    "hilbert_symbol",
    "local_solvable",
    "DiagonalForm",
    "diagonalize",
    "LocalInvariantProfile",
    "local_profile",
    "predicate_assumptions",
    "InconsistentInvariants",
    "construct_with_invariants",
    "similar",
    "SimilarityCount",
    "count_similarity_classes",
    "admissible_negative_indices",
    "QSFamilyReport",
    "qS_family",
]

INF = "inf"


def _place_key(v):
    return (1, 0) if v == INF else (0, v)


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def square_class(x) -> int:
    """Squarefree integer in the square class of the nonzero rational ``x``."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no square class")
    n = abs(x.numerator) * x.denominator
    out = 1
    for p, e in _factor(n):
        if e % 2:
            out *= p
    return out if x > 0 else -out


def _split(a: int, p: int) -> tuple[int, int]:
    """(valuation, unit part) of the nonzero integer ``a`` at ``p``."""
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def is_local_square(a, v) -> bool:
    a = square_class(a)
    if v == INF:
        return a > 0
    if a % v == 0:
        return False
    if v == 2:
        return a % 8 == 1
    return _legendre(a, v) == 1


@lru_cache(maxsize=1 << 16)
def _hilbert_int(a: int, b: int, v) -> int:
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    p = v
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = (eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)) % 2
        return -1 if e else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(w, p)
    return sign


def hilbert_symbol(a, b, v) -> int:
    """``(a, b)_v``: +1 iff ``a x^2 + b y^2 = z^2`` has a nonzero solution over ``Q_v``."""
    if v != INF and (not isinstance(v, int) or v < 2 or len(_factor(v)) != 1 or _factor(v)[0][1] != 1):
        raise ValueError(f"{v!r} is not a place of Q")
    return _hilbert_int(square_class(a), square_class(b), v)


def local_solvable(a, b, v) -> bool:
    """Search for a primitive solution of ``a x^2 + b y^2 = z^2`` modulo ``p^k``.

    Independent of the symbol formulas. After squarefree reduction some
    partial derivative at a primitive solution has valuation at most 1
    (at most 2 when p = 2), so by Hensel a solution mod ``p^3`` (``2^5``)
    lifts; we search mod ``p^4`` (``2^6``). A primitive solution can be
    scaled so that x = 1, or y = 1 with p | x, or z = 1 with p | x and p | y.
    """
    import numpy as np

    a, b = square_class(a), square_class(b)
    if v == INF:
        return not (a < 0 and b < 0)
    p = v
    m = p ** (6 if p == 2 else 4)
    r = np.arange(m, dtype=np.int64)
    sq = np.unique(r * r % m)
    if np.isin((a + b * r * r) % m, sq).any():
        return True
    mult = r[::p]
    if np.isin((a * mult * mult + b) % m, sq).any():
        return True
    return bool(np.isin((1 - a * mult * mult) % m, np.unique(b * mult * mult % m)).any())


@dataclass(frozen=True)
class DiagonalForm:
    """``<a_1, ..., a_n>`` with squarefree integer entries."""

    diag: tuple[int, ...]

    def __post_init__(self):
        if any(a == 0 for a in self.diag):
            raise ValueError("diagonal entries must be nonzero")

    @classmethod
    def of(cls, entries: Iterable) -> "DiagonalForm":
        return cls(tuple(square_class(a) for a in entries))

    @property
    def rank(self) -> int:
        return len(self.diag)

    @property
    def det(self) -> int:
        d = 1
        for a in self.diag:
            d *= a
        return square_class(d)

    @property
    def disc(self) -> int:
        n = self.rank
        return square_class((-1) ** (n * (n - 1) // 2) * self.det)

    @property
    def signature(self) -> tuple[int, int]:
        neg = sum(1 for a in self.diag if a < 0)
        return self.rank - neg, neg

    def scaled(self, c) -> "DiagonalForm":
        return DiagonalForm.of(Fraction(c) * a for a in self.diag)

    def __add__(self, other: "DiagonalForm") -> "DiagonalForm":
        return DiagonalForm(self.diag + other.diag)

    def matrix(self) -> list[list[int]]:
        n = self.rank
        return [[self.diag[i] if i == j else 0 for j in range(n)] for i in range(n)]

    def hasse(self, v) -> int:
        e = 1
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                e *= _hilbert_int(self.diag[i], self.diag[j], v)
        return e

    def relevant_places(self) -> list:
        primes = {2}
        for a in self.diag:
            primes.update(p for p, _ in _factor(abs(a)))
        return sorted(primes) + [INF]

    def to_json(self) -> list[str]:
        return [str(a) for a in self.diag]


def diagonalize(sym: Sequence[Sequence], rng: random.Random | None = None) -> DiagonalForm:
    """Congruent diagonal form of a nondegenerate symmetric rational matrix.

    With ``rng`` the matrix is first moved by a random invertible congruence,
    giving an independent diagonalization path.
    """
    A = [[Fraction(x) for x in row] for row in sym]
    n = len(A)
    if any(len(r) != n for r in A) or any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix must be square and symmetric")
    if rng is not None:
        while True:
            P = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            from .linalg import determinant
            from .fields import QQ

            if determinant(P, QQ) != 0:
                break
        PT = list(zip(*P))
        AP = [[sum(A[i][k] * P[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        A = [[sum(PT[i][k] * AP[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    diag = []
    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j] != 0), None)
            if j is not None:
                A[i], A[j] = A[j], A[i]
                for row in A:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
                if j is None:
                    raise ValueError("matrix is degenerate")
                # e_i <- e_i + e_j makes the pivot 2 A_ij != 0
                for k in range(n):
                    A[i][k] += A[j][k]
                for k in range(n):
                    A[k][i] += A[k][j]
        piv = A[i][i]
        for j in range(i + 1, n):
            f = A[j][i] / piv
            if f:
                for k in range(i, n):
                    A[j][k] -= f * A[i][k]
                for k in range(i, n):
                    A[k][j] -= f * A[k][i]
        diag.append(piv)
    return DiagonalForm.of(diag)


@dataclass(frozen=True)
class LocalInvariantProfile:
    rank: int
    det: int
    disc: int
    hasse_minus: tuple
    signature: tuple[int, int]

    def finite_hasse_minus(self) -> tuple[int, ...]:
        return tuple(v for v in self.hasse_minus if v != INF)

    def to_json(self) -> dict:
        return {
            "rank": str(self.rank),
            "det": str(self.det),
            "disc": str(self.disc),
            "hasse_minus": [str(v) for v in self.hasse_minus],
            "signature": [str(x) for x in self.signature],
        }


def local_profile(f: DiagonalForm) -> LocalInvariantProfile:
    minus = tuple(v for v in f.relevant_places() if f.hasse(v) == -1)
    return LocalInvariantProfile(f.rank, f.det, f.disc, minus, f.signature)


def predicate_assumptions(f: DiagonalForm) -> dict:
    """Splitting predicates keyed on disc; the det reading is reported alongside."""
    prof = local_profile(f)
    if f.rank == 10:
        a = prof.disc == 1
        b = a and not prof.hasse_minus
        a_det = prof.det == 1
        b_det = a_det and not prof.hasse_minus
        return {
            "assumption_a": a,
            "assumption_b": b,
            "clifford_m8": None,
            "det_reading": {"assumption_a": a_det, "assumption_b": b_det},
            "readings_diverge": (a, b) != (a_det, b_det),
        }
    if f.rank == 7:
        g = f.scaled(prof.det)
        return {
            "assumption_a": None,
            "assumption_b": None,
            "clifford_m8": not local_profile(g).hasse_minus,
            "det_reading": None,
            "readings_diverge": False,
        }
    raise ValueError("predicates are defined for rank 10 and rank 7")


class InconsistentInvariants(ValueError):
    """``reason`` is one of: reciprocity, det-signature, hasse-infinity-signature, rank-1, rank-2-local, rank-signature."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


def _squarefree_candidates(primes: Sequence[int], max_factors: int) -> list[int]:
    out = {1}
    for k in range(1, max_factors + 1):
        for combo in itertools.combinations(primes, k):
            m = 1
            for p in combo:
                m *= p
            out.add(m)
    return sorted(out)


def construct_with_invariants(rank: int, det, hasse_minus: Iterable, signature: Sequence[int]) -> DiagonalForm:
    """A diagonal form whose :func:`local_profile` has exactly these invariants."""
    r_plus, r_minus = signature
    if r_plus + r_minus != rank or rank < 1:
        raise InconsistentInvariants("rank-signature", f"{signature} does not have rank {rank}")
    det = square_class(det)
    target = tuple(sorted(set(hasse_minus), key=_place_key))
    if (det < 0) != (r_minus % 2 == 1):
        raise InconsistentInvariants("det-signature", f"det sign {det} vs {r_minus} negative entries")
    eps_inf = -1 if (r_minus * (r_minus - 1) // 2) % 2 else 1
    if (INF in target) != (eps_inf == -1):
        raise InconsistentInvariants("hasse-infinity-signature", f"signature forces eps_inf = {eps_inf}")
    if len(target) % 2:
        raise InconsistentInvariants("reciprocity", f"{len(target)} places with eps = -1")
    if rank == 1 and target:
        raise InconsistentInvariants("rank-1", "a rank-1 form has trivial Hasse invariant")
    if rank == 2:
        for v in target:
            if is_local_square(-det, v):
                raise InconsistentInvariants("rank-2-local", f"the form is hyperbolic at {v}")
    signs = [1] * r_plus + [-1] * r_minus
    k = min(rank, 3)
    fixed = signs[: rank - k]
    free_signs = signs[rank - k :]
    fixed_det = 1
    for s in fixed:
        fixed_det *= s
    finite = [v for v in target if v != INF]
    base_primes = sorted(set(finite) | {p for p, _ in _factor(abs(det))} | set(primerange(2, 60)))
    cands = _squarefree_candidates(base_primes, 2)
    cands.sort(key=lambda m: (m, m))
    want = LocalInvariantProfile(rank, det, square_class((-1) ** (rank * (rank - 1) // 2) * det), target, (r_plus, r_minus))
    if k == 3:
        # a first entry carrying the required primes lets a single extra prime fix the rest
        needed = sorted(set(finite) | {p for p, _ in _factor(abs(det))})
        firsts = sorted({m for m in _squarefree_candidates(needed, len(needed))} | {1})
        free_iter = itertools.chain(itertools.product(firsts, cands), itertools.product(cands, repeat=2))
    else:
        free_iter = itertools.product(cands, repeat=k - 1) if k > 1 else [()]
    for mags in free_iter:
        entries = [s * m for s, m in zip(free_signs[:-1], mags)]
        rest = fixed_det
        for e in entries:
            rest *= e
        last = square_class(Fraction(det, rest))
        if (last > 0) != (free_signs[-1] > 0):
            continue
        f = DiagonalForm(tuple(fixed) + tuple(entries) + (last,))
        if local_profile(f) == want:
            return f
    raise RuntimeError("no form found in the search range; invariants are consistent but the search is too narrow")


def similar(f: DiagonalForm, g: DiagonalForm) -> bool:
    """Exact test for ``f ~ c g`` (isometry after scaling by some rational ``c``).

    Even rank: ``eps(c g) = eps(g) (c, disc g)``, so with ``a = disc`` and
    ``t_v = eps_v(f) eps_v(g)`` a suitable ``c`` of sign ``sigma`` exists iff
    ``t_p = 1`` wherever ``a`` is a local square, and the real place is
    consistent with ``sigma``; a sign fix by ``-a`` is available when
    ``a > 0`` since ``(a, -a) = 1``. Odd rank: ``c`` is forced to be
    ``det f / det g`` up to squares.
    """
    if f.rank != g.rank:
        return False
    n = f.rank
    if n % 2:
        c = square_class(Fraction(f.det, g.det))
        return local_profile(g.scaled(c)) == local_profile(f)
    if f.det != g.det:
        return False
    a = g.disc
    places = sorted(set(f.relevant_places()) | set(g.relevant_places()) | {p for p, _ in _factor(abs(a))}, key=_place_key)
    t = {v: f.hasse(v) * g.hasse(v) for v in places}
    for v in places:
        if v != INF and t[v] == -1 and is_local_square(a, v):
            return False
    for sigma in (1, -1):
        sig = g.signature if sigma == 1 else (g.signature[1], g.signature[0])
        if sig != f.signature:
            continue
        if a > 0:
            if t[INF] == 1:
                return True
        elif (-1 if sigma < 0 else 1) == t[INF]:
            return True
    return False


def admissible_negative_indices(family: str) -> tuple[int, ...]:
    """Negative indices at a real place allowed by the splitting conditions."""
    if family == "tenfold-O1":
        n = 10
        # disc a square at a real place and eps_inf = +1
        ok = lambda s: (-1) ** (n * (n - 1) // 2) * (-1) ** s > 0 and (s * (s - 1) // 2) % 2 == 0
    elif family == "ninefold":
        n = 7
        # det-square representative: det > 0, and eps_inf = +1
        ok = lambda s: s % 2 == 0 and (s * (s - 1) // 2) % 2 == 0
    else:
        raise ValueError(f"unknown family {family!r}")
    return tuple(s for s in range(n + 1) if ok(s))


@dataclass(frozen=True)
class SimilarityCount:
    family: str
    r: int
    admissible: tuple[int, ...]
    count: int
    orbits: tuple[tuple[int, ...], ...]
    representatives: tuple[DiagonalForm, ...] = ()

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "r": str(self.r),
            "admissible_negative_indices": [str(s) for s in self.admissible],
            "count": str(self.count),
            "orbit_representatives": [[str(s) for s in o] for o in self.orbits] if self.r <= 3 else None,
            "rational_forms": [f.to_json() for f in self.representatives],
        }


def count_similarity_classes(family: str, r: int) -> SimilarityCount:
    """Orbits of admissible negative-index vectors under scaling.

    Scaling by ``c`` flips ``s_v -> n - s_v`` at the real places where
    ``c < 0``; by weak approximation every sign vector occurs. For the
    tenfold every ``c`` preserves the conditions (trivial disc makes the
    Hasse invariant scaling-stable). For the ninefold, staying at a
    det-square representative forces ``c`` to be a square, so no flips.
    """
    if r < 1:
        raise ValueError("need at least one real place")
    adm = admissible_negative_indices(family)
    n = 10 if family == "tenfold-O1" else 7
    flips = family == "tenfold-O1"
    seen = set()
    for vec in itertools.product(adm, repeat=r):
        canon = tuple(min(s, n - s) for s in vec) if flips else vec
        seen.add(canon)
    reps = ()
    if r == 1:
        forms = [DiagonalForm((1,) * (n - s) + (-1,) * s) for (s,) in sorted(seen)]
        reps = tuple(forms)
    return SimilarityCount(family, r, adm, len(seen), tuple(sorted(seen)), reps)


@dataclass(frozen=True)
class QSFamilyReport:
    reading: str
    sets: tuple[tuple[int, ...], ...]
    forms: tuple[DiagonalForm, ...]
    profiles: tuple[LocalInvariantProfile, ...]
    similar_pairs: tuple[tuple[int, int], ...]
    distinct_finite_hasse: bool
    disc_flag: str

    @property
    def pairwise_non_similar(self) -> bool:
        return not self.similar_pairs

    def to_json(self) -> dict:
        return {
            "reading": self.reading,
            "sets": [[str(p) for p in s] for s in self.sets],
            "forms": [f.to_json() for f in self.forms],
            "profiles": [p.to_json() for p in self.profiles],
            "similar_pairs": [[str(i), str(j)] for i, j in self.similar_pairs],
            "pairwise_non_similar": self.pairwise_non_similar,
            "distinct_finite_hasse": self.distinct_finite_hasse,
            "disc_flag": self.disc_flag,
        }


def qS_family(sets: Sequence[Iterable[int]], reading: str = "det") -> QSFamilyReport:
    """Rank-10 forms with finite Hasse set ``S``, one per set.

    ``reading="det"``: det trivial, signature (10, 0) (disc is then the class of -1).
    ``reading="disc"``: disc trivial, signature (9, 1), the nearest signature
    compatible with a square discriminant and eps_inf = +1.
    Non-similarity is decided by :func:`similar`, not by the Hasse sets alone.
    """
    if reading == "det":
        det, sig = 1, (10, 0)
        flag = "det trivial; disc is the class of -1, so the form violates a square-disc requirement"
    elif reading == "disc":
        det, sig = -1, (9, 1)
        flag = "disc trivial; signature (9, 1) replaces (10, 0), which is incompatible with a square disc"
    else:
        raise ValueError("reading must be 'det' or 'disc'")
    norm_sets = []
    forms = []
    for S in sets:
        S = tuple(sorted(set(S)))
        if len(S) % 2:
            raise InconsistentInvariants("reciprocity", f"{S} has odd cardinality")
        norm_sets.append(S)
        forms.append(construct_with_invariants(10, det, S, sig))
    profiles = tuple(local_profile(f) for f in forms)
    pairs = tuple((i, j) for i in range(len(forms)) for j in range(i + 1, len(forms)) if similar(forms[i], forms[j]))
    distinct = len({p.finite_hasse_minus() for p in profiles}) == len(profiles)
    return QSFamilyReport(reading, tuple(norm_sets), tuple(forms), profiles, pairs, distinct, flag)
