"""Buchberger's algorithm for homogeneous ideals under grevlex.

Internally a polynomial is a dict keyed by the *reversed* exponent tuple
``(e_n, ..., e_1)``. For monomials of equal degree, grevlex order is then
the reverse of lexicographic order on those keys, so the leading monomial
is simply ``min(poly)``. Every ideal handled here is homogeneous, and
reductions never mix degrees.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from operator import add as _plus, le as _le, sub as _minus
from typing import Iterable, Sequence

from sympy import factorint

from .fields import QQ, Field, PrimeField, Rationals

__all__ = [
    "Polynomial",
    "GroebnerBasis",
    "EmptinessCertificate",
    "NonEmpty",
    "buchberger",
    "projective_emptiness_certificate",
    "hilbert_numerator",
    "hilbert_dimension_degree",
    "hilbert_function",
    "rational_certificate_primes",
    "polynomials_from_quadrics",
    "F2LeadingIdeal",
    "normal_form",
]


@dataclass(frozen=True)
class Polynomial:
    """Homogeneous polynomial; ``terms`` maps natural exponent tuples to nonzero coefficients."""

    nvars: int
    terms: tuple  # sorted ((exponents, coeff), ...), leading term first
    field: Field

    @classmethod
    def from_dict(cls, nvars: int, terms: dict, field: Field) -> "Polynomial":
        items = [(e, c) for e, c in terms.items() if not field.is_zero(c)]
        degs = {sum(e) for e, _ in items}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        if any(len(e) != nvars for e, _ in items):
            raise ValueError("exponent length does not match variable count")
        items.sort(key=lambda ec: ec[0][::-1])
        return cls(nvars, tuple(items), field)

    @property
    def degree(self) -> int:
        return sum(self.terms[0][0]) if self.terms else -1

    @property
    def leading_monomial(self) -> tuple:
        return self.terms[0][0]

    @property
    def leading_coefficient(self):
        return self.terms[0][1]

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict:
        return dict(self.terms)

    def evaluate(self, point: Sequence):
        F = self.field
        acc = F.zero
        for e, c in self.terms:
            t = c
            for x, k in zip(point, e):
                if k:
                    t = F.mul(t, F.pow(x, k))
            acc = F.add(acc, t)
        return acc

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[Polynomial, ...]
    nvars: int
    field: Field
    order: str = "grevlex"
    denominator_primes: tuple[int, ...] = ()
    stats: dict = dc_field(default_factory=dict, compare=False)

    @property
    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial for g in self.generators]

    def is_unit_ideal(self) -> bool:
        return any(g.degree == 0 for g in self.generators)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "field": getattr(self.field, "spec", "Q"),
            "nvars": self.nvars,
            "generators": [g.to_json() for g in self.generators],
            "denominator_primes": [str(p) for p in self.denominator_primes],
        }


@dataclass(frozen=True)
class EmptinessCertificate:
    """For each variable ``j``: exponent ``m_j`` and the index of the basis element with leading term ``x_j^m_j``."""

    exponents: tuple[int, ...]
    witnesses: tuple[int, ...]

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "basis_elements": list(self.witnesses)}


@dataclass(frozen=True)
class NonEmpty:
    variable: int

    def __bool__(self):
        return False


# ------------------------------------------------------------------ internals


class _Ring:
    """Coefficient helpers specialised per field."""

    def __init__(self, field: Field):
        self.F = field
        self.is_prime = isinstance(field, PrimeField)
        self.is_q = isinstance(field, Rationals)
        self.p = field.p if self.is_prime else None

    def normalize(self, poly: dict) -> tuple[dict, object]:
        lm = min(poly)
        lc = poly[lm]
        F = self.F
        if self.is_prime:
            inv = pow(lc, -1, self.p)
            p = self.p
            return {m: c * inv % p for m, c in poly.items()}, lc
        if self.is_q:
            return {m: c / lc for m, c in poly.items()}, lc
        inv = F.inv(lc)
        return {m: F.mul(c, inv) for m, c in poly.items()}, lc


def _mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(map(_plus, a, b))


def _divides(a: tuple, b: tuple) -> bool:
    return all(map(_le, a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _reduce(f: dict, basis: list[dict], lms: list[tuple], ring: _Ring, full: bool = True) -> dict:
    """Remainder of ``f`` on division by monic ``basis`` (dicts keyed by reversed exponents)."""
    F = ring.F
    p = ring.p
    f = dict(f)
    heap = list(f)
    heapq.heapify(heap)
    rem = {}
    seen = set()
    while heap:
        m = heapq.heappop(heap)
        if m in seen:
            continue
        seen.add(m)
        c = f.pop(m, None)
        if c is None:
            continue
        div = None
        for g, lm in zip(basis, lms):
            if all(map(_le, lm, m)):
                div = g
                shift = tuple(map(_minus, m, lm))
                break
        if div is None:
            rem[m] = c
            if not full:
                # leading term is irreducible: keep the rest untouched
                rem.update(f)
                return rem
            continue
        for gm, gc in div.items():
            if gm == lm:
                continue
            nm = tuple(map(_plus, gm, shift))
            if ring.is_prime:
                v = (f.get(nm, 0) - c * gc) % p
                if v:
                    f[nm] = v
                else:
                    f.pop(nm, None)
            elif ring.is_q:
                v = f.get(nm, 0) - c * gc
                if v:
                    f[nm] = v
                else:
                    f.pop(nm, None)
            else:
                v = F.sub(f.get(nm, F.zero), F.mul(c, gc))
                if F.is_zero(v):
                    f.pop(nm, None)
                else:
                    f[nm] = v
            if nm not in seen:
                heapq.heappush(heap, nm)
    return rem


def _spoly(f: dict, g: dict, lf: tuple, lg: tuple, ring: _Ring) -> dict:
    lcm = _lcm(lf, lg)
    sf = tuple(map(_minus, lcm, lf))
    sg = tuple(map(_minus, lcm, lg))
    F = ring.F
    out = {}
    for m, c in f.items():
        out[_mono_mul(m, sf)] = c
    for m, c in g.items():
        k = _mono_mul(m, sg)
        v = F.sub(out.get(k, F.zero), c)
        if F.is_zero(v):
            out.pop(k, None)
        else:
            out[k] = v
    return out


def _to_internal(poly: Polynomial) -> dict:
    return {e[::-1]: c for e, c in poly.terms}


def _from_internal(d: dict, nvars: int, field: Field) -> Polynomial:
    items = sorted(d.items())
    return Polynomial(nvars, tuple((m[::-1], c) for m, c in items), field)


def _track(value, sink: set):
    if isinstance(value, Fraction):
        if value.numerator not in (0, 1, -1):
            sink.add(abs(value.numerator))
        if value.denominator != 1:
            sink.add(value.denominator)


def buchberger(
    gens: Iterable[Polynomial],
    field: Field | None = None,
    criteria: bool = True,
    selection: str = "normal",
    seed: int | None = None,
) -> GroebnerBasis:
    """Reduced grevlex Groebner basis of a homogeneous ideal.

    ``selection`` picks the next S-pair: ``"normal"`` (smallest lcm degree,
    then grevlex-smallest lcm), ``"fifo"``, or ``"random"`` (needs ``seed``).
    ``criteria`` toggles the coprime-leading-term and chain criteria.
    """
    gens = list(gens)
    if field is None:
        field = gens[0].field if gens else QQ
    nvars = gens[0].nvars if gens else 0
    if any(g.nvars != nvars for g in gens):
        raise ValueError("generators live in different rings")
    gens = [g for g in gens if not g.is_zero()]
    if selection not in ("normal", "fifo", "random"):
        raise ValueError(f"unknown selection strategy {selection!r}")
    ring = _Ring(field)
    tracked: set[int] = set()
    rng = random.Random(seed)
    stats = {"pairs_created": 0, "pairs_reduced": 0, "criterion1": 0, "criterion2": 0, "zero_reductions": 0}

    basis: list[dict] = []
    lms: list[tuple] = []
    active: list[bool] = []
    pairs: list[tuple] = []  # (degree, lcm, i, j)
    done: set[tuple[int, int]] = set()

    def add(poly: dict):
        poly, lc = ring.normalize(poly)
        _track(lc, tracked)
        lm = min(poly)
        idx = len(basis)
        basis.append(poly)
        lms.append(lm)
        active.append(True)
        for i in range(idx):
            if not active[i]:
                continue
            lcm = _lcm(lms[i], lm)
            if selection == "normal":
                heapq.heappush(pairs, (sum(lcm), lcm, i, idx))
            else:
                pairs.append((sum(lcm), lcm, i, idx))
            stats["pairs_created"] += 1
        # elements whose leading monomial is a multiple of the new one stay for
        # pair bookkeeping but no longer divide anything new
        for i in range(idx):
            if active[i] and _divides(lm, lms[i]) and lms[i] != lm:
                active[i] = False

    ordered = sorted((_to_internal(g) for g in gens), key=lambda d: (sum(min(d)), min(d)))
    for g in ordered:
        if ring.is_q:
            for c in g.values():
                if isinstance(c, Fraction) and c.denominator != 1:
                    tracked.add(c.denominator)
        act = [b for b, a in zip(basis, active) if a]
        act_lm = [m for m, a in zip(lms, active) if a]
        r = _reduce(g, act, act_lm, ring) if act else g
        if r:
            add(r)

    while pairs:
        if selection == "normal":
            deg, lcm, i, j = heapq.heappop(pairs)
        else:
            k = 0 if selection == "fifo" else rng.randrange(len(pairs))
            deg, lcm, i, j = pairs.pop(k)
        if criteria:
            if _coprime(lms[i], lms[j]):
                stats["criterion1"] += 1
                done.add((i, j))
                continue
            if _chain_criterion(i, j, lcm, lms, pairs, done):
                stats["criterion2"] += 1
                done.add((i, j))
                continue
        stats["pairs_reduced"] += 1
        s = _spoly(basis[i], basis[j], lms[i], lms[j], ring)
        done.add((i, j))
        if not s:
            stats["zero_reductions"] += 1
            continue
        act = [b for b, a in zip(basis, active) if a]
        act_lm = [m for m, a in zip(lms, active) if a]
        r = _reduce(s, act, act_lm, ring)
        if not r:
            stats["zero_reductions"] += 1
            continue
        add(r)

    reduced = _interreduce([b for b, a in zip(basis, active) if a], ring)
    for d in reduced:
        for c in d.values():
            if isinstance(c, Fraction) and c.denominator != 1:
                tracked.add(c.denominator)
    polys = tuple(_from_internal(d, nvars, field) for d in reduced)
    primes: set[int] = set()
    if ring.is_q:
        for n in tracked:
            primes.update(factorint(n).keys())
    return GroebnerBasis(polys, nvars, field, "grevlex", tuple(sorted(primes)), stats)


def _chain_criterion(i, j, lcm, lms, pairs, done) -> bool:
    pending = {(a, b) for _, _, a, b in pairs}
    for k in range(len(lms)):
        if k in (i, j):
            continue
        if not _divides(lms[k], lcm):
            continue
        ik = (min(i, k), max(i, k))
        jk = (min(j, k), max(j, k))
        if ik not in pending and jk not in pending:
            return True
    return False


def _interreduce(polys: list[dict], ring: _Ring) -> list[dict]:
    # drop elements whose leading monomial is divisible by another's
    lmset = [(min(p), p) for p in polys]
    keep = []
    for idx, (lm, p) in enumerate(lmset):
        if any(_divides(lm2, lm) and (lm2 != lm or jdx < idx) for jdx, (lm2, _) in enumerate(lmset) if jdx != idx):
            continue
        keep.append((lm, p))
    out = []
    for idx, (lm, p) in enumerate(keep):
        others = [q for jdx, (_, q) in enumerate(keep) if jdx != idx]
        others_lm = [m for jdx, (m, _) in enumerate(keep) if jdx != idx]
        tail = dict(p)
        lc = tail.pop(lm)
        r = _reduce(tail, others, others_lm, ring) if tail else {}
        r[lm] = lc
        out.append(r)
    out.sort(key=min)
    return out


def polynomials_from_quadrics(sys) -> list[Polynomial]:
    """Convert a :class:`~spinor10.quadrics.QuadricSystem` into polynomials over its field."""
    F = sys.field
    n = sys.ambient
    out = []
    for terms in sys.sparse():
        d = {}
        for a, b, c in terms:
            e = [0] * n
            e[a] += 1
            e[b] += 1
            key = tuple(e)
            d[key] = F.add(d.get(key, F.zero), F(c))
        # zero quadrics are kept so that the ring size survives
        out.append(Polynomial.from_dict(n, d, F))
    return out


def normal_form(poly: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of ``poly`` on full reduction by the reduced basis ``gb``."""
    ring = _Ring(gb.field)
    basis = [_to_internal(g) for g in gb.generators]
    lms = [min(b) for b in basis]
    rem = _reduce(_to_internal(poly), basis, lms, ring) if basis else _to_internal(poly)
    return _from_internal(rem, poly.nvars, gb.field)


# --------------------------------------------------------------- certificates


def projective_emptiness_certificate(gb: GroebnerBasis) -> EmptinessCertificate | NonEmpty:
    exps = []
    wit = []
    for j in range(gb.nvars):
        best = None
        for idx, lm in enumerate(gb.leading_monomials):
            if lm[j] and sum(lm) == lm[j]:
                if best is None or lm[j] < best[0]:
                    best = (lm[j], idx)
        if best is None:
            return NonEmpty(j)
        exps.append(best[0])
        wit.append(best[1])
    return EmptinessCertificate(tuple(exps), tuple(wit))


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _minimalize(gens: list[tuple]) -> list[tuple]:
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def hilbert_numerator(monomials: Sequence[tuple], nvars: int) -> list[int]:
    """Numerator ``N(t)`` with ``HS_{S/M}(t) = N(t) / (1 - t)^nvars`` for a monomial ideal ``M``."""
    cache: dict = {}

    def rec(gens: tuple) -> list[int]:
        if not gens:
            return [1]
        if any(not any(g) for g in gens):
            return [0]
        hit = cache.get(gens)
        if hit is not None:
            return hit
        supports = [frozenset(i for i, x in enumerate(g) if x) for g in gens]
        pairwise_coprime = True
        seen = set()
        for s in supports:
            if seen & s:
                pairwise_coprime = False
                break
            seen |= s
        if pairwise_coprime:
            out = [1]
            for g in gens:
                d = sum(g)
                factor = [1] + [0] * (d - 1) + [-1]
                out = _poly_mul(out, factor)
            cache[gens] = out
            return out
        # pivot on the variable occurring most often in non-pure-power generators
        counts = [0] * nvars
        for g, s in zip(gens, supports):
            if len(s) > 1:
                for i in s:
                    counts[i] += 1
        var = max(range(nvars), key=lambda i: counts[i])
        exps = sorted(g[var] for g, s in zip(gens, supports) if g[var] and len(s) > 1)
        e = exps[len(exps) // 2]
        pivot = tuple(e if i == var else 0 for i in range(nvars))
        plus = tuple(_minimalize([g for g in gens if g[var] < e] + [pivot]))
        colon = tuple(_minimalize([tuple(max(0, x - e) if i == var else x for i, x in enumerate(g)) for g in gens]))
        out = _poly_add(rec(plus), [0] * e + rec(colon))
        cache[gens] = out
        return out

    return _trim(rec(tuple(_minimalize([tuple(m) for m in monomials]))))


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _divide_one_minus_t(p: list[int]) -> list[int] | None:
    """Exact division by (1 - t), or None if t = 1 is not a root."""
    if sum(p) != 0:
        return None
    # p(t) = (1 - t) q(t)  =>  q_k = sum_{i<=k} p_i
    q = []
    acc = 0
    for c in p[:-1]:
        acc += c
        q.append(acc)
    return q or [0]


def hilbert_dimension_degree(gb: GroebnerBasis | Sequence[tuple], nvars: int | None = None) -> tuple[int, int]:
    """(projective dimension, degree); dimension -1 (degree 0) means no projective zeros."""
    if isinstance(gb, GroebnerBasis):
        mons, n = gb.leading_monomials, gb.nvars
    else:
        mons, n = list(gb), nvars
    num = hilbert_numerator(mons, n)
    if not any(num):
        return -1, 0
    k = 0
    while True:
        q = _divide_one_minus_t(num)
        if q is None:
            break
        num = q
        k += 1
    krull = n - k
    if krull <= 0:
        return -1, 0
    return krull - 1, sum(num)


def hilbert_function(gb: GroebnerBasis, upto: int) -> list[int]:
    """Values ``H(0..upto)`` of the quotient ring."""
    num = hilbert_numerator(gb.leading_monomials, gb.nvars)
    # multiply by 1/(1-t)^n as a truncated series
    series = num + [0] * (upto + 1)
    series = series[: upto + 1]
    for _ in range(gb.nvars):
        acc = 0
        for i in range(len(series)):
            acc += series[i]
            series[i] = acc
    return series


def rational_certificate_primes(gb: GroebnerBasis) -> list[int]:
    """Primes outside which the Q computation reduces verbatim mod p (empty for finite fields)."""
    if not isinstance(gb.field, Rationals):
        return []
    return list(gb.denominator_primes)


# ------------------------------------------------------ GF(2) leading ideals


class F2LeadingIdeal:
    """Degree-by-degree leading monomials of a quadric ideal over GF(2).

    ``in(I)_d`` is read off the pivots of the Macaulay matrix spanned by all
    ``m * Q_j`` with ``deg m = d - 2`` (columns in descending grevlex order).
    The monomial ideal generated by these pivots up to degree ``D`` sits inside
    ``in(I)``, so its projective dimension bounds that of ``V(I)`` from above.
    This certifies ``dim <= 0`` without assuming generic coordinates; callers
    fall back to :func:`buchberger` when the bound stays positive.
    """

    def __init__(self, nvars: int, max_degree: int = 7):
        import numpy as np

        self.np = np
        self.nvars = nvars
        self.max_degree = max_degree
        self.monomials = {d: self._monomials(d) for d in range(max_degree + 1)}
        self.index = {d: {m: i for i, m in enumerate(ms)} for d, ms in self.monomials.items()}
        self._mul = {}
        for d in range(3, max_degree + 1):
            lower = self.monomials[d - 2]
            quad = self.monomials[2]
            idx = self.index[d]
            self._mul[d] = np.array(
                [[idx[_mono_mul(a, b)] for b in quad] for a in lower], dtype=np.int64
            )

    def _monomials(self, d: int) -> list[tuple]:
        """Natural exponent tuples of degree ``d`` in descending grevlex order."""
        out = []

        def rec(prefix, left, slots):
            if slots == 1:
                out.append(prefix + (left,))
                return
            for k in range(left, -1, -1):
                rec(prefix + (k,), left - k, slots - 1)

        rec((), d, self.nvars)
        out.sort(key=lambda e: e[::-1])
        return out

    def quadric_supports(self, sys) -> list[list[int]]:
        """Column indices (degree 2) of the nonzero monomials of each quadric mod 2."""
        supports = []
        idx2 = self.index[2]
        for terms in sys.sparse():
            cols = []
            for a, b, c in terms:
                if int(c) % 2:
                    e = [0] * self.nvars
                    e[a] += 1
                    e[b] += 1
                    cols.append(idx2[tuple(e)])
            supports.append(sorted(cols))
        return supports

    def leading_monomials(self, supports: list[list[int]], degree: int, impl=None) -> list[tuple]:
        from . import kernels

        np = self.np
        if degree == 2:
            rows = np.zeros((len(supports), len(self.monomials[2])), dtype=bool)
            for j, cols in enumerate(supports):
                rows[j, cols] = True
        else:
            table = self._mul[degree]
            nlow = table.shape[0]
            rows = np.zeros((len(supports) * nlow, len(self.monomials[degree])), dtype=bool)
            for j, cols in enumerate(supports):
                if cols:
                    block = table[:, cols]
                    r = np.repeat(np.arange(j * nlow, (j + 1) * nlow), len(cols))
                    rows[r, block.ravel()] = True
        ncols = rows.shape[1]
        pad = (-ncols) % 64
        if pad:
            rows = np.concatenate([rows, np.zeros((rows.shape[0], pad), dtype=bool)], axis=1)
        packed = np.packbits(rows, axis=1, bitorder="little").view(np.uint64)
        pivots = kernels.gf2_pivots(packed, ncols, impl)
        mons = self.monomials[degree]
        return [mons[int(c)] for c in pivots]

    def dimension_bound(self, sys, impl=None) -> tuple[int, int, list[tuple]]:
        """(upper bound on projective dimension, last degree used, minimal generators found).

        The bound is exact for the monomial ideal ``J`` found so far: ``V(J)`` is a
        union of coordinate subspaces, so ``dim V(J) <= 0`` iff every coordinate
        line is cut out, i.e. every pair ``{i, k}`` supports some generator.
        """
        np = self.np
        supports = self.quadric_supports(sys)
        gens = np.zeros((0, self.nvars), dtype=np.int64)
        bound = self.nvars - 1
        d = 2
        for d in range(2, self.max_degree + 1):
            new = np.array(self.leading_monomials(supports, d, impl), dtype=np.int64).reshape(-1, self.nvars)
            if gens.shape[0] and new.shape[0]:
                divisible = (gens[None, :, :] <= new[:, None, :]).all(axis=2).any(axis=1)
                new = new[~divisible]
            gens = np.concatenate([gens, new])
            bound = _monomial_dimension(gens)
            if bound <= 0:
                break
        return bound, d, [tuple(int(x) for x in g) for g in gens]


def _monomial_dimension(gens) -> int:
    """Projective dimension of ``V(J)`` for a monomial ideal given by exponent rows."""
    masks = {sum(1 << i for i, x in enumerate(g) if x) for g in gens}
    n = len(gens[0]) if len(gens) else 0
    best = -1
    # V(J) is the union of coordinate subspaces spanned by sets T with no generator supported in T
    # largest such T has size dim + 1; search by increasing size is cheap for n <= 16
    from itertools import combinations

    for size in range(1, n + 1):
        hit = False
        for T in combinations(range(n), size):
            tm = sum(1 << i for i in T)
            if not any(m & ~tm == 0 for m in masks):
                hit = True
                break
        if not hit:
            break
        best = size - 1
    return best
