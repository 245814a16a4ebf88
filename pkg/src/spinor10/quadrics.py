"""The ten quadrics cutting out the spinor tenfold, and the quadratic relation among them."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .clifford import EVEN, ODD, gamma_matrix, pairing_matrix, pure_spinor, random_skew
from .fields import QQ, Field, PrimeField, Rationals
from .linalg import (
    LinearSubspace,
    content_normalize,
    left_kernel,
    rank,
    rational_kernel,
    rref_mod_p,
    saturate,
)

__all__ = [
    "QuadricSystem",
    "RecoveredForm",
    "SamplingDegenerate",
    "NotAMukaiSection",
    "ConventionError",
    "monomial_pairs",
    "interpolate_quadrics",
    "clifford_quadrics",
    "canonical_system",
    "spans_equal",
    "restrict_to_span",
    "recover_quadratic_form",
]

DEFAULT_TRANSLATOR = (1, 1, 0, 0, 0, 0, 0, 0, 0, 0)


class SamplingDegenerate(RuntimeError):
    pass


class ConventionError(RuntimeError):
    pass


class NotAMukaiSection(ValueError):
    def __init__(self, dimension: int):
        super().__init__(f"quadratic relation space has dimension {dimension}, expected 1")
        self.dimension = dimension


@lru_cache(maxsize=None)
def monomial_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Degree-2 monomials ``x_a x_b`` (``a <= b``) in row-major upper-triangle order."""
    return tuple((a, b) for a in range(n) for b in range(a, n))


@dataclass(frozen=True)
class QuadricSystem:
    """Quadrics ``Q(x) = sum_{a<=b} c_ab x_a x_b`` stored by upper-triangle coefficients.

    ``field`` is ``QQ`` for integer systems (coefficients are then ints).
    """

    ambient: int
    coeffs: tuple
    field: Field = QQ
    parity: str | None = None
    note: str = ""

    def __len__(self):
        return len(self.coeffs)

    @property
    def is_integral(self) -> bool:
        return isinstance(self.field, Rationals) and all(isinstance(c, int) for q in self.coeffs for c in q)

    def sparse(self) -> list[list[tuple[int, int, object]]]:
        pairs = monomial_pairs(self.ambient)
        return [[(a, b, c) for (a, b), c in zip(pairs, q) if c] for q in self.coeffs]

    def reduce(self, field: Field) -> "QuadricSystem":
        coeffs = tuple(tuple(field(c) for c in q) for q in self.coeffs)
        return QuadricSystem(self.ambient, coeffs, field, self.parity, self.note)

    def evaluate(self, x: Sequence) -> list:
        F = self.field
        x = [F(v) for v in x]
        out = []
        for terms in self.sparse():
            acc = F.zero
            for a, b, c in terms:
                if not F.is_zero(x[a]) and not F.is_zero(x[b]):
                    acc = F.add(acc, F.mul(F(c), F.mul(x[a], x[b])))
            out.append(acc)
        return out

    def polar_matrix(self, i: int) -> list[list]:
        """Gram matrix of ``B(x, y) = Q(x + y) - Q(x) - Q(y)``; gradient of Q at x is ``P x``."""
        F = self.field
        n = self.ambient
        m = [[F.zero] * n for _ in range(n)]
        for a, b, c in self.sparse()[i]:
            c = F(c)
            if a == b:
                m[a][a] = F.add(m[a][a], F.add(c, c))
            else:
                m[a][b] = F.add(m[a][b], c)
                m[b][a] = F.add(m[b][a], c)
        return m

    def jacobian(self, x: Sequence) -> list[list]:
        """Rows are gradients; integral quadrics polarise cleanly in characteristic 2."""
        F = self.field
        x = [F(v) for v in x]
        rows = []
        for terms in self.sparse():
            g = [F.zero] * self.ambient
            for a, b, c in terms:
                c = F(c)
                if a == b:
                    g[a] = F.add(g[a], F.mul(F.add(c, c), x[a]))
                else:
                    g[a] = F.add(g[a], F.mul(c, x[b]))
                    g[b] = F.add(g[b], F.mul(c, x[a]))
            rows.append(g)
        return rows

    def span_rank(self) -> int:
        return rank([list(q) for q in self.coeffs], self.field)

    def nonzero_count(self) -> int:
        F = self.field
        return sum(1 for q in self.coeffs if any(not F.is_zero(F(c)) for c in q))

    def to_json(self) -> dict:
        return {
            "schema": "spinor10.quadrics/1",
            "parity": self.parity,
            "ambient_dim": self.ambient,
            "field": getattr(self.field, "spec", "Q"),
            "quadrics": [[str(c) for c in q] for q in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "QuadricSystem":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["ambient_dim"])
        width = n * (n + 1) // 2
        rows = []
        for q in data["quadrics"]:
            if len(q) != width:
                raise ValueError(f"expected {width} upper-triangle coefficients, got {len(q)}")
            rows.append(tuple(int(c) for c in q))
        return cls(n, tuple(rows), QQ, data.get("parity"), "json")


@dataclass(frozen=True)
class RecoveredForm:
    """Symmetric matrix of the quadratic relation ``sum_{j<=k} c_jk Q_j Q_k = 0``.

    ``relation`` holds the ``c_jk``; ``matrix`` is the symmetric Gram-style
    matrix with ``c_jk / 2`` off the diagonal (only in characteristic != 2).
    """

    relation: tuple
    matrix: tuple | None
    field: Field
    scale_ambiguous: bool = True

    def rank(self) -> int:
        if self.matrix is None:
            raise ValueError("no symmetric matrix in characteristic 2")
        return rank([list(r) for r in self.matrix], self.field)


def _monomial_row(coords: Sequence[int], n: int) -> list[int]:
    return [coords[a] * coords[b] for a, b in monomial_pairs(n)]


def _sample_spinor(rng, parity):
    a = random_skew(rng, QQ)
    ints = type(a)(tuple(int(x) for x in a.entries))
    s = pure_spinor(ints, parity, DEFAULT_TRANSLATOR if parity == ODD else None, QQ)
    return [int(c) for c in s.coords]


def interpolate_quadrics(parity: str = EVEN, sample_budget: int = 200, seed: int = 0) -> QuadricSystem:
    """Integer basis (saturated, Hermite normal form) of the quadrics through sampled pure spinors."""
    if sample_budget < 150:
        raise ValueError("sample_budget must be at least 150")
    rng = random.Random(seed)
    rows = [_monomial_row(_sample_spinor(rng, parity), 16) for _ in range(sample_budget)]
    ker = rational_kernel(rows, 136)
    if len(ker) != 10:
        raise SamplingDegenerate(f"kernel dimension {len(ker)} after {sample_budget} samples (seed {seed})")
    basis = saturate([list(v) for v in ker])
    coeffs = tuple(content_normalize(r) for r in basis)
    return QuadricSystem(16, coeffs, QQ, parity, f"interpolated seed={seed} budget={sample_budget}")


def clifford_quadrics(parity: str = EVEN) -> QuadricSystem:
    """``Q_j(s) = beta(gamma(e_j) s, s)`` (even) or ``beta(t, gamma(e_j) t)`` (odd), content-normalised."""
    B = np.array(pairing_matrix(), dtype=np.int64)
    coeffs = []
    for j in range(1, 11):
        if parity == EVEN:
            M = B @ np.array(gamma_matrix(j, EVEN), dtype=np.int64)
        elif parity == ODD:
            M = B.T @ np.array(gamma_matrix(j, ODD), dtype=np.int64)
            M = M.T
        else:
            raise ValueError(f"unknown parity {parity!r}")
        M = M + M.T  # polar form; Q = x^T M x / 2
        vec = [int(M[a, a]) // 2 if a == b else int(M[a, b]) for a, b in monomial_pairs(16)]
        if not any(vec):
            raise ConventionError(f"Clifford quadric {j} vanishes identically")
        coeffs.append(content_normalize(vec))
    return QuadricSystem(16, tuple(coeffs), QQ, parity, "clifford")


@lru_cache(maxsize=None)
def canonical_system(parity: str = EVEN) -> QuadricSystem:
    """The canonical integer system: saturated HNF basis of the Clifford quadric span.

    Basis-independent checks compare it against :func:`interpolate_quadrics`.
    """
    cl = clifford_quadrics(parity)
    basis = saturate([list(q) for q in cl.coeffs])
    if len(basis) != 10:
        raise ConventionError("Clifford quadrics are not independent")
    return QuadricSystem(16, tuple(content_normalize(r) for r in basis), QQ, parity, "canonical")


def spans_equal(a: QuadricSystem, b: QuadricSystem, field: Field = QQ) -> bool:
    ra = [[field(c) for c in q] for q in a.coeffs]
    rb = [[field(c) for c in q] for q in b.coeffs]
    r1, r2 = rank(ra, field), rank(rb, field)
    return r1 == r2 == rank(ra + rb, field)


def restrict_to_span(sys: QuadricSystem, sub: LinearSubspace | Sequence[Sequence]) -> QuadricSystem:
    """Rewrite the quadrics in the coordinates ``y`` of ``x = sum_i y_i w_i``.

    Works in every characteristic: the ``y_i^2`` coefficient is ``Q(w_i)`` and
    the ``y_i y_k`` coefficient is the polar form ``B(w_i, w_k)``.
    """
    F = sys.field
    basis = [tuple(F(x) for x in w) for w in (sub.basis if isinstance(sub, LinearSubspace) else sub)]
    m = len(basis)
    if m < 1:
        raise ValueError("subspace must have dimension at least 1")
    out = []
    for terms in sys.sparse():
        terms = [(a, b, F(c)) for a, b, c in terms]
        # image of each basis vector under the polar map, restricted to support
        row = []
        for i, k in monomial_pairs(m):
            wi, wk = basis[i], basis[k]
            acc = F.zero
            for a, b, c in terms:
                if i == k:
                    t = F.mul(wi[a], wi[b])
                else:
                    t = F.add(F.mul(wi[a], wk[b]), F.mul(wk[a], wi[b]))
                if not F.is_zero(t):
                    acc = F.add(acc, F.mul(c, t))
            row.append(acc)
        out.append(tuple(row))
    return QuadricSystem(m, tuple(out), F, sys.parity, f"restricted to {m}-dim span")


def _poly_products(sys: QuadricSystem):
    """Coefficient table of the 55 products ``Q_j Q_k`` over degree-4 monomials."""
    F = sys.field
    sparse = [[(a, b, F(c)) for a, b, c in t] for t in sys.sparse()]
    pairs = list(combinations_with_replacement(range(len(sparse)), 2))
    monos: dict[tuple, int] = {}
    table = []
    for j, k in pairs:
        acc: dict[tuple, object] = {}
        for a, b, c in sparse[j]:
            for d, e, f in sparse[k]:
                key = tuple(sorted((a, b, d, e)))
                val = F.mul(c, f)
                acc[key] = F.add(acc.get(key, F.zero), val)
        entry = {}
        for key, val in acc.items():
            if not F.is_zero(val):
                idx = monos.setdefault(key, len(monos))
                entry[idx] = val
        table.append(entry)
    return pairs, monos, table


def recover_quadratic_form(sys: QuadricSystem) -> RecoveredForm:
    """Find the unique quadratic relation among 10 quadrics; raise :class:`NotAMukaiSection` otherwise."""
    if len(sys.coeffs) != 10:
        raise ValueError("need exactly 10 quadrics")
    F = sys.field
    pairs, monos, table = _poly_products(sys)
    nm = len(monos)
    # unknowns c_jk are columns; each monomial gives one equation
    if isinstance(F, Rationals):
        den = 1
        for q in sys.coeffs:
            for c in q:
                den = den * Fraction(c).denominator
        eqs = [[0] * len(pairs) for _ in range(nm)]
        for col, entry in enumerate(table):
            for idx, val in entry.items():
                eqs[idx][col] = int(val * den * den)
        ker = rational_kernel(eqs, len(pairs))
    elif isinstance(F, PrimeField) and F.p < 2**31:
        mat = np.zeros((nm, len(pairs)), dtype=np.int64)
        for col, entry in enumerate(table):
            for idx, val in entry.items():
                mat[idx, col] = val
        reduced, pivots = rref_mod_p(mat, F.p)
        free = [c for c in range(len(pairs)) if c not in set(pivots)]
        ker = []
        for fcol in free:
            v = [0] * len(pairs)
            v[fcol] = 1
            for row, pc in zip(reduced, pivots):
                v[pc] = int(-row[fcol] % F.p)
            ker.append(tuple(v))
    else:
        cols = [[entry.get(i, F.zero) for i in range(nm)] for entry in table]
        ker = left_kernel(cols, F)
    if len(ker) != 1:
        raise NotAMukaiSection(len(ker))
    rel = ker[0]
    if isinstance(F, Rationals):
        rel = tuple(Fraction(x) for x in content_normalize(rel))
    else:
        lead = next(x for x in rel if not F.is_zero(x))
        inv = F.inv(lead)
        rel = tuple(F.mul(x, inv) for x in rel)
    matrix = None
    if F.characteristic != 2:
        half = F.inv(F(2))
        m = [[F.zero] * 10 for _ in range(10)]
        for (j, k), c in zip(pairs, rel):
            if j == k:
                m[j][j] = c
            else:
                m[j][k] = m[k][j] = F.mul(c, half)
        matrix = tuple(tuple(r) for r in m)
    return RecoveredForm(tuple(rel), matrix, F)
