"""Split rank-10 quadratic space, half-spinors and the gamma action.

Conventions (fixed here and nowhere else)
-----------------------------------------
``V`` has basis ``e_1..e_10`` and ``q(x) = x1*x2 + x3*x4 + ... + x9*x10``.
Put ``f_k = e_{2k}``. A spinor is an element of the exterior algebra on
``f_1..f_5``; ``xi_T`` is the coordinate on ``f_T = f_{t1} ^ ... ^ f_{tr}``
(``t1 < ... < tr``). Then

* ``gamma(e_{2k})`` is ``f_k ^ -``,
* ``gamma(e_{2k-1})`` is contraction against ``f_k``,

both with the sign ``(-1)^#{t in T : t < k}``. These satisfy
``gamma(u) gamma(v) + gamma(v) gamma(u) = b(u, v)`` with
``b(u, v) = q(u + v) - q(u) - q(v)``, and all matrices are integral, so
they reduce mod 2.

The pairing is ``beta(xi_A, xi_B) = sign(A, B)`` when ``A`` and ``B`` are
complementary, where ``f_A ^ f_B = sign(A, B) f_12345``, multiplied by the
reversal sign ``(-1)^(|A|(|A|-1)/2)`` of the odd argument.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .fields import QQ, Field
from .linalg import LinearSubspace, kernel

__all__ = [
    "EVEN",
    "ODD",
    "basis_subsets",
    "basis_labels",
    "HalfSpinor",
    "SkewMatrix5",
    "NotPure",
    "gamma_matrix",
    "gamma_apply",
    "gamma_vector_apply",
    "quadratic_form_value",
    "bilinear_form",
    "pfaffian4",
    "pure_spinor",
    "annihilator_of",
    "pairing_matrix",
    "spinor_pairing",
    "chart_translators",
    "chart_point",
    "affine_spinor_family",
    "random_skew",
]

EVEN = "even"
ODD = "odd"
FULL = 0b11111


def _mask(subset) -> int:
    m = 0
    for k in subset:
        m |= 1 << (k - 1)
    return m


def _subsets(r: int) -> list[int]:
    return [_mask(c) for c in combinations(range(1, 6), r)]


@lru_cache(maxsize=None)
def basis_subsets(parity: str) -> tuple[int, ...]:
    """Subsets of {1..5} (as bitmasks) in the canonical coordinate order."""
    if parity == EVEN:
        return tuple(_subsets(0) + _subsets(2) + _subsets(4))
    if parity == ODD:
        return tuple(_subsets(1) + _subsets(3) + _subsets(5))
    raise ValueError(f"unknown parity {parity!r}")


def _label(mask: int) -> str:
    digits = "".join(str(k) for k in range(1, 6) if mask >> (k - 1) & 1)
    return f"xi_{digits or 'phi'}"


@lru_cache(maxsize=None)
def basis_labels(parity: str) -> tuple[str, ...]:
    return tuple(_label(m) for m in basis_subsets(parity))


@lru_cache(maxsize=None)
def _index(parity: str) -> dict[int, int]:
    return {m: i for i, m in enumerate(basis_subsets(parity))}


def _other(parity: str) -> str:
    return ODD if parity == EVEN else EVEN


@dataclass(frozen=True)
class HalfSpinor:
    parity: str
    coords: tuple
    field: Field

    def __post_init__(self):
        if len(self.coords) != 16:
            raise ValueError("a half-spinor has 16 coordinates")

    @classmethod
    def basis_vector(cls, parity: str, subset: Sequence[int], field: Field = QQ) -> "HalfSpinor":
        idx = _index(parity)[_mask(subset)]
        return cls(parity, tuple(field.one if i == idx else field.zero for i in range(16)), field)

    def is_zero(self) -> bool:
        return all(self.field.is_zero(x) for x in self.coords)

    def coordinate(self, subset: Sequence[int]):
        return self.coords[_index(self.parity)[_mask(subset)]]


@dataclass(frozen=True)
class SkewMatrix5:
    """Strict upper triangle ``a_ij``, ``1 <= i < j <= 5``, in lexicographic order."""

    entries: tuple

    PAIRS = tuple(combinations(range(1, 6), 2))

    def __post_init__(self):
        if len(self.entries) != 10:
            raise ValueError("a 5x5 skew matrix has 10 free entries")

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            return 0
        if i < j:
            return self.entries[self.PAIRS.index((i, j))]
        return -self.entries[self.PAIRS.index((j, i))]

    @classmethod
    def zero(cls) -> "SkewMatrix5":
        return cls((0,) * 10)


class NotPure(ValueError):
    def __init__(self, dimension: int):
        super().__init__(f"annihilator has dimension {dimension}, not 5")
        self.dimension = dimension


def _sign_before(mask: int, k: int) -> int:
    below = mask & ((1 << (k - 1)) - 1)
    return -1 if bin(below).count("1") % 2 else 1


@lru_cache(maxsize=None)
def gamma_matrix(j: int, source_parity: str) -> tuple[tuple[int, ...], ...]:
    """Integer 16x16 matrix of ``gamma(e_j)`` from ``source_parity`` spinors to the other parity."""
    if not 1 <= j <= 10:
        raise ValueError("generator index must be in 1..10")
    k = (j + 1) // 2
    bit = 1 << (k - 1)
    src = basis_subsets(source_parity)
    dst_index = _index(_other(source_parity))
    mat = [[0] * 16 for _ in range(16)]
    for col, mask in enumerate(src):
        sign = _sign_before(mask, k)
        if j % 2 == 0:  # wedge with f_k
            if mask & bit:
                continue
            mat[dst_index[mask | bit]][col] = sign
        else:  # contract against f_k
            if not mask & bit:
                continue
            mat[dst_index[mask & ~bit]][col] = sign
    return tuple(tuple(r) for r in mat)


def _apply_int_matrix(mat, coords, field: Field) -> tuple:
    out = []
    for row in mat:
        acc = field.zero
        for c, x in zip(row, coords):
            if c and not field.is_zero(x):
                acc = field.add(acc, x) if c == 1 else field.sub(acc, x)
        out.append(acc)
    return tuple(out)


def gamma_apply(j: int, s: HalfSpinor) -> HalfSpinor:
    return HalfSpinor(_other(s.parity), _apply_int_matrix(gamma_matrix(j, s.parity), s.coords, s.field), s.field)


def gamma_vector_apply(v: Sequence, s: HalfSpinor) -> HalfSpinor:
    """``gamma(v) s`` for ``v`` in V given by its 10 coordinates."""
    F = s.field
    acc = [F.zero] * 16
    for j, c in enumerate(v, start=1):
        c = F(c)
        if F.is_zero(c):
            continue
        img = _apply_int_matrix(gamma_matrix(j, s.parity), s.coords, F)
        acc = [F.add(a, F.mul(c, x)) for a, x in zip(acc, img)]
    return HalfSpinor(_other(s.parity), tuple(acc), F)


def quadratic_form_value(v: Sequence, field: Field = QQ):
    acc = field.zero
    for k in range(5):
        acc = field.add(acc, field.mul(field(v[2 * k]), field(v[2 * k + 1])))
    return acc


def bilinear_form(u: Sequence, v: Sequence, field: Field = QQ):
    acc = field.zero
    for k in range(5):
        acc = field.add(acc, field.mul(field(u[2 * k]), field(v[2 * k + 1])))
        acc = field.add(acc, field.mul(field(u[2 * k + 1]), field(v[2 * k])))
    return acc


def pfaffian4(a: SkewMatrix5, rows: Sequence[int], field: Field = QQ):
    """Pfaffian of the 4x4 principal skew submatrix on ``rows``."""
    rows = tuple(rows)
    if len(rows) != 4 or len(set(rows)) != 4 or not all(1 <= r <= 5 for r in rows):
        raise ValueError(f"rows must be a 4-subset of 1..5, got {rows}")
    i, j, k, l = sorted(rows)
    F = field
    x = lambda u, v: F(a[u, v])  # noqa: E731
    return F.add(F.sub(F.mul(x(i, j), x(k, l)), F.mul(x(i, k), x(j, l))), F.mul(x(i, l), x(j, k)))


def _even_big_cell(a: SkewMatrix5, field: Field) -> tuple:
    coords = []
    for mask in basis_subsets(EVEN):
        members = [k for k in range(1, 6) if mask >> (k - 1) & 1]
        if not members:
            coords.append(field.one)
        elif len(members) == 2:
            coords.append(field(a[members[0], members[1]]))
        else:
            coords.append(pfaffian4(a, members, field))
    return tuple(coords)


def pure_spinor(a: SkewMatrix5, parity: str = EVEN, translator: Sequence | None = None, field: Field = QQ) -> HalfSpinor:
    """Pure spinor ``exp(sum a_ij f_i ^ f_j)``; odd parity applies ``gamma(translator)``."""
    s = HalfSpinor(EVEN, _even_big_cell(a, field), field)
    if parity == EVEN:
        return s
    if parity != ODD:
        raise ValueError(f"unknown parity {parity!r}")
    if translator is None:
        raise ValueError("odd pure spinors need a translator vector")
    if field.is_zero(quadratic_form_value(translator, field)):
        raise ValueError("translator must have invertible q-value")
    return gamma_vector_apply(translator, s)


def annihilator_of(s: HalfSpinor, strict: bool = False) -> LinearSubspace:
    """``{v in V : gamma(v) s = 0}``; with ``strict`` raise :class:`NotPure` unless it is 5-dimensional."""
    if s.is_zero():
        raise ValueError("the zero spinor has no annihilator")
    F = s.field
    cols = [gamma_apply(j, s).coords for j in range(1, 11)]
    rows = [[cols[j][i] for j in range(10)] for i in range(16)]
    basis = kernel(rows, 10, F)
    sub = LinearSubspace(10, tuple(basis), F)
    if strict and sub.dim != 5:
        raise NotPure(sub.dim)
    return sub


def _wedge_sign(a: int, b: int) -> int:
    """Sign of f_a ^ f_b relative to f_{a|b} (disjoint masks)."""
    inversions = 0
    for k in range(1, 6):
        if b >> (k - 1) & 1:
            inversions += bin(a >> k).count("1")
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def pairing_matrix() -> tuple[tuple[int, ...], ...]:
    """Integer matrix ``B`` with ``beta(t, s) = t^T B s`` (rows odd, columns even)."""
    odd = basis_subsets(ODD)
    even_index = _index(EVEN)
    mat = [[0] * 16 for _ in range(16)]
    for r, a in enumerate(odd):
        b = FULL ^ a
        n = bin(a).count("1")
        rev = -1 if (n * (n - 1) // 2) % 2 else 1
        mat[r][even_index[b]] = rev * _wedge_sign(a, b)
    return tuple(tuple(r) for r in mat)


def spinor_pairing(t: HalfSpinor, s: HalfSpinor):
    if t.parity != ODD or s.parity != EVEN:
        raise ValueError("pairing takes an odd spinor and an even spinor")
    F = s.field
    acc = F.zero
    for row, x in zip(pairing_matrix(), t.coords):
        if F.is_zero(x):
            continue
        for c, y in zip(row, s.coords):
            if c and not F.is_zero(y):
                term = F.mul(x, y)
                acc = F.add(acc, term) if c == 1 else F.sub(acc, term)
    return acc


@lru_cache(maxsize=None)
def chart_translators(parity: str) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """(subset mask, unit vector list) for the 16 Clifford translates of the big cell.

    The translate for subset ``T`` is ``prod_{k in T} gamma(e_{2k-1} + e_{2k})``;
    each factor squares to 1, so the product is invertible in every characteristic.
    """
    out = []
    for mask in basis_subsets(parity):
        vecs = []
        for k in range(1, 6):
            if mask >> (k - 1) & 1:
                v = [0] * 10
                v[2 * k - 2] = v[2 * k - 1] = 1
                vecs.append(tuple(v))
        out.append((mask, tuple(vecs)))
    return tuple(out)


def chart_point(a: SkewMatrix5, chart: int, parity: str, field: Field) -> HalfSpinor:
    """Point of chart ``chart`` (index into :func:`chart_translators`) at parameter ``a``."""
    s = HalfSpinor(EVEN, _even_big_cell(a, field), field)
    _, vecs = chart_translators(parity)[chart]
    for v in reversed(vecs):
        s = gamma_vector_apply(v, s)
    return s


def affine_spinor_family(fixed: dict[tuple[int, int], object], pivot: int, chart: int, parity: str, field: Field):
    """Affine 4-space of pure spinors inside a chart.

    Entries ``a_ij`` with ``pivot`` not in ``{i, j}`` are taken from ``fixed``;
    the four entries ``a_{i,pivot}`` vary. Every coordinate of the pure
    spinor is affine-linear in those four, so the family is
    ``base + sum_u x_u * directions[u]``.
    """
    others = [i for i in range(1, 6) if i != pivot]

    def build(free_vals):
        entries = []
        for i, j in SkewMatrix5.PAIRS:
            if pivot in (i, j):
                o = j if i == pivot else i
                entries.append(free_vals[others.index(o)])
            else:
                entries.append(fixed[(i, j)])
        return chart_point(SkewMatrix5(tuple(entries)), chart, parity, field)

    zero = [field.zero] * 4
    base = build(zero)
    directions = []
    for u in range(4):
        vals = list(zero)
        vals[u] = field.one
        pt = build(vals)
        directions.append(tuple(field.sub(x, y) for x, y in zip(pt.coords, base.coords)))
    return base, directions


def random_skew(rng: random.Random, field: Field, low: int = -3, high: int = 3) -> SkewMatrix5:
    if field.is_finite:
        return SkewMatrix5(tuple(field.random_element(rng) for _ in range(10)))
    return SkewMatrix5(tuple(field(rng.randint(low, high)) for _ in range(10)))
