"""Dense exact linear algebra over the fields in :mod:`spinor10.fields`.

Matrices are lists of row lists internally; :class:`ExactMatrix` is the
immutable public carrier. Large integer systems over Q go through
:func:`rational_kernel`, which works modulo 31-bit primes, reconstructs
rationals and then checks the result exactly over Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fields import QQ, Field, PrimeField, Rationals, inverse_mod

__all__ = [
    "ExactMatrix",
    "LinearSubspace",
    "DegenerateInput",
    "rref",
    "rref_rank_kernel",
    "rank",
    "kernel",
    "left_kernel",
    "matmul",
    "determinant",
    "content_normalize",
    "hermite_normal_form",
    "saturate",
    "rational_kernel",
    "rref_mod_p",
    "rational_reconstruction",
]


class DegenerateInput(ValueError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple
    field: Field

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = tuple(field(x) for r in rows for x in r)
        return cls(len(rows), cols, entries, field)

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]


@dataclass(frozen=True)
class LinearSubspace:
    """Row-basis subspace of ``field^ambient``; basis rows are independent."""

    ambient: int
    basis: tuple
    field: Field

    @classmethod
    def span(cls, field: Field, vectors: Sequence[Sequence], ambient: int | None = None) -> "LinearSubspace":
        vectors = [[field(x) for x in v] for v in vectors]
        if ambient is None:
            ambient = len(vectors[0])
        reduced, _ = rref(vectors, field) if vectors else ([], [])
        return cls(ambient, tuple(tuple(r) for r in reduced), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        v = [self.field(x) for x in v]
        return rank([list(b) for b in self.basis] + [v], self.field) == self.dim

    def annihilator(self) -> "LinearSubspace":
        """Linear forms vanishing on the subspace, as coefficient vectors."""
        return LinearSubspace(self.ambient, tuple(kernel([list(b) for b in self.basis], self.ambient, self.field)), self.field)


def rref(rows: list[list], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a copy of ``rows``; returns (nonzero rows, pivot columns)."""
    if isinstance(field, PrimeField):
        return _rref_prime(rows, field.p)
    if isinstance(field, Rationals):
        return _rref_rational(rows)
    return _rref_generic(rows, field)


def _rref_prime(rows, p):
    m = [[x % p for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = inverse_mod(m[r][c], p)
        prow = [x * inv % p for x in m[r]]
        m[r] = prow
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    m[i] = [(x - f * y) % p for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _rref_rational(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        prow = [x / lead for x in m[r]]
        m[r] = prow
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [x - f * y if y else x for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _rref_generic(rows, field):
    m = [[field(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        prow = [field.mul(x, inv) for x in m[r]]
        m[r] = prow
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if not field.is_zero(f):
                    m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _kernel_from_rref(reduced, pivots, ncols, field):
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fcol in free:
        v = [field.zero] * ncols
        v[fcol] = field.one
        for row, pc in zip(reduced, pivots):
            v[pc] = field.neg(row[fcol])
        basis.append(tuple(v))
    return basis


def rref_rank_kernel(m: ExactMatrix):
    """(reduced matrix, rank, kernel basis) with ``m @ k == 0`` for each kernel member."""
    if m.field.characteristic == 0 and not isinstance(m.field, Rationals):
        raise TypeError("row reduction needs a field")
    reduced, pivots = rref(m.to_rows(), m.field)
    rk = len(pivots)
    full = reduced + [[m.field.zero] * m.cols for _ in range(m.rows - rk)]
    red = ExactMatrix(m.rows, m.cols, tuple(x for r in full for x in r), m.field)
    return red, rk, _kernel_from_rref(reduced, pivots, m.cols, m.field)


def rank(rows: list[list], field: Field) -> int:
    if not rows:
        return 0
    return len(rref(rows, field)[1])


def kernel(rows: list[list], ncols: int, field: Field) -> list[tuple]:
    """Right kernel basis of the matrix with the given rows."""
    if not rows:
        return [tuple(field.one if i == j else field.zero for i in range(ncols)) for j in range(ncols)]
    reduced, pivots = rref(rows, field)
    return _kernel_from_rref(reduced, pivots, ncols, field)


def left_kernel(rows: list[list], field: Field) -> list[tuple]:
    """Basis of ``{y : y @ M == 0}``."""
    if not rows:
        return []
    ncols = len(rows[0])
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    return kernel(transposed, len(rows), field)


def matmul(a: list[list], b: list[list], field: Field) -> list[list]:
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = field.zero
            for x, y in zip(row, col):
                if not field.is_zero(x) and not field.is_zero(y):
                    acc = field.add(acc, field.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def determinant(rows: list[list], field: Field):
    m = [list(r) for r in rows]
    n = len(m)
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not field.is_zero(m[i][c])), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = field.neg(det)
        det = field.mul(det, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            f = field.mul(m[i][c], inv)
            if not field.is_zero(f):
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return det


def content_normalize(seq: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector with positive leading entry."""
    fr = [Fraction(x) for x in seq]
    if not any(fr):
        raise DegenerateInput("cannot normalize the zero vector")
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def hermite_normal_form(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form over Z (zero rows dropped)."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        # gcd-combine column c of rows r.. into row r
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            a, b = m[r][c], m[i][c]
            g, s, t = _xgcd(a, b)
            u, v = -b // g, a // g
            ra, rb = m[r], m[i]
            m[r] = [s * x + t * y for x, y in zip(ra, rb)]
            m[i] = [u * x + v * y for x, y in zip(ra, rb)]
        if m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        piv = m[r][c]
        for i in range(r):
            q = m[i][c] // piv
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    return [row for row in m[:r] if any(row)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def saturate(rows: list[list]) -> list[list[int]]:
    """HNF basis of (Q-span of rows) intersected with Z^n.

    Uses the Q-RREF basis R: an integer vector of the span has integer
    pivot coordinates, so the saturation is {y in Z^k : y R integral} R.
    """
    reduced, pivots = _rref_rational(rows)
    den = 1
    for row in reduced:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    if den == 1:
        return hermite_normal_form([[int(x) for x in row] for row in reduced])
    k = len(reduced)
    scaled = [[int(x * den) for x in row] for row in reduced]
    ncols = len(scaled[0])
    # y in Z^k with y @ scaled == 0 mod den: left kernel lattice of [scaled; den*I]
    big = [row[:] + [1 if j == i else 0 for j in range(k)] for i, row in enumerate(scaled)]
    big += [[den if j == c else 0 for j in range(ncols)] + [0] * k for c in range(ncols)]
    h = hermite_normal_form(big)
    ys = [row[ncols:] for row in h if not any(row[:ncols])]
    out = []
    for y in ys:
        v = [sum(Fraction(yi) * row[c] for yi, row in zip(y, reduced)) for c in range(ncols)]
        out.append([int(x) for x in v])
    return hermite_normal_form(out)


# ---------------------------------------------------------------- modular path

_PRIMES31 = [2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497]


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Vectorised RREF modulo a prime ``p < 2**31``."""
    if p >= 2**31:
        raise ValueError("rref_mod_p needs p < 2**31")
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = inverse_mod(int(m[r, c]), p)
        m[r] = m[r] * inv % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            m[rows] = (m[rows] - np.outer(col[rows], m[r]) % p) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """Find n/d == a mod m with |n|, d <= sqrt(m/2)."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def rational_kernel(int_rows: Sequence[Sequence[int]], ncols: int, max_primes: int = 8) -> list[tuple[Fraction, ...]]:
    """Exact Q-kernel of an integer matrix, in reduced echelon form.

    The kernel is computed modulo 31-bit primes, lifted by CRT and rational
    reconstruction, and accepted only after an exact integer check. Rank over
    Q is at least the rank modulo p, so matching dimensions make the answer
    exact.
    """
    a = np.array(int_rows, dtype=object)
    if a.size == 0:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    small = np.abs(a).max() < 2**40
    residues = []
    modulus = 1
    structure = None
    for p in _PRIMES31[:max_primes]:
        red = np.array([[int(x) % p for x in row] for row in int_rows], dtype=np.int64) if not small else (a.astype(np.int64) % p)
        reduced, pivots = rref_mod_p(red, p)
        free = [c for c in range(ncols) if c not in set(pivots)]
        if structure is None or len(pivots) > len(structure[0]):
            structure = (pivots, free)
            residues, modulus = [], 1
        elif pivots != structure[0]:
            continue  # unlucky prime
        kvecs = []
        for fcol in free:
            v = [0] * ncols
            v[fcol] = 1
            for row, pc in zip(reduced, pivots):
                v[pc] = int(-row[fcol] % p)
            kvecs.append(v)
        residues.append((p, kvecs))
        modulus *= p
        lifted = _crt_lift(residues, modulus)
        candidate = []
        ok = True
        for vec in lifted:
            fr = [rational_reconstruction(x, modulus) for x in vec]
            if any(x is None for x in fr):
                ok = False
                break
            candidate.append(tuple(fr))
        if ok and _verify_kernel(int_rows, candidate):
            return candidate
    # fall back to plain rational elimination
    reduced, pivots = _rref_rational([list(r) for r in int_rows])
    return _kernel_from_rref(reduced, pivots, ncols, QQ)


def _crt_lift(residues, modulus):
    nvec = len(residues[0][1])
    ncols = len(residues[0][1][0]) if nvec else 0
    out = []
    for k in range(nvec):
        vec = []
        for c in range(ncols):
            x, m = 0, 1
            for p, kv in residues:
                r = kv[k][c]
                # solve x' = x mod m, x' = r mod p
                t = (r - x) * inverse_mod(m % p, p) % p
                x += m * t
                m *= p
            vec.append(x % modulus)
        out.append(vec)
    return out


def _verify_kernel(int_rows, vectors) -> bool:
    for v in vectors:
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        nz = [(j, x) for j, x in enumerate(iv) if x]
        for row in int_rows:
            if sum(row[j] * x for j, x in nz) != 0:
                return False
    return True
