"""Exact base fields: prime fields, a few quadratic extensions, and the rationals.

Elements are plain Python values so they hash and compare cheaply:

* ``PrimeField(p)``: ints in ``range(p)``.
* ``QuadraticExtension(p)``: ints ``a + b*p`` standing for ``a + b*t`` where
  ``t`` is a root of the stored irreducible polynomial.
* ``Rationals()``: ``fractions.Fraction``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from sympy import isprime

__all__ = [
    "Field",
    "ExtElement",
    "PrimeField",
    "QuadraticExtension",
    "Rationals",
    "QQ",
    "GF",
    "field_from_spec",
    "EXTENSION_POLYNOMIALS",
]

# monic t^2 + c1*t + c0 irreducible mod p, stored as (c0, c1)
EXTENSION_POLYNOMIALS = {2: (1, 1), 3: (1, 0), 5: (2, 0), 7: (1, 0)}


class Field:
    """Common interface. Subclasses fill in the arithmetic."""

    characteristic: int
    order: int | None
    zero = 0
    one = 1

    def __call__(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def random_element(self, rng: random.Random):
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def __repr__(self) -> str:
        return self.name


class PrimeField(Field):
    def __init__(self, p: int):
        if p >= 2**62 or not isprime(p):
            raise ValueError(f"{p} is not a word-sized prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.name = f"F_{p}"
        self.spec = str(p)

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return inverse_mod(a, self.p)

    def elements(self):
        return range(self.p)

    def random_element(self, rng):
        return rng.randrange(self.p)

    def to_int(self, a) -> int:
        """Symmetric lift to an integer."""
        return a - self.p if a > self.p // 2 else a

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))


def inverse_mod(a: int, p: int) -> int:
    """Inverse of ``a`` modulo ``p`` by the extended Euclidean algorithm."""
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ZeroDivisionError(f"{a} is not invertible mod {p}")
    return s0 % p


class ExtElement(int):
    """An encoded GF(p^2) element; distinct from plain ints so coercion is unambiguous."""

    __slots__ = ()


class QuadraticExtension(Field):
    """GF(p^2) for p in {2, 3, 5, 7} with table arithmetic."""

    def __init__(self, p: int):
        if p not in EXTENSION_POLYNOMIALS:
            raise ValueError(f"GF({p}^2) is only provided for p in {sorted(EXTENSION_POLYNOMIALS)}")
        self.p = p
        self.characteristic = p
        self.order = q = p * p
        self.name = f"F_{p}^2"
        self.spec = f"{p}:2"
        self.modulus = EXTENSION_POLYNOMIALS[p]
        c0, c1 = self.modulus
        if any((x * x + c1 * x + c0) % p == 0 for x in range(p)):
            raise ValueError("stored extension polynomial is reducible")

        def mul(x, y):
            a, b = x % p, x // p
            c, d = y % p, y // p
            # (a + b t)(c + d t) with t^2 = -c1 t - c0
            bd = b * d
            lo = (a * c - bd * c0) % p
            hi = (a * d + b * c - bd * c1) % p
            return lo + hi * p

        E = ExtElement
        self.zero, self.one = E(0), E(1)
        self._add = [[E((x % p + y % p) % p + ((x // p + y // p) % p) * p) for y in range(q)] for x in range(q)]
        self._mul = [[E(mul(x, y)) for y in range(q)] for x in range(q)]
        self._neg = [E((-(x % p)) % p + ((-(x // p)) % p) * p) for x in range(q)]
        self._inv = [E(0)] * q
        for x in range(1, q):
            for y in range(1, q):
                if self._mul[x][y] == 1:
                    self._inv[x] = E(y)
                    break
        self.generator = E(p)  # the element t

    def __call__(self, x):
        if isinstance(x, ExtElement):
            return x
        if isinstance(x, Fraction):
            num = x.numerator % self.p
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return ExtElement(num * pow(den, -1, self.p) % self.p)
        return ExtElement(int(x) % self.p)

    def embed_pair(self, a: int, b: int) -> ExtElement:
        return ExtElement(a % self.p + (b % self.p) * self.p)

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return self._inv[a]

    def elements(self):
        return [ExtElement(x) for x in range(self.order)]

    def random_element(self, rng):
        return ExtElement(rng.randrange(self.order))

    def __eq__(self, other):
        return isinstance(other, QuadraticExtension) and other.p == self.p

    def __hash__(self):
        return hash(("ext2", self.p))


class Rationals(Field):
    characteristic = 0
    order = None
    name = "Q"
    spec = "Q"

    def __call__(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def random_element(self, rng):
        return Fraction(rng.randint(-3, 3))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int, degree: int = 1) -> Field:
    if degree == 1:
        return PrimeField(p)
    if degree == 2:
        return QuadraticExtension(p)
    raise ValueError("only degrees 1 and 2 are supported")


def field_from_spec(spec: str) -> Field:
    """Parse ``"p"``, ``"p:2"`` or ``"Q"``."""
    spec = spec.strip()
    if spec.upper() in ("Q", "QQ"):
        return QQ
    if ":" in spec:
        p, d = spec.split(":", 1)
        return GF(int(p), int(d))
    return GF(int(spec))
