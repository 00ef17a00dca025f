"""Exact scalar domains: the rationals and small prime fields.

Scalars are plain Python values: ``fractions.Fraction`` over the rationals,
``int`` in the range ``0..p-1`` over GF(p).  A ``Field`` object carries the
arithmetic; vectors and matrices are ordinary tuples of scalars so they hash
and compare structurally.
"""

from __future__ import annotations

from fractions import Fraction

MAX_PRIME = 257


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """The rationals (``p == 0``) or the prime field GF(p), 2 <= p <= 257."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p != 0:
            if not _is_prime(p) or not 2 <= p <= MAX_PRIME:
                raise ValueError(f"modulus must be a prime in 2..{MAX_PRIME}, got {p}")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_rationals(self) -> bool:
        return self.p == 0

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    # scalar arithmetic -------------------------------------------------

    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def coerce(self, x):
        """Bring an int / Fraction / scalar string into this field."""
        if isinstance(x, str):
            return self.parse_scalar(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator not invertible mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if self.p:
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # enumeration and serialization -------------------------------------

    def elements(self):
        """All scalars, only available over a finite field."""
        if self.p == 0:
            raise ValueError("cannot enumerate the rationals")
        return range(self.p)

    def parse_scalar(self, s: str):
        if self.p == 0:
            return Fraction(s)
        return int(s) % self.p

    def format_scalar(self, a) -> str:
        if self.p == 0:
            f = Fraction(a)
            return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)
        return str(a % self.p)

    def to_json(self):
        return "Q" if self.p == 0 else {"p": self.p}

    @classmethod
    def from_json(cls, doc) -> "Field":
        if doc == "Q":
            return cls(0)
        if isinstance(doc, dict) and "p" in doc:
            return cls(int(doc["p"]))
        if isinstance(doc, int):
            return cls(doc)
        raise ValueError(f"bad field document: {doc!r}")


QQ = Field(0)
