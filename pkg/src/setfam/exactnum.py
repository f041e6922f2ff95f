"""Exact dyadic rationals and big-integer binomials."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import gcd

from setfam.errors import DomainError

DECIMAL_MAX_EXP = 20


@total_ordering
class DyadicRational:
    """The number ``numerator / 2**exponent``, always stored canonically
    (odd numerator, or ``0/2^0``)."""

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        else:
            tz = (numerator & -numerator).bit_length() - 1
            shift = min(tz, exponent)
            numerator >>= shift
            exponent -= shift
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    @staticmethod
    def _coerce(other) -> "DyadicRational":
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other, 0)
        return NotImplemented

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return (
            self.numerator << (e - self.exponent),
            other.numerator << (e - other.exponent),
            e,
        )

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, e = self._aligned(other)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self.numerator, self.exponent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return DyadicRational(
            self.numerator * other.numerator, self.exponent + other.exponent
        )

    __rmul__ = __mul__

    def scale(self, k: int) -> "DyadicRational":
        """Multiply by 2**k (k may be negative)."""
        return DyadicRational(self.numerator, self.exponent - k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.numerator == other.numerator and self.exponent == other.exponent

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, _ = self._aligned(other)
        return a < b

    def __hash__(self):
        return hash((self.numerator, self.exponent))

    def __bool__(self):
        return self.numerator != 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self):
        return f"DyadicRational({self.numerator}, {self.exponent})"

    def to_decimal(self) -> str:
        """Exact decimal expansion; only offered for exponents up to 20."""
        if self.exponent > DECIMAL_MAX_EXP:
            raise DomainError(f"exponent {self.exponent} too large for decimal rendering")
        e = self.exponent
        digits = abs(self.numerator) * 5**e
        sign = "-" if self.numerator < 0 else ""
        if e == 0:
            return f"{sign}{digits}"
        s = str(digits).rjust(e + 1, "0")
        return f"{sign}{s[:-e]}.{s[-e:]}"

    def render(self) -> str:
        if self.exponent <= DECIMAL_MAX_EXP:
            return f"{self} = {self.to_decimal()}"
        return str(self)

    def to_json(self) -> dict:
        return {"num": str(self.numerator), "exp": self.exponent}

    @classmethod
    def from_json(cls, obj: dict) -> "DyadicRational":
        return cls(int(obj["num"]), int(obj["exp"]))


def dyadic(num: int, exp: int) -> DyadicRational:
    if exp < 0:
        raise DomainError("exponent must be non-negative")
    return DyadicRational(num, exp)


def binomial(n: int, k: int) -> int:
    """C(n, k) by the multiplicative formula; 0 outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    k = min(k, n - k)
    result = 1
    for i in range(1, k + 1):
        num = n - k + i
        g = gcd(result, i)
        result = (result // g) * (num // (i // g))
    return result


def weight_Fn(n: int) -> DyadicRational:
    """1/4 + 2^-n * (n - C(n-1, (n-1)/2) / 2), for odd n >= 7."""
    if n < 7 or n % 2 == 0:
        raise DomainError(f"F_n is defined for odd n >= 7, got {n}")
    central = binomial(n - 1, (n - 1) // 2)
    return DyadicRational(1, 2) + DyadicRational(2 * n - central, n + 1)
