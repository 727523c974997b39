"""Exact integer/rational helpers and the Q/Z and Z/m representative conventions.

Every Kreck-Stolz value is a :class:`QModZ`, reduced into (-1/2, 1/2]; every
linking number is a :class:`SignedResidue`, reduced into the symmetric residue
system of its odd modulus. Equality of both is exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple, Union

from .errors import InvalidParameters, NotInvertible

Triple = Tuple[int, int, int]
Rational = Union[int, Fraction]

HALF = Fraction(1, 2)


def sym_polys(t: Triple) -> Triple:
    """Elementary symmetric functions (sigma1, sigma2, sigma3) of an integer triple."""
    a, b, c = t
    return a + b + c, a * b + a * c + b * c, a * b * c


def pairwise_coprime(values: Tuple[int, ...]) -> bool:
    return all(
        gcd(values[i], values[j]) == 1
        for i in range(len(values))
        for j in range(i + 1, len(values))
    )


@dataclass(frozen=True, order=True)
class QModZ:
    """A class in Q/Z, stored as its representative in (-1/2, 1/2]."""

    value: Fraction

    def __post_init__(self) -> None:
        if not (-HALF < self.value <= HALF):
            raise InvalidParameters(f"{self.value} is not in (-1/2, 1/2]; use qmodz()")

    def __neg__(self) -> "QModZ":
        return qmodz(-self.value)

    def __add__(self, other: Union["QModZ", Rational]) -> "QModZ":
        rhs = other.value if isinstance(other, QModZ) else Fraction(other)
        return qmodz(self.value + rhs)

    def __sub__(self, other: Union["QModZ", Rational]) -> "QModZ":
        rhs = other.value if isinstance(other, QModZ) else Fraction(other)
        return qmodz(self.value - rhs)

    def __mul__(self, n: int) -> "QModZ":
        return qmodz(self.value * n)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_fraction(self.value)

    @classmethod
    def parse(cls, text: str) -> "QModZ":
        return qmodz(Fraction(text.replace(" ", "")))


def qmodz(q: Rational) -> QModZ:
    """Reduce a rational into its Q/Z representative in (-1/2, 1/2]."""
    q = Fraction(q)
    # frac is in [0, 1); shift the upper half down so that -1/2 lands on 1/2
    frac = q - (q.numerator // q.denominator)
    if frac > HALF:
        frac -= 1
    return QModZ(frac)


@dataclass(frozen=True)
class SignedResidue:
    """A residue class mod an odd modulus, stored in [-(m-1)/2, (m-1)/2]."""

    value: int
    modulus: int

    def __neg__(self) -> "SignedResidue":
        return signed_residue(-self.value, self.modulus)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    def congruent(self, other: "SignedResidue") -> bool:
        return self.modulus == other.modulus and self.value == other.value


def signed_residue(a: int, m: int) -> SignedResidue:
    if m < 1 or m % 2 == 0:
        raise InvalidParameters(f"modulus must be a positive odd integer, got {m}")
    half = (m - 1) // 2
    v = a % m
    if v > half:
        v -= m
    return SignedResidue(v, m)


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m in [1, m-1] (0 when m == 1)."""
    if m < 1:
        raise InvalidParameters(f"modulus must be positive, got {m}")
    if m == 1:
        return 0
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible modulo {m}")


def res1(n: int, p: int) -> int:
    """The residue [n]_p taken in {1, ..., p} instead of {0, ..., p-1}."""
    if p < 1:
        raise InvalidParameters(f"res1 needs p >= 1, got {p}")
    return (n - 1) % p + 1


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"
