"""Exact complex scalars with rational real and imaginary parts.

All polynomial coefficients in this package are instances of
:class:`ComplexRational`, so ring arithmetic, involution, and normal forms
are exact.  Floating point enters only at the numeric boundary (character
values, quadrature, matrix factorizations).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "ComplexRational"]


class ComplexRational:
    """A complex number a + b*i with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ComplexRational is immutable")

    @staticmethod
    def coerce(value: ScalarLike) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, Fraction)):
            return ComplexRational(value)
        raise TypeError(f"cannot interpret {value!r} as an exact complex scalar")

    # ---- arithmetic ----

    def __add__(self, other: ScalarLike) -> "ComplexRational":
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "ComplexRational":
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: ScalarLike) -> "ComplexRational":
        o = ComplexRational.coerce(other)
        return ComplexRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other: ScalarLike) -> "ComplexRational":
        o = ComplexRational.coerce(other)
        return ComplexRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "ComplexRational":
        o = ComplexRational.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero scalar")
        return ComplexRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __pow__(self, n: int) -> "ComplexRational":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def one_norm(self) -> Fraction:
        """|Re| + |Im|, an exact upper bound for the modulus."""
        return abs(self.re) + abs(self.im)

    # ---- predicates and conversions ----

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def literal(self) -> str:
        """Canonical source spelling: "3", "-1/2", or "(a+bi)"."""
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __repr__(self) -> str:
        return f"ComplexRational({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        return self.literal()


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)
