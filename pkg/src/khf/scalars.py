"""Exact scalar types: rationals, Gaussian rationals, and u-monomials.

All arithmetic in the package is exact; no floats anywhere.  Plain
rationals are `fractions.Fraction` (already canonical: positive
denominator, reduced).  Gaussian rationals and u-monomials are small
immutable wrappers defined here, together with their JSON string forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def rat_str(x: Fraction) -> str:
    """Serialize a rational as "p/q", omitting "/q" when q == 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class GaussianRational:
    """An element re + im*i of Q(i), component-wise canonical."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re=0, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def magnitude(self) -> Fraction:
        """max(|re|, |im|); the rational-valued size used in reports."""
        return max(abs(self.re), abs(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_json(self) -> dict:
        return {"re": rat_str(self.re), "im": rat_str(self.im)}

    def __repr__(self):
        return f"({rat_str(self.re)}+{rat_str(self.im)}i)"


def _coerce(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(Fraction(x), Fraction(0))


GR_ZERO = GaussianRational.of(0)
GR_ONE = GaussianRational.of(1)
GR_I = GaussianRational.of(0, 1)


def i_power(k: int) -> GaussianRational:
    """i**k for any integer k."""
    return (GR_ONE, GR_I, -GR_ONE, -GR_I)[k % 4]


@dataclass(frozen=True)
class Monomial:
    """A single term c * u**degree; the zero monomial is Monomial.zero()."""

    coeff: Fraction
    degree: int

    @staticmethod
    def zero() -> "Monomial":
        return Monomial(Fraction(0), 0)

    @staticmethod
    def of(coeff, degree: int = 0) -> "Monomial":
        c = Fraction(coeff)
        if c == 0:
            return Monomial.zero()
        if degree < 0:
            raise ValueError("monomial degree must be >= 0")
        return Monomial(c, degree)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.is_zero() or other.is_zero():
            return Monomial.zero()
        return Monomial(self.coeff * other.coeff, self.degree + other.degree)

    def eval_at_zero(self) -> Fraction:
        return self.coeff if self.degree == 0 else Fraction(0)

    def to_json(self) -> dict:
        return {"c": rat_str(self.coeff), "deg": self.degree}

    def __repr__(self):
        if self.is_zero():
            return "0"
        if self.degree == 0:
            return rat_str(self.coeff)
        return f"{rat_str(self.coeff)}*u^{self.degree}"
