"""
Exact scalar arithmetic for the q-deformed calculi.

Scalars are Laurent polynomials in q^{1/2} with Gaussian-rational coefficients.
Exponents are stored doubled so that q^{1/2} stays integral. The deformation
parameter is never evaluated: |q| = 1 enters only through the star action
q -> q^{-1}, and the classical limit q = exp(ih) is a truncated series in h.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Union[int, Fraction]


@dataclass(frozen=True, slots=True)
class GaussRat:
    """A Gaussian rational re + im*i, kept in lowest terms by Fraction."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value: Union["GaussRat", Rational]) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"Cannot use {type(value).__name__} as a Gaussian rational")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        other = GaussRat.coerce(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRat.coerce(other))

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        other = GaussRat.coerce(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def inverse(self) -> "GaussRat":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("Gaussian rational zero has no inverse")
        return GaussRat(self.re / norm, -self.im / norm)

    def __pow__(self, exponent: int) -> "GaussRat":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = GaussRat(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __str__(self) -> str:
        if not self.im:
            return _fmt_rational(self.re)
        if not self.re:
            return _fmt_imaginary(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"({_fmt_rational(self.re)} {sign} {_fmt_imaginary(abs(self.im))})"


IMAGINARY_UNIT = GaussRat(0, 1)


def _fmt_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _fmt_imaginary(value: Fraction) -> str:
    if value == 1:
        return "i"
    if value == -1:
        return "-i"
    return f"{_fmt_rational(value)} i"


def _fmt_exponent(doubled: int) -> str:
    if doubled % 2 == 0:
        return str(doubled // 2)
    return f"({doubled}/2)"


@dataclass(frozen=True, slots=True)
class QLaurent:
    """
    Laurent polynomial in q^{1/2} over the Gaussian rationals.

    ``terms`` holds (doubled exponent, coefficient) pairs sorted by exponent with
    no zero coefficients, so structural equality is algebraic equality and the
    zero polynomial is the empty tuple.
    """

    terms: Tuple[Tuple[int, GaussRat], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, GaussRat]) -> "QLaurent":
        return cls(tuple((k, c) for k, c in sorted(mapping.items()) if c))

    @classmethod
    def monomial(cls, exponent: Rational = 0, coeff=1) -> "QLaurent":
        """c * q^exponent; the exponent may be an integer or a half-integer."""
        doubled = Fraction(exponent) * 2
        if doubled.denominator != 1:
            raise ValueError(f"Exponent {exponent} is not a half-integer")
        return cls.from_mapping({int(doubled): GaussRat.coerce(coeff)})

    @classmethod
    def zero(cls) -> "QLaurent":
        return cls()

    @classmethod
    def one(cls) -> "QLaurent":
        return cls.monomial(0, 1)

    @classmethod
    def coerce(cls, value) -> "QLaurent":
        if isinstance(value, QLaurent):
            return value
        return cls.monomial(0, GaussRat.coerce(value))

    def as_dict(self) -> Dict[int, GaussRat]:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other) -> "QLaurent":
        other = QLaurent.coerce(other)
        acc = self.as_dict()
        for k, c in other.terms:
            acc[k] = acc.get(k, GaussRat()) + c
        return QLaurent.from_mapping(acc)

    __radd__ = __add__

    def __neg__(self) -> "QLaurent":
        return QLaurent(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other) -> "QLaurent":
        return self + (-QLaurent.coerce(other))

    def __rsub__(self, other) -> "QLaurent":
        return QLaurent.coerce(other) - self

    def __mul__(self, other) -> "QLaurent":
        if not isinstance(other, QLaurent):
            try:
                other = QLaurent.coerce(other)
            except TypeError:
                return NotImplemented
        acc: Dict[int, GaussRat] = {}
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                acc[k1 + k2] = acc.get(k1 + k2, GaussRat()) + c1 * c2
        return QLaurent.from_mapping(acc)

    def __rmul__(self, other) -> "QLaurent":
        return self * other

    def __pow__(self, exponent: int) -> "QLaurent":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QLaurent.one()
        for _ in range(exponent):
            result = result * self
        return result

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def constant_term(self) -> GaussRat:
        return self.as_dict().get(0, GaussRat())

    def star(self) -> "QLaurent":
        """q -> q^{-1} together with complex conjugation of the coefficients."""
        return QLaurent.from_mapping({-k: c.conjugate() for k, c in self.terms})

    def invert_q(self) -> "QLaurent":
        """q -> q^{-1} keeping the coefficients."""
        return QLaurent.from_mapping({-k: c for k, c in self.terms})

    def inverse(self) -> "QLaurent":
        if not self.is_monomial:
            raise ZeroDivisionError(f"{self} is not a unit of the Laurent ring")
        ((k, c),) = self.terms
        return QLaurent(((-k, c.inverse()),))

    def expand_h(self, order: int) -> "HSeries":
        """
        Substitutes q = exp(ih) and truncates at h^order.

        q^k contributes (ik)^m / m! to the coefficient of h^m; half-integer k
        are handled exactly.
        """
        if order < 0:
            raise ValueError("Truncation order must be non-negative")
        coeffs = [GaussRat() for _ in range(order + 1)]
        for doubled, c in self.terms:
            ik = GaussRat(0, Fraction(doubled, 2))
            for m in range(order + 1):
                coeffs[m] = coeffs[m] + c * (ik**m) * GaussRat(Fraction(1, factorial(m)))
        return HSeries(order, tuple(coeffs))

    def monomials(self) -> Iterable[Tuple[Fraction, GaussRat]]:
        for doubled, c in self.terms:
            yield Fraction(doubled, 2), c

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for doubled, c in self.terms:
            if doubled == 0:
                parts.append(str(c))
                continue
            power = "q" if doubled == 2 else f"q^{_fmt_exponent(doubled)}"
            if c == GaussRat(1):
                parts.append(power)
            elif c == GaussRat(-1):
                parts.append(f"-{power}")
            else:
                parts.append(f"{c} {power}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


@dataclass(frozen=True, slots=True)
class HSeries:
    """Power series in h truncated at ``order``; coefficient m belongs to h^m."""

    order: int
    coeffs: Tuple[GaussRat, ...]

    def __post_init__(self):
        if self.order < 0 or len(self.coeffs) != self.order + 1:
            raise ValueError("HSeries needs exactly order + 1 coefficients")

    @classmethod
    def constant(cls, value, order: int) -> "HSeries":
        coeffs = [GaussRat()] * (order + 1)
        coeffs[0] = GaussRat.coerce(value)
        return cls(order, tuple(coeffs))

    def coefficient(self, power: int) -> GaussRat:
        if 0 <= power <= self.order:
            return self.coeffs[power]
        return GaussRat()

    def _check_order(self, other: "HSeries"):
        if other.order != self.order:
            raise ValueError(f"Truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "HSeries") -> "HSeries":
        self._check_order(other)
        return HSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "HSeries") -> "HSeries":
        self._check_order(other)
        coeffs = [GaussRat()] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            for j in range(self.order + 1 - i):
                coeffs[i + j] = coeffs[i + j] + a * other.coeffs[j]
        return HSeries(self.order, tuple(coeffs))

    def truncate(self, order: int) -> "HSeries":
        if order > self.order:
            raise ValueError("Cannot truncate to a higher order")
        return HSeries(order, self.coeffs[: order + 1])

    def __str__(self) -> str:
        parts = []
        for m, c in enumerate(self.coeffs):
            if not c:
                continue
            if m == 0:
                parts.append(str(c))
            else:
                power = "h" if m == 1 else f"h^{m}"
                parts.append(power if c == GaussRat(1) else f"{c} {power}")
        return " + ".join(parts) if parts else "0"


def ql_add(a: QLaurent, b: QLaurent) -> QLaurent:
    return a + b


def ql_mul(a: QLaurent, b: QLaurent) -> QLaurent:
    return a * b


def ql_star(a: QLaurent) -> QLaurent:
    return a.star()


def ql_expand_h(a: QLaurent, order: int) -> HSeries:
    return a.expand_h(order)


def q(exponent: Rational = 1) -> QLaurent:
    """Shorthand for q^exponent."""
    return QLaurent.monomial(exponent)
