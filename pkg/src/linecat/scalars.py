"""Exact scalars of the form sum_i c_i * exp(q_i) with rational c_i, q_i.

All structure constants in this package are of this shape (areas enter as
exponents, combinatorial factors as rational coefficients), so arithmetic
closes over these scalars and equality is decidable on the term maps:
exponentials of distinct rationals are linearly independent over Q.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

RationalLike = Union[int, str, Fraction]


def rat(value: RationalLike) -> Fraction:
    """Coerce ints and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational: {value!r}")


def rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class ExpScalar:
    """Immutable scalar sum(c * exp(q)), stored as a map q -> c without zeros."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Fraction, Fraction] | None = None):
        clean = {}
        if terms:
            for q, c in terms.items():
                if c != 0:
                    clean[q] = c
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "ExpScalar":
        return ExpScalar()

    @staticmethod
    def one() -> "ExpScalar":
        return ExpScalar({Fraction(0): Fraction(1)})

    @staticmethod
    def of(coeff: RationalLike, exponent: RationalLike = 0) -> "ExpScalar":
        """The scalar coeff * exp(exponent)."""
        return ExpScalar({rat(exponent): rat(coeff)})

    @staticmethod
    def exp(exponent: RationalLike) -> "ExpScalar":
        return ExpScalar.of(1, exponent)

    # -- ring structure ----------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __add__(self, other: "ExpScalar") -> "ExpScalar":
        out = dict(self._terms)
        for q, c in other._terms.items():
            s = out.get(q, Fraction(0)) + c
            if s == 0:
                out.pop(q, None)
            else:
                out[q] = s
        return ExpScalar(out)

    def __sub__(self, other: "ExpScalar") -> "ExpScalar":
        return self + (-other)

    def __neg__(self) -> "ExpScalar":
        return ExpScalar({q: -c for q, c in self._terms.items()})

    def __mul__(self, other: "ExpScalar") -> "ExpScalar":
        out: dict = {}
        for q1, c1 in self._terms.items():
            for q2, c2 in other._terms.items():
                q = q1 + q2
                s = out.get(q, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(q, None)
                else:
                    out[q] = s
        return ExpScalar(out)

    def scale(self, c: RationalLike) -> "ExpScalar":
        c = rat(c)
        return ExpScalar({q: c * v for q, v in self._terms.items()})

    def shift(self, exponent: RationalLike) -> "ExpScalar":
        """Multiply by exp(exponent)."""
        e = rat(exponent)
        return ExpScalar({q + e: c for q, c in self._terms.items()})

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        """True iff every term has exponent zero."""
        return all(q == 0 for q in self._terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a pure rational scalar: {self}")
        return self._terms.get(Fraction(0), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    # -- canonical text form ------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for q in sorted(self._terms):
            c = self._terms[q]
            if q == 0:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(f"exp({rat_str(q)})")
            elif c == -1:
                parts.append(f"-exp({rat_str(q)})")
            else:
                parts.append(f"{rat_str(c)}*exp({rat_str(q)})")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"ExpScalar({self})"


def scalar_combine(a: ExpScalar, b: ExpScalar, op: str) -> ExpScalar:
    """Combine two scalars; op is 'add' or 'mul'."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def scalar_is_zero(a: ExpScalar) -> bool:
    return a.is_zero()


def scalar_sum(items: Iterable[ExpScalar]) -> ExpScalar:
    total = ExpScalar.zero()
    for item in items:
        total = total + item
    return total


ZERO = ExpScalar.zero()
ONE = ExpScalar.one()
