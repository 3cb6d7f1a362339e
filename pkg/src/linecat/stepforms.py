"""Graded commutative algebra of step functions and delta one-forms.

Generators: a unit, step functions th(x) jumping at rational points x, and
delta one-forms dl(x) = d(th(x)).  Degree-0 elements are spanned by the unit
and powers th(x)^n; degree-1 elements by th(x)^(n-1)*dl(x).  Multiplication:

    th(u)^m * th(w)^n = th(w)^n          for u < w   (the later jump wins)
    th(u)^m * th(u)^n = th(u)^(m+n)      (no idempotency)
    th(u)^m * dl-monomial at w           = value of th(u)^m at w times it,
                                           with same-point powers absorbed
    dl * dl = 0

Step functions evaluate with the half-value convention at their own jump,
raised to the power: th(x)^n has value (1/2)^n at x.  Coefficients are
ExpScalar.  Equal points are identified by their x-coordinate.

The constrained subspace (no unit, degree-0 coefficients summing to zero)
models combinations decaying at both infinities; degree 1 is unconstrained.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .scalars import ExpScalar, rat, rat_str, scalar_sum

# key (x, n): degree 0 reads th(x)^n, degree 1 reads th(x)^(n-1)*dl(x), n >= 1
Key = tuple


@dataclass(frozen=True)
class StepElement:
    degree: int
    const: ExpScalar  # coefficient of the unit; zero in degree 1
    terms: tuple      # sorted tuple of ((x, n), ExpScalar)

    def __post_init__(self):
        assert self.degree in (0, 1)
        assert self.degree == 0 or self.const.is_zero()

    # -- constructors --------------------------------------------------------

    @staticmethod
    def make(degree: int, const: ExpScalar | None = None,
             terms: Mapping[Key, ExpScalar] | None = None) -> "StepElement":
        const = const if const is not None else ExpScalar.zero()
        clean = []
        if terms:
            for (x, n), c in terms.items():
                assert n >= 1
                if not c.is_zero():
                    clean.append(((x, n), c))
        clean.sort(key=lambda kv: kv[0])
        return StepElement(degree, const, tuple(clean))

    @staticmethod
    def zero(degree: int = 0) -> "StepElement":
        return StepElement.make(degree)

    @staticmethod
    def unit() -> "StepElement":
        return StepElement.make(0, ExpScalar.one())

    @staticmethod
    def theta(x, n: int = 1, coeff: ExpScalar | None = None) -> "StepElement":
        return StepElement.make(0, None, {(rat(x), n): coeff or ExpScalar.one()})

    @staticmethod
    def delta(x, n: int = 1, coeff: ExpScalar | None = None) -> "StepElement":
        """th(x)^(n-1)*dl(x), the exact 1/n * d(th(x)^n)."""
        return StepElement.make(1, None, {(rat(x), n): coeff or ExpScalar.one()})

    # -- linear structure ------------------------------------------------------

    def term_map(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return self.const.is_zero() and not self.terms

    def __add__(self, other: "StepElement") -> "StepElement":
        assert self.degree == other.degree or self.is_zero() or other.is_zero()
        degree = other.degree if self.is_zero() else self.degree
        out = self.term_map()
        for k, c in other.terms:
            s = out.get(k, ExpScalar.zero()) + c
            out[k] = s
        return StepElement.make(degree, self.const + other.const, out)

    def __neg__(self) -> "StepElement":
        return self.scale_s(ExpScalar.of(-1))

    def __sub__(self, other: "StepElement") -> "StepElement":
        return self + (-other)

    def scale_s(self, c: ExpScalar) -> "StepElement":
        return StepElement.make(self.degree, self.const * c,
                                {k: v * c for k, v in self.terms})

    def scale(self, c) -> "StepElement":
        return self.scale_s(ExpScalar.of(rat(c)))

    # -- evaluation ------------------------------------------------------------

    def value_at(self, x0: Fraction) -> ExpScalar:
        """Pointwise value of a degree-0 element, half-convention at jumps."""
        assert self.degree == 0
        total = self.const
        for (x, n), c in self.terms:
            if x < x0:
                total = total + c
            elif x == x0:
                total = total + c.scale(Fraction(1, 2 ** n))
        return total

    def value_at_plus_inf(self) -> ExpScalar:
        assert self.degree == 0
        return self.const + scalar_sum(c for _, c in self.terms)

    def value_at_minus_inf(self) -> ExpScalar:
        assert self.degree == 0
        return self.const

    # -- canonical text ----------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if not self.const.is_zero():
            parts.extend(_mono_terms(self.const, "one"))
        for (x, n), c in self.terms:
            if self.degree == 0:
                mono = f"th({rat_str(x)})^{n}" if n > 1 else f"th({rat_str(x)})"
            else:
                base = f"th({rat_str(x)})^{n-1}*" if n > 2 else (
                    f"th({rat_str(x)})*" if n == 2 else "")
                mono = f"{base}dl({rat_str(x)})"
            parts.extend(_mono_terms(c, mono))
        return " + ".join(parts).replace("+ -", "- ")


def _mono_terms(scalar: ExpScalar, mono: str) -> list:
    out = []
    for q in sorted(scalar.terms):
        c = scalar.terms[q]
        sign = "-" if c < 0 else ""
        factors = []
        if abs(c) != 1:
            factors.append(rat_str(abs(c)))
        if q != 0:
            factors.append(f"exp({rat_str(q)})")
        if mono == "one":
            if not factors:
                factors.append("1")
        else:
            factors.append(mono)
        out.append(sign + "*".join(factors))
    return out


# ---------------------------------------------------------------------------
# Algebra operations
# ---------------------------------------------------------------------------

def sf_mul(a: StepElement, b: StepElement) -> StepElement:
    """Graded product; degree-1 times degree-1 is zero."""
    if a.degree + b.degree >= 2:
        return StepElement.zero(1)
    if a.degree == 1:
        a, b = b, a  # commutative when at least one factor is even
    # now a has degree 0
    out: dict = {}
    const = ExpScalar.zero()
    if b.degree == 0:
        const = a.const * b.const
        for k, c in a.terms:
            _accum(out, k, c * b.const)
        for k, c in b.terms:
            _accum(out, k, c * a.const)
        for (xu, m), cu in a.terms:
            for (xw, n), cw in b.terms:
                c = cu * cw
                if xu == xw:
                    _accum(out, (xu, m + n), c)
                else:
                    _accum(out, (max(xu, xw), n if xw > xu else m), c)
        return StepElement.make(0, const, out)
    # degree 0 times degree 1: each dl-monomial absorbs the step values
    for (xw, n), cw in b.terms:
        _accum(out, (xw, n), a.const * cw)
        for (xu, m), cu in a.terms:
            if xu < xw:
                _accum(out, (xw, n), cu * cw)
            elif xu == xw:
                _accum(out, (xw, n + m), cu * cw)
            # xu > xw: dl(xw) * th(xu) = 0
    return StepElement.make(1, None, out)


def _accum(out: dict, key: Key, c: ExpScalar) -> None:
    out[key] = out.get(key, ExpScalar.zero()) + c


def sf_d(a: StepElement) -> StepElement:
    """Differential: d(th(x)^n) = n*th(x)^(n-1)*dl(x); zero on degree 1."""
    if a.degree == 1:
        return StepElement.zero(1)
    return StepElement.make(1, None, {k: c.scale(k[1]) for k, c in a.terms})


def sf_in_constrained(a: StepElement) -> bool:
    """Membership in the decaying subspace: no unit and coefficients summing to 0."""
    if a.degree == 1:
        return True
    return a.const.is_zero() and a.value_at_plus_inf().is_zero()


def sf_h1_class(a: StepElement) -> Union[Fraction, ExpScalar]:
    """Cohomology class of a degree-1 element: sum of c_(x,n)/n.

    The element is exact in the constrained algebra iff the class vanishes.
    Returns a Fraction when all coefficients are rational, else an ExpScalar.
    """
    assert a.degree == 1
    total = scalar_sum(c.scale(Fraction(1, k[1])) for k, c in a.terms)
    return total.rational_value() if total.is_rational() else total


def sf_theta_pm(x, sign: int) -> StepElement:
    """th(x)^(+1) = th(x), th(x)^(-1) = one - th(x)."""
    if sign == 1:
        return StepElement.theta(x)
    assert sign == -1
    return StepElement.unit() - StepElement.theta(x)


# ---------------------------------------------------------------------------
# Text form parsing (inverse of __str__)
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?P<coeff>-?\d+(?:/\d+)?)?"
    r"(?:\*?exp\((?P<exp>-?\d+(?:/\d+)?)\))?"
    r"(?:\*?(?P<one>one)|"
    r"\*?th\((?P<thx>-?\d+(?:/\d+)?)\)(?:\^(?P<thn>\d+))?)?"
    r"(?:\*?dl\((?P<dlx>-?\d+(?:/\d+)?)\))?$")


def parse_step_element(text: str) -> StepElement:
    """Parse the canonical text grammar back into an element."""
    text = text.strip()
    if text == "0":
        return StepElement.zero(0)
    const = ExpScalar.zero()
    terms: dict = {}
    degree = None
    for chunk in text.replace(" - ", " + -").split(" + "):
        chunk = chunk.strip().replace(" ", "")
        if not chunk:
            continue
        neg = chunk.startswith("-")
        m = _TERM_RE.match(chunk.lstrip("-"))
        if not m or not chunk.lstrip("-"):
            raise ValueError(f"unparsable step element term: {chunk!r}")
        c = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        if neg:
            c = -c
        q = Fraction(m.group("exp")) if m.group("exp") else Fraction(0)
        scalar = ExpScalar.of(c, q)
        if m.group("dlx") is not None:
            x = Fraction(m.group("dlx"))
            n = 1
            if m.group("thx") is not None:
                if Fraction(m.group("thx")) != x:
                    raise ValueError("mixed-point dressed delta term")
                n = (int(m.group("thn")) if m.group("thn") else 1) + 1
            term_degree = 1
            key = (x, n)
        elif m.group("thx") is not None:
            key = (Fraction(m.group("thx")),
                   int(m.group("thn")) if m.group("thn") else 1)
            term_degree = 0
        else:
            key = None
            term_degree = 0
        if degree is None:
            degree = term_degree
        elif degree != term_degree:
            raise ValueError("mixed degrees in step element text")
        if key is None:
            const = const + scalar
        else:
            terms[key] = terms.get(key, ExpScalar.zero()) + scalar
    return StepElement.make(degree or 0, const, terms)
