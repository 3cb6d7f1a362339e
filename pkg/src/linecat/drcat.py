"""DG category of twisted de Rham complexes for a line configuration.

The hom space from line a to line b is spanned, in degree 0, by step
elements alpha carried against the weight exp(f_ab) (we store alpha only:
"relative coordinates"), and in degree 1 by delta-type monomials stored as
they are ("absolute coordinates"; the weight collapses to a scalar on a
delta's support, so these monomials are common to all hom pairs).

With f_ab(x) := f_a(x) - f_b(x):

  * differential:  d(exp(f_ab) alpha) = exp(f_ab) d(alpha); every produced
    delta monomial at x picks up the scalar exp(f_ab(x));
  * composition is multiplication, weights compose (f_ab + f_bc = f_ac) and
    a weight evaluates on a delta's support;
  * contracting homotopy h_ab on the basis element th(x)^(n-1)*dl(x):
      slope(a) < slope(b):  (1/n) exp(-f_ab(x)) (th(x)^n - c),
          c = 0, 1/2^n, 1 for x(v_ab) <, =, > x
      slope(a) > slope(b):  (1/n) exp(-f_ab(x)) (th(x)^n - th(x(v_ab)))
    and h_aa = 0;
  * P := Id - d h - h d is the induced idempotent; its image is spanned by
    e_ab = exp(f_ab - f_ab(x(v_ab))) in degree 0 (ascending slopes) and by
    dl(x(v_ab)) in degree 1 (descending slopes), up to exact weight factors.

For descending slopes the degree-0 space is constrained (no unit, step
coefficients summing to zero): that is exactly the condition for the
weighted element to decay at both infinities, and it is what makes
P vanish there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import LineConfig
from .scalars import ExpScalar
from .stepforms import StepElement, sf_d, sf_in_constrained, sf_mul


@dataclass(frozen=True)
class HomElement:
    source: str
    target: str
    deg0: StepElement  # degree 0, relative coordinates
    deg1: StepElement  # degree 1, absolute coordinates

    def __post_init__(self):
        assert self.deg0.degree == 0 and self.deg1.degree == 1

    @staticmethod
    def zero(a: str, b: str) -> "HomElement":
        return HomElement(a, b, StepElement.zero(0), StepElement.zero(1))

    @staticmethod
    def of_deg0(a: str, b: str, el: StepElement) -> "HomElement":
        return HomElement(a, b, el, StepElement.zero(1))

    @staticmethod
    def of_deg1(a: str, b: str, el: StepElement) -> "HomElement":
        return HomElement(a, b, StepElement.zero(0), el)

    def is_zero(self) -> bool:
        return self.deg0.is_zero() and self.deg1.is_zero()

    def __add__(self, other: "HomElement") -> "HomElement":
        assert (self.source, self.target) == (other.source, other.target)
        return HomElement(self.source, self.target,
                          self.deg0 + other.deg0, self.deg1 + other.deg1)

    def __sub__(self, other: "HomElement") -> "HomElement":
        return self + other.scale_s(ExpScalar.of(-1))

    def scale_s(self, c: ExpScalar) -> "HomElement":
        return HomElement(self.source, self.target,
                          self.deg0.scale_s(c), self.deg1.scale_s(c))

    def homogeneous_degree(self):
        """0, 1, None for zero, or 'mixed'."""
        z0, z1 = self.deg0.is_zero(), self.deg1.is_zero()
        if z0 and z1:
            return None
        if z1:
            return 0
        if z0:
            return 1
        return "mixed"

    def __str__(self) -> str:
        if self.is_zero():
            return f"0 in Hom({self.source},{self.target})"
        parts = []
        if not self.deg0.is_zero():
            parts.append(f"exp(f[{self.source},{self.target}])*({self.deg0})")
        if not self.deg1.is_zero():
            parts.append(str(self.deg1))
        return " + ".join(parts) + f" in Hom({self.source},{self.target})"


def hom_in_space(cfg: LineConfig, el: HomElement) -> bool:
    """Degree-0 decay constraint for descending slopes and diagonals."""
    a, b = el.source, el.target
    if a == b or cfg.line(a).t > cfg.line(b).t:
        return sf_in_constrained(el.deg0)
    return True


def vab_x(cfg: LineConfig, a: str, b: str) -> Fraction:
    return cfg.intersect(a, b).x


def e_basis(cfg: LineConfig, a: str, b: str) -> HomElement:
    """The retract basis element of Hom(a,b), a != b."""
    x0 = vab_x(cfg, a, b)
    if cfg.line(a).t < cfg.line(b).t:
        unit = StepElement.unit().scale_s(ExpScalar.exp(-cfg.f_diff(a, b, x0)))
        return HomElement.of_deg0(a, b, unit)
    return HomElement.of_deg1(a, b, StepElement.delta(x0))


def hom_d(cfg: LineConfig, el: HomElement) -> HomElement:
    """Twisted differential in reduced coordinates."""
    a, b = el.source, el.target
    raw = sf_d(el.deg0)
    terms = {}
    for (x, n), c in raw.terms:
        terms[(x, n)] = c * ExpScalar.exp(cfg.f_diff(a, b, x))
    return HomElement.of_deg1(a, b, StepElement.make(1, None, terms))


def hom_compose(cfg: LineConfig, x: HomElement, y: HomElement) -> HomElement:
    """Composition Hom(a,b) x Hom(b,c) -> Hom(a,c) by multiplication."""
    if x.target != y.source:
        raise ValueError(f"non-composable: Hom({x.source},{x.target}) then "
                         f"Hom({y.source},{y.target})")
    a, b = x.source, x.target
    c = y.target
    out0 = sf_mul(x.deg0, y.deg0)
    # the weight of a degree-0 factor evaluates on the other side's supports
    out1 = StepElement.zero(1)
    if not (x.deg0.is_zero() or y.deg1.is_zero()):
        prod = sf_mul(x.deg0, y.deg1)
        out1 = out1 + _weight_on_supports(cfg, a, b, prod)
    if not (x.deg1.is_zero() or y.deg0.is_zero()):
        prod = sf_mul(x.deg1, y.deg0)
        out1 = out1 + _weight_on_supports(cfg, b, c, prod)
    # degree1 * degree1 = 0
    return HomElement(a, c, out0, out1)


def _weight_on_supports(cfg: LineConfig, a: str, b: str, el: StepElement) -> StepElement:
    assert el.degree == 1
    terms = {}
    for (x, n), c in el.terms:
        terms[(x, n)] = c * ExpScalar.exp(cfg.f_diff(a, b, x))
    return StepElement.make(1, None, terms)


def homotopy_h(cfg: LineConfig, el: HomElement) -> HomElement:
    """Contracting homotopy; zero on degree 0 and on diagonal homs."""
    a, b = el.source, el.target
    if a == b:
        return HomElement.zero(a, b)
    x_ab = vab_x(cfg, a, b)
    ascending = cfg.line(a).t < cfg.line(b).t
    out = StepElement.zero(0)
    for (x, n), c in el.deg1.terms:
        coeff = c.scale(Fraction(1, n)) * ExpScalar.exp(-cfg.f_diff(a, b, x))
        bracket = StepElement.theta(x, n)
        if ascending:
            if x_ab < x:
                pass  # c = 0
            elif x_ab == x:
                bracket = bracket - StepElement.unit().scale(Fraction(1, 2 ** n))
            else:
                bracket = bracket - StepElement.unit()
        else:
            bracket = bracket - StepElement.theta(x_ab)
        out = out + bracket.scale_s(coeff)
    return HomElement.of_deg0(a, b, out)


def projection_P(cfg: LineConfig, el: HomElement) -> HomElement:
    """P = Id - d h - h d, evaluated directly."""
    dh = hom_d(cfg, homotopy_h(cfg, el))
    hd = homotopy_h(cfg, hom_d(cfg, el))
    return el - dh - hd


def pi_coefficient(cfg: LineConfig, el: HomElement) -> ExpScalar:
    """Coefficient of the transversal generator in the retract of Hom(a,b), a != b.

    Normalized so that pi(e_ab) = 1.
    """
    a, b = el.source, el.target
    assert a != b
    x_ab = vab_x(cfg, a, b)
    if cfg.line(a).t < cfg.line(b).t:
        return el.deg0.value_at(x_ab) * ExpScalar.exp(cfg.f_diff(a, b, x_ab))
    total = ExpScalar.zero()
    for (x, n), c in el.deg1.terms:
        factor = ExpScalar.exp(cfg.f_diff(a, b, x_ab) - cfg.f_diff(a, b, x))
        total = total + c.scale(Fraction(1, n)) * factor
    return total


def rescale_functor(cfg: LineConfig, cfg2: LineConfig, pairing: dict,
                    el: HomElement) -> HomElement:
    """DG functor induced by a slope-order preserving object bijection.

    Weights are exchanged (exp(f'_{a'b'} - f_ab) times the morphism): the
    relative degree-0 data is carried unchanged, each degree-1 monomial at x
    picks up the weight difference evaluated at x.  Step data stays at its
    original points.
    """
    ids = sorted(cfg.ids(), key=lambda i: cfg.line(i).t)
    ids2 = [pairing[i] for i in ids]
    if sorted(ids2, key=lambda i: cfg2.line(i).t) != ids2:
        raise ValueError("pairing does not preserve the slope order")
    a, b = el.source, el.target
    a2, b2 = pairing[a], pairing[b]
    terms = {}
    for (x, n), c in el.deg1.terms:
        diff = cfg2.f_diff(a2, b2, x) - cfg.f_diff(a, b, x)
        terms[(x, n)] = c * ExpScalar.exp(diff)
    return HomElement(a2, b2, el.deg0, StepElement.make(1, None, terms))
