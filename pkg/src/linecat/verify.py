"""Machine checks of every identity the construction asserts.

All residuals are exact elements; a check passes iff the residual is the
zero element.  The checks:

  * the quadratic relations of the k-fold products (with the sign
    (j+1)(l+1) + l(|w_1|+...+|w_j|) on the inner insertion);
  * the contracting-homotopy identities d h + h d = Id - P, P^2 = P and
    d P = P d on every hom pair;
  * agreement of the closed-form products with the homotopy-transfer
    engine (the two independent derivations);
  * the functor relations for the transferred components g_n against both
    structures, checked in the degree-shifted picture;
  * per-tree sign cross-checks: shifted-picture evaluation against the
    naive one via (-1)^(I+K), and the full combinatorial sign
    (-1)^(I+J+K) whenever every internal edge has a gradient orientation.

The sweep driver enumerates structured tuple families over a
configuration, records which dispatch branch every product exercised, and
reports any nonzero residual together with the offending tuple.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .drcat import (HomElement, e_basis, hom_compose, hom_d, homotopy_h,
                    projection_P)
from .geometry import LineConfig
from .products import (BasisMorphism, DELTA, THETA, VElement, delta,
                       mk_closed, mk_closed_linear, mk_closed_with_branch,
                       theta, trans, unit)
from .scalars import ExpScalar
from .stepforms import StepElement
from .transfer import (TreeContribution, desuspension_sign, ijk_sign, iota,
                       iota_velement, transfer_functor, transfer_product)


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------

def stasheff_residual(cfg: LineConfig, ws: Sequence[BasisMorphism]) -> VElement:
    """The full quadratic relation on a generator tuple; zero iff it holds."""
    ws = list(ws)
    n = len(ws)
    degs = [w.degree(cfg) for w in ws]
    total = VElement.zero(ws[0].source, ws[-1].target)
    for l in range(1, n + 1):
        k = n + 1 - l
        for j in range(0, k):
            inner = mk_closed(cfg, ws[j:j + l])
            if inner.is_zero():
                continue
            sign = (j + 1) * (l + 1) + l * sum(degs[:j])
            term = mk_closed_linear(cfg, ws[:j], inner, ws[j + l:])
            if sign % 2:
                term = term.scale_s(ExpScalar.of(-1))
            total = total + term
    return total


@dataclass
class SdrFailure:
    pair: tuple
    generator: str
    identity: str
    residual: HomElement


def sdr_generators(cfg: LineConfig, a: str, b: str, nmax: int) -> list:
    """Degree-0 and degree-1 hom-space generators up to power nmax."""
    xs = sorted({cfg.intersect(p, q).x
                 for p in cfg.ids() for q in cfg.ids() if p != q})
    gens = []
    descending = a == b or cfg.line(a).t > cfg.line(b).t
    x_ref = xs[0]
    for x in xs:
        for n in range(1, nmax + 1):
            th = StepElement.theta(x, n)
            if descending:
                if (x, n) != (x_ref, 1):
                    gens.append((f"th({x})^{n}-th({x_ref})",
                                 HomElement.of_deg0(a, b, th - StepElement.theta(x_ref))))
            else:
                gens.append((f"th({x})^{n}", HomElement.of_deg0(a, b, th)))
            gens.append((f"th({x})^{n-1}dl({x})",
                         HomElement.of_deg1(a, b, StepElement.delta(x, n))))
    if not descending:
        gens.append(("one", HomElement.of_deg0(a, b, StepElement.unit())))
    return gens


def sdr_residual(cfg: LineConfig, a: str, b: str, nmax: int = 4) -> list:
    """Failures of dh+hd = Id-P, P^2 = P and dP = Pd on hom(a,b) generators."""
    failures = []
    for name, gen in sdr_generators(cfg, a, b, nmax):
        dh = hom_d(cfg, homotopy_h(cfg, gen))
        hd = homotopy_h(cfg, hom_d(cfg, gen))
        p = projection_P(cfg, gen)
        res = dh + hd - (gen - p)
        if not res.is_zero():
            failures.append(SdrFailure((a, b), name, "dh+hd=Id-P", res))
        res = projection_P(cfg, p) - p
        if not res.is_zero():
            failures.append(SdrFailure((a, b), name, "P^2=P", res))
        res = hom_d(cfg, p) - projection_P(cfg, hom_d(cfg, gen))
        if not res.is_zero():
            failures.append(SdrFailure((a, b), name, "dP=Pd", res))
        hh = homotopy_h(cfg, homotopy_h(cfg, gen))
        if not hh.is_zero():
            failures.append(SdrFailure((a, b), name, "hh=0", hh))
    return failures


@dataclass
class OracleReport:
    tuple_str: str
    branch: str
    closed: VElement
    transferred: VElement

    @property
    def difference(self) -> VElement:
        return self.closed - self.transferred

    def ok(self) -> bool:
        return self.difference.is_zero()


def oracle_compare(cfg: LineConfig, ws: Sequence[BasisMorphism],
                   mode: str = "both") -> OracleReport:
    """Closed-form vs transfer; the difference must be zero."""
    ws = list(ws)
    closed, branch = mk_closed_with_branch(cfg, ws)
    if mode == "closed":
        transferred = closed
    elif mode == "transfer":
        transferred = transfer_product(cfg, ws)
        closed = transferred
    else:
        transferred = transfer_product(cfg, ws)
    return OracleReport(" ".join(map(str, ws)), branch, closed, transferred)


def _suspended_closed(cfg: LineConfig, ws) -> VElement:
    v = mk_closed(cfg, list(ws))
    if desuspension_sign(cfg, ws) < 0:
        v = v.scale_s(ExpScalar.of(-1))
    return v


def _susp_m2(cfg: LineConfig, x: HomElement, y: HomElement) -> HomElement:
    prod = hom_compose(cfg, x, y)
    if x.homogeneous_degree() == 0:
        return prod.scale_s(ExpScalar.of(-1))
    return prod


def _g_hat(cfg: LineConfig, ws) -> HomElement:
    return transfer_functor(cfg, list(ws), suspended=True)


def _g_hat_linear(cfg: LineConfig, prefix, inner: VElement, suffix) -> HomElement:
    a1 = prefix[0].source if prefix else inner.source
    ak1 = suffix[-1].target if suffix else inner.target
    total = HomElement.zero(a1, ak1)
    for coeff, gen in inner.basis_expansion():
        total = total + _g_hat(cfg, list(prefix) + [gen] + list(suffix)).scale_s(coeff)
    return total


def morphism_residual(cfg: LineConfig, ws: Sequence[BasisMorphism]) -> HomElement:
    """Functor relation for the transferred components, degree-shifted picture."""
    ws = list(ws)
    n = len(ws)
    lhs = hom_d(cfg, _g_hat(cfg, ws))
    for s in range(1, n):
        lhs = lhs + _susp_m2(cfg, _g_hat(cfg, ws[:s]), _g_hat(cfg, ws[s:]))
    rhs = HomElement.zero(ws[0].source, ws[-1].target)
    for l in range(1, n + 1):
        for p in range(0, n - l + 1):
            inner = _suspended_closed(cfg, ws[p:p + l])
            if inner.is_zero():
                continue
            # Koszul sign: the degree-one insertion passes the first p inputs
            shifted_par = sum(1 + w.degree(cfg) for w in ws[:p]) % 2
            term = _g_hat_linear(cfg, ws[:p], inner, ws[p + l:])
            if shifted_par:
                term = term.scale_s(ExpScalar.of(-1))
            rhs = rhs + term
    return lhs - rhs


# ---------------------------------------------------------------------------
# Per-tree sign checks
# ---------------------------------------------------------------------------

@dataclass
class SignCheck:
    tuple_str: str
    trees_checked: int
    ik_failures: int      # shifted vs naive via (-1)^(I+K)
    ijk_checked: int
    ijk_failures: int     # full (-1)^(I+J+K) where orientations exist


def tree_sign_check(cfg: LineConfig, ws: Sequence[BasisMorphism]) -> SignCheck:
    ws = list(ws)
    contribs: list = []
    transfer_product(cfg, ws, collect=contribs)
    ik_fail = ijk_fail = ijk_done = 0
    for c in contribs:
        # shifting inserts exactly one minus per degree-zero-left vertex
        expect = c.naive_root
        if c.i_count % 2:
            expect = expect.scale_s(ExpScalar.of(-1))
        if not (c.susp_root - expect).is_zero():
            ik_fail += 1
        sign = ijk_sign(c)
        if sign is not None:
            ijk_done += 1
            # the naive value of a transversal-target tree is a positive
            # multiple of the generator exactly when the sign is +1
            coeff = _positive_part_sign(c.value, c.naive_root, cfg)
            if coeff is not None and coeff != sign:
                ijk_fail += 1
    return SignCheck(" ".join(map(str, ws)), len(contribs), ik_fail,
                     ijk_done, ijk_fail)


def _positive_part_sign(value: VElement, naive_root: HomElement,
                        cfg: LineConfig) -> Optional[int]:
    """Sign of a one-generator transversal contribution (None if not such)."""
    if value.source == value.target or value.trans.is_zero():
        return None
    terms = value.trans.terms
    if len(terms) != 1:
        return None
    coeff = next(iter(terms.values()))
    return 1 if coeff > 0 else -1


# ---------------------------------------------------------------------------
# Sweep driver
# ---------------------------------------------------------------------------

@dataclass
class SweepReport:
    lines: list = field(default_factory=list)
    branches: set = field(default_factory=set)
    tuples_checked: int = 0
    failures: int = 0

    def record(self, tuple_str: str, branch: str, residual) -> None:
        self.tuples_checked += 1
        self.branches.add(branch)
        zero = residual.is_zero()
        if not zero:
            self.failures += 1
        if not zero or len(self.lines) < self.max_ok_lines:
            self.lines.append(
                f"TUPLE {tuple_str} BRANCH {branch} RESIDUAL "
                f"{'0' if zero else residual}")

    max_ok_lines = 200


# every dispatch branch that is reachable for configurations of non-vertical
# lines (the degree-mismatch guard in the polygon branch is provably not:
# a convex cycle puts its two degree-zero members at the x-extrema)
CLOSED_BRANCHES = [
    "m1_diagonal", "m1_zero", "diag_m2", "unit_left", "unit_right",
    "unit_higher_zero", "precheck_zero", "sharp2_zero", "module_left",
    "module_right", "module_block_zero", "module_fallback", "c_table",
    "c_point_zero", "c_middle_fallback", "c_front_fallback",
    "c_back_fallback", "sharp1_fallback", "cc_transversal", "cc_diagonal",
    "point_pairing", "point_zero", "point_transversal_zero", "not_cc_zero",
    "dressed_delta_fallback", "cc_boundary_fallback",
]


def branch_probes(cfg: LineConfig) -> list:
    """Small tuple family exercising every dispatch branch on a 3-line
    configuration whose slopes ascend a < b < c."""
    a, b, c = sorted(cfg.ids(), key=lambda i: cfg.line(i).t)
    th_ab = theta(cfg, a, b, 1)
    return [
        [th_ab],                                      # m1_diagonal
        [trans(a, b)],                                # m1_zero
        [th_ab, theta(cfg, a, c, 2)],                 # diag_m2
        [unit(a), trans(a, b)],                       # unit_left
        [trans(a, b), unit(b)],                       # unit_right
        [trans(a, b), unit(b), trans(b, a)],          # unit_higher_zero
        [trans(b, a), trans(a, c)],                   # precheck_zero
        [theta(cfg, a, b, 1), theta(cfg, a, c, 1),
         delta(cfg, a, b)],                           # sharp2_zero
        [th_ab, trans(a, b)],                         # module_left
        [trans(a, b), theta(cfg, b, a, 2)],           # module_right
        [delta(cfg, a, b), th_ab, trans(a, b)],       # module_block_zero
        [th_ab, trans(a, b), delta(cfg, b, a)],       # module_fallback
        [trans(a, b), theta(cfg, b, a, 2), trans(b, a)],   # c_table
        [trans(a, b), theta(cfg, b, c, 1), trans(b, a)],   # c_point_zero
        [trans(a, b), delta(cfg, b, a), theta(cfg, b, a, 1),
         trans(b, a)],                                # c_middle_fallback
        [delta(cfg, b, a), theta(cfg, b, a, 1), trans(b, a),
         trans(a, b)],                                # c_front_fallback
        [trans(a, b), trans(b, a), theta(cfg, a, b, 1),
         delta(cfg, a, b)],                           # c_back_fallback
        [trans(b, a), theta(cfg, a, b, 1), trans(a, c)],   # sharp1_fallback
        [trans(a, b), trans(b, c)],                   # cc_transversal
        [trans(a, b), trans(b, c), trans(c, a)],      # cc_diagonal
        [trans(a, b), trans(b, a)],                   # point_pairing
        [trans(a, b), trans(b, a), delta(cfg, a, b)],  # point_zero
        [trans(a, b), trans(b, a), trans(a, b)],      # point_transversal_zero
        [trans(a, c), trans(c, b), trans(b, a)],      # not_cc_zero
        [trans(b, c), trans(c, a), delta(cfg, a, b),
         delta(cfg, a, b)],                           # cc_boundary_fallback
        [delta(cfg, a, b, 2), trans(a, b), trans(b, a)],  # dressed_delta
    ]


def diagonal_generators(cfg: LineConfig, a: str, nmax: int) -> list:
    out = [unit(a)]
    for b in cfg.ids():
        if b == a:
            continue
        x = cfg.intersect(a, b).x
        for n in range(1, nmax + 1):
            out.append(BasisMorphism(THETA, a, a, x, n))
            out.append(BasisMorphism(DELTA, a, a, x, n))
    return out


def object_chains(cfg: LineConfig, k: int, with_diagonal: bool):
    ids = cfg.ids()
    for chain in itertools.product(ids, repeat=k + 1):
        if not with_diagonal and any(x == y for x, y in zip(chain, chain[1:])):
            continue
        yield chain


def tuples_for_chain(cfg: LineConfig, chain, nmax: int, rng, per_chain: int):
    """Generator tuples over an object chain, sampled when the space is large."""
    slot_opts = []
    for a, b in zip(chain, chain[1:]):
        slot_opts.append([trans(a, b)] if a != b
                         else diagonal_generators(cfg, a, nmax))
    sizes = 1
    for opts in slot_opts:
        sizes *= len(opts)
    if sizes <= per_chain:
        yield from itertools.product(*slot_opts)
        return
    for _ in range(per_chain):
        yield tuple(rng.choice(opts) for opts in slot_opts)


def sweep_stasheff(cfg: LineConfig, kmax: int = 6, nmax: int = 3,
                   seed: int = 0, budget: int = 400,
                   report: Optional[SweepReport] = None) -> SweepReport:
    """Quadratic-relation sweep with dispatch-branch bookkeeping."""
    report = report or SweepReport()
    rng = random.Random(seed)
    for k in range(1, kmax + 1):
        chains = list(object_chains(cfg, k, with_diagonal=True))
        rng.shuffle(chains)
        diag_budget = max(2, budget // max(1, len(chains)))
        used = 0
        for chain in chains:
            n_diag = sum(1 for x, y in zip(chain, chain[1:]) if x == y)
            per_chain = 1 if n_diag == 0 else diag_budget
            for ws in tuples_for_chain(cfg, chain, nmax, rng, per_chain):
                _, branch = mk_closed_with_branch(cfg, list(ws))
                res = stasheff_residual(cfg, ws)
                report.record(" ".join(map(str, ws)), branch, res)
                used += 1
                if n_diag and used > budget:
                    break
            if n_diag and used > budget:
                break
    return report


def sweep_oracle(cfg: LineConfig, kmax: int = 5, nmax: int = 2,
                 seed: int = 0, budget: int = 250,
                 report: Optional[SweepReport] = None) -> SweepReport:
    """Closed-vs-transfer sweep."""
    report = report or SweepReport()
    rng = random.Random(seed)
    for k in range(1, kmax + 1):
        chains = list(object_chains(cfg, k, with_diagonal=True))
        rng.shuffle(chains)
        used = 0
        for chain in chains:
            n_diag = sum(1 for x, y in zip(chain, chain[1:]) if x == y)
            per_chain = 1 if n_diag == 0 else max(2, budget // 40)
            for ws in tuples_for_chain(cfg, chain, nmax, rng, per_chain):
                rep = oracle_compare(cfg, ws)
                report.record(rep.tuple_str, rep.branch, rep.difference)
                used += 1
                if used > budget:
                    break
            if used > budget:
                break
    return report


def sweep_sdr(cfg: LineConfig, nmax: int = 4) -> list:
    failures = []
    for a in cfg.ids():
        for b in cfg.ids():
            failures.extend(sdr_residual(cfg, a, b, nmax))
    return failures


def random_config(rng: random.Random, n: int,
                  span: int = 8, denom: int = 4) -> LineConfig:
    """A random valid configuration of n lines with small rational data."""
    while True:
        try:
            return LineConfig.build([
                (chr(97 + i),
                 Fraction(rng.randint(-span, span), rng.randint(1, denom)),
                 Fraction(rng.randint(-span, span), rng.randint(1, denom)))
                for i in range(n)])
        except Exception:
            continue
