"""Homotopy transfer over rooted planar trees.

The transferred k-fold products of the line category are sums over rooted
planar trees with k leaves: leaves embed the retract generators, binary
vertices multiply in the twisted de Rham category, every internal edge
applies minus the contracting homotopy, and the root projects back onto the
retract.  Vertices of arity three or more carry the zero map (the source is
a DG category), so only binary trees contribute; enumerating with unbounded
arity must give the same sum.

Signs: all composition happens in the degree-shifted picture, where a binary
product acquires a minus sign exactly when its left factor has unshifted
degree zero, and shifting back multiplies the whole k-fold product by
(-1)^K, K the sum of (k - i) over the positions i of degree-zero arguments.

For cross-checking, every tree is also evaluated "naively" (same recipe,
no degree-shift signs), and the combinatorial data of the tree sign is
reported: I = number of binary vertices whose left input has degree zero,
K as above, and the left/right orientation of each internal edge (from the
support of the one-form entering the homotopy to the point where the
resulting step function is eventually evaluated).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .drcat import (HomElement, e_basis, hom_compose, hom_d, homotopy_h,
                    pi_coefficient)
from .geometry import LineConfig
from .products import (BasisMorphism, DELTA, THETA, TRANS, UNIT, VElement,
                       check_chain)
from .scalars import ExpScalar
from .stepforms import StepElement


# ---------------------------------------------------------------------------
# Rooted planar trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarTree:
    children: tuple = ()

    def is_leaf(self) -> bool:
        return not self.children

    def leaf_count(self) -> int:
        if self.is_leaf():
            return 1
        return sum(c.leaf_count() for c in self.children)

    def __str__(self) -> str:
        if self.is_leaf():
            return "*"
        return "(" + " ".join(str(c) for c in self.children) + ")"


LEAF = PlanarTree()


_tree_cache: dict = {}


def enumerate_trees(n: int, max_arity: Optional[int] = None) -> list:
    """All rooted planar trees with n leaves and internal arities in [2, max_arity]."""
    if n < 2:
        raise ValueError("trees need at least two leaves")
    key = (n, max_arity)
    if key not in _tree_cache:
        _tree_cache[key] = list(_trees(n, max_arity))
    return _tree_cache[key]


def _trees(n: int, max_arity: Optional[int]):
    if n == 1:
        yield LEAF
        return
    top = n if max_arity is None else min(n, max_arity)
    for arity in range(2, top + 1):
        for parts in _compositions(n, arity):
            for combo in _combos(parts, max_arity):
                yield PlanarTree(tuple(combo))


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _combos(parts, max_arity):
    if not parts:
        yield ()
        return
    for head in _trees(parts[0], max_arity):
        for tail in _combos(parts[1:], max_arity):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# Embedding and projection of the retract
# ---------------------------------------------------------------------------

def iota(cfg: LineConfig, w: BasisMorphism) -> HomElement:
    if w.kind == TRANS:
        return e_basis(cfg, w.source, w.target)
    a = w.source
    if w.kind == UNIT:
        return HomElement.of_deg0(a, a, StepElement.unit())
    if w.kind == THETA:
        return HomElement.of_deg0(a, a, StepElement.theta(w.x, w.n))
    return HomElement.of_deg1(a, a, StepElement.delta(w.x, w.n))


def iota_velement(cfg: LineConfig, v: VElement) -> HomElement:
    out = HomElement.zero(v.source, v.target)
    for coeff, gen in v.basis_expansion():
        out = out + iota(cfg, gen).scale_s(coeff)
    return out


def pi_velement(cfg: LineConfig, el: HomElement) -> VElement:
    a, b = el.source, el.target
    if a == b:
        return VElement(a, a, ExpScalar.zero(), el.deg0, el.deg1)
    return VElement.of_trans(a, b, pi_coefficient(cfg, el))


# ---------------------------------------------------------------------------
# Tree evaluation
# ---------------------------------------------------------------------------

@dataclass
class _NodeEval:
    arg_index: int = -1                 # leaves only
    children: list = field(default_factory=list)
    susp: HomElement = None             # value entering the parent (edge applied)
    naive: HomElement = None
    vertex_susp: HomElement = None      # raw vertex value, root uses this
    vertex_naive: HomElement = None
    i_count: int = 0


def _eval_tree(cfg: LineConfig, tree: PlanarTree, args, pos: int = 0) -> _NodeEval:
    if tree.is_leaf():
        el = iota(cfg, args[pos])
        node = _NodeEval(arg_index=pos)
        node.susp = node.naive = node.vertex_susp = node.vertex_naive = el
        return node
    node = _NodeEval()
    offset = pos
    for child in tree.children:
        ev = _eval_tree(cfg, child, args, offset)
        offset += child.leaf_count()
        node.children.append(ev)
    a = node.children[0].susp.source
    b = node.children[-1].susp.target
    if len(tree.children) > 2:
        zero = HomElement.zero(a, b)
        node.vertex_susp = node.vertex_naive = zero
        node.susp = node.naive = zero
        return node
    left, right = node.children
    node.i_count = left.i_count + right.i_count
    deg_left = left.susp.homogeneous_degree()
    assert deg_left != "mixed", "inhomogeneous element inside a tree"
    node.vertex_naive = hom_compose(cfg, left.naive, right.naive)
    node.vertex_susp = hom_compose(cfg, left.susp, right.susp)
    if deg_left == 0:
        node.vertex_susp = node.vertex_susp.scale_s(ExpScalar.of(-1))
        node.i_count += 1
    minus_one = ExpScalar.of(-1)
    node.susp = homotopy_h(cfg, node.vertex_susp).scale_s(minus_one)
    node.naive = homotopy_h(cfg, node.vertex_naive).scale_s(minus_one)
    return node


def desuspension_sign(cfg: LineConfig, args) -> int:
    n = len(args)
    k = sum(n - (i + 1) for i, w in enumerate(args) if w.degree(cfg) == 0)
    return -1 if k % 2 else 1


@dataclass
class TreeContribution:
    tree: PlanarTree
    value: VElement          # desuspended contribution to the product
    susp_root: HomElement    # shifted-picture value before projection
    naive_root: HomElement   # unsigned value before projection
    i_count: int
    k_sign: int
    edge_orientations: list  # 'L' / 'R' / None per internal edge


def transfer_product(cfg: LineConfig, args: Sequence[BasisMorphism],
                     use_binary_only: bool = True,
                     collect: Optional[list] = None) -> VElement:
    """Transferred k-fold product as a sum over k-trees."""
    args = list(args)
    check_chain(args)
    a1, ak1 = args[0].source, args[-1].target
    if len(args) == 1:
        return pi_velement(cfg, hom_d(cfg, iota(cfg, args[0])))
    total = VElement.zero(a1, ak1)
    sgn = desuspension_sign(cfg, args)
    for tree in enumerate_trees(len(args), 2 if use_binary_only else None):
        ev = _eval_tree(cfg, tree, args)
        contrib = pi_velement(cfg, ev.vertex_susp)
        if sgn < 0:
            contrib = contrib.scale_s(ExpScalar.of(-1))
        total = total + contrib
        if collect is not None and not contrib.is_zero():
            collect.append(TreeContribution(
                tree, contrib, ev.vertex_susp, ev.vertex_naive, ev.i_count,
                sgn, _edge_orientations(cfg, ev)))
    return total


def transfer_functor(cfg: LineConfig, args: Sequence[BasisMorphism],
                     suspended: bool = False) -> HomElement:
    """Transferred functor component g_n (root edge carries the homotopy)."""
    args = list(args)
    check_chain(args)
    if len(args) == 1:
        return iota(cfg, args[0])
    total = HomElement.zero(args[0].source, args[-1].target)
    for tree in enumerate_trees(len(args), 2):
        ev = _eval_tree(cfg, tree, args)
        total = total + ev.susp
    if not suspended and desuspension_sign(cfg, args) < 0:
        total = total.scale_s(ExpScalar.of(-1))
    return total


def suspended_transfer_product(cfg: LineConfig, args) -> VElement:
    """The shifted-picture product (no boundary sign)."""
    v = transfer_product(cfg, args)
    if desuspension_sign(cfg, args) < 0:
        v = v.scale_s(ExpScalar.of(-1))
    return v


# ---------------------------------------------------------------------------
# Tree sign combinatorics
# ---------------------------------------------------------------------------

def _single_support(el: HomElement):
    xs = {x for (x, _n), _c in el.deg1.terms}
    return next(iter(xs)) if len(xs) == 1 else None


def _edge_orientations(cfg: LineConfig, root: _NodeEval) -> list:
    """Orientation of each internal edge of a contributing binary tree.

    An internal edge applies the homotopy to a one-form supported at x_e;
    the resulting step function is evaluated at the support of the next
    distinct-point one-form met on the way to the root, or at the target
    intersection point if it survives to a transversal projection.  'L'
    means the evaluation point lies to the right of x_e (a left-to-right
    gradient segment), 'R' the reverse, None if it is never evaluated
    (diagonal root) or the points coincide.
    """
    out = []

    def walk(node: _NodeEval, ancestors):
        for child in node.children:
            if not child.children:
                continue
            x_e = _single_support(child.vertex_naive)
            orient = None
            if x_e is not None:
                chain = [(node, child)] + ancestors
                orient = _orient(cfg, root, chain, x_e)
            out.append(orient)
        for child in node.children:
            if child.children:
                walk(child, [(node, child)] + ancestors)

    walk(root, [])
    return out


def _orient(cfg: LineConfig, root: _NodeEval, chain, x_e):
    for parent, via in chain:
        others = [c for c in parent.children if c is not via]
        if not others:
            continue
        other = others[0]
        if other.susp.homogeneous_degree() == 1:
            y = _single_support(other.susp)
            if y is None:
                return None
            if y != x_e:
                return "L" if x_e < y else "R"
            # same-point absorption: keep walking
    a, b = root.vertex_naive.source, root.vertex_naive.target
    if a == b:
        return None
    p = cfg.intersect(a, b).x
    if p == x_e:
        return None
    return "L" if x_e < p else "R"


def ijk_sign(contrib: TreeContribution) -> Optional[int]:
    """(-1)^(I+J+K) for a contributing tree, when every edge is oriented."""
    if any(o is None for o in contrib.edge_orientations):
        return None
    j = sum(1 for o in contrib.edge_orientations if o == "L")
    k_par = 0 if contrib.k_sign > 0 else 1
    return -1 if (contrib.i_count + j + k_par) % 2 else 1
