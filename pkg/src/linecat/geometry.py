"""Exact geometry of line configurations in the plane.

Lines y = t*x + s with rational data; every predicate is sign-exact on
rationals.  A configuration requires pairwise distinct slopes and no three
concurrent lines.  Each line carries the antiderivative f(x) = t*x^2/2 + s*x
(constant term fixed to 0; only differences f(x1)-f(x2) ever matter), whose
differences measure areas between lines.

Closed cycles of intersection points are classified as a single point, a
clockwise convex polygon (every turn clockwise, straight-through angles
allowed), or neither.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scalars import rat, rat_str, RationalLike


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __str__(self) -> str:
        return f"({rat_str(self.x)},{rat_str(self.y)})"


@dataclass(frozen=True)
class Line:
    id: str
    t: Fraction  # slope
    s: Fraction  # intercept
    f0: Fraction = Fraction(0)  # free constant of the antiderivative

    def y_at(self, x: Fraction) -> Fraction:
        return self.t * x + self.s

    def f_at(self, x: Fraction) -> Fraction:
        """Antiderivative t*x^2/2 + s*x (+ f0) of the line's height at x.

        Only differences of values at two points ever enter any product, so
        the constant is immaterial; it is kept settable to assert that.
        """
        return self.t * x * x / 2 + self.s * x + self.f0


class ConfigError(ValueError):
    """Raised for configurations violating the slope/concurrency conditions."""


class LineConfig:
    """An ordered set of lines with distinct slopes and no triple points."""

    def __init__(self, lines: Sequence[Line]):
        self.lines = list(lines)
        self._ipoints: dict = {}
        self.by_id = {ln.id: ln for ln in self.lines}
        if len(self.by_id) != len(self.lines):
            raise ConfigError("duplicate line ids")
        for i, la in enumerate(self.lines):
            for lb in self.lines[i + 1:]:
                if la.t == lb.t:
                    raise ConfigError(
                        f"lines {la.id!r} and {lb.id!r} share slope {rat_str(la.t)}")
        seen: dict = {}
        for i, la in enumerate(self.lines):
            for lb in self.lines[i + 1:]:
                p = self.intersect(la.id, lb.id)
                if p in seen:
                    a0, b0 = seen[p]
                    triple = sorted({a0, b0, la.id, lb.id})
                    raise ConfigError(f"lines {triple} concurrent at {p}")
                seen[p] = (la.id, lb.id)

    @staticmethod
    def build(data: Sequence[tuple]) -> "LineConfig":
        """Build from (id, slope, intercept[, f0]) rows of rational-likes."""
        return LineConfig([Line(row[0], *(rat(v) for v in row[1:]))
                           for row in data])

    def ids(self) -> list:
        return [ln.id for ln in self.lines]

    def cache_key(self) -> tuple:
        return tuple((ln.id, ln.t, ln.s, ln.f0) for ln in self.lines)

    def line(self, a: str) -> Line:
        try:
            return self.by_id[a]
        except KeyError:
            raise ConfigError(f"unknown line id {a!r}") from None

    def intersect(self, a: str, b: str) -> Point:
        """The unique intersection point of lines a and b (a != b)."""
        cached = self._ipoints.get((a, b))
        if cached is not None:
            return cached
        la, lb = self.line(a), self.line(b)
        if a == b or la.t == lb.t:
            raise ConfigError(f"lines {a!r}, {b!r} do not intersect transversally")
        x = (lb.s - la.s) / (la.t - lb.t)
        p = Point(x, la.y_at(x))
        self._ipoints[(a, b)] = self._ipoints[(b, a)] = p
        return p

    def morphism_degree(self, a: str, b: str) -> int:
        """Degree of the generator attached to the (a,b) intersection: 0 iff slope(a) < slope(b)."""
        if a == b:
            raise ConfigError("degree of a diagonal hom generator is not defined here")
        return 0 if self.line(a).t < self.line(b).t else 1

    def f_diff(self, a: str, b: str, x: Fraction) -> Fraction:
        """f_a(x) - f_b(x)."""
        return self.line(a).f_at(x) - self.line(b).f_at(x)

    def all_points(self) -> dict:
        """All pairwise intersection points keyed by frozen id pair."""
        out = {}
        ids = self.ids()
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                out[frozenset((a, b))] = self.intersect(a, b)
        return out

    def points_on(self, a: str) -> list:
        """Intersection points lying on line a (the set S_a), sorted by x."""
        pts = [self.intersect(a, b) for b in self.ids() if b != a]
        return sorted(pts, key=lambda p: p.x)


# ---------------------------------------------------------------------------
# Cycle classification
# ---------------------------------------------------------------------------

def cross(o: Point, p: Point, q: Point) -> Fraction:
    """Cross product of (p-o) x (q-p): negative for a clockwise turn at p."""
    return (p.x - o.x) * (q.y - p.y) - (p.y - o.y) * (q.x - p.x)


def dot(o: Point, p: Point, q: Point) -> Fraction:
    return (p.x - o.x) * (q.x - p.x) + (p.y - o.y) * (q.y - p.y)


def shoelace_signed(points: Sequence[Point]) -> Fraction:
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        total += p.x * q.y - q.x * p.y
    return total / 2


@dataclass(frozen=True)
class PointCase:
    point: Point


@dataclass(frozen=True)
class NotAdmissible:
    reason: str = ""


@dataclass(frozen=True)
class CCPolygon:
    """A reduced clockwise convex vertex cycle.

    ``vertices`` lists the distinct consecutive points; ``runs`` gives, for
    each vertex, the positions of the original sequence collapsing onto it.
    The first and last run may sit at the same point (an open cycle closing
    on a repeat); angle conditions were checked under the cyclic
    identification.
    """
    vertices: tuple
    runs: tuple
    area: Fraction


def reduce_runs(seq: Sequence[Point]) -> tuple:
    """Collapse consecutive equal points, keeping original positions per run."""
    verts: list = []
    runs: list = []
    for i, p in enumerate(seq):
        if verts and p == verts[-1]:
            runs[-1].append(i)
        else:
            verts.append(p)
            runs.append([i])
    return verts, [tuple(r) for r in runs]


def classify_sequence(seq: Sequence[Point]):
    """Classify a nonempty point sequence as PointCase, CCPolygon or NotAdmissible."""
    if not seq:
        raise ValueError("empty point sequence")
    verts, runs = reduce_runs(seq)
    # cyclic identification: drop the duplicated endpoint for angle checks
    cyc = verts[:-1] if len(verts) > 1 and verts[0] == verts[-1] else list(verts)
    if len(cyc) == 1:
        return PointCase(cyc[0])
    if len(cyc) < 3:
        return NotAdmissible("fewer than three distinct cyclic vertices")
    n = len(cyc)
    strict_turn = False
    for i in range(n):
        o, p, q = cyc[(i - 1) % n], cyc[i], cyc[(i + 1) % n]
        c = cross(o, p, q)
        if c > 0:
            return NotAdmissible(f"counter-clockwise turn at {p}")
        if c == 0 and dot(o, p, q) <= 0:
            return NotAdmissible(f"angle 0 (reversal) at {p}")
        if c < 0:
            strict_turn = True
    if not strict_turn:
        return NotAdmissible("degenerate flat cycle")
    area = -shoelace_signed(cyc)
    assert area > 0, "clockwise cycle must have positive area"
    return CCPolygon(tuple(verts), tuple(runs), area)


def polygon_area(poly: CCPolygon) -> Fraction:
    return poly.area


def polygon_sign_degrees(poly: CCPolygon, marked: Sequence[int]):
    """Degrees and sign(s) for a CC cycle with marked degree-zero run indices.

    ``marked`` lists the run indices (0-based, in ``poly.runs`` order) that
    carry the two degree-zero elements.  Returns a list of (degrees, sigma)
    pairs: one entry normally, two in the ambiguous case where the first and
    last run sit at the same extremal point and the mark could be counted at
    either end.  Returns [] if the marks cannot realize the left/right
    extrema (the product vanishes).
    """
    verts = poly.vertices
    nruns = len(verts)
    if len(marked) != 2:
        return []
    xs = [v.x for v in verts]
    x_left, x_right = min(xs), max(xs)
    if x_left == x_right:
        return []
    i, j = sorted(marked)
    boundary_same = nruns > 1 and verts[0] == verts[-1]

    def assignments_for(idx: int) -> list:
        # sequence index choices for a mark at run idx (paper's i/j choice)
        if boundary_same and idx in (0, nruns - 1):
            return [0, nruns - 1]
        return [idx]

    out = []
    seen = set()
    for ii in assignments_for(i):
        for jj in assignments_for(j):
            if ii == jj:
                continue
            if {verts[ii].x, verts[jj].x} != {x_left, x_right}:
                continue
            left_idx = ii if verts[ii].x == x_left else jj
            right_idx = jj if left_idx == ii else ii
            sigma = -1 if left_idx < right_idx else 1
            degrees = tuple(0 if r in (i, j) else 1 for r in range(nruns))
            key = (degrees, sigma)
            if key not in seen:
                seen.add(key)
                out.append((degrees, sigma))
    return out


def parse_point(text: str) -> Point:
    body = text.strip().lstrip("(").rstrip(")")
    xs, ys = body.split(",")
    return Point(rat(xs), rat(ys))
