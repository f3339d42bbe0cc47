"""Moment polygons: exact construction, lattice structure, symmetries and blow-ups.

All coordinates are :class:`fractions.Fraction`.  Points are plain ``(x, y)``
tuples; a polygon is stored counterclockwise with no repeated or collinear
vertices.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

Number = Union[int, Fraction, str]
Point = tuple[Fraction, Fraction]


class DelzantError(ValueError):
    """Base class for domain errors (bad polygon, bad parameter)."""


class InvalidPolygonError(DelzantError):
    def __init__(self, message: str, vertex: Point | None = None):
        super().__init__(message)
        self.vertex = vertex


class NotDelzantError(DelzantError):
    def __init__(self, defects: Sequence["CornerDefect"]):
        parts = [f"vertex ({fmt(d.vertex[0])}, {fmt(d.vertex[1])}) has corner determinant {d.det}"
                 for d in defects]
        super().__init__("polygon is not Delzant: " + "; ".join(parts))
        self.defects = tuple(defects)


class BlowUpError(DelzantError):
    pass


def fmt(q: Fraction) -> str:
    return str(q)


def to_rational(value: Number | float) -> Fraction:
    """Coerce an int, Fraction, float or ``"p/q"`` string to a Fraction.

    Floats are converted exactly (their binary value), never rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse an integer or ``p/q`` token with ``q > 0``."""
    token = text.strip()
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"malformed rational {text!r}")
    value = Fraction(token)  # raises ZeroDivisionError on q == 0
    return value


def _point(p: Sequence[Number]) -> Point:
    if len(p) != 2:
        raise InvalidPolygonError(f"point {p!r} does not have two coordinates")
    return (to_rational(p[0]), to_rational(p[1]))


def cross(u: Sequence[Fraction], v: Sequence[Fraction]):
    return u[0] * v[1] - u[1] * v[0]


# ---------------------------------------------------------------------------
# lattice vectors


class LatticeVector(NamedTuple):
    a: int
    b: int

    @property
    def is_primitive(self) -> bool:
        return (self.a, self.b) != (0, 0) and math.gcd(self.a, self.b) == 1

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.a, -self.b)


def primitive_decompose(w: Sequence[Number]) -> tuple[LatticeVector, Fraction]:
    """Split a rational vector as ``length * direction`` with a primitive direction.

    The returned length is the lattice (lambda) length of the segment ``w``.

    >>> primitive_decompose((4, 6))
    (LatticeVector(a=2, b=3), Fraction(2, 1))
    """
    x, y = to_rational(w[0]), to_rational(w[1])
    if x == 0 and y == 0:
        raise ValueError("zero vector has no primitive direction")
    scale = math.lcm(x.denominator, y.denominator)
    ix, iy = int(x * scale), int(y * scale)
    g = math.gcd(ix, iy)
    return LatticeVector(ix // g, iy // g), Fraction(g, scale)


# ---------------------------------------------------------------------------
# polygon


class Edge(NamedTuple):
    start: Point
    end: Point
    direction: LatticeVector
    lambda_length: Fraction

    @property
    def midpoint(self) -> Point:
        return ((self.start[0] + self.end[0]) / 2, (self.start[1] + self.end[1]) / 2)


class CornerDefect(NamedTuple):
    index: int
    vertex: Point
    det: int


def _signed_double_area(pts: Sequence[Point]) -> Fraction:
    n = len(pts)
    return sum((cross(pts[i], pts[(i + 1) % n]) for i in range(n)), Fraction(0))


def _normalize(raw: Sequence[Sequence[Number]]) -> tuple[Point, ...]:
    pts = [_point(p) for p in raw]
    n = len(pts)
    if n < 3:
        raise InvalidPolygonError(f"a polygon needs at least 3 vertices, got {n}")
    for i in range(n):
        if pts[i] == pts[(i + 1) % n]:
            raise InvalidPolygonError(
                f"duplicate consecutive vertex ({fmt(pts[i][0])}, {fmt(pts[i][1])})", pts[i])
    for i in range(n):
        prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
        turn = cross((cur[0] - prev[0], cur[1] - prev[1]), (nxt[0] - cur[0], nxt[1] - cur[1]))
        if turn == 0:
            raise InvalidPolygonError(
                f"collinear vertices around ({fmt(cur[0])}, {fmt(cur[1])})", cur)
    if _signed_double_area(pts) < 0:
        pts = [pts[0]] + pts[:0:-1]
    # strict convexity: every other vertex lies strictly left of every edge
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        e = (b[0] - a[0], b[1] - a[1])
        for j in range(n):
            if j == i or j == (i + 1) % n:
                continue
            if cross(e, (pts[j][0] - a[0], pts[j][1] - a[1])) <= 0:
                raise InvalidPolygonError(
                    f"polygon is not convex at vertex ({fmt(pts[j][0])}, {fmt(pts[j][1])})", pts[j])
    return tuple(pts)


@dataclass(frozen=True)
class MomentPolygon:
    """A strictly convex rational polygon, vertices stored counterclockwise.

    Construction validates and normalizes; clockwise input is reversed while
    keeping the first vertex in place.  Delzant-ness is *not* required here,
    see :func:`is_delzant`.
    """

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[Sequence[Number]]):
        object.__setattr__(self, "vertices", _normalize(list(vertices)))

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        out = []
        for i, a in enumerate(vs):
            b = vs[(i + 1) % len(vs)]
            direction, length = primitive_decompose((b[0] - a[0], b[1] - a[1]))
            out.append(Edge(a, b, direction, length))
        return tuple(out)

    def corner_directions(self, i: int) -> tuple[LatticeVector, LatticeVector]:
        """Primitive directions leaving vertex ``i`` along its next and previous edges."""
        edges = self.edges
        return edges[i].direction, -edges[i - 1].direction

    def corner_det(self, i: int) -> int:
        u, w = self.corner_directions(i)
        return u.a * w.b - u.b * w.a

    def same_cycle(self, other: "MomentPolygon") -> bool:
        """True if both polygons have the same vertices up to cyclic relabelling."""
        if len(self) != len(other):
            return False
        try:
            k = other.vertices.index(self.vertices[0])
        except ValueError:
            return False
        return other.vertices[k:] + other.vertices[:k] == self.vertices

    def __repr__(self) -> str:
        body = ", ".join(f"({fmt(x)}, {fmt(y)})" for x, y in self.vertices)
        return f"MomentPolygon([{body}])"


def build_polygon(vertices: Iterable[Sequence[Number]]) -> MomentPolygon:
    return MomentPolygon(vertices)


def delzant_defects(P: MomentPolygon) -> list[CornerDefect]:
    """Corners whose outgoing primitive directions do not span the lattice."""
    return [CornerDefect(i, v, P.corner_det(i))
            for i, v in enumerate(P.vertices) if abs(P.corner_det(i)) != 1]


def is_delzant(P: MomentPolygon) -> bool:
    return not delzant_defects(P)


def require_delzant(P: MomentPolygon) -> None:
    defects = delzant_defects(P)
    if defects:
        raise NotDelzantError(defects)


# ---------------------------------------------------------------------------
# symmetries


@dataclass(frozen=True)
class UnimodularMap:
    """Affine map ``x -> M x + t`` with ``M`` in GL(2, Z)."""

    matrix: tuple[tuple[int, int], tuple[int, int]]
    translation: Point = (Fraction(0), Fraction(0))

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if not all(isinstance(v, int) for v in (a, b, c, d)):
            raise ValueError("unimodular map entries must be integers")
        if a * d - b * c not in (1, -1):
            raise ValueError(f"matrix {self.matrix} has determinant {a * d - b * c}, expected +-1")
        object.__setattr__(self, "translation", _point(self.translation))

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def linear(self, p: Sequence[Fraction]) -> Point:
        (a, b), (c, d) = self.matrix
        return (a * p[0] + b * p[1], c * p[0] + d * p[1])

    def __call__(self, p: Sequence[Fraction]) -> Point:
        x, y = self.linear(p)
        return (x + self.translation[0], y + self.translation[1])


def translation(t: Sequence[Number]) -> UnimodularMap:
    return UnimodularMap(((1, 0), (0, 1)), _point(t))


def apply_map(P: MomentPolygon, T: UnimodularMap) -> MomentPolygon:
    return MomentPolygon(T(v) for v in P.vertices)


def scale(P: MomentPolygon, c: Number) -> MomentPolygon:
    c = to_rational(c)
    if c <= 0:
        raise DelzantError(f"scale factor must be positive, got {c}")
    return MomentPolygon((c * x, c * y) for x, y in P.vertices)


# ---------------------------------------------------------------------------
# generators


def _positive(name: str, value: Number) -> Fraction:
    q = to_rational(value)
    if q <= 0:
        raise DelzantError(f"parameter {name} must be positive, got {q}")
    return q


def gen_cp2(a: Number = 1) -> MomentPolygon:
    a = _positive("a", a)
    return MomentPolygon([(0, 0), (a, 0), (0, a)])


def gen_p1xp1(a: Number = 1, b: Number = 1) -> MomentPolygon:
    a, b = _positive("a", a), _positive("b", b)
    return MomentPolygon([(0, 0), (a, 0), (a, b), (0, b)])


def gen_hirzebruch(k: int, alpha: Number) -> MomentPolygon:
    """Trapezoid of the Hirzebruch surface F_k with fibre area 1.

    Bottom edge has length ``alpha + k``, top edge ``alpha``, height 1.
    """
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DelzantError(f"Hirzebruch index k must be a non-negative integer, got {k}")
    k = int(k)
    alpha = _positive("alpha", alpha)
    return MomentPolygon([(0, 0), (alpha + k, 0), (alpha, 1), (0, 1)])


def gen_two_point_blowup(alpha: Number, beta: Number) -> MomentPolygon:
    """Pentagon of CP2 blown up at two points, exceptional curve of area 1."""
    alpha, beta = _positive("alpha", alpha), _positive("beta", beta)
    return MomentPolygon([(1, 0), (1 + alpha, 0), (1 + alpha, 1 + beta), (0, 1 + beta), (0, 1)])


def blow_up(P: MomentPolygon, vertex_index: int, eps: Number) -> MomentPolygon:
    """Chop the corner at ``vertex_index`` by a new edge of lambda-length ``eps``."""
    n = len(P)
    if not 0 <= vertex_index < n:
        raise BlowUpError(f"vertex index {vertex_index} out of range for {n} vertices")
    eps = to_rational(eps)
    if eps <= 0:
        raise BlowUpError(f"blow-up size must be positive, got {eps}")
    require_delzant(P)
    i = vertex_index
    ahead, behind = P.edges[i], P.edges[i - 1]
    limit = min(ahead.lambda_length, behind.lambda_length)
    if eps >= limit:
        raise BlowUpError(
            f"blow-up size {eps} at vertex {i} must be smaller than the adjacent edge length {limit}")
    u, w = P.corner_directions(i)
    x, y = P.vertices[i]
    on_prev = (x + eps * w.a, y + eps * w.b)
    on_next = (x + eps * u.a, y + eps * u.b)
    vs = list(P.vertices)
    return MomentPolygon(vs[:i] + [on_prev, on_next] + vs[i + 1:])


# ---------------------------------------------------------------------------
# text format


def read_polygon(text: str) -> MomentPolygon:
    """Parse the one-vertex-per-line format; ``#`` starts a comment line."""
    pts = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        fields = s.split()
        if len(fields) != 2:
            raise InvalidPolygonError(f"line {lineno}: expected 2 fields, got {len(fields)}")
        try:
            pts.append((parse_rational(fields[0]), parse_rational(fields[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidPolygonError(f"line {lineno}: {exc}") from None
    return MomentPolygon(pts)


def write_polygon(P: MomentPolygon) -> str:
    return "".join(f"{fmt(x)} {fmt(y)}\n" for x, y in P.vertices)
