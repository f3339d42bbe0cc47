"""Area, lattice perimeter, barycenters and second moments of a moment polygon.

Interior integrals come from a fan triangulation at vertex 0 with the closed
form monomial integrals over a triangle; boundary integrals use the fact that
the integral of a linear function over an edge is its midpoint value times the
edge's lambda-length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .polygon import MomentPolygon, Point

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _triangle_moments(p0: Point, p1: Point, p2: Point) -> dict[tuple[int, int], Fraction]:
    s = ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])) / 2
    xs = (p0[0], p1[0], p2[0])
    ys = (p0[1], p1[1], p2[1])
    sx, sy = sum(xs), sum(ys)
    return {
        (0, 0): s,
        (1, 0): s * sx / 3,
        (0, 1): s * sy / 3,
        (2, 0): s * (sum(x * x for x in xs) + sx * sx) / 12,
        (0, 2): s * (sum(y * y for y in ys) + sy * sy) / 12,
        (1, 1): s * (sum(x * y for x, y in zip(xs, ys)) + sx * sy) / 12,
    }


@lru_cache(maxsize=4096)
def _raw_moments(P: MomentPolygon) -> dict[tuple[int, int], Fraction]:
    total = {key: Fraction(0) for key in ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))}
    vs = P.vertices
    for i in range(1, len(vs) - 1):
        for key, val in _triangle_moments(vs[0], vs[i], vs[i + 1]).items():
            total[key] += val
    return total


def monomial_moment(P: MomentPolygon, i: int, j: int) -> Fraction:
    """Exact integral of ``x**i * y**j`` over the polygon, for ``i + j <= 2``."""
    if i < 0 or j < 0 or i + j > 2:
        raise ValueError(f"only monomials of degree <= 2 are supported, got ({i}, {j})")
    return _raw_moments(P)[(i, j)]


def area(P: MomentPolygon) -> Fraction:
    return monomial_moment(P, 0, 0)


def lambda_perimeter(P: MomentPolygon) -> Fraction:
    return sum((e.lambda_length for e in P.edges), Fraction(0))


def interior_barycenter(P: MomentPolygon) -> Point:
    a = area(P)
    return (monomial_moment(P, 1, 0) / a, monomial_moment(P, 0, 1) / a)


def boundary_first_moments(P: MomentPolygon) -> Point:
    """Integrals of x and y over the boundary against the lattice length measure."""
    mx = my = Fraction(0)
    for e in P.edges:
        m = e.midpoint
        mx += m[0] * e.lambda_length
        my += m[1] * e.lambda_length
    return (mx, my)


def boundary_barycenter(P: MomentPolygon) -> Point:
    mx, my = boundary_first_moments(P)
    L = lambda_perimeter(P)
    return (mx / L, my / L)


def displacement(P: MomentPolygon) -> Point:
    bx, by = boundary_barycenter(P)
    cx, cy = interior_barycenter(P)
    return (bx - cx, by - cy)


def inertia_matrix(P: MomentPolygon) -> Matrix2:
    """Second central moments of the polygon about its interior barycenter."""
    a = area(P)
    if a == 0:
        raise ValueError("degenerate polygon has no inertia matrix")
    cx, cy = interior_barycenter(P)
    p11 = monomial_moment(P, 2, 0) - a * cx * cx
    p12 = monomial_moment(P, 1, 1) - a * cx * cy
    p22 = monomial_moment(P, 0, 2) - a * cy * cy
    return ((p11, p12), (p12, p22))


def quadratic_form_inverse(M: Matrix2, v: Point) -> Fraction:
    """``v . M^{-1} v`` for a symmetric 2x2 matrix, via the adjugate."""
    (a, b), (_, d) = M
    det = a * d - b * b
    return (d * v[0] * v[0] - 2 * b * v[0] * v[1] + a * v[1] * v[1]) / det


@dataclass(frozen=True)
class PolygonMeasures:
    area: Fraction
    lambda_perimeter: Fraction
    interior_barycenter: Point
    boundary_barycenter: Point
    displacement: Point
    inertia: Matrix2

    @property
    def quad_form(self) -> Fraction:
        return quadratic_form_inverse(self.inertia, self.displacement)

    CSV_COLUMNS = ("area", "perimeter", "xbar1", "xbar2", "bx1", "bx2",
                   "d1", "d2", "pi11", "pi12", "pi22")

    def csv_values(self) -> list[Fraction]:
        (p11, p12), (_, p22) = self.inertia
        return [self.area, self.lambda_perimeter, *self.interior_barycenter,
                *self.boundary_barycenter, *self.displacement, p11, p12, p22]


def measures(P: MomentPolygon) -> PolygonMeasures:
    xbar = interior_barycenter(P)
    bary = boundary_barycenter(P)
    return PolygonMeasures(
        area=area(P),
        lambda_perimeter=lambda_perimeter(P),
        interior_barycenter=xbar,
        boundary_barycenter=bary,
        displacement=(bary[0] - xbar[0], bary[1] - xbar[1]),
        inertia=inertia_matrix(P),
    )
