"""Parametrized families of moment polygons and the virtual action along them.

Built-in families are the Hirzebruch trapezoids (fibre area 1), the two-point
blow-up of CP2 (exceptional curve area 1) and its symmetric diagonal.  Generic
families are produced by chopping chosen corners of a Delzant base polygon by
parameter-dependent amounts.

The optimizer works in floats for the abscissae but compares exact rational
values of the action, so golden-section steps are never decided by rounding.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .invariants import virtual_action
from .polygon import (
    DelzantError, MomentPolygon, Number, blow_up, gen_hirzebruch,
    gen_two_point_blowup, require_delzant, to_rational,
)

log = logging.getLogger(__name__)

WITNESS_MAX_DENOMINATOR = 10**6
INVPHI = (math.sqrt(5) - 1) / 2


# ---------------------------------------------------------------------------
# small exact polynomial helpers (ascending coefficient lists)


def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _ppow(p, n):
    out = [1]
    for _ in range(n):
        out = _pmul(out, p)
    return out


def _pscale(p, c):
    return [c * a for a in p]


def _peval(p, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def _pderiv(p):
    return [i * a for i, a in enumerate(p)][1:] or [0]


def _bivariate(rows):
    """Build ``{alpha_power: beta_poly}`` from ``(alpha_power, beta_poly)`` pairs."""
    out: dict[int, list] = {}
    for k, poly in rows:
        out[k] = _padd(out.get(k, []), poly)
    return out


def _beval(P, a, b):
    return sum((a**k * _peval(poly, b) for k, poly in P.items()), Fraction(0))


def _bderiv_alpha(P):
    return {k - 1: _pscale(poly, k) for k, poly in P.items() if k > 0}


def _bderiv_beta(P):
    return {k: _pderiv(poly) for k, poly in P.items()}


# ---------------------------------------------------------------------------
# closed forms


def _hirzebruch_polys(k: int):
    k = Fraction(k)
    num = [k * (k * k + 2) / 2, 2 * (1 + k) ** 2, 4 + 3 * k, Fraction(2)]
    den = [k * k / 6, k, Fraction(1)]
    return num, den


def _check_hirzebruch_args(k, alpha):
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DelzantError(f"Hirzebruch index k must be a non-negative integer, got {k}")
    alpha = to_rational(alpha)
    if alpha <= 0:
        raise DelzantError(f"alpha must be positive, got {alpha}")
    return int(k), alpha


def hirzebruch_closed_form(k: int, alpha: Number) -> Fraction:
    """Virtual action of F_k with fibre area 1 and section parameter ``alpha``."""
    k, alpha = _check_hirzebruch_args(k, alpha)
    num, den = _hirzebruch_polys(k)
    return _peval(num, alpha) / _peval(den, alpha)


def hirzebruch_closed_form_derivative(k: int, alpha: Number) -> Fraction:
    """d/d(alpha) of :func:`hirzebruch_closed_form`, by the quotient rule.

    ``alpha = 0`` is allowed here (the rational function is smooth there for
    ``k > 0``) so the value at the wall can be inspected.
    """
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DelzantError(f"Hirzebruch index k must be a non-negative integer, got {k}")
    alpha = to_rational(alpha)
    num, den = _hirzebruch_polys(int(k))
    n, d = _peval(num, alpha), _peval(den, alpha)
    return (_peval(_pderiv(num), alpha) * d - n * _peval(_pderiv(den), alpha)) / (d * d)


_ONE_PLUS = [1, 1]

_TWO_POINT_NUM = _bivariate([
    (0, [3, 28, 96, 168, 164, 80, 16]),
    (6, _pscale(_ppow(_ONE_PLUS, 4), 16)),
    (5, _pscale([5, 24, 43, 37, 15, 2], 16)),
    (4, _pscale([41, 228, 478, 496, 263, 60, 4], 4)),
    (3, _pscale([21, 135, 326, 392, 248, 74, 8], 8)),
    (1, _pscale([7, 58, 176, 270, 228, 96, 16], 4)),
    (2, _pscale([24, 176, 479, 652, 478, 172, 24], 4)),
])
_TWO_POINT_NUM = {k: _pscale(v, 3) for k, v in _TWO_POINT_NUM.items()}

_TWO_POINT_DEN = _bivariate([
    (0, [1, 10, 36, 64, 60, 24]),
    (5, _pscale(_ppow(_ONE_PLUS, 5), 24)),
    (4, _pscale(_pmul(_ppow(_ONE_PLUS, 2), [5, 20, 23, 10]), 12)),
    (3, _pscale([4, 28, 72, 90, 57, 15], 16)),
    (2, _pscale([3, 24, 69, 96, 68, 20], 12)),
    (1, _pscale([5, 45, 144, 224, 180, 60], 2)),
])

_SYM_NUM = [9, 96, 396, 840, 954, 528, 96]
_SYM_DEN = [1, 12, 54, 120, 138, 72, 12]


def two_point_closed_form(alpha: Number, beta: Number) -> Fraction:
    """Virtual action of CP2 blown up at two points, as a rational function.

    Defined for ``alpha, beta >= 0`` so blow-down limits can be evaluated.
    """
    a, b = to_rational(alpha), to_rational(beta)
    return _beval(_TWO_POINT_NUM, a, b) / _beval(_TWO_POINT_DEN, a, b)


def two_point_closed_form_gradient(alpha: Number, beta: Number) -> tuple[Fraction, Fraction]:
    a, b = to_rational(alpha), to_rational(beta)
    n, d = _beval(_TWO_POINT_NUM, a, b), _beval(_TWO_POINT_DEN, a, b)
    grads = []
    for deriv in (_bderiv_alpha, _bderiv_beta):
        dn, dd = _beval(deriv(_TWO_POINT_NUM), a, b), _beval(deriv(_TWO_POINT_DEN), a, b)
        grads.append((dn * d - n * dd) / (d * d))
    return grads[0], grads[1]


def symmetric_two_point_closed_form(alpha: Number) -> Fraction:
    a = to_rational(alpha)
    return _peval(_SYM_NUM, a) / _peval(_SYM_DEN, a)


def symmetric_two_point_derivative(alpha: Number) -> Fraction:
    a = to_rational(alpha)
    n, d = _peval(_SYM_NUM, a), _peval(_SYM_DEN, a)
    return (_peval(_pderiv(_SYM_NUM), a) * d - n * _peval(_pderiv(_SYM_DEN), a)) / (d * d)


# ---------------------------------------------------------------------------
# family specifications

KINDS = ("hirzebruch", "two_point", "symmetric_two_point", "chop")


@dataclass(frozen=True)
class FamilySpec:
    """A curve or surface of moment polygons inside the Kaehler cone.

    ``domain`` holds one open interval ``(lo, hi)`` per parameter; ``hi`` is
    ``None`` for an unbounded interval.
    """

    kind: str
    k: Optional[int] = None
    base: Optional[MomentPolygon] = None
    chops: tuple[tuple[int, int], ...] = ()
    domain: tuple[tuple[Fraction, Optional[Fraction]], ...] = field(default=())

    @property
    def dimension(self) -> int:
        return len(self.domain)

    def label(self) -> str:
        if self.kind == "hirzebruch":
            return f"hirzebruch({self.k})"
        if self.kind == "chop":
            return f"chop({len(self.base)}-gon, {list(self.chops)})"
        return self.kind

    def check(self, params: Sequence[Fraction]) -> None:
        if len(params) != self.dimension:
            raise DelzantError(
                f"{self.label()} takes {self.dimension} parameter(s), got {len(params)}")
        for i, (p, (lo, hi)) in enumerate(zip(params, self.domain)):
            if not (p > lo and (hi is None or p < hi)):
                upper = "inf" if hi is None else str(hi)
                raise DelzantError(
                    f"parameter {i} = {p} outside the domain ({lo}, {upper}) of {self.label()}")

    def polygon(self, params) -> MomentPolygon:
        params = _as_params(params)
        self.check(params)
        if self.kind == "hirzebruch":
            return gen_hirzebruch(self.k, params[0])
        if self.kind == "two_point":
            return gen_two_point_blowup(params[0], params[1])
        if self.kind == "symmetric_two_point":
            return gen_two_point_blowup(params[0], params[0])
        P = self.base
        # chopping in decreasing vertex order keeps earlier indices valid
        for vertex, index in sorted(self.chops, reverse=True):
            P = blow_up(P, vertex, params[index])
        return P


_OPEN_HALF_LINE = (Fraction(0), None)


def hirzebruch(k: int) -> FamilySpec:
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DelzantError(f"Hirzebruch index k must be a non-negative integer, got {k}")
    return FamilySpec("hirzebruch", k=int(k), domain=(_OPEN_HALF_LINE,))


def two_point() -> FamilySpec:
    return FamilySpec("two_point", domain=(_OPEN_HALF_LINE, _OPEN_HALF_LINE))


def symmetric_two_point() -> FamilySpec:
    return FamilySpec("symmetric_two_point", domain=(_OPEN_HALF_LINE,))


def chop_family(base: MomentPolygon, chops: Sequence[tuple[int, int]]) -> FamilySpec:
    """Blow up ``base`` at each listed ``(vertex, parameter index)``.

    The domain of every parameter is bounded conservatively: an edge whose two
    ends are both chopped gets split evenly between the two parameters, so any
    point of the domain satisfies the blow-up precondition at every step.
    """
    require_delzant(base)
    chops = tuple((int(v), int(i)) for v, i in chops)
    if not chops:
        raise DelzantError("a chop family needs at least one chopped vertex")
    vertices = [v for v, _ in chops]
    if len(set(vertices)) != len(vertices):
        raise DelzantError("each vertex may be chopped at most once")
    n = len(base)
    for v in vertices:
        if not 0 <= v < n:
            raise DelzantError(f"vertex index {v} out of range for {n} vertices")
    dim = max(i for _, i in chops) + 1
    if sorted({i for _, i in chops}) != list(range(dim)):
        raise DelzantError("parameter indices must be 0, 1, ... without gaps")

    chopped = set(vertices)
    bounds = [None] * dim
    for v, idx in chops:
        for edge_index, other in ((v, (v + 1) % n), (v - 1, (v - 1) % n)):
            length = base.edges[edge_index].lambda_length
            share = length / 2 if other in chopped else length
            bounds[idx] = share if bounds[idx] is None else min(bounds[idx], share)
    domain = tuple((Fraction(0), b) for b in bounds)
    return FamilySpec("chop", base=base, chops=chops, domain=domain)


def _as_params(params) -> tuple[Fraction, ...]:
    if isinstance(params, (int, float, Fraction, str)):
        params = (params,)
    return tuple(to_rational(p) for p in params)


def family_eval(F: FamilySpec, params) -> Fraction:
    """Exact virtual action of the family member at ``params``.

    Floats are taken at their exact binary value, so the result is the exact
    action of a nearby rational parameter point.
    """
    return virtual_action(F.polygon(params))


def closed_form(F: FamilySpec, params) -> Optional[Fraction]:
    p = _as_params(params)
    if F.kind == "hirzebruch":
        return hirzebruch_closed_form(F.k, p[0])
    if F.kind == "two_point":
        return two_point_closed_form(p[0], p[1])
    if F.kind == "symmetric_two_point":
        return symmetric_two_point_closed_form(p[0])
    return None


def closed_form_gradient(F: FamilySpec, params) -> Optional[tuple[Fraction, ...]]:
    p = _as_params(params)
    if F.kind == "hirzebruch":
        return (hirzebruch_closed_form_derivative(F.k, p[0]),)
    if F.kind == "two_point":
        return two_point_closed_form_gradient(p[0], p[1])
    if F.kind == "symmetric_two_point":
        return (symmetric_two_point_derivative(p[0]),)
    return None


# ---------------------------------------------------------------------------
# derivatives


class DerivativeCheck(NamedTuple):
    fd_gradient: tuple[float, ...]
    exact_gradient: Optional[tuple[float, ...]]
    discrepancy: Optional[float]


def fd_gradient_exact(F: FamilySpec, params, h) -> tuple[Fraction, ...]:
    """Central differences with exact rational arithmetic (no rounding error)."""
    p = _as_params(params)
    h = to_rational(h)
    if h <= 0:
        raise ValueError("step h must be positive")
    out = []
    for i in range(len(p)):
        up = p[:i] + (p[i] + h,) + p[i + 1:]
        dn = p[:i] + (p[i] - h,) + p[i + 1:]
        out.append((family_eval(F, up) - family_eval(F, dn)) / (2 * h))
    return tuple(out)


def derivative_check(F: FamilySpec, params, h: float = 1e-6) -> DerivativeCheck:
    fd = fd_gradient_exact(F, params, h)
    exact = closed_form_gradient(F, params)
    fd_f = tuple(float(g) for g in fd)
    if exact is None:
        return DerivativeCheck(fd_f, None, None)
    ex_f = tuple(float(g) for g in exact)
    disc = max(abs(float(a - b)) for a, b in zip(fd, exact))
    return DerivativeCheck(fd_f, ex_f, disc)


# ---------------------------------------------------------------------------
# scans


class GridAxis(NamedTuple):
    lo: Fraction
    hi: Fraction
    steps: int

    def points(self) -> list[Fraction]:
        if self.steps < 1:
            raise DelzantError("grid axis needs at least one step")
        if self.steps == 1:
            return [self.lo]
        d = (self.hi - self.lo) / (self.steps - 1)
        return [self.lo + i * d for i in range(self.steps)]


class ScanRow(NamedTuple):
    params: tuple[Fraction, ...]
    action: Fraction


def _worker_count() -> int:
    env = os.environ.get("DELZANT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer DELZANT_THREADS=%r", env)
    return os.cpu_count() or 1


def _eval_row(args) -> Fraction:
    F, p = args
    return family_eval(F, p)


PARALLEL_THRESHOLD = 512


def scan(F: FamilySpec, grid: Sequence) -> list[ScanRow]:
    """Evaluate the action on a row-major grid (last parameter varies fastest)."""
    axes = [a if isinstance(a, GridAxis) else GridAxis(to_rational(a[0]), to_rational(a[1]), int(a[2]))
            for a in grid]
    if len(axes) != F.dimension:
        raise DelzantError(f"{F.label()} needs a {F.dimension}-dimensional grid, got {len(axes)}")
    points: list[tuple[Fraction, ...]] = [()]
    for axis in axes:
        points = [p + (x,) for p in points for x in axis.points()]
    if not points:
        raise DelzantError("empty grid")
    for p in points:
        F.check(p)
    workers = min(_worker_count(), len(points))
    if workers > 1 and len(points) >= PARALLEL_THRESHOLD:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_eval_row, [(F, p) for p in points], chunksize=64))
    else:
        values = [family_eval(F, p) for p in points]
    return [ScanRow(p, v) for p, v in zip(points, values)]


# ---------------------------------------------------------------------------
# minimization


@dataclass(frozen=True)
class CriticalPoint:
    params: tuple[float, ...]
    action_value: float
    witness: tuple[Fraction, ...]
    action_value_exact_at_rational_witness: Fraction
    gradient_norm: float
    classification: str  # interior_min | boundary | saddle_suspect
    iterations: int = 0

    @property
    def is_bach_flat_candidate(self) -> bool:
        return self.classification == "interior_min"


def _golden(f, lo: float, hi: float, tol: float, max_iter: int = 500):
    """Golden-section search on ``[lo, hi]``; ``f`` must return comparable values."""
    a, b = lo, hi
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
        it += 1
    return (a + b) / 2, it


def _exact(F: FamilySpec):
    def f(*params) -> Fraction:
        return family_eval(F, params)
    return f


def _fd_step(x: float) -> float:
    return 1e-6 * max(1.0, abs(x))


def _grad_and_curvature(F: FamilySpec, x: tuple[float, ...]):
    """Exact central first and second differences at ``x`` (as floats)."""
    base = family_eval(F, x)
    grad, curv = [], []
    for i, xi in enumerate(x):
        h = Fraction(_fd_step(xi))
        px = tuple(Fraction(v) for v in x)
        up = px[:i] + (px[i] + h,) + px[i + 1:]
        dn = px[:i] + (px[i] - h,) + px[i + 1:]
        fu, fd = family_eval(F, up), family_eval(F, dn)
        grad.append(float((fu - fd) / (2 * h)))
        curv.append(float((fu - 2 * base + fd) / (h * h)))
    return grad, curv


def _resolve_bracket(F: FamilySpec, bracket, index: int) -> tuple[float, float]:
    lo, hi = F.domain[index]
    if bracket is not None:
        b_lo, b_hi = float(bracket[0]), float(bracket[1])
    else:
        b_lo = float(lo) + 1e-3
        b_hi = float(hi) - 1e-3 if hi is not None else float(lo) + 20.0
    if not b_lo < b_hi:
        raise DelzantError(f"empty bracket ({b_lo}, {b_hi})")
    if b_lo <= lo or (hi is not None and b_hi >= hi):
        raise DelzantError(f"bracket ({b_lo}, {b_hi}) leaves the domain of {F.label()}")
    return b_lo, b_hi


def minimize(F: FamilySpec, bracket=None, init=None, tol: float = 1e-10,
             grad_tol: float = 1e-8, max_sweeps: int = 200) -> CriticalPoint:
    """Locate a minimum of the virtual action along a family.

    One parameter: golden-section search in ``bracket`` down to width ``tol``.
    Two or more: cyclic coordinate descent of golden-section line searches
    inside per-coordinate brackets (``bracket`` is then a list of pairs),
    starting at ``init``; it stops when a full sweep moves every coordinate by
    less than ``tol``.  A minimum sitting on a bracket end is reported with
    classification ``boundary`` rather than raised.
    """
    f = _exact(F)
    dim = F.dimension
    if dim == 1:
        br = bracket[0] if bracket is not None and isinstance(bracket[0], (tuple, list)) else bracket
        lo, hi = _resolve_bracket(F, br, 0)
        x_star, iters = _golden(f, lo, hi, tol)
        x = (x_star,)
        brackets = [(lo, hi)]
    else:
        brackets = [_resolve_bracket(F, bracket[i] if bracket is not None else None, i)
                    for i in range(dim)]
        if init is None:
            x = [(b_lo + b_hi) / 2 for b_lo, b_hi in brackets]
        else:
            x = [float(v) for v in init]
        iters = 0
        line_tol = max(tol, 1e-4)
        for _ in range(max_sweeps):
            moved = 0.0
            for i, (b_lo, b_hi) in enumerate(brackets):
                def line(t, i=i):
                    return f(*(x[:i] + [t] + x[i + 1:]))
                t, n = _golden(line, b_lo, b_hi, line_tol)
                iters += n
                moved = max(moved, abs(t - x[i]))
                x[i] = t
            if moved < tol and line_tol <= tol:
                break
            # line searches only need to be sharper than the current progress
            line_tol = max(tol, min(line_tol, moved * 1e-3))
        else:
            log.warning("coordinate descent did not settle within %d sweeps", max_sweeps)
        x = tuple(x)

    value = f(*x)
    grad, curv = _grad_and_curvature(F, x)
    gnorm = math.sqrt(sum(g * g for g in grad))

    on_edge = any(min(xi - b_lo, b_hi - xi) < 10 * tol for xi, (b_lo, b_hi) in zip(x, brackets))
    if on_edge:
        classification = "boundary"
    elif gnorm < grad_tol and all(c > 0 for c in curv):
        classification = "interior_min"
    else:
        classification = "saddle_suspect"

    witness = tuple(Fraction(xi).limit_denominator(WITNESS_MAX_DENOMINATOR) for xi in x)
    try:
        exact_w = family_eval(F, witness)
    except DelzantError:
        witness = tuple(Fraction(xi) for xi in x)
        exact_w = family_eval(F, witness)
    return CriticalPoint(
        params=x,
        action_value=float(value),
        witness=witness,
        action_value_exact_at_rational_witness=exact_w,
        gradient_norm=gnorm,
        classification=classification,
        iterations=iters,
    )
