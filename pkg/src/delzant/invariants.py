"""Class invariants of a polarized toric surface computed from its moment polygon.

Quantities carrying powers of pi (Futaki components, Calabi and Weyl energies)
are kept as :class:`PiScaled` so that every identity can be checked exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .measures import PolygonMeasures, measures
from .polygon import MomentPolygon, is_delzant, require_delzant, to_rational

log = logging.getLogger(__name__)

# 64-bit value used only for float rendering
PI_FLOAT = math.pi


@dataclass(frozen=True, eq=False)
class PiScaled:
    """Exact value ``coefficient * pi**pi_power``."""

    coefficient: Fraction
    pi_power: int = 0

    def __post_init__(self):
        if self.pi_power < 0:
            raise ValueError("pi_power must be non-negative")
        object.__setattr__(self, "coefficient", to_rational(self.coefficient))

    def _coerce(self, other) -> "PiScaled":
        if isinstance(other, PiScaled):
            return other
        if isinstance(other, (int, Fraction)):
            return PiScaled(Fraction(other), 0)
        return NotImplemented

    def _aligned(self, other: "PiScaled") -> int:
        if self.coefficient == 0:
            return other.pi_power
        if other.coefficient == 0 or self.pi_power == other.pi_power:
            return self.pi_power
        raise ValueError(f"cannot combine pi^{self.pi_power} with pi^{other.pi_power}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PiScaled(self.coefficient + other.coefficient, self._aligned(other))

    __radd__ = __add__

    def __neg__(self):
        return PiScaled(-self.coefficient, self.pi_power)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PiScaled(self.coefficient * other.coefficient, self.pi_power + other.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.coefficient == 0:
            raise ZeroDivisionError("division by zero")
        if other.pi_power > self.pi_power and self.coefficient != 0:
            raise ValueError("negative powers of pi are not represented")
        return PiScaled(self.coefficient / other.coefficient,
                        max(self.pi_power - other.pi_power, 0))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.coefficient == 0 or other.coefficient == 0:
            return self.coefficient == other.coefficient
        return self.pi_power == other.pi_power and self.coefficient == other.coefficient

    def __hash__(self):
        if self.coefficient == 0:
            return hash(0)
        return hash((self.coefficient, self.pi_power))

    def _cmp(self, other) -> Fraction:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare PiScaled with {type(other).__name__}")
        self._aligned(other)
        return self.coefficient - other.coefficient

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.coefficient) * PI_FLOAT ** self.pi_power

    def __str__(self):
        c = self.coefficient
        if c == 0 or self.pi_power == 0:
            return str(c)
        pi = "pi" if self.pi_power == 1 else f"pi^{self.pi_power}"
        return f"({c})*{pi}" if c.denominator != 1 or c < 0 else f"{c}*{pi}"

    def __repr__(self):
        return f"PiScaled({self.coefficient!s}, {self.pi_power})"


PI = PiScaled(Fraction(1), 1)


@dataclass(frozen=True)
class SurfaceTopology:
    euler: int
    signature: int
    b2: int

    def __post_init__(self):
        if self.b2 != self.euler - 2 or 2 * self.euler + 3 * self.signature != 12 - self.euler:
            raise ValueError(f"inconsistent topology {self}")

    @property
    def c1_squared(self) -> int:
        return 2 * self.euler + 3 * self.signature


@dataclass(frozen=True)
class ActionReport:
    chern_pairing: Fraction
    volume_pairing: Fraction
    futaki: tuple[PiScaled, PiScaled]
    futaki_norm_sq: PiScaled
    quad_form: Fraction
    virtual_action: Fraction
    calabi_bound: PiScaled
    delzant: bool
    topology: Optional[SurfaceTopology]
    weyl_bound: Optional[PiScaled]
    riemann_bound: Optional[PiScaled]
    ricci_bound: Optional[PiScaled]
    measures: PolygonMeasures

    @property
    def einstein_part(self) -> Fraction:
        """``(c1 . Omega)^2 / Omega^2``, the Futaki-free lower bound."""
        return self.chern_pairing ** 2 / self.volume_pairing

    @property
    def futaki_part(self) -> Fraction:
        return (self.futaki_norm_sq / (32 * PI * PI)).coefficient


def _m(P_or_m) -> PolygonMeasures:
    return P_or_m if isinstance(P_or_m, PolygonMeasures) else measures(P_or_m)


def futaki_vector(P: MomentPolygon) -> tuple[PiScaled, PiScaled]:
    """Futaki components from the barycenter displacement: ``-4 pi |dP| D``."""
    m = _m(P)
    L = m.lambda_perimeter
    return tuple(PiScaled(-4 * L * d, 1) for d in m.displacement)


def futaki_vector_per_edge(P: MomentPolygon) -> tuple[PiScaled, PiScaled]:
    """Futaki components summed edge by edge, independent of the closed form."""
    m = measures(P)
    xbar = m.interior_barycenter
    comps = []
    for k in (0, 1):
        total = sum(((e.midpoint[k] - xbar[k]) * e.lambda_length for e in P.edges), Fraction(0))
        comps.append(PiScaled(-4 * total, 1))
    return tuple(comps)


def futaki_norm_sq(P: MomentPolygon) -> PiScaled:
    m = _m(P)
    return PiScaled(16 * m.lambda_perimeter ** 2 * m.quad_form, 2)


def virtual_action(P: MomentPolygon) -> Fraction:
    m = _m(P)
    L = m.lambda_perimeter
    return L * L / 2 * (1 / m.area + m.quad_form)


def chern_and_volume(P: MomentPolygon) -> tuple[Fraction, Fraction]:
    m = _m(P)
    return m.lambda_perimeter, 2 * m.area


def calabi_lower_bound(P: MomentPolygon) -> PiScaled:
    return PiScaled(32 * virtual_action(P), 2)


def topology(P: MomentPolygon) -> SurfaceTopology:
    """Euler number, signature and b2 of the toric surface with polygon ``P``.

    The Euler number is the number of torus fixed points (vertices); the
    surface is simply connected with b+ = 1, so the signature is ``4 - chi``.
    """
    require_delzant(P)
    chi = len(P)
    return SurfaceTopology(euler=chi, signature=4 - chi, b2=chi - 2)


def _curvature_bounds(A: Fraction, top: SurfaceTopology) -> tuple[PiScaled, PiScaled, PiScaled]:
    calabi = PiScaled(32 * A, 2)
    chi, tau = top.euler, top.signature
    weyl = PiScaled(-12 * tau, 2) + calabi / 12
    riemann = PiScaled(-8 * (chi + 3 * tau), 2) + calabi / 4
    ricci = PiScaled(-8 * (2 * chi + 3 * tau), 2) + calabi / 2
    return weyl, riemann, ricci


def weyl_lower_bound(P: MomentPolygon) -> PiScaled:
    """Weyl energy of an extremal metric in the class, ``-12 pi^2 tau + C / 12``."""
    return _curvature_bounds(virtual_action(P), topology(P))[0]


def riemann_lower_bound(P: MomentPolygon) -> PiScaled:
    return _curvature_bounds(virtual_action(P), topology(P))[1]


def ricci_lower_bound(P: MomentPolygon) -> PiScaled:
    return _curvature_bounds(virtual_action(P), topology(P))[2]


def action_report(P: MomentPolygon) -> ActionReport:
    m = measures(P)
    A = virtual_action(m)
    delzant = is_delzant(P)
    top = weyl = riemann = ricci = None
    if delzant:
        top = topology(P)
        weyl, riemann, ricci = _curvature_bounds(A, top)
    else:
        log.warning("polygon is not Delzant; action computed but has no toric meaning")
    c1, vol = chern_and_volume(m)
    return ActionReport(
        chern_pairing=c1,
        volume_pairing=vol,
        futaki=futaki_vector(m),
        futaki_norm_sq=futaki_norm_sq(m),
        quad_form=m.quad_form,
        virtual_action=A,
        calabi_bound=PiScaled(32 * A, 2),
        delzant=delzant,
        topology=top,
        weyl_bound=weyl,
        riemann_bound=riemann,
        ricci_bound=ricci,
        measures=m,
    )


INVARIANT_CSV_COLUMNS = (
    "perimeter", "area", "d1", "d2", "quad_form", "action",
    "futaki1_coeff", "futaki2_coeff", "calabi_coeff", "euler", "signature",
    "weyl_coeff", "riemann_coeff", "ricci_coeff",
)


def invariant_csv_values(r: ActionReport) -> list:
    top = r.topology
    missing = ""
    return [
        r.chern_pairing, r.measures.area, *r.measures.displacement, r.quad_form, r.virtual_action,
        r.futaki[0].coefficient, r.futaki[1].coefficient, r.calabi_bound.coefficient,
        top.euler if top else missing, top.signature if top else missing,
        r.weyl_bound.coefficient if top else missing,
        r.riemann_bound.coefficient if top else missing,
        r.ricci_bound.coefficient if top else missing,
    ]

