"""Exact virtual action, Futaki invariant and curvature bounds of toric surfaces."""

from .families import (
    CriticalPoint, FamilySpec, chop_family, derivative_check, family_eval,
    hirzebruch, hirzebruch_closed_form, minimize, scan, symmetric_two_point,
    symmetric_two_point_closed_form, two_point, two_point_closed_form,
)
from .invariants import (
    ActionReport, PiScaled, SurfaceTopology, action_report, calabi_lower_bound,
    chern_and_volume, futaki_norm_sq, futaki_vector, futaki_vector_per_edge,
    topology, virtual_action, weyl_lower_bound,
)
from .measures import (
    PolygonMeasures, area, boundary_barycenter, displacement, inertia_matrix,
    interior_barycenter, lambda_perimeter, measures, monomial_moment,
)
from .polygon import (
    BlowUpError, DelzantError, Edge, InvalidPolygonError, LatticeVector,
    MomentPolygon, NotDelzantError, UnimodularMap, apply_map, blow_up,
    build_polygon, gen_cp2, gen_hirzebruch, gen_p1xp1, gen_two_point_blowup,
    is_delzant, primitive_decompose, read_polygon, scale, write_polygon,
)

__version__ = "0.1.0"
