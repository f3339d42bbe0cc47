from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from delzant.measures import area, lambda_perimeter
from delzant.polygon import (
    BlowUpError, DelzantError, InvalidPolygonError, LatticeVector, MomentPolygon,
    NotDelzantError, UnimodularMap, apply_map, blow_up, build_polygon, delzant_defects,
    gen_cp2, gen_hirzebruch, gen_p1xp1, gen_two_point_blowup, is_delzant,
    parse_rational, primitive_decompose, read_polygon, scale, translation, write_polygon,
)
from randpoly import random_delzant, random_map, rng_for

UNIT_TRIANGLE = [(0, 0), (1, 0), (0, 1)]
UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.mark.parametrize("w, direction, length", [
    ((4, 6), (2, 3), Q(2)),
    ((0, 5), (0, 1), Q(5)),
    ((Q(1, 2), Q(-1, 2)), (1, -1), Q(1, 2)),
    ((-3, 0), (-1, 0), Q(3)),
    ((Q(2, 3), Q(4, 9)), (3, 2), Q(2, 9)),
])
def test_primitive_decompose(w, direction, length):
    d, L = primitive_decompose(w)
    assert d == LatticeVector(*direction)
    assert L == length
    assert d.is_primitive


def test_primitive_decompose_zero():
    with pytest.raises(ValueError):
        primitive_decompose((0, 0))


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_primitive_decompose_round_trip(x, y):
    if x == 0 and y == 0:
        return
    d, L = primitive_decompose((x, y))
    assert L > 0 and d.is_primitive
    assert (L * d.a, L * d.b) == (x, y)


def test_build_triangle():
    P = build_polygon(UNIT_TRIANGLE)
    assert len(P.edges) == 3
    assert all(e.lambda_length == 1 for e in P.edges)


def test_clockwise_is_reversed():
    P = build_polygon([(0, 0), (0, 1), (1, 0)])
    assert P.vertices == ((0, 0), (1, 0), (0, 1))
    assert P == build_polygon(UNIT_TRIANGLE)


@pytest.mark.parametrize("pts", [
    [(0, 0), (1, 0), (2, 0), (0, 1)],
    [(0, 0), (1, 0)],
    [(0, 0), (0, 0), (1, 0), (0, 1)],
    [(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)],
    [(0, 0), (2, 0), (0, 2), (2, 2)],
    # a pentagram turns left at every vertex but winds twice
    [(0, 3), (2, -2), (-3, 1), (3, 1), (-2, -2)],
])
def test_invalid_polygons(pts):
    with pytest.raises(InvalidPolygonError):
        build_polygon(pts)


def test_collinear_message_names_vertex():
    with pytest.raises(InvalidPolygonError, match="collinear") as info:
        build_polygon([(0, 0), (1, 0), (2, 0), (0, 1)])
    assert info.value.vertex == (1, 0)


def test_edges_round_trip():
    P = gen_two_point_blowup(Q(3, 2), Q(1, 3))
    for e in P.edges:
        assert (e.start[0] + e.lambda_length * e.direction.a,
                e.start[1] + e.lambda_length * e.direction.b) == e.end
        assert e.direction.is_primitive


def test_rebuild_is_identity():
    P = gen_two_point_blowup(2, 5)
    assert build_polygon(P.vertices) == P


# -- Delzant condition


def test_delzant_examples():
    assert is_delzant(build_polygon([(0, 0), (2, 0), (0, 2)]))
    assert is_delzant(build_polygon(UNIT_SQUARE))
    bad = build_polygon([(0, 0), (1, 0), (0, 2)])
    assert not is_delzant(bad)
    defects = delzant_defects(bad)
    assert [d.vertex for d in defects] == [(1, 0)]
    assert abs(defects[0].det) == 2


def test_corner_dets_of_triangle_by_hand():
    # (0,0),(2,0),(0,2): corner (2,0) has directions (-1,1), (-1,0) -> det 1
    P = build_polygon([(0, 0), (2, 0), (0, 2)])
    assert [abs(P.corner_det(i)) for i in range(3)] == [1, 1, 1]


# -- maps and scaling


def test_shear_of_unit_triangle():
    shear = UnimodularMap(((1, 1), (0, 1)))
    P = apply_map(build_polygon(UNIT_TRIANGLE), shear)
    assert P.vertices == ((0, 0), (1, 0), (1, 1))
    assert is_delzant(P)


def test_translation_keeps_mass_and_length():
    P = gen_two_point_blowup(1, 2)
    Pt = apply_map(P, translation((5, -3)))
    assert area(Pt) == area(P)
    assert lambda_perimeter(Pt) == lambda_perimeter(P)


def test_map_rejects_non_unimodular():
    with pytest.raises(ValueError):
        UnimodularMap(((2, 0), (0, 1)))


def test_reflection_is_accepted_and_reorients():
    P = apply_map(gen_hirzebruch(1, 1), UnimodularMap(((0, 1), (1, 0))))
    assert is_delzant(P)
    assert area(P) == Q(3, 2)


@pytest.mark.parametrize("seed", range(25))
def test_apply_map_preserves_delzant(seed):
    rng = rng_for(seed)
    P = random_delzant(rng)
    assert is_delzant(apply_map(P, random_map(rng)))


def test_scale():
    assert scale(gen_cp2(1), 2) == build_polygon([(0, 0), (2, 0), (0, 2)])
    P = gen_two_point_blowup(1, 3)
    assert scale(P, 1) == P
    with pytest.raises(DelzantError):
        scale(P, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=Q(1, 20), max_value=20, max_denominator=30))
def test_scale_is_degree_one_on_perimeter(seed, c):
    P = random_delzant(rng_for(seed))
    S = scale(P, c)
    assert lambda_perimeter(S) == c * lambda_perimeter(P)
    assert [e.lambda_length for e in S.edges] == [c * e.lambda_length for e in P.edges]


# -- generators


def test_gen_cp2():
    assert gen_cp2(1) == build_polygon(UNIT_TRIANGLE)
    assert is_delzant(gen_cp2(2))
    assert all(e.lambda_length == Q(1, 3) for e in gen_cp2(Q(1, 3)).edges)
    with pytest.raises(DelzantError):
        gen_cp2(0)


def test_gen_hirzebruch():
    assert gen_hirzebruch(1, 1).vertices == ((0, 0), (2, 0), (1, 1), (0, 1))
    assert gen_hirzebruch(0, 3) == gen_p1xp1(3, 1)
    P = gen_hirzebruch(2, 1)
    assert P.vertices == ((0, 0), (3, 0), (1, 1), (0, 1))
    assert is_delzant(P)
    with pytest.raises(DelzantError):
        gen_hirzebruch(-1, 1)
    with pytest.raises(DelzantError):
        gen_hirzebruch(1, 0)


def test_gen_two_point():
    P = gen_two_point_blowup(1, 1)
    assert area(P) == Q(7, 2)
    assert lambda_perimeter(P) == 7


@settings(max_examples=30)
@given(st.fractions(min_value=Q(1, 20), max_value=50, max_denominator=20),
       st.fractions(min_value=Q(1, 20), max_value=50, max_denominator=20))
def test_two_point_always_delzant(a, b):
    if a > 0 and b > 0:
        assert is_delzant(gen_two_point_blowup(a, b))


# -- blow-ups


def test_blow_up_cp2_corner():
    P = blow_up(gen_cp2(2), 0, 1)
    assert P.same_cycle(build_polygon([(1, 0), (2, 0), (0, 2), (0, 1)]))
    assert is_delzant(P)
    assert area(P) == Q(3, 2)


def test_blow_up_rejects_large_eps():
    with pytest.raises(BlowUpError):
        blow_up(gen_cp2(2), 0, 2)


def test_blow_up_errors():
    with pytest.raises(BlowUpError):
        blow_up(gen_cp2(2), 3, Q(1, 2))
    with pytest.raises(NotDelzantError):
        blow_up(build_polygon([(0, 0), (1, 0), (0, 2)]), 0, Q(1, 10))


@pytest.mark.parametrize("i", range(4))
def test_blow_up_square(i):
    P = blow_up(build_polygon(UNIT_SQUARE), i, Q(1, 2))
    assert len(P) == 5
    assert is_delzant(P)
    assert area(P) == Q(7, 8)


@pytest.mark.parametrize("seed", range(30))
def test_blow_up_area_drop(seed):
    rng = rng_for(seed)
    P = random_delzant(rng, max_blowups=3)
    i = rng.randrange(len(P))
    eps = min(P.edges[i].lambda_length, P.edges[i - 1].lambda_length) * Q(1, 3)
    B = blow_up(P, i, eps)
    assert len(B) == len(P) + 1
    assert area(P) - area(B) == eps * eps / 2
    assert is_delzant(B)


# -- text format


def test_parse_rational():
    assert parse_rational("3/4") == Q(3, 4)
    assert parse_rational("-7") == -7
    for bad in ("1.5", "3/-4", "a", "1/2/3", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


def test_read_write_round_trip():
    text = "# Hirzebruch F_1\n0 0\n5/2 0\n\n3/2 1\n0 1\n"
    P = read_polygon(text)
    assert P == gen_hirzebruch(1, Q(3, 2))
    out = write_polygon(P)
    assert out == "0 0\n5/2 0\n3/2 1\n0 1\n"
    assert write_polygon(read_polygon(out)) == out


def test_read_rejects_bad_lines():
    with pytest.raises(InvalidPolygonError, match="line 2"):
        read_polygon("0 0\n1 0 3\n0 1\n")
    with pytest.raises(InvalidPolygonError, match="line 1"):
        read_polygon("0 x\n1 0\n0 1\n")


def test_polygon_is_immutable_and_hashable():
    P = gen_cp2(1)
    with pytest.raises(AttributeError):
        P.vertices = ()
    assert hash(P) == hash(gen_cp2(1))
    assert isinstance(P, MomentPolygon)
