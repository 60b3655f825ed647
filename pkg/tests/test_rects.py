# tests/test_rects.py
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from geometry.errors import DomainError
from geometry.rects import (HalfRect, boundary_incidence, bounding_box, directional_boundary, directional_difference,
                            directional_interior, lattice_box_points, r_to_z, signed_axis, to_half_units, z_to_r)


@st.composite
def rects(draw, n=None, low=-10, high=10):
    n = draw(st.integers(1, 4)) if n is None else n
    lo, hi = [], []
    for _ in range(n):
        a = draw(st.integers(low, high - 1))
        lo.append(a)
        hi.append(draw(st.integers(a + 1, high)))
    return HalfRect(tuple(lo), tuple(hi))


def test_boundary_incidence_interior_point():
    window = HalfRect.cube(3, -2, 2)
    assert boundary_incidence(window, (0, 0, 0)) == (0, 0, 0)


def test_boundary_incidence_mixed_faces():
    # [0,3]×[0,2]×[0,1] и x = (0, 1, 0) в полуединицах
    rect = HalfRect.from_real((0, 0, 0), (3, 2, 1))
    assert rect == HalfRect((0, 0, 0), (6, 4, 2))
    assert boundary_incidence(rect, (0, 2, 0)) == (1, 0, 1)


def test_boundary_incidence_corner():
    assert boundary_incidence(HalfRect.cube(2, -2, 2), (-2, 2)) == (1, -1)


def test_boundary_incidence_degenerate_axis_is_zero():
    flat = HalfRect((0, 2), (4, 2))
    assert boundary_incidence(flat, (0, 2)) == (1, 0)


def test_boundary_incidence_outside_point():
    with pytest.raises(DomainError):
        boundary_incidence(HalfRect.cube(2, 0, 2), (3, 1))


def test_rect_rejects_inverted_interval():
    with pytest.raises(DomainError):
        HalfRect((2, 0), (0, 2))


def test_to_half_units():
    assert to_half_units(Fraction(3, 2)) == 3
    assert to_half_units(-2) == -4
    with pytest.raises(DomainError):
        to_half_units(Fraction(1, 3))


def test_z_to_r_singleton_and_strip():
    assert z_to_r((0, 0), (0, 0)) == HalfRect.cube(2, -1, 1)
    strip = z_to_r((0, 0), (2, 0))
    assert strip.to_real() == ((Fraction(-1, 2), Fraction(-1, 2)), (Fraction(5, 2), Fraction(1, 2)))


def test_z_to_r_empty_box():
    with pytest.raises(DomainError):
        z_to_r((1, 0), (0, 0))


def test_r_to_z_requires_odd_corners():
    with pytest.raises(DomainError):
        r_to_z(HalfRect.cube(2, 0, 2))


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=3), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_z_to_r_membership(lo, widths):
    lo = tuple(lo)
    hi = tuple(a + w for a, w in zip(lo, widths))
    rect = z_to_r(lo, hi)
    assert r_to_z(rect) == (lo, hi)
    for point in lattice_box_points(lo, hi):
        cell = z_to_r(point, point)
        assert rect.contains_rect(cell)
    outside = tuple(a - 1 for a in lo)
    assert not rect.contains_rect(z_to_r(outside, outside))


def test_directional_boundary_right_face():
    box = lattice_box_points((0, 0), (2, 2))
    assert directional_boundary(box, (1, 0)) == {(2, 0), (2, 1), (2, 2)}
    assert directional_interior(box, (1, 0)) == box - {(2, 0), (2, 1), (2, 2)}


def test_directional_boundary_full_torus_is_empty():
    torus = lattice_box_points((0, 0), (3, 3))
    for v in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        assert directional_boundary(torus, v, modulus=4) == frozenset()


def test_directional_difference():
    box = lattice_box_points((0, 0), (2, 2))
    assert directional_difference(box, (1, 0), (0, 1)) == {(2, 0), (2, 1)}


def test_signed_axis_rejects_diagonal():
    assert signed_axis((0, -1)) == (1, -1)
    with pytest.raises(DomainError):
        signed_axis((1, 1))
    with pytest.raises(DomainError):
        directional_boundary({(0, 0)}, (2, 0))


@given(rects(), rects())
def test_intersect_is_contained_in_both(a, b):
    if a.n != b.n:
        return
    common = a.intersect(b)
    if common is None:
        assert not a.interiors_overlap(b)
        return
    assert a.contains_rect(common) and b.contains_rect(common)
    assert a.interiors_overlap(b) == common.is_full


@given(rects(n=3))
def test_projection_and_lift(rect):
    for axis in range(3):
        flat = rect.project(axis)
        assert flat.lift(rect.lo[axis], rect.hi[axis], axis) == rect


@given(st.lists(rects(n=2), min_size=1, max_size=5))
def test_bounding_box_contains_all(boxes):
    box = bounding_box(boxes)
    assert all(box.contains_rect(b) for b in boxes)


def test_json_round_trip():
    rect = HalfRect((0, -2, 1), (4, 2, 3))
    assert HalfRect.from_json(rect.to_json()) == rect
    with pytest.raises(DomainError):
        HalfRect.from_json([[0, 1, 2]])
