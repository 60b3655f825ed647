# tests/test_surfaces.py
import pytest

from geometry.errors import DomainError
from geometry.partitions import LocalPartition, validate_local_partition
from geometry.rects import HalfRect
from services.global_partitions import orthogonal_minimal_pair
from services.minimal_local import enumerate_minimal_about
from services.surfaces import (SurfacesService, example_growing_chain, example_staircase, example_towers,
                               find_respected_segment, grow_surface, is_box_like, levels, lower_levels,
                               maximal_surfaces, respects, scan_segments, segment_bound_holds, segment_chain,
                               segment_on_faces, surface_chain, virtual_span, virtual_span_down, vms_interval)

WINDOW = HalfRect.cube(3, 0, 8)


def split_box():
    return LocalPartition(WINDOW, (WINDOW.with_interval(2, 0, 4), WINDOW.with_interval(2, 4, 8)))


def test_levels():
    assert levels(LocalPartition(WINDOW, (WINDOW,))) == []
    assert levels(split_box()) == [4]
    assert lower_levels(split_box()) == [4]
    assert levels(example_staircase()) == [2, 4]


def test_levels_axis_checks():
    with pytest.raises(DomainError):
        levels(split_box(), axis=3)
    line = LocalPartition(HalfRect((0,), (4,)), (HalfRect((0,), (4,)),))
    with pytest.raises(DomainError):
        levels(line)


def test_maximal_surface_of_split_box():
    surfaces = maximal_surfaces(split_box(), 4)
    assert len(surfaces) == 1
    assert surfaces[0].rect == WINDOW.project(2)
    with pytest.raises(DomainError):
        maximal_surfaces(split_box(), 3)


def test_towers_surface_is_lower_footprint():
    surfaces = maximal_surfaces(example_towers(), 4)
    assert [s.rect for s in surfaces] == [HalfRect((0, 0), (4, 4))]


def test_box_like():
    assert is_box_like([HalfRect.cube(2, 0, 4)]) == (True, HalfRect.cube(2, 0, 4))
    split = [HalfRect((0, 0), (2, 4)), HalfRect((2, 0), (4, 4))]
    assert is_box_like(split) == (True, HalfRect.cube(2, 0, 4))
    l_shape = [HalfRect((0, 0), (4, 2)), HalfRect((0, 2), (2, 4))]
    assert not is_box_like(l_shape)[0]
    cross = [HalfRect((0, 2, 2), (6, 4, 4)), HalfRect((2, 0, 2), (4, 6, 4)), HalfRect((2, 2, 0), (4, 4, 6))]
    assert not is_box_like(cross)[0]
    apart = [HalfRect((0, 0), (2, 2)), HalfRect((4, 0), (6, 2))]
    assert not is_box_like(apart)[0]


def test_virtual_span_full_cross_section():
    section = WINDOW.project(2)
    assert respects(split_box(), section, 4, 8)
    assert virtual_span(split_box(), section, 4) == 8
    assert virtual_span_down(split_box(), section, 4) == 0


def test_virtual_span_of_unrelated_rectangle():
    towers = example_towers()
    with pytest.raises(DomainError):
        virtual_span(towers, HalfRect((2, 0), (6, 4)), 4)
    with pytest.raises(DomainError):
        virtual_span(towers, HalfRect((0, 0, 0), (4, 4, 4)), 4)


def test_vms_interval_on_towers():
    surface = maximal_surfaces(example_towers(), 4)[0]
    d1, d2 = vms_interval(example_towers(), surface)
    assert d1 < 4 < d2
    assert (d1, d2) == (0, 8)


def test_staircase_growth_is_maximal_case():
    staircase = example_staircase()
    m1 = HalfRect((0, 0), (4, 4))
    d2 = virtual_span(staircase, m1, 2)
    assert d2 == 4
    step = grow_surface(staircase, m1, 2, d2)
    assert step.case == 'maximal'
    assert step.after == HalfRect((0, 0), (8, 4))
    assert step.grown_axes == (0,)


def test_growth_needs_room_below_top():
    with pytest.raises(DomainError):
        grow_surface(split_box(), WINDOW.project(2), 4, 8)


def test_surface_chain_on_staircase():
    chain = surface_chain(example_staircase(), HalfRect((0, 0), (4, 4)), 2)
    assert chain.is_monotone()
    assert [s.rect for s in chain.steps] == [HalfRect((0, 0), (4, 4)), HalfRect((0, 0), (8, 4))]
    assert chain.steps[-1].d2 == 8
    assert chain.increases() == [(4, 0)]


@pytest.mark.parametrize('k', [1, 2, 3])
def test_surfaces_of_enumerated_partitions(k):
    for about in enumerate_minimal_about(3, k):
        partition = about.base
        top = partition.window.hi[2]
        for level in levels(partition):
            for surface in maximal_surfaces(partition, level):
                assert surface.rect is not None
                d1, d2 = vms_interval(partition, surface)
                assert d1 < level < d2
                assert surface_chain(partition, surface.rect, level).steps[-1].d2 == top


def test_segment_bound():
    # √(64·2)/2 ≥ 5 в вещественных единицах
    assert segment_bound_holds(12, 128, 4, 3)
    assert not segment_bound_holds(11, 128, 4, 3)


def test_trivial_segment_on_long_piece():
    segment = find_respected_segment(split_box(), 2)
    assert segment.source == 'trivial'
    assert segment_bound_holds(segment.length, 8, 2, 3)
    assert segment_on_faces(split_box(), segment)


def test_segment_errors():
    with pytest.raises(DomainError):
        find_respected_segment(LocalPartition(WINDOW, (WINDOW,)), 2)
    with pytest.raises(DomainError):
        find_respected_segment(split_box(), 8)


def test_scan_finds_longest_segment():
    found = scan_segments(split_box())
    assert found and found[0].length == 8
    assert all(segment_on_faces(split_box(), s) for s in found)


def test_growing_chain_has_no_long_pieces():
    partition = example_growing_chain()
    assert validate_local_partition(partition.pieces, partition.window).valid
    assert max(side for piece in partition.pieces for side in piece.sides) == 8
    assert not segment_bound_holds(8, 20, 4, 2)


def test_segment_found_by_chain_growth():
    partition = example_growing_chain()
    chain = segment_chain(partition)
    assert [(s.rect, s.d1, s.d2) for s in chain.steps] == [
        (HalfRect((0,), (4,)), 4, 8), (HalfRect((0,), (8,)), 8, 12),
        (HalfRect((0,), (12,)), 12, 16), (HalfRect((0,), (20,)), 16, 20)]
    assert chain.increases() == [(4,), (4,), (8,)]
    assert chain.is_monotone()
    segment = find_respected_segment(partition, 4)
    assert segment.source == 'chain'
    assert (segment.start, segment.axis, segment.length, segment.face_axis) == ((0, 12), 0, 12, 1)
    assert segment_bound_holds(segment.length, 20, 4, 2)
    assert segment_on_faces(partition, segment)


@pytest.mark.parametrize('side', [64, 128])
def test_segment_on_minimal_partition(side):
    first, _ = orthogonal_minimal_pair(3)
    local = first.window(HalfRect.cube(3, 0, side))
    segment = find_respected_segment(local, 4)
    assert segment_bound_holds(segment.length, side, 4, 3)
    assert segment_on_faces(local, segment)


@pytest.mark.slow
def test_service_full_run():
    report = SurfacesService().run()
    assert report.passed, [c.to_json() for c in report.failures()]
