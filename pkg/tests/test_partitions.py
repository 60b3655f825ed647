# tests/test_partitions.py
from itertools import product

import pytest
from hypothesis import given, strategies as st

from geometry.errors import DomainError
from geometry.partitions import (AboutPartition, LocalPartition, is_about, localize_about, point_stats,
                                 restrict_to_window, slice_partition, union_equal, validate_local_partition)
from geometry.rects import HalfRect


def orthant_pieces(n: int):
    bounds = {1: (0, 2), -1: (-2, 0)}
    return tuple(HalfRect(tuple(bounds[s][0] for s in signs), tuple(bounds[s][1] for s in signs))
                 for signs in product((1, -1), repeat=n))


@st.composite
def grid_partitions(draw):
    """Произведение случайных одномерных разбиений окна [0, 12]^n."""
    n = draw(st.integers(1, 3))
    cuts = []
    for _ in range(n):
        inner = draw(st.sets(st.integers(1, 11), max_size=3))
        cuts.append([0] + sorted(inner) + [12])
    pieces = []
    for cell in product(*(list(zip(c, c[1:])) for c in cuts)):
        pieces.append(HalfRect(tuple(a for a, _ in cell), tuple(b for _, b in cell)))
    return LocalPartition(HalfRect.cube(n, 0, 12), tuple(pieces))


@pytest.mark.parametrize('n', [1, 2, 3])
def test_orthant_partition_is_about_origin(n):
    window = HalfRect.cube(n, -2, 2)
    report = validate_local_partition(orthant_pieces(n), window, (0,) * n)
    assert report.valid and report.valid_about
    stats = point_stats(LocalPartition(window, orthant_pieces(n)), (0,) * n)
    assert stats.nu == 2 ** n and stats.beta == n


def test_single_piece_is_about_every_interior_point():
    window = HalfRect.cube(2, 0, 4)
    for x in ((1, 1), (2, 3), (3, 1)):
        assert validate_local_partition((window,), window, x).valid_about
        stats = point_stats(LocalPartition(window, (window,)), x)
        assert (stats.nu, stats.beta) == (1, 0)


def test_duplicate_window_overlaps():
    window = HalfRect.cube(2, 0, 4)
    report = validate_local_partition((window, window), window)
    assert not report.valid and report.overlap == (0, 1)


def test_uncovered_cell_witness():
    window = HalfRect.cube(2, 0, 4)
    report = validate_local_partition((HalfRect((0, 0), (2, 4)),), window)
    assert not report.valid
    assert report.uncovered_cell == HalfRect((2, 0), (4, 4))


def test_degenerate_and_outside_pieces():
    window = HalfRect.cube(2, 0, 4)
    assert validate_local_partition((HalfRect((0, 0), (0, 4)), window), window).degenerate_piece == 0
    assert validate_local_partition((HalfRect((0, 0), (6, 4)),), window).outside_piece == 0


def test_about_violation_reported():
    window = HalfRect.cube(2, 0, 4)
    pieces = (HalfRect((0, 0), (1, 4)), HalfRect((1, 0), (4, 4)))
    report = validate_local_partition(pieces, window, (2, 2))
    assert report.valid and not report.valid_about
    # первый кусок не содержит x
    assert report.about_violation == (0, -1)
    assert validate_local_partition(pieces, window, (1, 2)).valid_about
    wide = (HalfRect((0, 0), (3, 4)), HalfRect((3, 0), (4, 4)))
    assert validate_local_partition(wide, window, (2, 2)).about_violation == (0, 0)


def test_octant_stats():
    from services.separative import Config, PrincipalMatrix, cover_from_matrix

    cover = cover_from_matrix(PrincipalMatrix.of(Config.OCTANT_ROWS))
    stats = point_stats(cover, cover.x)
    assert (stats.nu, stats.beta) == (5, 3)


def test_point_stats_requires_interior_point():
    window = HalfRect.cube(2, 0, 4)
    with pytest.raises(DomainError):
        point_stats(LocalPartition(window, (window,)), (0, 2))


def test_restrict_to_window_1d():
    pieces = tuple(HalfRect((4 * k,), (4 * k + 4,)) for k in range(-2, 3))
    partition = LocalPartition(HalfRect((-8,), (12,)), pieces)
    local = restrict_to_window(partition, HalfRect((2,), (6,)))
    assert local.sorted_pieces() == (HalfRect((2,), (4,)), HalfRect((4,), (6,)))


def test_restrict_inside_single_piece():
    window = HalfRect.cube(2, 0, 8)
    partition = LocalPartition(window, (HalfRect((0, 0), (4, 8)), HalfRect((4, 0), (8, 8))))
    assert restrict_to_window(partition, HalfRect.cube(2, 1, 3)).pieces == (HalfRect.cube(2, 1, 3),)
    assert restrict_to_window(partition, HalfRect((0, 0), (4, 8))).pieces == (HalfRect((0, 0), (4, 8)),)


def test_restrict_rejects_degenerate_window():
    window = HalfRect.cube(2, 0, 8)
    with pytest.raises(DomainError):
        restrict_to_window(LocalPartition(window, (window,)), HalfRect((1, 1), (1, 3)))


def test_localize_about_orthants():
    window = HalfRect.cube(2, -2, 2)
    partition = LocalPartition(window, orthant_pieces(2))
    localization = localize_about(partition, (0, 0))
    assert localization.scale == 1
    inner = HalfRect.cube(2, -1, 1)
    assert localization.about.window == inner
    assert sorted(localization.about.pieces) == sorted(p.intersect(inner) for p in orthant_pieces(2))
    unshrunk = localize_about(partition, (0, 0), shrink=False)
    assert unshrunk.about.window == window
    assert sorted(unshrunk.about.pieces) == sorted(orthant_pieces(2))


def test_localize_about_shrinks_1d():
    # {[0,1],[1,2]} в [0,2], x = 1 → окно [1/2, 3/2]
    partition = LocalPartition(HalfRect((0,), (4,)), (HalfRect((0,), (2,)), HalfRect((2,), (4,))))
    localization = localize_about(partition, (2,))
    assert localization.scale == 1
    assert localization.about.window == HalfRect((1,), (3,))
    assert localization.about.pieces == (HalfRect((1,), (2,)), HalfRect((2,), (3,)))
    assert is_about(localization.about)


def test_localize_about_refines_tight_neighbourhood():
    partition = LocalPartition(HalfRect((0,), (4,)), (HalfRect((0,), (1,)), HalfRect((1,), (4,))))
    localization = localize_about(partition, (1,))
    assert localization.scale == 2
    assert is_about(localization.about)


def test_localize_about_inside_piece():
    window = HalfRect.cube(2, 0, 8)
    partition = LocalPartition(window, (HalfRect((0, 0), (4, 8)), HalfRect((4, 0), (8, 8))))
    localization = localize_about(partition, (2, 3))
    assert len(localization.about.pieces) == 1 and is_about(localization.about)


def test_localize_about_boundary_point():
    window = HalfRect.cube(2, 0, 8)
    with pytest.raises(DomainError):
        localize_about(LocalPartition(window, (window,)), (0, 4))


@given(grid_partitions(), st.data())
def test_localize_about_is_about(partition, data):
    n = partition.n
    x = tuple(data.draw(st.integers(1, 11)) for _ in range(n))
    for shrink in (False, True):
        localization = localize_about(partition, x, shrink=shrink)
        about = localization.about
        assert validate_local_partition(about.pieces, about.window).valid
        assert is_about(about)


@given(grid_partitions())
def test_grid_partitions_are_valid(partition):
    assert validate_local_partition(partition.pieces, partition.window).valid
    assert union_equal(partition.pieces, (partition.window,))


def test_slice_partition():
    window = HalfRect.cube(3, 0, 4)
    pieces = (HalfRect((0, 0, 0), (4, 4, 2)), HalfRect((0, 0, 2), (2, 4, 4)), HalfRect((2, 0, 2), (4, 4, 4)))
    partition = LocalPartition(window, pieces)
    assert slice_partition(partition, 2, 1).pieces == (HalfRect.cube(2, 0, 4),)
    assert len(slice_partition(partition, 2, 3).pieces) == 2
    with pytest.raises(DomainError):
        slice_partition(partition, 2, 2)
    with pytest.raises(DomainError):
        slice_partition(partition, 2, 5)


def test_about_partition_checks_dimension():
    window = HalfRect.cube(2, 0, 4)
    with pytest.raises(DomainError):
        AboutPartition.of(window, (window,), (1, 1, 1))
