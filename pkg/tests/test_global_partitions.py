# tests/test_global_partitions.py
import pytest

from geometry.errors import DomainError
from geometry.rects import HalfRect
from services.global_partitions import (GlobalPartitionsService, are_orthogonal_periodic, boundary_vector_sets,
                                        discreteness_constant, is_valid_periodic, orthogonal_minimal_pair,
                                        periodic_partition, regulation_number, unit_grid,
                                        verify_minimal_characterization, witness_high_point)


def test_line_partition():
    first, second = orthogonal_minimal_pair(1)
    assert first.fundamental == (HalfRect((0,), (4,)),)
    assert regulation_number(first) == 2
    assert second.fundamental == (HalfRect((2,), (6,)),)
    report = verify_minimal_characterization(first)
    assert report.minimal and report.locally_minimal


@pytest.mark.parametrize('n', [2, 3])
def test_orthogonal_pair(n):
    first, second = orthogonal_minimal_pair(n)
    for partition in (first, second):
        assert is_valid_periodic(partition)
        assert regulation_number(partition) == n + 1
        report = verify_minimal_characterization(partition)
        assert report.equivalent and report.minimal and report.witness is None
        high = witness_high_point(partition)
        assert high is not None and high.nu >= n + 1
    orthogonal, clash = are_orthogonal_periodic(first, second)
    assert orthogonal and clash is None


@pytest.mark.parametrize('n', [4, 5])
def test_characterization_and_orthogonality_in_high_dimensions(n):
    first, second = orthogonal_minimal_pair(n)
    for partition in (first, second):
        report = verify_minimal_characterization(partition)
        assert report.gamma == n + 1
        assert report.minimal and report.locally_minimal and report.witness is None
    orthogonal, clash = are_orthogonal_periodic(first, second)
    assert orthogonal and clash is None


def test_characterization_on_all_cells():
    first, second = orthogonal_minimal_pair(2)
    assert verify_minimal_characterization(first, vertices_only=False).locally_minimal
    assert are_orthogonal_periodic(first, second, vertices_only=False) == (True, None)
    grid = verify_minimal_characterization(unit_grid(2), vertices_only=False)
    assert grid.gamma == 4 and not grid.locally_minimal


def test_pair_is_shift_by_ones():
    first, second = orthogonal_minimal_pair(2)
    assert sorted(first.shifted((2, 2)).fundamental) == sorted(second.fundamental)
    assert first.period == second.period


@pytest.mark.parametrize('n', [2, 3])
def test_unit_grid(n):
    grid = unit_grid(n)
    assert regulation_number(grid) == 2 ** n
    report = verify_minimal_characterization(grid)
    assert not report.minimal and not report.locally_minimal and report.equivalent
    assert witness_high_point(grid).nu == 2 ** n


def test_partition_is_not_orthogonal_to_itself():
    first, _ = orthogonal_minimal_pair(2)
    orthogonal, clash = are_orthogonal_periodic(first, first)
    assert not orthogonal and clash is not None


def test_boundary_vectors_at_origin():
    first, _ = orthogonal_minimal_pair(2)
    vectors = boundary_vector_sets(first)
    assert vectors[(0, 0)] == frozenset({0, 1})


def test_discreteness_constant():
    assert discreteness_constant((4,), (HalfRect((0,), (4,)),)) == 4
    assert discreteness_constant((8,), (HalfRect((0,), (2,)), HalfRect((2,), (8,)))) == 2
    assert orthogonal_minimal_pair(3)[0].d >= 2


def test_periodic_partition_normalizes_pieces():
    partition = periodic_partition((4, 4), (HalfRect((4, -4), (8, 0)),))
    assert partition.fundamental == (HalfRect((0, 0), (4, 4)),)
    assert is_valid_periodic(partition)


def test_overlapping_periodic_partition_is_invalid():
    partition = periodic_partition((4,), (HalfRect((0,), (4,)), HalfRect((2,), (6,))))
    assert not is_valid_periodic(partition)


def test_window_restricts_translates():
    grid = unit_grid(2, side=2)
    local = grid.window(HalfRect.cube(2, 1, 5))
    assert len(local.pieces) == 9


def test_errors():
    with pytest.raises(DomainError):
        orthogonal_minimal_pair(0)
    with pytest.raises(DomainError):
        unit_grid(2, side=0)
    with pytest.raises(DomainError):
        periodic_partition((0,), (HalfRect((0,), (2,)),))
    with pytest.raises(DomainError):
        are_orthogonal_periodic(unit_grid(1), unit_grid(2))


def test_service_passes_small_dimensions():
    report = GlobalPartitionsService(max_n=3).run()
    assert report.passed, [c.to_json() for c in report.failures()]


@pytest.mark.slow
def test_service_passes_up_to_five_dimensions():
    report = GlobalPartitionsService(max_n=5).run()
    assert report.passed, [c.to_json() for c in report.failures()]
