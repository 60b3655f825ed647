# tests/test_extension.py
import numpy as np
import pytest

from geometry.errors import DomainError
from geometry.partitions import LocalPartition, validate_local_partition
from geometry.rects import HalfRect
from services.extension import (ExtensionInstance, example_instance_2d, extend_2d, lift_consistent, lift_partition,
                                obstruction_instance, project_lift, random_completion, random_instance_2d,
                                search_minimal_extension, trace_obstruction_chain)
from services.minimal_local import is_minimal_local


def contains_required(instance: ExtensionInstance, partition: LocalPartition) -> bool:
    return set(instance.required) <= set(partition.pieces)


def test_extend_2d_example():
    result = extend_2d(example_instance_2d())
    assert list(result.sorted_pieces()) == [HalfRect((0, 0), (2, 8)), HalfRect((2, 0), (4, 2)),
                                            HalfRect((2, 2), (4, 4)), HalfRect((2, 4), (4, 8)),
                                            HalfRect((4, 0), (8, 8))]
    assert is_minimal_local(result)


def test_extend_2d_without_required_pieces():
    window = HalfRect.cube(2, 0, 8)
    assert extend_2d(ExtensionInstance(window, ())).pieces == (window,)


def test_extend_2d_stops_at_other_boxes():
    # правая сторона нижнего ящика упирается в низ верхнего
    instance = ExtensionInstance(HalfRect.cube(2, 0, 12),
                                 (HalfRect((2, 2), (6, 4)), HalfRect((4, 8), (10, 10))))
    result = extend_2d(instance)
    assert validate_local_partition(result.pieces, result.window).valid
    assert contains_required(instance, result)
    assert is_minimal_local(result)


def test_extend_2d_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(20):
        instance = random_instance_2d(rng)
        result = extend_2d(instance)
        assert validate_local_partition(result.pieces, result.window).valid
        assert contains_required(instance, result)
        assert is_minimal_local(result), instance.to_json()


def test_extend_2d_needs_plane():
    with pytest.raises(DomainError):
        extend_2d(obstruction_instance(3))


def test_instance_rejects_touching_boxes():
    window = HalfRect.cube(2, 0, 8)
    with pytest.raises(DomainError):
        ExtensionInstance(window, (HalfRect.cube(2, 0, 2), HalfRect.cube(2, 2, 4)))
    with pytest.raises(DomainError):
        ExtensionInstance(window, (HalfRect.cube(2, 0, 4), HalfRect.cube(2, 2, 6)))
    with pytest.raises(DomainError):
        ExtensionInstance(window, (HalfRect.cube(2, 6, 10),))


def test_instance_json():
    instance = example_instance_2d()
    assert ExtensionInstance.from_json(instance.to_json()) == instance
    data = dict(instance.to_json(), scale='units')
    with pytest.raises(DomainError):
        ExtensionInstance.from_json(data)


def test_obstruction_boxes():
    three = obstruction_instance(3)
    assert three.window == HalfRect.cube(3, 0, 8)
    assert three.required == (HalfRect((0, 0, 0), (6, 4, 2)), HalfRect((4, 6, 0), (8, 8, 6)),
                              HalfRect((0, 2, 4), (2, 8, 8)))
    four = obstruction_instance(4)
    assert four.window == HalfRect.cube(4, 0, 8).with_interval(3, 0, 2)
    assert four.required == tuple(p.lift(0, 2) for p in three.required)
    with pytest.raises(DomainError):
        obstruction_instance(2)


def test_search_with_whole_window_required():
    window = HalfRect.cube(2, 0, 8)
    result = search_minimal_extension(ExtensionInstance(window, (window,)), workers=1)
    assert result.found and result.partition.pieces == (window,)


def test_search_finds_example_extension():
    instance = example_instance_2d()
    result = search_minimal_extension(instance, workers=1)
    assert result.found
    assert contains_required(instance, result.partition)
    assert is_minimal_local(result.partition)


def test_search_on_plane_analog_of_obstruction():
    three = obstruction_instance(3)
    analog = ExtensionInstance(HalfRect.cube(2, 0, 8), tuple(p.project(2) for p in three.required[:2]))
    result = search_minimal_extension(analog, workers=1)
    assert result.found and is_minimal_local(result.partition)
    assert contains_required(analog, result.partition)
    assert result.to_json()['found']


@pytest.mark.slow
def test_obstruction_has_no_extension_on_unit_grid():
    result = search_minimal_extension(obstruction_instance(3), workers=1)
    assert not result.found
    assert 'вещественных' in result.statement


def test_random_completions_are_never_accepted():
    instance = obstruction_instance(3)
    rng = np.random.default_rng(0)
    for _ in range(30):
        candidate = random_completion(instance, rng)
        assert validate_local_partition(candidate.pieces, candidate.window).valid
        assert contains_required(instance, candidate)
        certificate = trace_obstruction_chain(instance, candidate)
        assert certificate.outcome in ('non_minimal', 'certificate')
        if certificate.outcome == 'non_minimal':
            assert certificate.witness is not None
        else:
            assert certificate.clash


def test_trace_rejects_bad_input():
    with pytest.raises(DomainError):
        trace_obstruction_chain(example_instance_2d(), extend_2d(example_instance_2d()))
    instance = obstruction_instance(3)
    with pytest.raises(DomainError):
        trace_obstruction_chain(instance, LocalPartition(instance.window, (instance.window,)))


def test_lift_of_extension_is_consistent():
    instance = example_instance_2d()
    partition = extend_2d(instance)
    assert lift_consistent(partition, instance)
    lifted = lift_partition(partition)
    assert lifted.window == HalfRect((0, 0, 0), (8, 8, 2))
    assert project_lift(lifted, instance).same_pieces(partition)
