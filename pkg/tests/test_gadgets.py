# tests/test_gadgets.py
import numpy as np
import pytest

from geometry.errors import ConfigurationError, DomainError
from reporting.manifest import SuiteReport
from services.gadgets import (GadgetsService, build_condition_q, check_condition_q, check_roll_down, check_t2,
                              compose_side_by_side, coordinate_gaps, corner_tiles, first_overlap, roll_down,
                              rotate_quarter, tiling_t2, tiling_t3)


def test_t2_counts_for_unit_size():
    tiling = tiling_t2(1)
    # (α, β) = (0, 0) даёт начало координат во всех четырёх семействах
    assert tiling.placements == 112
    assert len(tiling.centers) == 109
    assert tiling.reach == 27


def test_t2_corner_square():
    tiling = tiling_t2(1)
    assert sorted(corner_tiles(tiling)) == [(-27, -27), (-27, 27), (27, -27), (27, 27)]


@pytest.mark.parametrize('s', [1, 2])
def test_t2_properties(s):
    tiling = tiling_t2(s)
    assert first_overlap(tiling.array(), s) is None
    assert not any(coordinate_gaps(tiling).values())
    assert rotate_quarter(tiling).centers == tiling.centers
    for axis in (0, 1):
        assert first_overlap(compose_side_by_side(tiling, axis).array(), s) is None


def test_check_t2_report():
    report = SuiteReport('gadgets')
    check_t2(report, 1)
    assert report.passed, [c.to_json() for c in report.failures()]
    assert 't2-s1-count' in [c.name for c in report.checks]


def test_first_overlap_finds_shifted_tile():
    centers = np.array([(0, 0), (2, 1), (9, 9)])
    assert first_overlap(centers, 1) == ((0, 0), (2, 1))
    assert first_overlap(np.array([(0, 0), (3, 0)]), 1) is None


def test_tile_rect_has_odd_faces():
    rect = tiling_t2(1).tile_rect((0, 0))
    assert rect.lo == (-3, -3) and rect.hi == (3, 3)


def test_t3_is_flat_lift():
    t3 = tiling_t3(1)
    assert len(t3.centers) == 109
    assert all(c[2] == 0 for c in t3.centers)
    with pytest.raises(DomainError):
        rotate_quarter(t3)


def test_roll_down_single_copy():
    report = SuiteReport('gadgets')
    placement = check_roll_down(report, 1, 1)
    assert report.passed, [c.to_json() for c in report.failures()]
    assert len(placement.frames) == 6
    assert {f.normal for f in placement.frames} == {(0, 0, 1), (0, 0, -1), (1, 0, 0), (-1, 0, 0),
                                                    (0, 1, 0), (0, -1, 0)}
    assert placement.half_side == 1 + 27


def test_bad_sizes():
    with pytest.raises(DomainError):
        tiling_t2(0)
    with pytest.raises(DomainError):
        roll_down(0)
    with pytest.raises(DomainError):
        roll_down(1, 0)


def test_condition_q_strict_bound():
    with pytest.raises(ConfigurationError):
        build_condition_q(3, 3, 990, 55)


def test_condition_q_relaxed():
    q = build_condition_q(3, 3, 990, 55, strict=False)
    assert q.hyperplanes == (330, 660, 990)
    assert q.indices == (2, 3, 1)
    assert len(q.flags) == 1
    result = check_condition_q(q)
    assert result['overlaps'] == 0
    assert result['bad_blocks'] == []
    assert all(count > 0 for count in result['assigned'])


def test_condition_q_hard_errors():
    with pytest.raises(ConfigurationError):
        build_condition_q(3, 3, 300, 55, strict=False)
    with pytest.raises(ConfigurationError):
        build_condition_q(3, 3, 990, 54, strict=False)
    with pytest.raises(ConfigurationError):
        build_condition_q(3, 3, 991, 55, strict=False)
    with pytest.raises(ConfigurationError):
        build_condition_q(3, 3, 990, 55, pattern=np.zeros((2, 2, 2)), strict=False)


def test_condition_q_cells_per_total():
    q = build_condition_q(2, 1, 6, 3, strict=False)
    counts = q.cells_per_total()
    assert list(counts) == [1, 2, 3, 4, 5, 6, 7, 6, 5, 4, 3, 2, 1]
    assert sum(counts) == 49


def test_service_small_run():
    report = GadgetsService(sizes=(1,), copies=(1,)).run()
    assert report.passed, [c.to_json() for c in report.failures()]
