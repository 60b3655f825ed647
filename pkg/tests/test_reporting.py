# tests/test_reporting.py
import json

import pytest

from geometry.errors import DomainError
from geometry.partitions import AboutPartition, LocalPartition
from geometry.rects import HalfRect
from reporting.interchange import (load_partition, partition_from_json, partition_to_json, periodic_from_json,
                                   periodic_to_json, read_json, save_partition, write_json)
from reporting.manifest import RunManifest, SuiteReport, canonical_json, digest_file
from reporting.svg_render import FIXTURES, render_fixture, render_svg, render_tiling, slice_indexed
from services.extension import example_instance_2d, extend_2d
from services.gadgets import tiling_t3
from services.global_partitions import orthogonal_minimal_pair

WINDOW = HalfRect.cube(2, 0, 8)


def halves():
    return LocalPartition(WINDOW, (HalfRect((0, 0), (4, 8)), HalfRect((4, 0), (8, 8))))


def test_partition_json_round_trip(tmp_path):
    path = str(tmp_path / 'p.json')
    save_partition(path, halves(), principal_matrix=((1, 0), (-1, 0)))
    data = read_json(path)
    assert data['scale'] == 'half-units' and data['n'] == 2
    assert data['principal_matrix'] == [[1, 0], [-1, 0]]
    assert load_partition(path).same_pieces(halves())


def test_about_partition_keeps_point():
    about = AboutPartition.of(WINDOW, halves().pieces, (4, 4))
    restored = partition_from_json(partition_to_json(about))
    assert isinstance(restored, AboutPartition)
    assert restored.x == (4, 4)


def test_partition_json_errors():
    data = partition_to_json(halves())
    with pytest.raises(DomainError):
        partition_from_json(dict(data, scale='units'))
    with pytest.raises(DomainError):
        partition_from_json({k: v for k, v in data.items() if k != 'pieces'})
    with pytest.raises(DomainError):
        partition_from_json(dict(data, n=3))
    with pytest.raises(DomainError):
        partition_from_json([1, 2])


def test_read_json_rejects_garbage(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{not json', encoding='utf-8')
    with pytest.raises(DomainError):
        read_json(str(path))


def test_periodic_json():
    first, _ = orthogonal_minimal_pair(2)
    data = periodic_to_json(first)
    assert data['period'] == list(first.period)
    restored = periodic_from_json(data)
    assert sorted(restored.fundamental) == sorted(first.fundamental)
    with pytest.raises(DomainError):
        periodic_from_json({k: v for k, v in data.items() if k != 'period'})


def test_write_json_is_canonical(tmp_path):
    path = tmp_path / 'x.json'
    write_json(str(path), {'b': 1, 'a': [1, 2]})
    text = path.read_text(encoding='utf-8')
    assert text == canonical_json({'a': [1, 2], 'b': 1})
    assert json.loads(text) == {'a': [1, 2], 'b': 1}


def test_manifest_round_trip(tmp_path):
    output = tmp_path / 'out.json'
    output.write_text('{}\n', encoding='utf-8')
    manifest = RunManifest('enumerate', {'n': 3, 'k': (1, 2)}, seed=4)
    manifest.add_output(str(output))
    path = str(tmp_path / 'manifest.json')
    manifest.write(path)
    restored = RunManifest.read(path)
    assert restored.command == 'enumerate' and restored.seed == 4
    assert restored.parameters == {'n': 3, 'k': [1, 2]}
    assert restored.outputs == {str(output): digest_file(str(output))}


def test_digest_file_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        digest_file(str(tmp_path / 'missing.json'))


def test_report_digest_ignores_elapsed():
    first, second = SuiteReport('demo'), SuiteReport('demo')
    for report, elapsed in ((first, 1.0), (second, 7.5)):
        report.add('check', True, 'ок', (1, 2))
        report.elapsed = elapsed
    assert first.digest() == second.digest()
    assert first.passed and not SuiteReport('empty').passed
    second.add('other', False)
    assert first.digest() != second.digest()
    assert [c.name for c in second.failures()] == ['other']


def test_svg_is_deterministic():
    partition = extend_2d(example_instance_2d())
    svg = render_svg(partition, highlight=[0], required=[2], points=[(4, 4)], title='demo')
    assert svg == render_svg(partition, highlight=[0], required=[2], points=[(4, 4)], title='demo')
    assert svg.startswith('<svg')
    assert svg.count('<rect') >= len(partition.pieces)


def test_svg_title_is_escaped():
    svg = render_svg(halves(), title='<b>')
    assert '&lt;b&gt;' in svg and '<b>' not in svg


def test_svg_slices_three_dimensional_partitions():
    window = HalfRect.cube(3, 0, 4)
    pieces = (HalfRect((0, 0, 0), (4, 4, 2)), HalfRect((0, 0, 2), (2, 4, 4)), HalfRect((2, 0, 2), (4, 4, 4)))
    partition = LocalPartition(window, pieces)
    flat, kept = slice_indexed(partition, 2, 3)
    assert kept == [1, 2] and len(flat.pieces) == 2
    assert render_svg(partition, axis=2, level=3).startswith('<svg')
    with pytest.raises(DomainError):
        render_svg(partition)
    with pytest.raises(DomainError):
        render_svg(partition, axis=2, level=2)


def test_svg_dimension_errors():
    with pytest.raises(DomainError):
        render_svg(halves(), axis=0, level=1)
    line = LocalPartition(HalfRect((0,), (4,)), (HalfRect((0,), (4,)),))
    with pytest.raises(DomainError):
        render_svg(line)
    with pytest.raises(DomainError):
        render_tiling(tiling_t3(1))


@pytest.mark.parametrize('name', FIXTURES)
def test_fixtures_render(name):
    svg = render_fixture(name)
    assert svg == render_fixture(name)
    assert '<svg' in svg


def test_unknown_fixture():
    with pytest.raises(DomainError):
        render_fixture('nope')
