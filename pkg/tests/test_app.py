# tests/test_app.py
import json
import os

import pytest
from click.testing import CliRunner

from app import cli
from geometry.rects import HalfRect
from reporting.interchange import partition_to_json, write_json
from services.extension import example_instance_2d, obstruction_instance
from services.separative import Config, PrincipalMatrix, cover_from_matrix
from templates import TOOL_VERSION

WINDOW = HalfRect.cube(2, 0, 8)


@pytest.fixture
def runner():
    return CliRunner()


def partition_file(tmp_path, pieces, name='partition.json', window=WINDOW):
    path = str(tmp_path / name)
    write_json(path, {'n': window.n, 'scale': 'half-units', 'window': window.to_json(),
                      'pieces': [p.to_json() for p in pieces]})
    return path


def read(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def test_version(runner):
    result = runner.invoke(cli, ['--version'])
    assert result.exit_code == 0
    assert TOOL_VERSION in result.output


def test_verify_valid_partition(runner, tmp_path):
    path = partition_file(tmp_path, [HalfRect((0, 0), (4, 8)), HalfRect((4, 0), (8, 8))])
    output = str(tmp_path / 'report.json')
    result = runner.invoke(cli, ['verify', '--partition', path, '--output', output])
    assert result.exit_code == 0
    data = read(output)
    assert data['report']['passed'] and data['properties']['minimal']
    manifest = read(output + '.manifest.json')
    assert manifest['command'] == 'verify' and path in manifest['inputs']


def test_verify_octant_about_partition(runner, tmp_path):
    cover = cover_from_matrix(PrincipalMatrix.of(Config.OCTANT_ROWS))
    path = str(tmp_path / 'octant.json')
    write_json(path, partition_to_json(cover))
    output = str(tmp_path / 'report.json')
    result = runner.invoke(cli, ['verify', '--partition', path, '--output', output])
    assert result.exit_code == 0
    properties = read(output)['properties']
    assert properties['about'] and not properties['minimal']


def test_verify_overlap_fails(runner, tmp_path):
    path = partition_file(tmp_path, [WINDOW, WINDOW])
    result = runner.invoke(cli, ['verify', '--partition', path, '--output', str(tmp_path / 'r.json')])
    assert result.exit_code == 1


def test_verify_bad_scale_is_usage_error(runner, tmp_path):
    path = str(tmp_path / 'units.json')
    write_json(path, {'scale': 'units', 'window': WINDOW.to_json(), 'pieces': []})
    result = runner.invoke(cli, ['verify', '--partition', path])
    assert result.exit_code == 2


def test_verify_missing_file(runner, tmp_path):
    result = runner.invoke(cli, ['verify', '--partition', str(tmp_path / 'missing.json')])
    assert result.exit_code == 2


def test_enumerate(runner, tmp_path):
    output = str(tmp_path / 'forms.jsonl')
    result = runner.invoke(cli, ['enumerate', '--n', '2', '--k', '2', '--jobs', '1', '--output', output])
    assert result.exit_code == 0
    with open(output, encoding='utf-8') as f:
        lines = [json.loads(line) for line in f]
    assert len(lines) == 4


def test_enumerate_rejects_large_k(runner):
    result = runner.invoke(cli, ['enumerate', '--n', '2', '--k', '3', '--jobs', '1'])
    assert result.exit_code == 2


def test_extend2d(runner, tmp_path):
    path = str(tmp_path / 'instance.json')
    write_json(path, example_instance_2d().to_json())
    output = str(tmp_path / 'extension.json')
    result = runner.invoke(cli, ['extend2d', '--instance', path, '--output', output])
    assert result.exit_code == 0
    data = read(output)
    assert len(data['partition']['pieces']) == 5 and data['report']['passed']


def test_extend2d_rejects_touching_boxes(runner, tmp_path):
    path = str(tmp_path / 'instance.json')
    write_json(path, {'scale': 'half-units', 'window': WINDOW.to_json(),
                      'required': [HalfRect.cube(2, 0, 2).to_json(), HalfRect.cube(2, 2, 4).to_json()]})
    result = runner.invoke(cli, ['extend2d', '--instance', path])
    assert result.exit_code == 2


def test_search_on_unit_grid(runner, tmp_path):
    path = str(tmp_path / 'instance.json')
    write_json(path, example_instance_2d().to_json())
    output = str(tmp_path / 'search.json')
    result = runner.invoke(cli, ['search', '--instance', path, '--grid', '1', '--workers', '1', '--output', output])
    assert result.exit_code == 0
    assert read(output)['found']


def test_search_rejects_unknown_grid(runner, tmp_path):
    path = str(tmp_path / 'instance.json')
    write_json(path, example_instance_2d().to_json())
    result = runner.invoke(cli, ['search', '--instance', path, '--grid', '1/3'])
    assert result.exit_code == 2


def test_trace_rejects_candidate_without_required_boxes(runner, tmp_path):
    instance = obstruction_instance(3)
    instance_path = str(tmp_path / 'instance.json')
    write_json(instance_path, instance.to_json())
    candidate = partition_file(tmp_path, [instance.window], 'candidate.json', window=instance.window)
    result = runner.invoke(cli, ['trace', '--instance', instance_path, '--candidate', candidate])
    assert result.exit_code == 2


def test_tiling_check(runner, tmp_path):
    output = str(tmp_path / 't2.json')
    svg = str(tmp_path / 't2.svg')
    result = runner.invoke(cli, ['tiling', '--s', '1', '--check', '--svg', svg, '--output', output])
    assert result.exit_code == 0
    data = read(output)
    assert data['placements'] == 112 and len(data['centers']) == 109
    assert data['report']['passed']
    with open(svg, encoding='utf-8') as f:
        assert f.read().startswith('<svg')


def test_tiling_check_writes_svg_by_default(runner, tmp_path):
    output = str(tmp_path / 't2.json')
    result = runner.invoke(cli, ['tiling', '--s', '1', '--check', '--output', output])
    assert result.exit_code == 0
    with open(tmp_path / 't2.svg', encoding='utf-8') as f:
        assert f.read().startswith('<svg')
    assert str(tmp_path / 't2.svg') in read(output + '.manifest.json')['outputs']
    with runner.isolated_filesystem(temp_dir=tmp_path) as cwd:
        result = runner.invoke(cli, ['tiling', '--s', '1', '--check'])
        assert result.exit_code == 0
        assert os.path.exists(os.path.join(cwd, 't2-s1.svg'))


def test_tiling_svg_needs_plane(runner, tmp_path):
    result = runner.invoke(cli, ['tiling', '--dim', '3', '--svg', str(tmp_path / 't3.svg')])
    assert result.exit_code == 2


def test_render_fixture(runner, tmp_path):
    output = str(tmp_path / 'figure.svg')
    result = runner.invoke(cli, ['render', '--fixture', 'extend2d-example', '--output', output])
    assert result.exit_code == 0
    with open(output, encoding='utf-8') as f:
        assert f.read().startswith('<svg')


def test_render_partition_with_highlight(runner, tmp_path):
    path = partition_file(tmp_path, [HalfRect((0, 0), (4, 8)), HalfRect((4, 0), (8, 8))])
    output = str(tmp_path / 'figure.svg')
    result = runner.invoke(cli, ['render', '--input', path, '--highlight', '[0, [4, 4]]', '--output', output])
    assert result.exit_code == 0
    with open(output, encoding='utf-8') as f:
        assert '<circle' in f.read()


def test_render_needs_one_source(runner):
    assert runner.invoke(cli, ['render']).exit_code == 2


def test_render_bad_highlight(runner, tmp_path):
    path = partition_file(tmp_path, [WINDOW])
    result = runner.invoke(cli, ['render', '--input', path, '--highlight', '{'])
    assert result.exit_code == 2


def test_torus_bad_override_is_usage_error(runner):
    result = runner.invoke(cli, ['simulate-torus', '--preset', 'n2', '--r1', '20'])
    assert result.exit_code == 2


def test_unknown_suite(runner):
    assert runner.invoke(cli, ['suite', 'nope']).exit_code == 2
