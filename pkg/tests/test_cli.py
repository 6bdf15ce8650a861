import json

import pytest

import catalog
from cli import FAILED, OK, UNVERIFIED, build_parser, run
from formats import dumps, graph_to_dict, scheme_to_dict
from multigraph import Dart
from ribbon import EmbeddingScheme


@pytest.fixture
def out(tmp_path):
    return ['--output', str(tmp_path)]


def saved(tmp_path, pattern):
    files = sorted(tmp_path.glob(pattern))
    assert files, f'nothing matches {pattern}'
    return files


def test_analyze(out, tmp_path, capsys):
    assert run(['analyze', 'petersen'] + out) == OK
    text = capsys.readouterr().out
    assert 'q=6' in text
    assert 'globally stable class' in text
    data = json.loads(saved(tmp_path, 'analyze_*_petersen.json')[0]
                      .read_text())
    assert data['q'] == 6 and data['is_cubic'] is True


def test_analyze_a_quartic_graph(out, capsys):
    assert run(['analyze', 'rose2'] + out) == OK
    assert 'not globally stable' in capsys.readouterr().out


def test_analyze_a_graph_file(out, tmp_path, capsys):
    path = tmp_path / 'bowtie.json'
    path.write_text(dumps(graph_to_dict(catalog.bowtie())))
    assert run(['analyze', str(path)] + out) == OK
    assert 'q=2' in capsys.readouterr().out
    assert saved(tmp_path, 'analyze_*_bowtie.json')


def test_strip_prints_json(out, tmp_path, capsys):
    assert run(['strip', 'C5'] + out) == OK
    data = json.loads(capsys.readouterr().out)
    assert len(data['walk']) == 10
    assert data['invariants']['faces'] == 1
    assert data['invariants']['orientable'] is False
    assert saved(tmp_path, 'strip_*_C5.json')


def test_census(out, tmp_path, capsys):
    assert run(['census', 'C4'] + out) == OK
    assert 'classes=1' in capsys.readouterr().out
    data = json.loads(saved(tmp_path, 'census_*_C4.json')[0].read_text())
    assert len(data['schemes']) == 1
    assert run(['census', 'petersen'] + out) == FAILED


def test_realize(out, tmp_path, capsys):
    assert run(['realize', 'K4', '--samples', '100'] + out) == OK
    assert 'verification passed: True' in capsys.readouterr().out
    assert saved(tmp_path, 'realize_*_K4.json')
    assert saved(tmp_path, 'realize_*_K4.svg')


def test_realize_with_a_scheme_file(out, tmp_path):
    g = catalog.rose(2)
    a, b = Dart('a', 0), Dart('b', 0)
    s = EmbeddingScheme(g, {'v0': (a, b, a.partner, b.partner)},
                        {'a': 0, 'b': 0})
    path = tmp_path / 'torus.json'
    path.write_text(dumps(scheme_to_dict(s)))
    assert run(['realize', 'rose2', '--scheme', str(path)] + out) == OK
    assert run(['realize', 'theta', '--scheme', str(path)] + out) == FAILED


def test_failed_verification_exits_with_two(out, capsys):
    code = run(['realize', 'petersen', '--samples', '20',
                '--tolerance', '1e-300'] + out)
    assert code == UNVERIFIED
    assert 'verification passed: False' in capsys.readouterr().out


def test_resolve_cubic(out, tmp_path, capsys):
    assert run(['resolve-cubic', 'rose2'] + out) == OK
    assert '1 edges inserted' in capsys.readouterr().out
    data = json.loads(saved(tmp_path, 'cubic_*_rose2.json')[0].read_text())
    assert data['inserted'] == ['v0~1']
    assert run(['resolve-cubic', 'C4'] + out) == FAILED


def test_torus_voronoi(out, tmp_path, capsys):
    assert run(['torus', 'voronoi', '--lattice', 'hexagonal',
                '--x', '0.1,0.2'] + out) == OK
    assert 'degrees [3, 3]' in capsys.readouterr().out
    assert saved(tmp_path, 'voronoi_*_hexagonal.json')
    assert saved(tmp_path, 'voronoi_*_hexagonal.svg')


def test_torus_field(out, tmp_path, capsys):
    assert run(['torus', 'field', '--resolution', '129'] + out) == OK
    assert 'degrees [4]' in capsys.readouterr().out
    assert saved(tmp_path, 'field_*_square.field')


def test_torus_scan(out, tmp_path, capsys):
    assert run(['torus', 'scan', '--path', '0,0,0.2,0.1,4'] + out) == OK
    assert 'note: flat metric' in capsys.readouterr().out
    data = json.loads(saved(tmp_path, 'scan_*_square.json')[0].read_text())
    assert len(data['points']) == 4


@pytest.mark.parametrize('argv', [
    ['analyze', 'nosuchgraph'],
    ['realize', 'bowtie'],
    ['torus', 'field', '--resolution', '10'],
    ['torus', 'voronoi', '--bump', '0.5,0.5,0.1,1'],
    ['torus', 'voronoi', '--bump', '0.5,0.5'],
    ['frobnicate'],
    [],
])
def test_bad_input_exits_with_one(argv, out, capsys):
    assert run(argv + out) == FAILED


def test_errors_go_to_stderr(out, capsys):
    run(['analyze', 'nosuchgraph'] + out)
    captured = capsys.readouterr()
    assert 'error: ' in captured.err
    assert captured.out == ''


def test_help_exits_cleanly():
    assert run(['--help']) == OK
    assert build_parser().parse_args(['strip', 'K4']).command == 'strip'
