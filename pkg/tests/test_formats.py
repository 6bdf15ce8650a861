import json
from dataclasses import replace

import numpy as np
import pytest

import catalog
from construct import enumerate_cl_structures, one_face_embedding
from constcurv import realize, verify_realization
from formats import (FormatError, census_to_dict, cut_locus_to_dict, dumps,
                     graph_from_dict, graph_to_dict, load_graph, load_scheme,
                     parse_dart, realization_to_dict, report_to_dict,
                     scan_to_dict, scheme_from_dict, scheme_to_dict)
from multigraph import Dart, GraphError
from ribbon import SchemeError
from torus_lab import (FlatTorus, horizontal_path, stability_scan,
                       torus_voronoi_cutlocus)


@pytest.mark.parametrize('text,dart', [
    ('a+', Dart('a', 0)),
    ('a-', Dart('a', 1)),
    ('e12−', Dart('e12', 1)),
    ('v0~1+', Dart('v0~1', 0)),
])
def test_parse_dart(text, dart):
    assert parse_dart(text) == dart


@pytest.mark.parametrize('text', ['a', '+', 'a*', ''])
def test_bad_darts(text):
    with pytest.raises(FormatError):
        parse_dart(text)


def test_graph_json(metric_tadpole, petersen):
    data = graph_to_dict(metric_tadpole)
    assert data['edges'][0] == {'id': 'e0', 'ends': ['a', 'b'],
                                'length': 1.0}
    assert graph_from_dict(json.loads(dumps(data))) == metric_tadpole
    assert 'length' not in graph_to_dict(petersen)['edges'][0]
    assert graph_from_dict(graph_to_dict(petersen)) == petersen


@pytest.mark.parametrize('data', [
    {'vertices': ['a']},
    {'vertices': ['a'], 'edges': [{'id': 'e', 'ends': 'abc'}]},
    {'vertices': ['a'], 'edges': [{'ends': ['a', 'a']}]},
    {'vertices': ['a'], 'edges': [{'id': 'e', 'ends': ['a', 'a'],
                                   'length': 'long'}]},
    [],
])
def test_malformed_graphs(data):
    with pytest.raises(FormatError):
        graph_from_dict(data)


def test_invalid_graph_is_a_graph_error():
    with pytest.raises(GraphError):
        graph_from_dict({'vertices': ['a', 'b'], 'edges': []})


def test_scheme_json(petersen):
    s = one_face_embedding(petersen)
    data = json.loads(dumps(scheme_to_dict(s)))
    assert data['rotation']['v0'][0].endswith(('+', '-'))
    assert scheme_from_dict(data) == s


def test_malformed_schemes(theta):
    data = scheme_to_dict(one_face_embedding(theta))
    del data['signature']
    with pytest.raises(FormatError):
        scheme_from_dict(data)
    data = scheme_to_dict(one_face_embedding(theta))
    data['rotation']['v0'] = ['e0+', 'e1+']
    with pytest.raises(SchemeError):
        scheme_from_dict(data)


def test_files(tmp_path, theta):
    graph_file = tmp_path / 'theta.json'
    graph_file.write_text(dumps(graph_to_dict(theta)))
    assert load_graph(str(graph_file)) == theta

    scheme_file = tmp_path / 'strip.json'
    scheme_file.write_text(dumps(scheme_to_dict(one_face_embedding(theta))))
    assert load_scheme(str(scheme_file), theta).base == theta
    assert load_scheme(str(scheme_file)).base == theta
    with pytest.raises(SchemeError):
        load_scheme(str(scheme_file), catalog.theta(4))

    broken = tmp_path / 'broken.json'
    broken.write_text('{"vertices": [')
    with pytest.raises(FormatError):
        load_graph(str(broken))


def test_numpy_values_are_encoded():
    data = {'i': np.int64(3), 'f': np.float32(0.5), 'b': np.bool_(True),
            'a': np.arange(3)}
    assert json.loads(dumps(data)) == {'i': 3, 'f': 0.5, 'b': True,
                                       'a': [0, 1, 2]}


def test_result_dicts_are_json(petersen, rose2):
    r = realize(petersen, one_face_embedding(petersen))
    report = verify_realization(r, samples=20)
    data = json.loads(dumps({'realization': realization_to_dict(r),
                             'report': report_to_dict(report)}))
    assert data['realization']['geometry'] == 'hyperbolic'
    assert len(data['realization']['vertex_coords']) == 30
    assert len(data['realization']['side_pairing']) == 15
    assert data['report']['passed'] is True
    assert data['report']['failures'] == []

    cl = torus_voronoi_cutlocus(FlatTorus.hexagonal(), (0, 0))
    data = json.loads(dumps(cut_locus_to_dict(cl)))
    assert data['profile'] == [3, 3]
    assert data['exact'] is True
    assert graph_from_dict(data['graph']).m == 3
    assert data['ridges'] == []
    ridge = np.array([[0.0, 0.0], [0.1, 0.0]])
    data = json.loads(dumps(cut_locus_to_dict(replace(cl, ridges=[ridge]))))
    assert data['ridges'] == [[[0.0, 0.0], [0.1, 0.0]]]

    scan = stability_scan(FlatTorus.square(), horizontal_path(count=3))
    data = json.loads(dumps(scan_to_dict(scan)))
    assert [p['profile'] for p in data['points']] == [[4]] * 3
    assert data['transitions'] == []

    census = enumerate_cl_structures(rose2)
    data = json.loads(dumps(census_to_dict(census)))
    assert len(data['schemes']) == len(census.schemes)
    assert scheme_from_dict(data['schemes'][0]) == census.schemes[0]
