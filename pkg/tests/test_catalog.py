import itertools

import pytest

import catalog
from multigraph import GraphError, degree_profile, is_isomorphic


@pytest.mark.parametrize('name,n,m', [
    ('point', 1, 0),
    ('P3', 3, 2),
    ('star3', 4, 3),
    ('C5', 5, 5),
    ('C1', 1, 1),
    ('rose2', 1, 2),
    ('theta', 2, 3),
    ('theta5', 2, 5),
    ('tadpole', 4, 4),
    ('bowtie', 5, 6),
    ('K4', 4, 6),
    ('K5', 5, 10),
    ('K3,3', 6, 9),
    ('K2,2,2', 6, 12),
    ('petersen', 10, 15),
])
def test_lookup(name, n, m):
    g = catalog.lookup(name)
    assert (g.n, g.m) == (n, m)


def test_unknown_name():
    with pytest.raises(GraphError):
        catalog.lookup('dodecahedron')


def test_named_graphs_have_expected_degrees():
    assert degree_profile(catalog.petersen()).is_cubic
    assert degree_profile(catalog.multipartite(3, 3)).is_constant_order(3)
    assert degree_profile(catalog.complete(5)).is_constant_order(4)
    assert degree_profile(catalog.tadpole(3, 2)).profile == (3, 2, 2, 2, 1)


def test_corpus_counts():
    # connected multigraphs with loops on 0, 1, 2, 3 edges
    graphs = catalog.connected_multigraphs(3)
    by_edges = [sum(1 for g in graphs if g.m == m) for m in range(4)]
    assert by_edges == [1, 2, 4, 11]


def test_corpus_has_no_duplicates():
    graphs = catalog.connected_multigraphs(4)
    for a, b in itertools.combinations(graphs, 2):
        assert not is_isomorphic(a, b)
