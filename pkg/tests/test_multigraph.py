import pytest

import catalog
from multigraph import (Dart, Edge, GraphError, MultiGraph, contract_edges,
                        cyclic_part, degree_profile, generating_cycle_count,
                        is_isomorphic, spanning_tree, total_length,
                        two_connected_components)


CORPUS = catalog.connected_multigraphs(4)


def test_disconnected_graph_rejected():
    with pytest.raises(GraphError):
        MultiGraph.from_edges(['a', 'b', 'c'], [('e', 'a', 'b')])


@pytest.mark.parametrize('vertices,edges', [
    ([], []),
    (['a', 'a'], [('e', 'a', 'a')]),
    (['a', 'b'], [('e', 'a', 'b'), ('e', 'b', 'a')]),
    (['a'], [('e', 'a', 'z')]),
    (['a', 'b'], [('e', 'a', 'b', 1.0), ('f', 'a', 'b')]),
    (['a', 'b'], [('e', 'a', 'b', 0.0)]),
    (['a', 'b'], [('e', 'a', 'b', -2.0)]),
])
def test_invalid_graphs_rejected(vertices, edges):
    with pytest.raises(GraphError):
        MultiGraph.from_edges(vertices, edges)


def test_point_is_a_graph():
    g = catalog.point()
    assert (g.n, g.m) == (1, 0)
    assert g.darts_at('v0') == ()


def test_darts_and_partners():
    g = catalog.rose(1)
    d = Dart('a', 0)
    assert d.partner == Dart('a', 1)
    assert d.partner.partner == d
    assert str(d) == 'a+'
    assert str(d.partner) == 'a-'
    assert g.owner(d) == g.owner(d.partner) == 'v0'
    assert g.edge('a').is_loop


@pytest.mark.parametrize('g', CORPUS)
def test_degree_sum(g):
    assert sum(degree_profile(g).degrees.values()) == 2 * g.m
    assert sorted(g.darts(), key=g.dart_index) == g.darts()


def test_cyclic_part_of_path_is_point():
    cp = cyclic_part(catalog.path(3))
    assert (cp.graph.n, cp.graph.m) == (1, 0)


def test_cyclic_part_of_theta_is_itself(theta):
    cp = cyclic_part(theta)
    assert cp.graph == theta


def test_cyclic_part_of_tadpole(metric_tadpole):
    cp = cyclic_part(metric_tadpole)
    assert cp.graph.n == 1
    assert cp.graph.m == 1
    loop = cp.graph.edges[0]
    assert loop.is_loop
    assert loop.length == pytest.approx(3.0)
    assert len(cp.edge_paths[loop.id]) == 3


@pytest.mark.parametrize('g', CORPUS)
def test_cyclic_part_paths_walk_the_graph(g):
    cp = cyclic_part(g)
    used = []
    for e in cp.graph.edges:
        path = cp.edge_paths[e.id]
        assert g.owner(path[0]) == e.u
        assert g.owner(path[-1].partner) == e.v
        for before, after in zip(path, path[1:]):
            assert g.owner(before.partner) == g.owner(after)
        used.extend(d.edge for d in path)
    assert len(used) == len(set(used))


@pytest.mark.parametrize('g', CORPUS)
def test_cyclic_part_is_idempotent_and_keeps_q(g):
    cp = cyclic_part(g).graph
    again = cyclic_part(cp).graph
    assert is_isomorphic(cp, again)
    assert generating_cycle_count(cp) == generating_cycle_count(g)
    degrees = degree_profile(cp).degrees.values()
    trivial = cp.n == 1 and cp.m <= 1
    assert trivial or min(degrees) >= 3


def test_cyclic_part_total_length(metric_tadpole, theta):
    cp = cyclic_part(metric_tadpole).graph
    assert total_length(metric_tadpole) == pytest.approx(4.0)
    assert total_length(cp) < total_length(metric_tadpole)
    metric_theta = MultiGraph(theta.vertices, tuple(
        e._replace(length=1.5) for e in theta.edges))
    assert total_length(cyclic_part(metric_theta).graph) == \
        pytest.approx(total_length(metric_theta))
    assert total_length(theta) is None


@pytest.mark.parametrize('name,q', [('K4', 3), ('point', 0), ('petersen', 6),
                                    ('K3,3', 4), ('rose2', 2)])
def test_generating_cycle_count(name, q):
    assert generating_cycle_count(catalog.lookup(name)) == q


def test_degree_profile_examples(theta, rose2, petersen):
    assert degree_profile(theta).profile == (3, 3)
    assert degree_profile(theta).is_cubic
    profile = degree_profile(rose2)
    assert profile.degrees == {'v0': 4}
    assert profile.is_constant_order(4)
    assert not profile.is_cubic
    assert degree_profile(petersen).is_constant_order(3)
    assert degree_profile(petersen).is_cubic


def test_blocks(theta):
    assert two_connected_components(theta) == [['e0', 'e1', 'e2']]
    assert two_connected_components(catalog.bowtie()) == [
        ['e0', 'e1', 'e2'], ['e3', 'e4', 'e5']]
    assert two_connected_components(catalog.tadpole()) == [
        ['e0', 'e1', 'e2'], ['e3']]
    assert two_connected_components(catalog.rose(2)) == [['a'], ['b']]
    assert two_connected_components(catalog.path(4)) == [
        ['e0'], ['e1'], ['e2']]


@pytest.mark.parametrize('g', CORPUS)
def test_blocks_partition_edges(g):
    blocks = two_connected_components(g)
    edges = [e for block in blocks for e in block]
    assert sorted(edges) == sorted(e.id for e in g.edges)


def test_spanning_tree():
    tree, cotree = spanning_tree(catalog.star(3))
    assert tree == ['e0', 'e1', 'e2'] and cotree == []
    assert spanning_tree(catalog.rose(1)) == ([], ['a'])
    tree, cotree = spanning_tree(catalog.complete(4))
    assert len(tree) == 3 and len(cotree) == 3
    assert spanning_tree(catalog.complete(4)) == (tree, cotree)


def test_contract_edges():
    c4 = catalog.cycle(4)
    contracted, vertex_map = contract_edges(c4, ['e1'])
    assert is_isomorphic(contracted, catalog.cycle(3))
    assert vertex_map['v2'] == 'v1'
    loop, _ = contract_edges(catalog.cycle(2), ['e0'])
    assert loop.m == 1 and loop.edges[0].is_loop
    with pytest.raises(GraphError):
        contract_edges(catalog.rose(1), ['a'])


def test_contraction_keeps_the_first_vertex():
    square = MultiGraph.from_edges(
        ['a', 'b', 'c', 'd'],
        [('ab', 'a', 'b'), ('bc', 'b', 'c'), ('cd', 'c', 'd'),
         ('da', 'd', 'a')])
    contracted, vertex_map = contract_edges(square, ['cd', 'bc', 'ab'])
    assert vertex_map == {v: 'a' for v in 'abcd'}
    assert contracted.vertices == ('a',)
    assert contracted.edges == (Edge('da', 'a', 'a'),)


def test_edge_lookup():
    g = catalog.theta()
    assert g.edge('e1') == Edge('e1', 'v0', 'v1')
    with pytest.raises(GraphError):
        g.edge('zz')
