import itertools
import random

import pytest

import catalog
from construct import one_face_embedding
from multigraph import Dart
from ribbon import (CompanionFunction, DomainMismatch, EmbeddingScheme,
                    NotAStrip, SchemeError, boundary_walk,
                    canonical_boundary_word, companion_function,
                    decomposition, equivalent, face_count, face_trace,
                    flip_edge_face, flip_vertex_face, is_cl_structure,
                    is_orientable, reverse_scheme, scheme_from_walk,
                    surface_invariants, switch_vertex, walk_vertices)


A, A_, B, B_ = Dart('a', 0), Dart('a', 1), Dart('b', 0), Dart('b', 1)


def plain(g, signature=None):
    """Rotation in incidence order."""
    bits = {e.id: 0 for e in g.edges}
    bits.update(signature or {})
    return EmbeddingScheme(g, {v: g.darts_at(v) for v in g.vertices}, bits)


def torus_rose():
    return EmbeddingScheme(catalog.rose(2), {'v0': (A, B, A_, B_)},
                           {'a': 0, 'b': 0})


def all_schemes(g):
    """Every rotation system and signature on g."""
    choices = []
    for v in g.vertices:
        darts = g.darts_at(v)
        if not darts:
            choices.append([()])
        else:
            choices.append([darts[:1] + p
                            for p in itertools.permutations(darts[1:])])
    for rotations in itertools.product(*choices):
        for bits in itertools.product((0, 1), repeat=g.m):
            yield EmbeddingScheme(g, dict(zip(g.vertices, rotations)),
                                  {e.id: b for e, b in zip(g.edges, bits)})


def orientable_by_labelling(s):
    """A vertex labelling explains every twist."""
    g = s.base
    for labels in itertools.product((0, 1), repeat=g.n):
        p = dict(zip(g.vertices, labels))
        if all(s.signature[e.id] == p[e.u] ^ p[e.v] for e in g.edges):
            return True
    return False


def same_cycle(walk, other):
    """other is a rotation of walk, or of walk read backwards."""
    backwards = [d.partner for d in reversed(walk)]
    size = len(walk)
    if size == 0:
        return not other
    for w in (walk, backwards):
        if any(w[i:] + w[:i] == list(other) for i in range(size)):
            return True
    return False


def test_planar_triangle_has_two_faces():
    s = plain(catalog.cycle(3))
    assert face_count(s) == 2
    assert not is_cl_structure(s)
    inv = surface_invariants(s)
    assert inv.euler_characteristic == 2 and inv.orientable


def test_moebius_triangle_has_one_face():
    s = plain(catalog.cycle(3), {'e0': 1})
    assert face_count(s) == 1
    inv = surface_invariants(s)
    assert inv.euler_characteristic == 1
    assert not inv.orientable
    assert inv.genus == 1
    assert inv.strip_euler_characteristic == 0
    walk = boundary_walk(s)
    assert len(walk) == 6
    assert sorted(d.edge for d in walk) == ['e0', 'e0', 'e1', 'e1', 'e2',
                                           'e2']


def test_torus_rose():
    s = torus_rose()
    assert is_cl_structure(s)
    assert boundary_walk(s) == [A, B, A_, B_]
    inv = surface_invariants(s)
    assert (inv.euler_characteristic, inv.orientable, inv.genus) == (0, True,
                                                                     1)


def test_planar_rose_has_three_faces():
    s = EmbeddingScheme(catalog.rose(2), {'v0': (A, A_, B, B_)},
                        {'a': 0, 'b': 0})
    assert face_count(s) == 3
    assert surface_invariants(s).euler_characteristic == 2


def test_point_has_one_empty_face():
    s = plain(catalog.point())
    assert face_trace(s) == [()]
    assert is_cl_structure(s)
    assert boundary_walk(s) == []


@pytest.mark.parametrize('rotation,signature', [
    ({'v0': (A, B, A_)}, {'a': 0, 'b': 0}),
    ({'v0': (A, B, A_, A)}, {'a': 0, 'b': 0}),
    ({'v0': (A, B, A_, B_)}, {'a': 0}),
    ({'v0': (A, B, A_, B_)}, {'a': 0, 'b': 2}),
    ({}, {'a': 0, 'b': 0}),
])
def test_malformed_schemes(rotation, signature):
    with pytest.raises(SchemeError):
        EmbeddingScheme(catalog.rose(2), rotation, signature)


def test_theta_strip_walk(theta):
    s = one_face_embedding(theta)
    walk = boundary_walk(s)
    assert len(walk) == 6
    assert sorted(walk_vertices(theta, walk)) == ['v0'] * 3 + ['v1'] * 3


def test_not_a_strip():
    with pytest.raises(NotAStrip):
        boundary_walk(plain(catalog.cycle(3)))


@pytest.mark.parametrize('g', catalog.connected_multigraphs(3))
def test_every_edge_twice_and_euler(g):
    for s in all_schemes(g):
        faces = face_trace(s)
        edges = [step.dart.edge for face in faces for step in face]
        assert sorted(edges) == sorted(2 * [e.id for e in g.edges])
        inv = surface_invariants(s)
        assert inv.euler_characteristic == g.n - g.m + len(faces)
        assert inv.orientable == orientable_by_labelling(s)
        if inv.orientable:
            assert inv.euler_characteristic % 2 == 0
            assert inv.euler_characteristic == 2 - 2 * inv.genus
        else:
            assert inv.genus >= 1
            assert inv.euler_characteristic == 2 - inv.genus


@pytest.mark.slow
def test_euler_and_orientability_exhaustive():
    for g in catalog.connected_multigraphs(4):
        for s in all_schemes(g):
            inv = surface_invariants(s)
            assert inv.euler_characteristic == g.n - g.m + face_count(s)
            assert inv.orientable == orientable_by_labelling(s)


@pytest.mark.parametrize('g', catalog.connected_multigraphs(3))
def test_switching_keeps_faces(g):
    for s in all_schemes(g):
        f = face_count(s)
        chi = surface_invariants(s).euler_characteristic
        for v in g.vertices:
            switched = switch_vertex(s, v)
            assert face_count(switched) == f
            assert surface_invariants(switched).euler_characteristic == chi
        assert face_count(reverse_scheme(s)) == f


def test_faces_do_not_depend_on_rotation_roots(petersen):
    s = one_face_embedding(petersen)
    rng = random.Random(7)
    for _ in range(10):
        rotation = {}
        for v, darts in s.rotation.items():
            k = rng.randrange(len(darts))
            rotation[v] = darts[k:] + darts[:k]
        rerooted = EmbeddingScheme(petersen, rotation, s.signature)
        assert face_count(rerooted) == 1
        assert canonical_boundary_word(rerooted) == \
            canonical_boundary_word(s)


def test_companion_function_of_moebius_triangle():
    s = plain(catalog.cycle(3), {'e1': 1})
    d = decomposition(s)
    assert companion_function(d).values == {'e0': 0, 'e1': 1, 'e2': 0}
    for e in s.base.edges:
        assert d.attach[Dart(e.id, 0)] ^ d.attach[Dart(e.id, 1)] == \
            s.signature[e.id]


def test_companion_function_of_untwisted_scheme_is_zero(theta):
    d = decomposition(plain(theta))
    assert set(companion_function(d).values.values()) == {0}


def test_flipping_faces(theta):
    d = decomposition(plain(theta, {'e0': 1}))
    before = companion_function(d).values
    flipped = companion_function(flip_vertex_face(d, 'v0')).values
    assert all(flipped[e] == before[e] ^ 1 for e in before)
    for e in before:
        assert companion_function(flip_edge_face(d, e)).values == before


def test_vertex_flip_skips_loops():
    g = catalog.tadpole(1, 1)
    d = decomposition(plain(g))
    flipped = companion_function(flip_vertex_face(d, 'v0')).values
    assert flipped == {'e0': 0, 'e1': 1}


def test_equivalence(theta):
    d = decomposition(plain(theta, {'e0': 1}))
    a = companion_function(d)
    complement = companion_function(flip_vertex_face(d, 'v0'))
    one_off = companion_function(flip_vertex_face(
        flip_edge_face(d, 'e0'), 'v0'))
    assert equivalent(a, a, theta)
    assert equivalent(a, complement, theta)
    assert equivalent(complement, a, theta)
    changed = dict(a.values)
    changed['e1'] ^= 1
    assert not equivalent(a, CompanionFunction(changed), theta)
    assert equivalent(one_off, a, theta)


def test_equivalence_is_blockwise():
    g = catalog.bowtie()
    zero = {e.id: 0 for e in g.edges}
    first_block = dict(zero, e0=1, e1=1, e2=1)
    split = dict(zero, e0=1)
    zero, first_block, split = (CompanionFunction(values) for values in
                                (zero, first_block, split))
    assert equivalent(zero, first_block, g)
    assert not equivalent(zero, split, g)


def test_domain_mismatch(theta):
    a = companion_function(decomposition(plain(theta)))
    with pytest.raises(DomainMismatch):
        equivalent(a, CompanionFunction({'e0': 0}), theta)


def test_equivalence_relation_on_theta(theta):
    functions = [CompanionFunction(dict(zip(['e0', 'e1', 'e2'], bits)))
                 for bits in itertools.product((0, 1), repeat=3)]
    for a, b, c in itertools.product(functions, repeat=3):
        assert equivalent(a, a, theta)
        assert equivalent(a, b, theta) == equivalent(b, a, theta)
        if equivalent(a, b, theta) and equivalent(b, c, theta):
            assert equivalent(a, c, theta)


def test_scheme_from_torus_walk():
    g = catalog.rose(2)
    s = scheme_from_walk(g, [A, B, A_, B_])
    assert s.signature == {'a': 0, 'b': 0}
    assert s.rotation['v0'] == (A, B_, A_, B)
    assert is_orientable(s)
    assert same_cycle([A, B, A_, B_], boundary_walk(s))


def test_scheme_from_moebius_walk():
    s = scheme_from_walk(catalog.rose(1), [A, A])
    assert s.signature == {'a': 1}
    assert is_cl_structure(s)


@pytest.mark.parametrize('walk', [
    [A, A_],
    [A, B, A_],
    [A, A, B, B, A],
])
def test_bad_walks(walk):
    g = catalog.rose(1) if len(walk) == 2 else catalog.rose(2)
    with pytest.raises(SchemeError):
        scheme_from_walk(g, walk)


@pytest.mark.parametrize('g', catalog.connected_multigraphs(4))
def test_scheme_from_walk_inverts_boundary_walk(g):
    s = one_face_embedding(g)
    walk = boundary_walk(s)
    rebuilt = scheme_from_walk(g, walk)
    assert is_cl_structure(rebuilt)
    assert same_cycle(walk, boundary_walk(rebuilt))
    assert canonical_boundary_word(rebuilt) == canonical_boundary_word(s)


def test_canonical_word_ignores_labels():
    g = catalog.rose(2)
    s = torus_rose()
    swapped = EmbeddingScheme(g, {'v0': (B, A, B_, A_)}, {'a': 0, 'b': 0})
    assert canonical_boundary_word(s) == canonical_boundary_word(swapped)
    assert canonical_boundary_word(s) == ((0, 0), (1, 0), (0, 1), (1, 1))
