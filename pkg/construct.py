"""
Building cut-locus structures: a strip on every connected graph, the
census of all strips on small graphs, and the resolution of a graph into a
cubic one.
"""
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial, prod
from multiprocessing import Pool
from typing import Dict, List, NamedTuple, Optional, Tuple

import pandas as pd
from logbook import Logger

from config import CENSUS_LIMIT, CENSUS_WORKERS
from logger import log_assert
from multigraph import (CyclicPart, Dart, Edge, GraphError, MultiGraph,
                        cyclic_part, degree_profile, generating_cycle_count,
                        spanning_tree)
from ribbon import (EmbeddingScheme, _trace_flags, canonical_boundary_word,
                    companion_function, decomposition, equivalent,
                    is_cl_structure, reverse_scheme, surface_invariants)


log = Logger(__name__)


class NotATree(GraphError):
    pass


class CensusTooLarge(ValueError):

    def __init__(self, bound: int, limit: int) -> None:
        self.bound = bound
        self.limit = limit
        super().__init__(f'census needs {bound} candidates, limit is {limit}')


class NotResolvable(GraphError):
    pass


def tree_strip(t: MultiGraph) -> EmbeddingScheme:
    """Disk around a tree: rotations in input order, nothing twisted."""
    if generating_cycle_count(t) != 0:
        raise NotATree(f'{t} is not a tree')
    return EmbeddingScheme(t, {v: t.darts_at(v) for v in t.vertices},
                           {e.id: 0 for e in t.edges})


def one_face_embedding(g: MultiGraph) -> EmbeddingScheme:
    """
    Strip on g.  Grown on the cyclic part (tree strip, then one twisted or
    straight band per non-tree edge keeping a single face) and lifted back
    to g.
    """
    cp = cyclic_part(g)
    strip = _grow(cp.graph)
    scheme = lift_strip(strip, g, cp)
    log.debug(f'one-face embedding of {g}: {scheme}')
    return scheme


def _grow(g: MultiGraph) -> EmbeddingScheme:
    tree, cotree = spanning_tree(g)
    tree = set(tree)
    rotation: Dict[str, List[Dart]] = {v: [] for v in g.vertices}
    signature: Dict[str, int] = {}
    for e in g.edges:
        if e.id in tree:
            rotation[e.u].append(Dart(e.id, 0))
            rotation[e.v].append(Dart(e.id, 1))
            signature[e.id] = 0

    for eid in cotree:
        e = g.edge(eid)
        x, y = Dart(eid, 0), Dart(eid, 1)
        if not rotation[e.u]:
            # single vertex, first loop: the Moebius band
            rotation[e.u] = [x, y]
            signature[eid] = 1
        else:
            orbit = _single_face(rotation, signature)
            iu = _first_corner(g, orbit, e.u)
            a = _plus_dart(orbit, iu)
            if e.is_loop:
                _insert_after(rotation[e.u], a, x, y)
                signature[eid] = 1
            else:
                forward = orbit[iu][1] == 1
                iw = _first_corner(g, orbit, e.v)
                b = _plus_dart(orbit, iw)
                met = orbit[iw] if forward else orbit[(iw + 1) % len(orbit)]
                _insert_after(rotation[e.u], a, x)
                _insert_after(rotation[e.v], b, y)
                signature[eid] = 1 if met[1] == 1 else 0
        log.debug(f'inserted {eid} with twist {signature[eid]}')
        log_assert(len(_orbits(rotation, signature)) == 1,
                   f'{eid} split the face', __name__)

    return EmbeddingScheme(g, {v: tuple(d) for v, d in rotation.items()},
                           signature)


def _orbits(rotation: Dict[str, List[Dart]], signature: Dict[str, int]):
    succ, pred = {}, {}
    for darts in rotation.values():
        for i, d in enumerate(darts):
            succ[d] = darts[(i + 1) % len(darts)]
            pred[d] = darts[i - 1]
    ordered = sorted(succ, key=lambda d: (d.edge, d.end))
    return _trace_flags(succ, pred, signature, ordered)


def _single_face(rotation, signature):
    orbits = _orbits(rotation, signature)
    log_assert(len(orbits) == 1, 'partial strip has several faces', __name__)
    return orbits[0]


def _first_corner(g: MultiGraph, orbit, vertex: str) -> int:
    """Index i (odd) of the first corner link orbit[i] - orbit[i+1] at
    vertex."""
    for i in range(1, len(orbit), 2):
        if g.owner(orbit[i][0]) == vertex:
            return i
    raise GraphError(f'face never visits {vertex}')


def _plus_dart(orbit, i: int) -> Dart:
    """The dart whose +1 side faces the corner linked at i."""
    first, second = orbit[i], orbit[(i + 1) % len(orbit)]
    return first[0] if first[1] == 1 else second[0]


def _insert_after(darts: List[Dart], anchor: Dart, *new: Dart) -> None:
    i = darts.index(anchor) + 1
    darts[i:i] = new


def lift_strip(cp_scheme: EmbeddingScheme, g: MultiGraph,
               cp: CyclicPart) -> EmbeddingScheme:
    """
    Carry a strip on the cyclic part back to g: every cyclic-part edge is
    subdivided into its path (twist on the first piece) and pendant trees
    hang in the corner before the first dart of their vertex.
    """
    rotation: Dict[str, List[Dart]] = {v: [] for v in g.vertices}
    signature = {e.id: 0 for e in g.edges}
    for v, darts in cp_scheme.rotation.items():
        for d in darts:
            path = cp.edge_paths[d.edge]
            rotation[v].append(path[0] if d.end == 0 else path[-1].partner)
    for eid, path in cp.edge_paths.items():
        signature[path[0].edge] = cp_scheme.signature[eid]
        for before, after in zip(path, path[1:]):
            rotation[g.owner(after)].extend([before.partner, after])
    for v in g.vertices:
        placed = set(rotation[v])
        rotation[v].extend(d for d in g.darts_at(v) if d not in placed)

    scheme = EmbeddingScheme(g, {v: tuple(d) for v, d in rotation.items()},
                             signature)
    log_assert(is_cl_structure(scheme), 'lifted strip has several faces',
               __name__)
    return scheme


def census_bound(g: MultiGraph) -> int:
    return prod(factorial(max(g.degree(v) - 1, 0))
                for v in g.vertices) * 2 ** g.m


@dataclass
class Census:
    """
    One-face schemes on a graph modulo vertex switching, grouped by
    equivalence of companion functions.
    """
    graph: MultiGraph
    bound: int
    candidates: int
    schemes: List[EmbeddingScheme]
    classes: List[List[int]]

    def summary(self) -> pd.DataFrame:
        rows = []
        for c, members in enumerate(self.classes):
            for i in members:
                s = self.schemes[i]
                inv = surface_invariants(s)
                rows.append({'class': c,
                             'scheme': i,
                             'orientable': inv.orientable,
                             'genus': inv.genus,
                             'euler': inv.euler_characteristic,
                             'twisted': sum(s.signature.values()),
                             'word': canonical_boundary_word(s)})
        return pd.DataFrame(rows, columns=['class', 'scheme', 'orientable',
                                           'genus', 'euler', 'twisted',
                                           'word'])

    def __str__(self) -> str:
        return (f'Census({self.graph}, schemes={len(self.schemes)}, '
                f'classes={len(self.classes)})')


def _rotation_choices(g: MultiGraph) -> List[List[Tuple[Dart, ...]]]:
    """Cyclic orders at every vertex, first dart fixed."""
    choices = []
    for v in g.vertices:
        darts = g.darts_at(v)
        if not darts:
            choices.append([()])
        else:
            choices.append([darts[:1] + p for p in permutations(darts[1:])])
    return choices


def _census_worker(args) -> List[EmbeddingScheme]:
    g, rotations, cotree = args
    found = []
    rotation = dict(zip(g.vertices, rotations))
    for bits in product((0, 1), repeat=len(cotree)):
        signature = {e.id: 0 for e in g.edges}
        signature.update(zip(cotree, bits))
        s = EmbeddingScheme(g, rotation, signature)
        if is_cl_structure(s):
            found.append(s)
    return found


def enumerate_cl_structures(g: MultiGraph, limit: int = CENSUS_LIMIT,
                            workers: int = CENSUS_WORKERS) -> Census:
    """
    Every one-face scheme on g up to switching.  Tree edges are kept
    straight, which picks one scheme per switching class up to reversing
    all rotations; of a scheme and its reverse the smaller key is kept.

    Args:
    ---------
    limit: refuse when prod((deg(v) - 1)!) * 2**m exceeds it
    workers: size of the process pool, 1 runs in-process
    """
    bound = census_bound(g)
    if bound > limit:
        raise CensusTooLarge(bound, limit)
    _, cotree = spanning_tree(g)
    jobs = [(g, rotations, cotree)
            for rotations in product(*_rotation_choices(g))]
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_census_worker, jobs)
    else:
        results = [_census_worker(job) for job in jobs]

    unique: Dict[Tuple, EmbeddingScheme] = {}
    for s in (s for found in results for s in found):
        key = min(s.key(), reverse_scheme(s).key())
        unique.setdefault(key, s)
    schemes = [unique[k] for k in sorted(unique)]

    classes: List[List[int]] = []
    companions = [companion_function(decomposition(s)) for s in schemes]
    for i, c in enumerate(companions):
        for members in classes:
            if equivalent(companions[members[0]], c, g):
                members.append(i)
                break
        else:
            classes.append([i])
    census = Census(g, bound, len(jobs) * 2 ** len(cotree), schemes, classes)
    log.info(f'{census}')
    return census


class Resolution(NamedTuple):
    """
    graph: cubic graph
    vertex_map: new vertex -> vertex of the input it contracts to
    inserted: the new tree edges; contracting them gives back the input
    scheme: one-face scheme on graph when a scheme was resolved
    """
    graph: MultiGraph
    vertex_map: Dict[str, str]
    inserted: List[str]
    scheme: Optional[EmbeddingScheme]


def cubic_resolution(g: MultiGraph,
                     scheme: Optional[EmbeddingScheme] = None) -> Resolution:
    """
    Blow every vertex of degree d > 3 up into a caterpillar with d - 2
    internal vertices of degree 3.  Darts are dealt in rotation order when
    a scheme is given, otherwise end-0 darts first, each in edge order.
    """
    if scheme is not None and scheme.base != g:
        raise NotResolvable('scheme does not belong to the graph')
    identity = {v: v for v in g.vertices}
    if g.n == 1 and g.m <= 1:
        log.warning(f'{g} is trivial, nothing to resolve')
        return Resolution(g, identity, [], scheme)
    low = [v for v in g.vertices if g.degree(v) < 3]
    if low:
        raise NotResolvable(f'vertices {low} have degree below 3, take the '
                            f'cyclic part first')

    owner: Dict[Dart, str] = {}
    vertices: List[str] = []
    vertex_map: Dict[str, str] = {}
    rotation: Dict[str, Tuple[Dart, ...]] = {}
    inserted: List[Edge] = []
    taken = set(g.vertices) | {e.id for e in g.edges}
    for v in g.vertices:
        if scheme is not None:
            darts = scheme.rotation[v]
        else:
            darts = tuple(sorted(g.darts_at(v),
                                 key=lambda d: (d.end, g.edge_index(d.edge))))
        d = len(darts)
        if d == 3:
            vertices.append(v)
            vertex_map[v] = v
            owner.update((x, v) for x in darts)
            rotation[v] = darts
            continue
        inner = [v] + [_fresh(f'{v}.{i}', taken) for i in range(1, d - 2)]
        tree = [Edge(_fresh(f'{v}~{i}', taken), inner[i - 1], inner[i],
                     _tree_length(g))
                for i in range(1, d - 2)]
        inserted.extend(tree)
        for i, c in enumerate(inner):
            vertices.append(c)
            vertex_map[c] = v
            if i == 0:
                own = darts[:2]
                rot = own + (Dart(tree[0].id, 0),)
            elif i == len(inner) - 1:
                own = darts[-2:]
                rot = (Dart(tree[i - 1].id, 1),) + own
            else:
                own = darts[i + 1:i + 2]
                rot = (Dart(tree[i - 1].id, 1),) + own + (Dart(tree[i].id, 0),)
            owner.update((x, c) for x in own)
            rotation[c] = rot

    edges = [Edge(e.id, owner[Dart(e.id, 0)], owner[Dart(e.id, 1)], e.length)
             for e in g.edges] + inserted
    resolved = MultiGraph(tuple(vertices), tuple(edges))
    log_assert(degree_profile(resolved).is_cubic, 'resolution is not cubic',
               __name__)
    resolved_scheme = None
    if scheme is not None:
        signature = dict(scheme.signature)
        signature.update((e.id, 0) for e in inserted)
        resolved_scheme = EmbeddingScheme(resolved, rotation, signature)
        log_assert(is_cl_structure(resolved_scheme),
                   'resolved scheme has several faces', __name__)
    return Resolution(resolved, vertex_map, [e.id for e in inserted],
                      resolved_scheme)


def _tree_length(g: MultiGraph) -> Optional[float]:
    if not g.is_metric:
        return None
    return min(e.length for e in g.edges) / 2


def _fresh(name: str, taken: set) -> str:
    """`name`, primed until it clashes with no id in `taken`; the result is
    added to `taken`."""
    while name in taken:
        name += "'"
    taken.add(name)
    return name
