"""
Embedding schemes: rotation at every vertex plus a Z2 signature on the
edges (1 = twisted band).  A scheme with exactly one face is a strip around
its graph, i.e. a cut-locus structure.

Faces are traced on flags (dart, side).  Side +1 of dart d faces the
corner between d and its successor in the rotation, side -1 the corner
between d and its predecessor.
    tau1: (d, +1) <-> (succ(d), -1)        corner at a vertex
    tau0: (d, s) <-> (partner(d), -s)      along an untwisted edge
          (d, s) <-> (partner(d), s)       along a twisted edge
A face is an orbit of <tau0, tau1>, written from a flag by applying tau0
then tau1 alternately.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from logbook import Logger

from multigraph import (Dart, MultiGraph, spanning_tree,
                        two_connected_components)


log = Logger(__name__)

Flag = Tuple[Dart, int]


class SchemeError(ValueError):
    pass


class NotAStrip(SchemeError):
    pass


class DomainMismatch(SchemeError):
    pass


class FaceStep(NamedTuple):
    """Dart walked on a given side; the walk leaves through this dart."""
    dart: Dart
    side: int


Face = Tuple[FaceStep, ...]


@dataclass(frozen=True)
class EmbeddingScheme:
    """
    Args:
    ---------
    base: the multigraph
    rotation: vertex -> darts at that vertex in cyclic order
    signature: edge id -> 0 (straight band) or 1 (twisted band)
    """
    base: MultiGraph
    rotation: Dict[str, Tuple[Dart, ...]]
    signature: Dict[str, int]

    def __post_init__(self) -> None:
        rotation = {v: tuple(Dart(*d) for d in darts)
                    for v, darts in self.rotation.items()}
        object.__setattr__(self, 'rotation', rotation)
        object.__setattr__(self, 'signature',
                           {e: int(s) for e, s in self.signature.items()})
        g = self.base
        if set(rotation) != set(g.vertices):
            raise SchemeError('rotation must list every vertex exactly once')
        for v in g.vertices:
            darts = rotation[v]
            if (len(set(darts)) != len(darts)
                    or set(darts) != set(g.darts_at(v))):
                raise SchemeError(f'rotation at {v} is not a permutation of '
                                  f'its darts')
        if set(self.signature) != {e.id for e in g.edges}:
            raise SchemeError('signature must be defined on every edge')
        if any(s not in (0, 1) for s in self.signature.values()):
            raise SchemeError('signature values must be 0 or 1')

    @cached_property
    def succ(self) -> Dict[Dart, Dart]:
        return {d: darts[(i + 1) % len(darts)]
                for darts in self.rotation.values()
                for i, d in enumerate(darts)}

    @cached_property
    def pred(self) -> Dict[Dart, Dart]:
        return {d: darts[i - 1]
                for darts in self.rotation.values()
                for i, d in enumerate(darts)}

    def key(self) -> Tuple:
        """Hashable form: rotations rooted at their first dart in graph
        order, then signature bits in edge order."""
        g = self.base
        rotations = tuple(_rooted(self.rotation[v], g.dart_index)
                          for v in g.vertices)
        bits = tuple(self.signature[e.id] for e in g.edges)
        return rotations, bits

    def __str__(self) -> str:
        twisted = sum(self.signature.values())
        return f'EmbeddingScheme({self.base}, twisted={twisted})'


def _rooted(darts: Tuple[Dart, ...], order) -> Tuple[Dart, ...]:
    if not darts:
        return darts
    i = min(range(len(darts)), key=lambda j: order(darts[j]))
    return darts[i:] + darts[:i]


def _trace_flags(succ: Dict[Dart, Dart], pred: Dict[Dart, Dart],
                 signature: Dict[str, int], darts: Iterable[Dart],
                 ) -> List[List[Flag]]:
    """
    Orbits of <tau0, tau1> over the flags of `darts`, started at the first
    unvisited flag in the given order, (d, +1) before (d, -1).  Works on
    partially built structures: only darts present in succ are walked.
    """
    seen = set()
    orbits = []
    darts = list(darts)
    bound = 4 * len(darts) + 2
    for d in darts:
        for side in (1, -1):
            if (d, side) in seen:
                continue
            start = (d, side)
            orbit: List[Flag] = []
            flag = start
            while True:
                dart, s = flag
                orbit.append(flag)
                partner = dart.partner
                s = s if signature[dart.edge] else -s
                landed = (partner, s)
                orbit.append(landed)
                flag = (succ[partner], -1) if s == 1 else (pred[partner], 1)
                if flag == start:
                    break
                if len(orbit) > bound:
                    raise SchemeError('face tracing did not close')
            seen.update(orbit)
            orbits.append(orbit)
    return orbits


def _flags(s: EmbeddingScheme) -> List[List[Flag]]:
    return _trace_flags(s.succ, s.pred, s.signature, s.base.darts())


def face_trace(s: EmbeddingScheme) -> List[Face]:
    """
    Faces of the scheme.  Every edge appears exactly twice over all faces;
    the point graph has a single empty face.
    """
    if s.base.m == 0:
        return [()]
    return [tuple(FaceStep(*flag) for flag in orbit[::2])
            for orbit in _flags(s)]


def face_count(s: EmbeddingScheme) -> int:
    return len(face_trace(s))


def is_cl_structure(s: EmbeddingScheme) -> bool:
    return face_count(s) == 1


def is_orientable(s: EmbeddingScheme) -> bool:
    """
    Every cycle carries an even number of twists: Z2 potentials along a
    spanning tree make every non-tree edge straight.
    """
    g = s.base
    tree, _ = spanning_tree(g)
    tree = set(tree)
    potential = {g.vertices[0]: 0}
    changed = True
    while changed:
        changed = False
        for e in g.edges:
            if e.id not in tree:
                continue
            if e.u in potential and e.v not in potential:
                potential[e.v] = potential[e.u] ^ s.signature[e.id]
                changed = True
            elif e.v in potential and e.u not in potential:
                potential[e.u] = potential[e.v] ^ s.signature[e.id]
                changed = True
    return all(s.signature[e.id] ^ potential[e.u] ^ potential[e.v] == 0
               for e in g.edges)


class SurfaceInvariants(NamedTuple):
    euler_characteristic: int  # closed surface, n - m + f
    orientable: bool
    genus: int  # orientable genus, or number of crosscaps
    faces: int
    strip_euler_characteristic: int  # n - m, the strip itself


def surface_invariants(s: EmbeddingScheme) -> SurfaceInvariants:
    g = s.base
    f = face_count(s)
    chi = g.n - g.m + f
    orientable = is_orientable(s)
    genus = (2 - chi) // 2 if orientable else 2 - chi
    return SurfaceInvariants(chi, orientable, genus, f, g.n - g.m)


def boundary_walk(s: EmbeddingScheme) -> List[Dart]:
    """
    The single face read as a closed walk of 2m darts in the base graph.
    Step t leaves owner(walk[t]) and arrives at owner(walk[t+1]).
    """
    faces = face_trace(s)
    if len(faces) != 1:
        raise NotAStrip(f'scheme has {len(faces)} faces, a strip has one')
    return [step.dart for step in faces[0]]


def walk_vertices(g: MultiGraph, walk: List[Dart]) -> List[str]:
    """Vertex passed at the start of each step of a closed walk."""
    return [g.owner(d) for d in walk]


def switch_vertex(s: EmbeddingScheme, v: str) -> EmbeddingScheme:
    """Reverse the rotation at v and flip every non-loop edge at v."""
    g = s.base
    rotation = dict(s.rotation)
    darts = rotation[v]
    rotation[v] = darts[:1] + tuple(reversed(darts[1:]))
    signature = dict(s.signature)
    for d in g.darts_at(v):
        if not g.edge(d.edge).is_loop:
            signature[d.edge] ^= 1
    return EmbeddingScheme(g, rotation, signature)


def reverse_scheme(s: EmbeddingScheme) -> EmbeddingScheme:
    """Switch at every vertex: all rotations reversed, signature kept."""
    rotation = {v: d[:1] + tuple(reversed(d[1:]))
                for v, d in s.rotation.items()}
    return EmbeddingScheme(s.base, rotation, dict(s.signature))


@dataclass(frozen=True)
class StripDecomposition:
    """
    Elementary strips of a scheme with their distinguished-face labels.
    attach(d) is the agreement bit of the incidence carried by dart d.
    """
    scheme: EmbeddingScheme
    vertex_face: Dict[str, int]
    edge_face: Dict[str, int]
    attach: Dict[Dart, int] = field(default_factory=dict)


class CompanionFunction(NamedTuple):
    values: Dict[str, int]


def decomposition(s: EmbeddingScheme) -> StripDecomposition:
    """All distinguished faces labelled 0; twists sit on the end-1 darts."""
    g = s.base
    attach = {}
    for e in g.edges:
        attach[Dart(e.id, 0)] = 0
        attach[Dart(e.id, 1)] = s.signature[e.id]
    return StripDecomposition(s, {v: 0 for v in g.vertices},
                              {e.id: 0 for e in g.edges}, attach)


def flip_vertex_face(d: StripDecomposition, v: str) -> StripDecomposition:
    g = d.scheme.base
    attach = dict(d.attach)
    for dart in g.darts_at(v):
        attach[dart] ^= 1
    vertex_face = dict(d.vertex_face)
    vertex_face[v] ^= 1
    return replace(d, vertex_face=vertex_face, attach=attach)


def flip_edge_face(d: StripDecomposition, e: str) -> StripDecomposition:
    attach = dict(d.attach)
    attach[Dart(e, 0)] ^= 1
    attach[Dart(e, 1)] ^= 1
    edge_face = dict(d.edge_face)
    edge_face[e] ^= 1
    return replace(d, edge_face=edge_face, attach=attach)


def companion_function(d: StripDecomposition) -> CompanionFunction:
    return CompanionFunction({
        e.id: d.attach[Dart(e.id, 0)] ^ d.attach[Dart(e.id, 1)]
        for e in d.scheme.base.edges})


def equivalent(a: CompanionFunction, b: CompanionFunction,
               g: MultiGraph) -> bool:
    """
    On every block the two functions agree, or agree after adding 1 to
    every edge of that block.
    """
    edges = {e.id for e in g.edges}
    if set(a.values) != edges or set(b.values) != edges:
        raise DomainMismatch('companion functions must cover every edge')
    for block in two_connected_components(g):
        diff = {a.values[e] ^ b.values[e] for e in block}
        if len(diff) > 1:
            return False
    return True


def scheme_from_walk(g: MultiGraph, walk: List[Dart]) -> EmbeddingScheme:
    """
    The scheme whose single face is the closed walk `walk`.

    Corner t sits between step t and step t+1: it joins the dart through
    which step t arrives with the dart step t+1 leaves by.  The corners at
    a vertex must link its darts into one cycle, which is the rotation.
    """
    walk = [Dart(*d) for d in walk]
    if len(walk) != 2 * g.m:
        raise SchemeError(f'walk has {len(walk)} steps, expected {2 * g.m}')
    uses: Dict[str, int] = {}
    for d in walk:
        uses[d.edge] = uses.get(d.edge, 0) + 1
    if any(uses.get(e.id, 0) != 2 for e in g.edges):
        raise SchemeError('walk must use every edge exactly twice')
    length = len(walk)
    if length == 0:
        return EmbeddingScheme(g, {v: () for v in g.vertices}, {})
    corners = []
    for t in range(length):
        arriving = walk[t].partner
        leaving = walk[(t + 1) % length]
        if g.owner(arriving) != g.owner(leaving):
            raise SchemeError(f'walk is not closed at step {t}')
        corners.append((arriving, leaving))

    at_vertex: Dict[str, List[int]] = {v: [] for v in g.vertices}
    for t, (arriving, _) in enumerate(corners):
        at_vertex[g.owner(arriving)].append(t)

    rotation: Dict[str, Tuple[Dart, ...]] = {}
    # side of the arriving flag at corner t, side of the leaving flag
    in_side: Dict[int, int] = {}
    out_side: Dict[int, int] = {}
    for v in g.vertices:
        ts = at_vertex[v]
        if len(ts) != g.degree(v):
            raise SchemeError(f'walk passes {v} {len(ts)} times, degree is '
                              f'{g.degree(v)}')
        if not ts:
            rotation[v] = ()
            continue
        first = min(g.darts_at(v), key=g.dart_index)
        order = [first]
        used = set()
        current = first
        while len(used) < len(ts):
            t = next((t for t in ts if t not in used and current in
                      corners[t]), None)
            if t is None:
                break
            used.add(t)
            arriving, leaving = corners[t]
            if arriving == current:
                # traversed as succ(arriving) = leaving
                in_side[t], out_side[t] = 1, -1
                current = leaving
            else:
                in_side[t], out_side[t] = -1, 1
                current = arriving
            order.append(current)
        if len(used) != len(ts) or order[-1] != first:
            raise SchemeError(f'corners at {v} do not form a single cycle')
        rotation[v] = tuple(order[:-1])

    signature: Dict[str, int] = {}
    for t, d in enumerate(walk):
        leaving_side = out_side[(t - 1) % length]
        arriving_side = in_side[t]
        twist = int(leaving_side == arriving_side)
        if signature.setdefault(d.edge, twist) != twist:
            raise SchemeError(f'edge {d.edge} is walked with inconsistent '
                              f'twists')
    scheme = EmbeddingScheme(g, rotation, signature)
    if not is_cl_structure(scheme):
        raise SchemeError('walk does not bound a strip')
    return scheme


def canonical_boundary_word(s: EmbeddingScheme) -> Tuple[Tuple[int, int],
                                                         ...]:
    """
    Boundary walk with edges relabelled by first occurrence and each step
    marked 0/1 for walking the edge as first seen or against it; minimal
    over starting points and reversal.  Equal words mean the same strip up
    to relabelling.
    """
    walk = boundary_walk(s)
    backwards = [d.partner for d in reversed(walk)]
    best: Optional[Tuple] = None
    for w in (walk, backwards):
        for start in range(len(w)):
            word = _relabelled(w[start:] + w[:start])
            if best is None or word < best:
                best = word
    return best if best is not None else ()


def _relabelled(walk: List[Dart]) -> Tuple[Tuple[int, int], ...]:
    labels: Dict[str, Tuple[int, Dart]] = {}
    word = []
    for d in walk:
        if d.edge not in labels:
            labels[d.edge] = (len(labels), d)
        label, first = labels[d.edge]
        word.append((label, 0 if d == first else 1))
    return tuple(word)
