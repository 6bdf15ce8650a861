"""
Finite connected multigraphs stored as darts (half-edges), so loops and
parallel edges need no special casing, plus the graph operations used to
build and compare cut-locus structures.
"""
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Sequence

import networkx as nx
from logbook import Logger
from networkx.utils import UnionFind


log = Logger(__name__)


class GraphError(ValueError):
    pass


class Dart(NamedTuple):
    """Half-edge: end 0 sits at edge.u, end 1 at edge.v."""
    edge: str
    end: int

    @property
    def partner(self) -> 'Dart':
        return Dart(self.edge, 1 - self.end)

    def __str__(self) -> str:
        return f'{self.edge}{"+" if self.end == 0 else "-"}'


class Edge(NamedTuple):
    id: str
    u: str
    v: str
    length: Optional[float] = None

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def end_vertex(self, end: int) -> str:
        return self.u if end == 0 else self.v


@dataclass(frozen=True)
class MultiGraph:
    """
    Immutable connected multigraph.  Incidence order at every vertex
    follows edge input order, end 0 before end 1; every deterministic
    choice downstream is derived from this order.

    Args:
    ---------
    vertices: vertex ids
    edges: Edge records, lengths either all None or all positive
    """
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    _edge_index: Dict[str, int] = field(init=False, repr=False,
                                        compare=False)
    _incidence: Dict[str, Tuple[Dart, ...]] = field(init=False, repr=False,
                                                    compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'vertices', tuple(str(v)
                                                   for v in self.vertices))
        object.__setattr__(self, 'edges', tuple(Edge(*e) for e in self.edges))
        if not self.vertices:
            raise GraphError('graph needs at least one vertex')
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError('duplicate vertex ids')
        index: Dict[str, int] = {}
        incidence: Dict[str, List[Dart]] = {v: [] for v in self.vertices}
        metric = [e.length is not None for e in self.edges]
        if any(metric) and not all(metric):
            raise GraphError('lengths must be given for all edges or none')
        for i, e in enumerate(self.edges):
            if e.id in index:
                raise GraphError(f'duplicate edge id {e.id}')
            index[e.id] = i
            for end in (0, 1):
                vertex = e.end_vertex(end)
                if vertex not in incidence:
                    raise GraphError(f'edge {e.id} has unknown end {vertex}')
                incidence[vertex].append(Dart(e.id, end))
            if e.length is not None and not e.length > 0:
                raise GraphError(f'edge {e.id} has non-positive length')
        object.__setattr__(self, '_edge_index', index)
        object.__setattr__(self, '_incidence',
                           {v: tuple(d) for v, d in incidence.items()})
        if not self._connected():
            raise GraphError('graph is not connected')

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Sequence],
                   ) -> 'MultiGraph':
        """Build from (id, u, v) or (id, u, v, length) tuples."""
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    def _connected(self) -> bool:
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            for w in self.neighbours(queue.popleft()):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_metric(self) -> bool:
        return bool(self.edges) and self.edges[0].length is not None

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edges[self._edge_index[edge_id]]
        except KeyError:
            raise GraphError(f'unknown edge {edge_id}') from None

    def edge_index(self, edge_id: str) -> int:
        return self._edge_index[edge_id]

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    def owner(self, dart: Dart) -> str:
        return self.edge(dart.edge).end_vertex(dart.end)

    def darts(self) -> List[Dart]:
        """All darts in graph order."""
        return [Dart(e.id, end) for e in self.edges for end in (0, 1)]

    def dart_index(self, dart: Dart) -> int:
        return 2 * self._edge_index[dart.edge] + dart.end

    def darts_at(self, vertex: str) -> Tuple[Dart, ...]:
        return self._incidence[vertex]

    def degree(self, vertex: str) -> int:
        return len(self._incidence[vertex])

    def neighbours(self, vertex: str) -> List[str]:
        return [self.owner(d.partner) for d in self._incidence[vertex]]

    def lengths(self) -> Optional[Dict[str, float]]:
        if not self.is_metric:
            return None
        return {e.id: e.length for e in self.edges}

    def __str__(self) -> str:
        return f'MultiGraph(n={self.n}, m={self.m})'


class CyclicPart(NamedTuple):
    """
    graph: the cyclic part
    vertex_map: surviving vertex -> itself (ids are kept)
    edge_paths: cyclic-part edge -> darts of g walked from its end 0 to end 1
    """
    graph: MultiGraph
    vertex_map: Dict[str, str]
    edge_paths: Dict[str, Tuple[Dart, ...]]


def cyclic_part(g: MultiGraph) -> CyclicPart:
    """
    Delete degree-1 vertices until none are left, then smooth every
    degree-2 vertex that is not carrying a loop.  A tree collapses to its
    first surviving vertex.
    """
    alive = {v: True for v in g.vertices}
    present = {e.id: True for e in g.edges}
    degree = {v: g.degree(v) for v in g.vertices}

    queue = deque(v for v in g.vertices if degree[v] == 1)
    while queue:
        v = queue.popleft()
        if not alive[v] or degree[v] != 1:
            continue
        dart = next(d for d in g.darts_at(v) if present[d.edge])
        present[dart.edge] = False
        alive[v] = False
        w = g.owner(dart.partner)
        degree[v] -= 1
        degree[w] -= 1
        if degree[w] == 1:
            queue.append(w)

    # phase 2: every surviving edge is a chain of darts of g
    chains: Dict[str, Tuple[str, str, Tuple[Dart, ...], Optional[float]]] = {
        e.id: (e.u, e.v, (Dart(e.id, 0),), e.length)
        for e in g.edges if present[e.id]}

    for v in g.vertices:
        if not alive[v] or degree[v] != 2:
            continue
        incident = [eid for eid, c in chains.items() if v in (c[0], c[1])]
        if len(incident) != 2:
            continue  # a loop keeps its vertex
        first, second = sorted(incident, key=g.edge_index)
        a, b = chains[first], chains[second]
        if a[1] != v:
            a = _reversed_chain(a)
        if b[0] != v:
            b = _reversed_chain(b)
        length = None if a[3] is None else a[3] + b[3]
        chains[first] = (a[0], b[1], a[2] + b[2], length)
        del chains[second]
        alive[v] = False

    order = sorted(chains, key=g.edge_index)
    vertices = tuple(v for v in g.vertices if alive[v])
    cp = MultiGraph(vertices, tuple(
        Edge(eid, chains[eid][0], chains[eid][1], chains[eid][3])
        for eid in order))
    paths = {eid: chains[eid][2] for eid in order}
    log.debug(f'cyclic part of {g}: {cp}')
    return CyclicPart(cp, {v: v for v in vertices}, paths)


def _reversed_chain(chain):
    u, v, darts, length = chain
    return v, u, tuple(d.partner for d in reversed(darts)), length


def generating_cycle_count(g: MultiGraph) -> int:
    return g.m - g.n + 1


class DegreeProfile(NamedTuple):
    degrees: Dict[str, int]
    is_cubic: bool
    constant_order: Optional[int]

    def is_constant_order(self, k: int) -> bool:
        return self.constant_order == k

    @property
    def profile(self) -> Tuple[int, ...]:
        """Degrees of the vertices, largest first."""
        return tuple(sorted(self.degrees.values(), reverse=True))


def degree_profile(g: MultiGraph) -> DegreeProfile:
    degrees = {v: g.degree(v) for v in g.vertices}
    values = set(degrees.values())
    order = values.pop() if len(values) == 1 else None
    return DegreeProfile(degrees, order == 3, order)


def two_connected_components(g: MultiGraph) -> List[List[str]]:
    """
    Blocks as lists of edge ids, each block sorted by input order and the
    blocks sorted by their first edge.  Loops form blocks of their own.
    """
    index: Dict[str, int] = {}
    low: Dict[str, int] = {}
    stack: List[str] = []
    blocks: List[List[str]] = []
    counter = [0]

    def visit(root: str) -> None:
        index[root] = low[root] = counter[0]
        counter[0] += 1
        # iterative DFS: frames of (vertex, entering edge, dart iterator)
        frames = [(root, None, iter(g.darts_at(root)))]
        while frames:
            v, via, darts = frames[-1]
            advanced = False
            for d in darts:
                e = g.edge(d.edge)
                if e.is_loop or d.edge == via:
                    continue
                w = g.owner(d.partner)
                if w not in index:
                    stack.append(d.edge)
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    frames.append((w, d.edge, iter(g.darts_at(w))))
                    advanced = True
                    break
                if index[w] < index[v]:
                    stack.append(d.edge)
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            frames.pop()
            if frames:
                parent = frames[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    block = []
                    while True:
                        eid = stack.pop()
                        block.append(eid)
                        if eid == via:
                            break
                    blocks.append(block)

    visit(g.vertices[0])
    blocks.extend([e.id] for e in g.edges if e.is_loop)
    blocks = [sorted(set(b), key=g.edge_index) for b in blocks]
    return sorted(blocks, key=lambda b: g.edge_index(b[0]))


def spanning_tree(g: MultiGraph) -> Tuple[List[str], List[str]]:
    """
    Breadth-first tree from the first vertex.

    Returns:
    ---------
    (tree edge ids, non-tree edge ids), both in input order
    """
    seen = {g.vertices[0]}
    queue = deque(seen)
    tree = set()
    while queue:
        v = queue.popleft()
        for d in g.darts_at(v):
            w = g.owner(d.partner)
            if w not in seen:
                seen.add(w)
                tree.add(d.edge)
                queue.append(w)
    tree_edges = [e.id for e in g.edges if e.id in tree]
    cotree = [e.id for e in g.edges if e.id not in tree]
    return tree_edges, cotree


def contract_edges(g: MultiGraph, edge_ids: Iterable[str],
                   ) -> Tuple[MultiGraph, Dict[str, str]]:
    """
    Contract non-loop edges, merging their endpoints into the endpoint
    that comes first in vertex order.  Loops created on the way are kept.

    Returns:
    ---------
    contracted graph, map old vertex -> new vertex
    """
    contract = set(edge_ids)
    components = UnionFind(g.vertices)
    for eid in contract:
        e = g.edge(eid)
        if e.is_loop:
            raise GraphError(f'cannot contract loop {eid}')
        components.union(e.u, e.v)
    first: Dict[str, str] = {}
    for v in g.vertices:
        first.setdefault(components[v], v)
    vertex_map = {v: first[components[v]] for v in g.vertices}
    vertices = tuple(v for v in g.vertices if vertex_map[v] == v)
    edges = tuple(Edge(e.id, vertex_map[e.u], vertex_map[e.v], e.length)
                  for e in g.edges if e.id not in contract)
    return MultiGraph(vertices, edges), vertex_map


def to_networkx(g: MultiGraph) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(g.vertices)
    graph.add_edges_from((e.u, e.v, e.id) for e in g.edges)
    return graph


def is_isomorphic(a: MultiGraph, b: MultiGraph) -> bool:
    """Multigraph isomorphism, lengths ignored."""
    if (a.n, a.m) != (b.n, b.m):
        return False
    if degree_profile(a).profile != degree_profile(b).profile:
        return False
    return nx.is_isomorphic(to_networkx(a), to_networkx(b))


def total_length(g: MultiGraph) -> Optional[float]:
    if not g.edges:
        return 0.0 if g.is_metric else None
    if not g.is_metric:
        return None
    return sum(e.length for e in g.edges)
