"""
Named graphs and the exhaustive corpus of small connected multigraphs.
"""
import re
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Tuple

import networkx as nx
from logbook import Logger

from multigraph import GraphError, MultiGraph, to_networkx


log = Logger(__name__)


def _graph(n: int, pairs: List[Tuple[int, int]]) -> MultiGraph:
    return MultiGraph.from_edges(
        [f'v{i}' for i in range(n)],
        [(f'e{j}', f'v{a}', f'v{b}') for j, (a, b) in enumerate(pairs)])


def point() -> MultiGraph:
    return _graph(1, [])


def path(n: int) -> MultiGraph:
    """Path on n vertices."""
    return _graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> MultiGraph:
    return _graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle(n: int) -> MultiGraph:
    if n == 1:
        return rose(1)
    return _graph(n, [(i, (i + 1) % n) for i in range(n)])


def rose(k: int) -> MultiGraph:
    """k loops on one vertex."""
    return MultiGraph.from_edges(['v0'], [(e, 'v0', 'v0')
                                          for e in 'abcdefghijkl'[:k]])


def theta(k: int = 3) -> MultiGraph:
    """Two vertices joined by k parallel edges."""
    return _graph(2, [(0, 1)] * k)


def tadpole(cycle_length: int = 3, tail: int = 1) -> MultiGraph:
    """Cycle with a path of `tail` edges hanging from vertex 0."""
    n = cycle_length + tail
    pairs = [(i, (i + 1) % cycle_length) for i in range(cycle_length)]
    pairs.append((0, cycle_length))
    pairs += [(i, i + 1) for i in range(cycle_length, n - 1)]
    return _graph(n, pairs)


def bowtie() -> MultiGraph:
    """Two triangles sharing a vertex."""
    return _graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])


def complete(r: int) -> MultiGraph:
    return _graph(r, list(combinations(range(r), 2)))


def multipartite(*parts: int) -> MultiGraph:
    """Complete multipartite graph K_{p1,...,pr}."""
    labels = [i for i, p in enumerate(parts) for _ in range(p)]
    pairs = [(a, b) for a, b in combinations(range(len(labels)), 2)
             if labels[a] != labels[b]]
    return _graph(len(labels), pairs)


def petersen() -> MultiGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return _graph(10, outer + spokes + inner)


_PATTERNS = [
    (r'point', lambda: point()),
    (r'petersen', lambda: petersen()),
    (r'bowtie', lambda: bowtie()),
    (r'theta(\d*)', lambda k: theta(int(k) if k else 3)),
    (r'tadpole(\d*)', lambda k: tadpole(int(k) if k else 3)),
    (r'rose(\d+)', lambda k: rose(int(k))),
    (r'[pP](\d+)', lambda n: path(int(n))),
    (r'star(\d+)', lambda n: star(int(n))),
    (r'[cC](\d+)', lambda n: cycle(int(n))),
    (r'[kK](\d+(?:,\d+)+)', lambda p: multipartite(
        *(int(x) for x in p.split(',')))),
    (r'[kK](\d+)', lambda r: complete(int(r))),
]


def lookup(name: str) -> MultiGraph:
    """Graph by name: point, P4, star3, C5, rose2, theta, tadpole, K4,
    K3,3, petersen, bowtie."""
    name = name.strip()
    for pattern, build in _PATTERNS:
        match = re.fullmatch(pattern, name)
        if match:
            return build(*match.groups())
    raise GraphError(f'unknown graph name {name!r}')


@lru_cache(maxsize=None)
def _corpus(max_edges: int) -> Tuple[Tuple[int, Tuple[Tuple[int, int], ...]],
                                     ...]:
    """(n, edge pairs) of every connected multigraph with <= max_edges
    edges, one per isomorphism class, by adding one edge at a time."""
    levels: List[List[Tuple[int, Tuple]]] = [[(1, ())]]
    for _ in range(max_edges):
        buckets: Dict[Tuple, List[Tuple[int, Tuple, nx.MultiGraph]]] = {}
        for n, pairs in levels[-1]:
            candidates = [(n, pairs + ((a, b),))
                          for a in range(n) for b in range(a, n)]
            candidates += [(n + 1, pairs + ((a, n),)) for a in range(n)]
            for cn, cpairs in candidates:
                key = _invariant(cn, cpairs)
                graph = to_networkx(_graph(cn, list(cpairs)))
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(graph, other)
                           for _, _, other in bucket):
                    bucket.append((cn, cpairs, graph))
        levels.append([(n, pairs) for bucket in buckets.values()
                       for n, pairs, _ in bucket])
        log.debug(f'{len(levels[-1])} graphs with {len(levels) - 1} edges')
    return tuple(item for level in levels for item in level)


def _invariant(n: int, pairs: Tuple[Tuple[int, int], ...]) -> Tuple:
    degrees = [0] * n
    loops = 0
    for a, b in pairs:
        degrees[a] += 1
        degrees[b] += 1
        loops += a == b
    multiplicities = sorted(pairs.count(p) for p in set(pairs))
    return n, tuple(sorted(degrees)), loops, tuple(multiplicities)


def connected_multigraphs(max_edges: int) -> List[MultiGraph]:
    """All connected multigraphs with at most max_edges edges (loops and
    parallel edges allowed) up to isomorphism, the point included."""
    return [_graph(n, list(pairs)) for n, pairs in _corpus(max_edges)]
