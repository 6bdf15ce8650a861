"""
Cut loci on flat tori and on flat tori with a bump.

Without a bump the cut locus of x is the boundary of the Voronoi cell of x
among its lattice translates, glued along paired sides.  With a bump the
first-arrival distance from all lifts of x is computed on a window of the
universal cover, every node labelled with the lift it is reached from;
the cell of x is the region labelled x and its boundary is read off the
same way as the Voronoi cell.  Ridges inside the cell, where two paths
from x itself meet behind the bump, are thinned to arcs and hung off the
boundary as trees.
"""
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd
from logbook import Logger
from networkx.utils import UnionFind
from scipy import ndimage
from skimage.measure import find_contours
from skimage.morphology import disk, skeletonize

from config import (CONFIDENT_RESOLUTION, DEFAULT_RESOLUTION, MAX_SWEEPS,
                    MERGE_ANGLE_DEGREES, MIN_ARC_CELLS, MIN_RESOLUTION,
                    MIN_RIDGE_CELLS, NOISE_ARC_CELLS, RIDGE_ATTACH_CELLS,
                    RIDGE_KINK, RIDGE_MARGIN_CELLS, SOURCE_RADIUS_CELLS,
                    SWEEP_TOLERANCE, TRANSITION_TOLERANCE, WINDOW_FACTOR)
from multigraph import (Dart, Edge, MultiGraph, degree_profile,
                        generating_cycle_count)
from numba_tools import sweep
from ribbon import EmbeddingScheme, canonical_boundary_word, scheme_from_walk


log = Logger(__name__)


class TorusError(ValueError):
    pass


class ConvergenceError(RuntimeError):

    def __init__(self, residual: float, iterations: int) -> None:
        self.residual = residual
        self.iterations = iterations
        super().__init__(f'eikonal sweeps did not converge after '
                         f'{iterations} iterations, residual {residual:.3e}')


class ExtractionError(RuntimeError):
    pass


@dataclass
class Bump:
    """
    Conformal factor exp(2 phi) with
    phi(r) = height * exp(1 - 1 / (1 - (r / radius)**2)) for r < radius.
    """
    center: Tuple[float, float]
    radius: float
    height: float

    def __post_init__(self) -> None:
        self.center = (float(self.center[0]), float(self.center[1]))
        if not self.radius > 0:
            raise TorusError('bump radius must be positive')
        if self.height < 0:
            raise TorusError('bump height must be non-negative')

    def phi(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        s = np.clip(r / self.radius, 0, 1)
        inside = s < 1
        out = np.zeros_like(s)
        out[inside] = self.height * np.exp(1 - 1 / (1 - s[inside] ** 2))
        return out


def gauss_reduce(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray,
                                                        np.ndarray]:
    """Lagrange-Gauss reduction: |u| <= |v| and |u.v| <= |u|^2 / 2."""
    u, v = np.array(u, dtype=float), np.array(v, dtype=float)
    while True:
        if u @ u > v @ v:
            u, v = v, u
        x = np.round((u @ v) / (u @ u))
        if x == 0:
            return u, v
        v = v - x * u


@dataclass
class FlatTorus:
    """
    Args:
    ---------
    basis: rows are the two lattice vectors
    bump: optional radial bump, support inside one Voronoi cell
    """
    basis: np.ndarray
    bump: Optional[Bump] = None
    _reduced: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.basis = np.array(self.basis, dtype=float).reshape(2, 2)
        if abs(np.linalg.det(self.basis)) < 1e-12:
            raise TorusError('lattice vectors are linearly dependent')
        self._reduced = np.array(gauss_reduce(*self.basis))
        if self.bump is not None and self.bump.radius >= self.shortest / 2:
            raise TorusError(f'bump radius {self.bump.radius} must be below '
                             f'half the shortest lattice vector '
                             f'{self.shortest / 2}')

    @classmethod
    def square(cls, size: float = 1.0,
               bump: Optional[Bump] = None) -> 'FlatTorus':
        return cls(np.array([[size, 0], [0, size]]), bump)

    @classmethod
    def hexagonal(cls, size: float = 1.0,
                  bump: Optional[Bump] = None) -> 'FlatTorus':
        return cls(size * np.array([[1, 0], [0.5, np.sqrt(3) / 2]]), bump)

    @classmethod
    def rectangular(cls, a: float, b: float,
                    bump: Optional[Bump] = None) -> 'FlatTorus':
        return cls(np.array([[a, 0], [0, b]]), bump)

    def reduced(self) -> np.ndarray:
        return self._reduced.copy()

    @property
    def shortest(self) -> float:
        return float(np.linalg.norm(self._reduced[0]))

    @property
    def is_flat(self) -> bool:
        return self.bump is None

    def neighbours(self) -> np.ndarray:
        """The eight lattice vectors that can bound a Voronoi cell."""
        u, v = self._reduced
        return np.array([u, v, u + v, u - v, -u, -v, -u - v, v - u])

    def lattice_vectors(self, extent: float) -> Tuple[np.ndarray,
                                                      np.ndarray]:
        """
        Lattice vectors w with max(|w_x|, |w_y|) <= extent, the zero vector
        first, and their integer coefficients in the reduced basis.
        """
        u, v = self._reduced
        area = abs(np.linalg.det(self._reduced))
        bound = int(np.ceil(2 * extent * max(np.linalg.norm(u),
                                             np.linalg.norm(v)) / area)) + 1
        coefficients = [(0, 0)]
        vectors = [np.zeros(2)]
        for i in range(-bound, bound + 1):
            for j in range(-bound, bound + 1):
                if i == 0 and j == 0:
                    continue
                w = i * u + j * v
                if np.max(np.abs(w)) <= extent + 1e-12:
                    coefficients.append((i, j))
                    vectors.append(w)
        return np.array(vectors), np.array(coefficients)

    def wrap(self, points: np.ndarray) -> np.ndarray:
        """Representatives in the fundamental parallelogram of the basis."""
        points = np.asarray(points, dtype=float)
        coefficients = np.linalg.solve(self.basis.T, points.T).T
        coefficients -= np.floor(coefficients + 1e-12)
        return coefficients @ self.basis

    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        """Flat distance on the torus."""
        diff = self.wrap(np.asarray(q, float) - np.asarray(p, float))
        u, v = self._reduced
        best = np.inf
        for i in range(-2, 3):
            for j in range(-2, 3):
                best = min(best, np.linalg.norm(diff + i * u + j * v))
        return float(best)

    def phi(self, points: np.ndarray) -> np.ndarray:
        """Bump function at points (..., 2), periodic."""
        points = np.asarray(points, dtype=float)
        out = np.zeros(points.shape[:-1])
        if self.bump is None or self.bump.height == 0:
            return out
        flat = points.reshape(-1, 2)
        mid = (flat.min(axis=0) + flat.max(axis=0)) / 2
        reach = np.max(flat.max(axis=0) - mid) + self.bump.radius
        base = self.wrap(np.array(self.bump.center) - mid) + mid
        vectors, _ = self.lattice_vectors(
            reach + np.abs(self.basis).sum())
        for w in vectors:
            c = base + w
            if np.max(np.abs(c - mid)) > reach:
                continue
            r = np.hypot(points[..., 0] - c[0], points[..., 1] - c[1])
            out = np.maximum(out, self.bump.phi(r))
        return out

    def __str__(self) -> str:
        bump = '' if self.bump is None else f', bump={self.bump}'
        return f'FlatTorus(basis={self.basis.tolist()}{bump})'


def voronoi_cell(t: FlatTorus) -> Tuple[np.ndarray, np.ndarray]:
    """
    Voronoi cell of the origin among the lattice points.

    Returns:
    ---------
    corners (K x 2) counterclockwise, starting at the smallest polar
    angle; vectors (K x 2), vectors[i] is the lattice vector whose
    bisector carries the side from corner i to corner i+1
    """
    neighbours = t.neighbours()
    big = 4 * np.abs(t.basis).sum()
    polygon = [np.array(p, float) for p in
               ((-big, -big), (big, -big), (big, big), (-big, big))]
    for w in neighbours:
        polygon = _clip(polygon, w)
    scale = t.shortest
    corners: List[np.ndarray] = []
    for p in polygon:
        if not corners or np.linalg.norm(p - corners[-1]) > 1e-9 * scale:
            corners.append(p)
    if np.linalg.norm(corners[0] - corners[-1]) <= 1e-9 * scale:
        corners.pop()
    # drop corners lying on a straight side
    kept = []
    for i, p in enumerate(corners):
        a, b = corners[i - 1] - p, corners[(i + 1) % len(corners)] - p
        if abs(a[0] * b[1] - a[1] * b[0]) > 1e-9 * scale ** 2:
            kept.append(p)
    corners = np.array(kept)
    start = int(np.argmin(np.mod(np.arctan2(corners[:, 1], corners[:, 0]),
                                 2 * np.pi)))
    corners = np.roll(corners, -start, axis=0)
    vectors = []
    for i in range(len(corners)):
        mid = (corners[i] + corners[(i + 1) % len(corners)]) / 2
        gaps = [abs(mid @ w - w @ w / 2) for w in neighbours]
        vectors.append(neighbours[int(np.argmin(gaps))])
    return corners, np.array(vectors)


def _clip(polygon: List[np.ndarray], w: np.ndarray) -> List[np.ndarray]:
    """Sutherland-Hodgman against the half-plane p.w <= |w|^2 / 2."""
    level = w @ w / 2
    out = []
    for i, p in enumerate(polygon):
        q = polygon[(i + 1) % len(polygon)]
        fp, fq = p @ w - level, q @ w - level
        if fp <= 0:
            out.append(p)
        if fp * fq < 0:
            out.append(p + (q - p) * fp / (fp - fq))
    return out


@dataclass
class CutLocusGraph:
    """
    Cut locus of x as a metric multigraph with its natural structure.

    corners/sides/vectors describe the cell of x in the plane: side i runs
    from corners[i] to corners[i+1], is shared with the lift
    x + vectors[i] and is glued into side_darts[i].  graph is the whole
    cut locus; clns lives on its cyclic part, the glued cell boundary,
    and ridges holds the planar polylines of the trees hanging off it.
    """
    graph: MultiGraph
    clns: EmbeddingScheme
    x: np.ndarray
    positions: Dict[str, np.ndarray]
    corners: np.ndarray
    sides: List[np.ndarray]
    vectors: np.ndarray
    exact: bool
    epsilon: float
    separation: Dict[str, float]
    confident: bool = True
    resolution: Optional[int] = None
    notes: List[str] = field(default_factory=list)
    side_darts: List[Dart] = field(default_factory=list)
    ridges: List[np.ndarray] = field(default_factory=list)

    @property
    def cyclic_graph(self) -> MultiGraph:
        return self.clns.base

    @property
    def degrees(self) -> Dict[str, int]:
        return degree_profile(self.cyclic_graph).degrees

    @property
    def profile(self) -> Tuple[int, ...]:
        return degree_profile(self.cyclic_graph).profile

    @property
    def q(self) -> int:
        return generating_cycle_count(self.cyclic_graph)

    @property
    def word(self) -> Tuple:
        return canonical_boundary_word(self.clns)

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self.graph.edges))

    @property
    def boundary(self) -> np.ndarray:
        """Closed polyline of the cell boundary, the cut locus lifted once
        around x."""
        parts = [side[:-1] for side in self.sides]
        return np.vstack(parts + [self.sides[0][:1]])

    def __str__(self) -> str:
        kind = 'exact' if self.exact else f'numeric({self.resolution})'
        return (f'CutLocusGraph({kind}, profile={self.profile}, '
                f'confident={self.confident})')


def _polyline_length(points: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def _leaving_direction(side: np.ndarray, reach: float) -> np.ndarray:
    steps = np.linalg.norm(np.diff(side, axis=0), axis=1)
    travelled = np.cumsum(steps)
    target = min(reach, travelled[-1] / 2)
    k = int(np.searchsorted(travelled, target))
    return side[min(k + 1, len(side) - 1)] - side[0]


def _cut_locus_from_cell(t: FlatTorus, x: np.ndarray, corners: np.ndarray,
                         sides: List[np.ndarray], vectors: np.ndarray,
                         exact: bool, resolution: Optional[int] = None,
                         notes: Optional[List[str]] = None,
                         confident: bool = True) -> CutLocusGraph:
    """
    Glue the cell boundary: side i is identified with the side j whose
    lift is opposite, corners i ~ j+1 and i+1 ~ j.
    """
    notes = list(notes or [])
    size = len(corners)
    scale = t.shortest
    partner = {}
    for i in range(size):
        match = [j for j in range(size)
                 if np.allclose(vectors[j], -vectors[i], atol=1e-6 * scale)]
        if len(match) != 1:
            raise ExtractionError(f'side {i} of the cell has no opposite '
                                  f'side')
        partner[i] = match[0]

    classes = UnionFind(range(size))
    for i, j in partner.items():
        classes.union(i, (j + 1) % size)
        classes.union((i + 1) % size, j)
    vertex_of = {}
    positions = {}
    groups = sorted((sorted(group) for group in classes.to_sets()), key=min)
    for k, group in enumerate(groups):
        name = f'y{k}'
        for i in group:
            vertex_of[i] = name
        positions[name] = t.wrap(corners[group[0]])

    edges = []
    walk = []
    edge_of = {}
    for i in range(size):
        j = partner[i]
        if j in edge_of:
            walk.append(Dart(edge_of[j], 1))
            continue
        eid = f'c{len(edges)}'
        edge_of[i] = eid
        length = (_polyline_length(sides[i]) + _polyline_length(sides[j])) / 2
        edges.append(Edge(eid, vertex_of[i], vertex_of[(i + 1) % size],
                          length))
        walk.append(Dart(eid, 0))
    vertices = sorted(positions, key=lambda name: int(name[1:]))
    graph = MultiGraph(tuple(vertices), tuple(edges))
    clns = scheme_from_walk(graph, walk)

    reach = 3 * scale / (resolution or 1e6)
    directions: Dict[str, List[float]] = {}
    for i in range(size):
        d = _leaving_direction(sides[i], reach)
        directions.setdefault(vertex_of[i], []).append(
            np.degrees(np.arctan2(d[1], d[0])))
    separation = {}
    for v, angles in directions.items():
        angles = np.sort(np.mod(angles, 360))
        gaps = np.diff(np.append(angles, angles[0] + 360))
        separation[v] = float(gaps.min())

    tight = [v for v, s in separation.items() if s < MERGE_ANGLE_DEGREES]
    if tight:
        confident = False
        notes.append(f'arcs meet within {MERGE_ANGLE_DEGREES} degrees at '
                     f'{tight}')
    profile = degree_profile(graph).profile
    if (resolution is not None and resolution < CONFIDENT_RESOLUTION
            and profile[0] >= 4):
        confident = False
        notes.append(f'resolution {resolution} is below '
                     f'{CONFIDENT_RESOLUTION}: a vertex of degree 4 cannot '
                     f'be told from two close vertices of degree 3')
    epsilon = min(e.length for e in graph.edges) / 2
    cl = CutLocusGraph(graph, clns, np.asarray(x, float), positions,
                       np.asarray(corners), sides, np.asarray(vectors),
                       exact, epsilon, separation, confident, resolution,
                       notes, walk)
    if not confident:
        log.warning(f'{cl}: {"; ".join(notes)}')
    return cl


def torus_voronoi_cutlocus(t: FlatTorus, x: Sequence[float]) -> CutLocusGraph:
    """Exact cut locus of x on a flat torus."""
    if t.bump is not None:
        raise TorusError('torus carries a bump, use the eikonal solver')
    x = np.asarray(x, dtype=float)
    corners, vectors = voronoi_cell(t)
    corners = corners + x
    size = len(corners)
    sides = [np.array([corners[i], corners[(i + 1) % size]])
             for i in range(size)]
    cl = _cut_locus_from_cell(t, x, corners, sides, vectors, exact=True)
    log.debug(f'voronoi cut locus at {x}: {cl}')
    return cl


@dataclass
class DistanceField:
    """
    First arrival distance on a square window of the plane centred at x.
    Node (i, j) sits at origin + h * (j, i); labels index `sources`, the
    lifts of x, with x itself at index 0.
    """
    torus: FlatTorus
    x: np.ndarray
    values: np.ndarray
    labels: np.ndarray
    origin: np.ndarray
    h: float
    sources: np.ndarray
    coefficients: np.ndarray
    resolution: int
    iterations: int
    residual: float
    center_label: int = 0

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        ny, nx = self.values.shape
        return np.meshgrid(self.origin[0] + self.h * np.arange(nx),
                           self.origin[1] + self.h * np.arange(ny))

    def flat_distance(self) -> np.ndarray:
        """Exact flat distance to the nearest lift, for comparison."""
        X, Y = self.coordinates()
        out = np.full(X.shape, np.inf)
        for s in self.sources:
            out = np.minimum(out, np.hypot(X - s[0], Y - s[1]))
        return out

    def slowness(self) -> np.ndarray:
        X, Y = self.coordinates()
        return np.exp(self.torus.phi(np.stack([X, Y], axis=-1)))

    def partner_label(self, label: int) -> Optional[int]:
        """Label of the lift opposite to the given one."""
        target = -self.coefficients[label]
        match = np.flatnonzero((self.coefficients == target).all(axis=1))
        return int(match[0]) if len(match) else None


def bump_distance_field(t: FlatTorus, x: Sequence[float],
                        resolution: int = DEFAULT_RESOLUTION,
                        tolerance: float = SWEEP_TOLERANCE,
                        max_sweeps: int = MAX_SWEEPS) -> DistanceField:
    """
    Distance from x under the metric exp(2 phi) * flat, by labelled fast
    sweeping with slowness exp(phi).

    Args:
    ---------
    resolution: grid cells across the shortest lattice vector
    """
    if resolution < MIN_RESOLUTION:
        raise TorusError(f'resolution {resolution} is below the minimum '
                         f'{MIN_RESOLUTION}')
    x = np.asarray(x, dtype=float)
    h = t.shortest / resolution
    corners, _ = voronoi_cell(t)
    circumradius = float(np.max(np.linalg.norm(corners, axis=1)))
    half = int(np.ceil(WINDOW_FACTOR * circumradius / h))
    size = 2 * half + 1
    origin = x - half * h
    extent = half * h
    vectors, coefficients = t.lattice_vectors(extent)
    sources = x + vectors

    axis = h * np.arange(size)
    X, Y = np.meshgrid(origin[0] + axis, origin[1] + axis)
    points = np.stack([X, Y], axis=-1)
    slowness = np.exp(t.phi(points))

    values = np.full((size, size), np.inf)
    labels = np.full((size, size), -1, dtype=np.int64)
    frozen = np.zeros((size, size), dtype=bool)
    radius = SOURCE_RADIUS_CELLS * h
    source_slowness = np.exp(t.phi(sources))
    for label, s in enumerate(sources):
        j0 = max(int(np.floor((s[0] - radius - origin[0]) / h)), 0)
        j1 = min(int(np.ceil((s[0] + radius - origin[0]) / h)) + 1, size)
        i0 = max(int(np.floor((s[1] - radius - origin[1]) / h)), 0)
        i1 = min(int(np.ceil((s[1] + radius - origin[1]) / h)) + 1, size)
        if j0 >= j1 or i0 >= i1:
            continue
        d = np.hypot(X[i0:i1, j0:j1] - s[0], Y[i0:i1, j0:j1] - s[1])
        near = d <= radius
        block = values[i0:i1, j0:j1]
        block[near] = d[near] * source_slowness[label]
        labels[i0:i1, j0:j1][near] = label
        frozen[i0:i1, j0:j1][near] = True

    result = sweep(values, labels, slowness, frozen, h, tolerance,
                   max_sweeps)
    if not result.converged:
        raise ConvergenceError(result.residual, result.iterations)
    log.debug(f'field at {x}: {size}x{size} nodes, {len(sources)} lifts, '
              f'{result.iterations} iterations')
    return DistanceField(t, x, result.values, result.labels, origin, h,
                         sources, coefficients, resolution,
                         result.iterations, result.residual)


def extract_cut_locus(f: DistanceField) -> CutLocusGraph:
    """
    Boundary of the region reached first from x, split into arcs by the
    lift on the other side.  Unpaired arcs, and paired arcs shorter than
    NOISE_ARC_CELLS cells, are merged into their neighbours; paired arcs
    shorter than MIN_ARC_CELLS cells are kept and lower the confidence.
    Ridges inside the region are hung off the glued boundary.
    """
    own = f.labels == f.center_label
    contours = [c for c in find_contours(own.astype(float), 0.5)
                if len(c) > 3 and np.allclose(c[0], c[-1])]
    if not contours:
        raise ExtractionError('no closed boundary around x')
    contour = max(contours, key=len)[:-1]
    xy = f.origin + contour[:, ::-1] * f.h
    area = np.sum(xy[:, 0] * np.roll(xy[:, 1], -1)
                  - np.roll(xy[:, 0], -1) * xy[:, 1])
    if area < 0:
        contour, xy = contour[::-1], xy[::-1]

    outside = _outside_labels(f, contour)
    runs = _runs(outside)
    if runs is None:
        raise ExtractionError('the cell of x borders a single lift')
    runs, notes, confident = _pair_runs(f, xy, runs)
    if len(runs) < 4 or len({run[0] for run in runs}) != len(runs):
        raise ExtractionError(f'cell boundary splits into {len(runs)} arcs '
                              f'that do not pair up')

    size = len(runs)
    corners = np.array([(xy[runs[i - 1][1][-1]] + xy[runs[i][1][0]]) / 2
                        for i in range(size)])
    sides = [np.vstack([corners[i], xy[runs[i][1]],
                        corners[(i + 1) % size]]) for i in range(size)]
    vectors = np.array([f.sources[run[0]] - f.x for run in runs])
    start = int(np.argmin(np.mod(np.arctan2(corners[:, 1] - f.x[1],
                                            corners[:, 0] - f.x[0]),
                                 2 * np.pi)))
    order = [(start + i) % size for i in range(size)]
    cl = _cut_locus_from_cell(f.torus, f.x, corners[order],
                              [sides[i] for i in order], vectors[order],
                              exact=False, resolution=f.resolution,
                              notes=notes, confident=confident)
    ridges, ridge_notes = find_ridges(f, xy)
    if ridge_notes:
        log.warning(f'{cl}: {"; ".join(ridge_notes)}')
        cl = replace(cl, confident=False, notes=cl.notes + ridge_notes)
    cl = _attach_ridges(cl, ridges, f.torus, f.h)
    log.debug(f'extracted at {f.x}: {cl}, {len(cl.ridges)} ridge arcs')
    return cl


def _pair_runs(f: DistanceField, xy: np.ndarray,
               runs: List[Tuple[int, List[int]]],
               ) -> Tuple[List[Tuple[int, List[int]]], List[str], bool]:
    """
    Merge runs until every run has its opposite: unpaired runs first,
    shortest first, then paired runs of grid-noise length.

    Returns:
    ---------
    runs, notes, whether the arcs left are long enough to trust
    """
    noise = NOISE_ARC_CELLS * f.h
    notes = []
    unpaired_merged = 0
    noise_merged = 0

    def arc_lengths(runs) -> List[float]:
        """Run lengths with the half steps to both neighbouring runs."""
        out = []
        for i, (_, points) in enumerate(runs):
            before = xy[runs[i - 1][1][-1]]
            after = xy[runs[(i + 1) % len(runs)][1][0]]
            path = np.vstack([(before + xy[points[0]]) / 2, xy[points],
                              (xy[points[-1]] + after) / 2])
            out.append(_polyline_length(path))
        return out

    while len(runs) > 2:
        lengths = arc_lengths(runs)
        present = {run[0] for run in runs}
        unpaired = [i for i, run in enumerate(runs)
                    if run[0] < 0 or f.partner_label(run[0]) not in present]
        if unpaired:
            k = min(unpaired, key=lambda i: lengths[i])
            unpaired_merged += 1
        else:
            k = int(np.argmin(lengths))
            if lengths[k] >= noise:
                break
            noise_merged += 1
        runs = _merge_run(runs, k)

    confident = True
    if unpaired_merged:
        notes.append(f'{unpaired_merged} unpaired arcs merged')
    if noise_merged:
        confident = False
        notes.append(f'{noise_merged} paired arcs under {NOISE_ARC_CELLS} '
                     f'cells merged, a vertex may hide a short edge')
    short = [length for length in arc_lengths(runs)
             if length < MIN_ARC_CELLS * f.h]
    if short:
        confident = False
        notes.append(f'{len(short)} arcs shorter than {MIN_ARC_CELLS} cells, '
                     f'shortest {min(short):.3g}')
    return runs, notes, confident


def _outside_labels(f: DistanceField, contour: np.ndarray) -> np.ndarray:
    """Label of the grid node across the boundary at every contour
    point."""
    ny, nx = f.labels.shape
    out = np.full(len(contour), -1, dtype=np.int64)
    for k, (r, c) in enumerate(contour):
        found = Counter()
        for i in {int(np.floor(r)), int(np.ceil(r))}:
            for j in {int(np.floor(c)), int(np.ceil(c))}:
                if 0 <= i < ny and 0 <= j < nx:
                    label = f.labels[i, j]
                    if label != f.center_label:
                        found[int(label)] += 1
        if found:
            out[k] = found.most_common(1)[0][0]
    return out


def _runs(labels: np.ndarray) -> Optional[List[Tuple[int, List[int]]]]:
    """Maximal cyclic runs of equal labels as (label, point indices)."""
    size = len(labels)
    starts = [k for k in range(size) if labels[k] != labels[k - 1]]
    if not starts:
        return None
    runs = []
    for a, b in zip(starts, starts[1:] + [starts[0] + size]):
        runs.append((int(labels[a]), [k % size for k in range(a, b)]))
    return runs


def _merge_run(runs: List[Tuple[int, List[int]]], k: int,
               ) -> List[Tuple[int, List[int]]]:
    """Hand the points of run k half to each neighbour, then join
    neighbours with equal labels."""
    size = len(runs)
    label, points = runs[k]
    before, after = (k - 1) % size, (k + 1) % size
    cut = len(points) // 2
    runs = list(runs)
    runs[before] = (runs[before][0], runs[before][1] + points[:cut])
    runs[after] = (runs[after][0], points[cut:] + runs[after][1])
    del runs[k]
    joined: List[Tuple[int, List[int]]] = []
    for run in runs:
        if joined and joined[-1][0] == run[0]:
            joined[-1] = (run[0], joined[-1][1] + run[1])
        else:
            joined.append(run)
    if len(joined) > 1 and joined[0][0] == joined[-1][0]:
        last = joined.pop()
        joined[0] = (last[0], last[1] + joined[0][1])
    return joined


class Ridge(NamedTuple):
    """A tree of ridge arcs hanging off the cell boundary at foot, where
    the arcs name the foot FOOT."""
    foot: np.ndarray
    arcs: List[Tuple[int, int, np.ndarray]]  # end, end, polyline


FOOT = -1


def ridge_mask(f: DistanceField) -> np.ndarray:
    """
    Nodes well inside the cell of x where the field has a crease: along
    some grid direction it drops on both sides by more than RIDGE_KINK
    per unit slowness and unit step.
    """
    X, Y = f.coordinates()
    values = f.values
    crease = np.full(values.shape, -np.inf)
    with np.errstate(invalid='ignore'):
        for di, dj in ((0, 1), (1, 0), (1, 1), (1, -1)):
            ahead = np.roll(values, (-di, -dj), axis=(0, 1))
            behind = np.roll(values, (di, dj), axis=(0, 1))
            drop = (2 * values - ahead - behind) / (f.h * np.hypot(di, dj))
            crease = np.fmax(crease, drop)
        crease /= f.slowness()
    inside = ndimage.binary_erosion(f.labels == f.center_label,
                                    structure=disk(RIDGE_MARGIN_CELLS))
    away = np.hypot(X - f.x[0], Y - f.x[1]) > (SOURCE_RADIUS_CELLS + 3) * f.h
    return inside & away & np.isfinite(values) & (crease > RIDGE_KINK)


def find_ridges(f: DistanceField,
                boundary: np.ndarray) -> Tuple[List[Ridge], List[str]]:
    """
    Thin the ridge mask to a skeleton and turn every component long
    enough to count into a tree rooted at the nearest boundary point.
    Components farther than RIDGE_ATTACH_CELLS from the boundary are
    reported and left out.
    """
    skeleton = skeletonize(ridge_mask(f))
    components, count = ndimage.label(skeleton, structure=np.ones((3, 3)))
    ridges, notes = [], []
    for k in range(1, count + 1):
        pixels = [tuple(p) for p in np.argwhere(components == k)]
        if len(pixels) < MIN_RIDGE_CELLS:
            continue
        xy = f.origin + np.array(pixels)[:, ::-1] * f.h
        gaps = np.linalg.norm(xy[:, None, :] - boundary[None, :, :], axis=2)
        i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
        if gaps[i, j] > RIDGE_ATTACH_CELLS * f.h:
            notes.append(f'ridge of {len(pixels)} cells ends '
                         f'{gaps[i, j] / f.h:.1f} cells from the boundary, '
                         f'left out')
            continue
        ridges.append(_ridge_tree(pixels, xy, int(i), boundary[j], f.h))
    return ridges, notes


def _ridge_tree(pixels: List[Tuple[int, int]], xy: np.ndarray, root: int,
                foot: np.ndarray, h: float) -> Ridge:
    """Spanning tree of the skeleton pixels hung from foot, spurs under
    MIN_ARC_CELLS pruned and paths through degree 2 joined into arcs."""
    index = {p: n for n, p in enumerate(pixels)}
    pixel_graph = nx.Graph()
    pixel_graph.add_nodes_from(range(len(pixels)))
    for n, (i, j) in enumerate(pixels):
        for di, dj in ((0, 1), (1, -1), (1, 0), (1, 1)):
            m = index.get((i + di, j + dj))
            if m is not None:
                pixel_graph.add_edge(n, m, weight=h * float(np.hypot(di, dj)))
    tree = nx.minimum_spanning_tree(pixel_graph)
    tree.add_edge(FOOT, root, weight=float(np.linalg.norm(xy[root] - foot)))
    _prune_spurs(tree, MIN_ARC_CELLS * h)

    def point(n: int) -> np.ndarray:
        return foot if n == FOOT else xy[n]

    arcs = [(a, b, np.array([point(n) for n in path]))
            for a, b, path in _arcs(tree, FOOT)]
    return Ridge(np.asarray(foot), arcs)


def _spur(tree: nx.Graph, leaf: int) -> Tuple[List[int], float, int]:
    """Nodes from a leaf up to the first node of another degree, their
    length and that node."""
    path, length = [leaf], 0.0
    previous, node = None, leaf
    while True:
        following = next(m for m in tree[node] if m != previous)
        length += tree[node][following]['weight']
        if tree.degree(following) != 2:
            return path, length, following
        path.append(following)
        previous, node = node, following


def _prune_spurs(tree: nx.Graph, limit: float) -> None:
    pruned = True
    while pruned:
        pruned = False
        for leaf in [n for n in tree if tree.degree(n) == 1 and n != FOOT]:
            if leaf not in tree or tree.degree(leaf) != 1:
                continue
            path, length, branch = _spur(tree, leaf)
            if tree.degree(branch) >= 3 and length < limit:
                tree.remove_nodes_from(path)
                pruned = True


def _arcs(tree: nx.Graph, start: int) -> List[Tuple[int, int, List[int]]]:
    """Paths between nodes of degree other than 2, walked away from
    start."""
    arcs = []
    stack = [(start, m) for m in tree[start]]
    while stack:
        a, node = stack.pop()
        path, previous = [a, node], a
        while tree.degree(node) == 2:
            previous, node = node, next(m for m in tree[node]
                                        if m != previous)
            path.append(node)
        arcs.append((a, node, path))
        stack.extend((node, m) for m in tree[node] if m != previous)
    return arcs


def _locate_on_sides(sides: List[np.ndarray],
                     point: np.ndarray) -> Tuple[int, float]:
    """Side nearest to point and the arclength along it from its first
    corner."""
    best = (np.inf, 0, 0.0)
    for i, side in enumerate(sides):
        gaps = np.linalg.norm(side - point, axis=1)
        k = int(np.argmin(gaps))
        if gaps[k] < best[0]:
            best = (gaps[k], i, _polyline_length(side[:k + 1]))
    return best[1], best[2]


def _attach_ridges(cl: CutLocusGraph, ridges: List[Ridge], t: FlatTorus,
                   h: float) -> CutLocusGraph:
    """
    Split the glued edges at the feet of the ridges and add the ridge arcs.
    A foot within MIN_ARC_CELLS of a corner is moved onto the corner.
    """
    if not ridges:
        return cl
    g = cl.graph
    near = MIN_ARC_CELLS * h
    vertices = list(g.vertices)
    positions = dict(cl.positions)
    cuts: Dict[str, List[Tuple[float, str]]] = {}
    hanging: List[Edge] = []
    polylines = []
    for n, ridge in enumerate(ridges):
        side, along = _locate_on_sides(cl.sides, ridge.foot)
        dart = cl.side_darts[side]
        total = _polyline_length(cl.sides[side])
        if along < near:
            foot = g.owner(dart)
        elif total - along < near:
            foot = g.owner(dart.partner)
        else:
            foot = f'j{n}'
            vertices.append(foot)
            positions[foot] = t.wrap(ridge.foot)
            fraction = along / total if dart.end == 0 else 1 - along / total
            cuts.setdefault(dart.edge, []).append((fraction, foot))
        names = {FOOT: foot}
        for a, b, points in ridge.arcs:
            for node, p in ((a, points[0]), (b, points[-1])):
                if node not in names:
                    names[node] = f'p{n}.{len(names)}'
                    vertices.append(names[node])
                    positions[names[node]] = t.wrap(p)
            hanging.append(Edge(f'b{n}.{len(hanging)}', names[a], names[b],
                                _polyline_length(points)))
            polylines.append(points)

    edges = []
    for e in g.edges:
        pieces = sorted(cuts.get(e.id, []))
        if not pieces:
            edges.append(e)
            continue
        ends = [e.u] + [v for _, v in pieces] + [e.v]
        marks = [0.0] + [fraction for fraction, _ in pieces] + [1.0]
        for k in range(len(ends) - 1):
            edges.append(Edge(f'{e.id}.{k}', ends[k], ends[k + 1],
                              (marks[k + 1] - marks[k]) * e.length))
    graph = MultiGraph(tuple(vertices), tuple(edges + hanging))
    return replace(cl, graph=graph, positions=positions, ridges=polylines)


class AbstractCutLocusSolver(ABC):
    """
    Api for computing the cut locus of a point on a torus.
    """
    exact: bool = False

    @abstractmethod
    def cut_locus(self, t: FlatTorus, x: Sequence[float]) -> CutLocusGraph:
        pass


class VoronoiSolver(AbstractCutLocusSolver):
    exact = True

    def cut_locus(self, t: FlatTorus, x: Sequence[float]) -> CutLocusGraph:
        return torus_voronoi_cutlocus(t, x)

    def __str__(self):
        return 'VoronoiSolver()'


class EikonalSolver(AbstractCutLocusSolver):

    def __init__(self, resolution: int = DEFAULT_RESOLUTION) -> None:
        if resolution < MIN_RESOLUTION:
            raise TorusError(f'resolution {resolution} is below the '
                             f'minimum {MIN_RESOLUTION}')
        self.resolution = resolution

    def cut_locus(self, t: FlatTorus, x: Sequence[float]) -> CutLocusGraph:
        return extract_cut_locus(bump_distance_field(t, x, self.resolution))

    def __str__(self):
        return f'EikonalSolver(resolution={self.resolution})'


def solver_for(t: FlatTorus,
               resolution: int = DEFAULT_RESOLUTION) -> AbstractCutLocusSolver:
    """Exact whenever the torus is flat."""
    if t.is_flat:
        return VoronoiSolver()
    return EikonalSolver(resolution)


class Transition(NamedTuple):
    index: int  # last scanned point before the change
    before: Tuple[int, ...]
    after: Tuple[int, ...]
    point: Optional[np.ndarray] = None  # located by bisection
    position: Optional[float] = None  # arclength along the path
    bracket: Optional[float] = None  # width of the final bracket


@dataclass
class ScanReport:
    table: pd.DataFrame
    transitions: List[Transition]
    notes: List[str]
    path_length: float
    solver: str

    @property
    def profiles(self) -> List[Tuple[int, ...]]:
        return list(self.table['profile'])

    def __str__(self) -> str:
        return (f'ScanReport({len(self.table)} points, '
                f'{len(self.transitions)} transitions)')


def locate_transition(solver: AbstractCutLocusSolver, t: FlatTorus,
                      start: Sequence[float], end: Sequence[float],
                      before: Tuple[int, ...], tolerance: float,
                      ) -> Tuple[np.ndarray, float, float]:
    """
    Bisect the segment start -> end for the change of degree profile away
    from `before` until the bracket is shorter than `tolerance`.

    Returns:
    ---------
    first point found with a changed profile, its fraction of the
    segment, final bracket length
    """
    start, end = np.asarray(start, float), np.asarray(end, float)
    span = float(np.linalg.norm(end - start))
    lo, hi = 0.0, 1.0
    while (hi - lo) * span > tolerance:
        mid = (lo + hi) / 2
        profile = solver.cut_locus(t, start + mid * (end - start)).profile
        log.debug(f'bisection at {mid:.6f}: {profile}')
        if profile == before:
            lo = mid
        else:
            hi = mid
    return start + hi * (end - start), hi, (hi - lo) * span


def stability_scan(t: FlatTorus, path: Sequence[Sequence[float]],
                   solver: Optional[AbstractCutLocusSolver] = None,
                   resolution: int = DEFAULT_RESOLUTION,
                   bisect: bool = True,
                   tolerance: float = TRANSITION_TOLERANCE) -> ScanReport:
    """
    Degree profile and natural structure of the cut locus along a path of
    base points, with the changes of profile located by bisection to
    `tolerance` times the path length.
    """
    path = np.asarray(path, dtype=float)
    solver = solver or solver_for(t, resolution)
    steps = np.linalg.norm(np.diff(path, axis=0), axis=1)
    arclength = np.concatenate([[0.0], np.cumsum(steps)])
    path_length = float(arclength[-1])
    rows = []
    for i, x in enumerate(path):
        cl = solver.cut_locus(t, x)
        rows.append({'x': x[0], 'y': x[1], 'position': arclength[i],
                     'profile': cl.profile, 'vertices': cl.graph.n,
                     'edges': cl.graph.m, 'q': cl.q, 'word': str(cl.word),
                     'confident': cl.confident, 'epsilon': cl.epsilon,
                     'length': cl.total_length})
    table = pd.DataFrame(rows)

    transitions = []
    for i in range(len(path) - 1):
        before, after = rows[i]['profile'], rows[i + 1]['profile']
        if before == after:
            continue
        transition = Transition(i, before, after)
        if bisect and path_length > 0:
            point, fraction, bracket = locate_transition(
                solver, t, path[i], path[i + 1], before,
                tolerance * path_length)
            transition = transition._replace(
                point=point, position=float(arclength[i]
                                            + fraction * steps[i]),
                bracket=bracket)
        transitions.append(transition)
        log.info(f'profile {before} -> {after} after point {i}')

    notes = []
    if t.is_flat:
        notes.append('flat metric is not generic: every cut locus is a '
                     'translate of the same Voronoi cell boundary, the '
                     'profile cannot change')
    if not table['confident'].all():
        notes.append('some points were classified with low confidence')
    report = ScanReport(table, transitions, notes, path_length, str(solver))
    log.info(f'{report}')
    return report


def semicontinuity_gap(t: FlatTorus, x: Sequence[float],
                       xs: Sequence[Sequence[float]],
                       step: float = 0.01) -> List[float]:
    """
    For every x_n the largest torus distance from a point of C(x_n) to
    C(x); tends to 0 as x_n -> x.
    """
    target = torus_voronoi_cutlocus(t, x).boundary
    a, b = target[:-1], target[1:]
    u, v = t.reduced()
    shifts = np.array([i * u + j * v for i in range(-2, 3)
                       for j in range(-2, 3)])
    gaps = []
    for xn in xs:
        points = sample_polyline(torus_voronoi_cutlocus(t, xn).boundary,
                                 step * t.shortest)
        best = np.full(len(points), np.inf)
        for w in shifts:
            best = np.minimum(best, _distance_to_segments(points + w, a, b))
        gaps.append(float(best.max()))
    return gaps


def sample_polyline(points: np.ndarray, step: float) -> np.ndarray:
    """Points along a polyline at most `step` apart, vertices included."""
    out = [points[:1]]
    for p, q in zip(points[:-1], points[1:]):
        count = max(int(np.ceil(np.linalg.norm(q - p) / step)), 1)
        s = np.arange(1, count + 1)[:, None] / count
        out.append(p + s * (q - p))
    return np.vstack(out)


def _distance_to_segments(points: np.ndarray, a: np.ndarray,
                          b: np.ndarray) -> np.ndarray:
    ab = b - a
    ap = points[:, None, :] - a[None, :, :]
    s = np.clip(np.sum(ap * ab, axis=2) / np.sum(ab * ab, axis=1), 0, 1)
    nearest = a[None, :, :] + s[..., None] * ab[None, :, :]
    return np.linalg.norm(points[:, None, :] - nearest, axis=2).min(axis=1)


def bumped_square_torus(height: float = 1.0) -> FlatTorus:
    """Unit square torus with a bump next to a segment from x to the
    corner of its cell."""
    return FlatTorus.square(bump=Bump((0.55, 0.25), 0.12, height))


def horizontal_path(count: int = 7, end: float = 0.3) -> np.ndarray:
    """x(t) = (t, 0), t in [0, end]."""
    return np.column_stack([np.linspace(0, end, count), np.zeros(count)])


def tangency_parameter(bump: Optional[Bump] = None) -> float:
    """
    t at which the segment from (t, 0) to (t + 1/2, 1/2) touches the rim
    of the bump: t = c_x - c_y - radius * sqrt(2).
    """
    bump = bump or bumped_square_torus().bump
    return bump.center[0] - bump.center[1] - bump.radius * np.sqrt(2)


def with_bump(t: FlatTorus, bump: Optional[Bump]) -> FlatTorus:
    return replace(t, bump=bump)
