"""
Realization of a cut-locus structure on a graph of constant order as a
regular 2m-gon with paired sides: flat square or hexagon, or a hyperbolic
polygon in the Poincare disk centred at the origin.  The centre of the
polygon is the point whose cut locus is the graph.

Corner j of the polygon is the start vertex of step j of the boundary walk
and side t (from corner t to corner t+1) carries the edge of step t.
"""
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional

import numpy as np
import pandas as pd
from logbook import Logger

from config import (DEFAULT_SAMPLES, DEFAULT_SEED, FLAT_TOLERANCE,
                    HYPERBOLIC_TOLERANCE)
from multigraph import Dart, MultiGraph, degree_profile
from ribbon import EmbeddingScheme, boundary_walk, is_cl_structure


log = Logger(__name__)

SPHERE = 'sphere'
PROJECTIVE_PLANE = 'projective_plane'
EUCLIDEAN = 'euclidean'
HYPERBOLIC = 'hyperbolic'


class RealizationError(ValueError):
    pass


class PolygonParameters(NamedTuple):
    geometry: str
    m: int
    k: int
    n: int
    euler_characteristic: int
    corner_angle: Optional[float]
    side_length: Optional[float]
    circumradius: Optional[float]
    apothem: Optional[float]


def polygon_parameters(m: int, k: int) -> PolygonParameters:
    """
    Regular 2m-gon with corner angle 2*pi/k.  The sign of the Euler
    characteristic n - m + 1 of the glued surface picks the geometry.
    Flat polygons have unit side; hyperbolic ones live at curvature -1.
    """
    if m == 0:
        return PolygonParameters(SPHERE, 0, 0, 1, 2, None, None, None, None)
    if k == 2:
        return PolygonParameters(PROJECTIVE_PLANE, m, 2, m, 1, None, None,
                                 None, None)
    if k < 2 or (2 * m) % k:
        raise RealizationError(f'k * n = 2m has no integer solution n for '
                               f'm={m}, k={k}')
    n = 2 * m // k
    chi = n - m + 1
    corner = 2 * np.pi / k
    half = np.pi / (2 * m)
    if chi == 0:
        return PolygonParameters(EUCLIDEAN, m, k, n, chi, corner, 1.0,
                                 1 / (2 * np.sin(half)),
                                 1 / (2 * np.tan(half)))
    if chi > 0:
        raise RealizationError(
            f'corner angle 2pi/{k} is not below the flat angle of a regular '
            f'{2 * m}-gon (euler characteristic {chi} > 0)')
    circumradius = np.arccosh(1 / (np.tan(np.pi / k) * np.tan(half)))
    apothem = np.arccosh(np.cos(np.pi / k) / np.sin(half))
    side = 2 * np.arccosh(np.cos(half) / np.sin(np.pi / k))
    return PolygonParameters(HYPERBOLIC, m, k, n, chi, corner, side,
                             circumradius, apothem)


# plane and disk geometry


def _to_origin(p: complex) -> np.ndarray:
    """Disk isometry moving p to 0."""
    return np.array([[1, -p], [-np.conj(p), 1]], dtype=complex)


def _from_origin(p: complex) -> np.ndarray:
    return np.array([[1, p], [np.conj(p), 1]], dtype=complex)


def mobius(matrix: np.ndarray, z):
    return ((matrix[0, 0] * z + matrix[0, 1])
            / (matrix[1, 0] * z + matrix[1, 1]))


def distance(geometry: str, z1, z2):
    if geometry == HYPERBOLIC:
        return 2 * np.arctanh(np.abs((z1 - z2) / (1 - np.conj(z1) * z2)))
    return np.abs(z1 - z2)


def _local(geometry: str, at: complex, z):
    """Coordinates in which geodesics from `at` are rays from 0."""
    if geometry == HYPERBOLIC:
        return mobius(_to_origin(at), z)
    return z - at


def corner_angle_at(geometry: str, at: complex, p: complex,
                    q: complex) -> float:
    """Angle at `at` between the geodesics towards p and q."""
    u = _local(geometry, at, p)
    v = _local(geometry, at, q)
    return float(np.abs(np.angle(v / u)))


def point_on_side(geometry: str, a: complex, b: complex, fraction):
    """Point at the given fraction of the length of the geodesic a -> b."""
    if geometry == HYPERBOLIC:
        w = mobius(_to_origin(a), b)
        length = 2 * np.arctanh(np.abs(w))
        z = np.tanh(fraction * length / 2) * w / np.abs(w)
        return mobius(_from_origin(a), z)
    return a + fraction * (b - a)


@dataclass(frozen=True)
class Isometry:
    """z -> M(z), or M(conj(z)) when reflect; M a 2x2 complex matrix."""
    matrix: np.ndarray
    reflect: bool

    def __call__(self, z):
        return mobius(self.matrix, np.conj(z) if self.reflect else z)

    @classmethod
    def between(cls, geometry: str, p1: complex, p2: complex, q1: complex,
                q2: complex, reflect: bool) -> 'Isometry':
        """The isometry with p1 -> q1 and p2 -> q2 (equal distances)."""
        s1, s2 = (np.conj(p1), np.conj(p2)) if reflect else (p1, p2)
        if geometry == HYPERBOLIC:
            wp = mobius(_to_origin(s1), s2)
            wq = mobius(_to_origin(q1), q2)
            rotation = wq / wp
            rotation /= np.abs(rotation)
            matrix = (_from_origin(q1)
                      @ np.array([[rotation, 0], [0, 1]], dtype=complex)
                      @ _to_origin(s1))
            matrix = matrix / np.sqrt(np.linalg.det(matrix))
        else:
            a = (q2 - q1) / (s2 - s1)
            matrix = np.array([[a, q1 - a * s1], [0, 1]], dtype=complex)
        return cls(matrix, reflect)


class SidePairing(NamedTuple):
    """
    Side `source` is carried onto side `target`; reflecting pairings join
    two traversals of an edge in the same direction.
    """
    edge: str
    source: int
    target: int
    reflect: bool
    isometry: Isometry


@dataclass
class PolygonRealization:
    geometry: str
    m: int
    k: int
    n: int
    euler_characteristic: int
    corner_angle: Optional[float]
    side_length: Optional[float]
    circumradius: Optional[float]
    apothem: Optional[float]
    vertex_coords: np.ndarray
    side_pairing: List[SidePairing]
    corner_map: List[str]
    side_map: List[str]
    walk: List[Dart]
    scheme: Optional[EmbeddingScheme] = None
    curvature: float = -1.0

    @property
    def corner_classes(self) -> Dict[str, List[int]]:
        classes: Dict[str, List[int]] = {}
        for j, v in enumerate(self.corner_map):
            classes.setdefault(v, []).append(j)
        return classes

    def identified_point(self, side: int, fraction: float) -> complex:
        """The point glued to the point at `fraction` along `side`."""
        other = self._other_side(side)
        z = self.vertex_coords
        size = len(z)
        same = self.walk[side] == self.walk[other]
        a, b = z[other], z[(other + 1) % size]
        return point_on_side(self.geometry, a, b,
                             fraction if same else 1 - fraction)

    def _other_side(self, side: int) -> int:
        edge = self.side_map[side]
        return next(t for t, e in enumerate(self.side_map)
                    if e == edge and t != side)

    def __str__(self) -> str:
        return (f'PolygonRealization({self.geometry}, 2m={2 * self.m}, '
                f'k={self.k}, chi={self.euler_characteristic})')


def realize(g: MultiGraph, c: EmbeddingScheme) -> PolygonRealization:
    """
    Lay the boundary walk of c along the regular 2m-gon and pair every two
    sides carrying the same edge.

    A metric graph must have all lengths equal to some L: flat polygons are
    scaled to side L, hyperbolic ones record curvature -(side/L)**2.
    """
    if c.base != g:
        raise RealizationError('scheme does not belong to the graph')
    if not is_cl_structure(c):
        raise RealizationError('scheme is not a cut-locus structure (more '
                               'than one face)')
    walk = boundary_walk(c)
    if g.m == 0:
        params = polygon_parameters(0, 0)
    else:
        order = degree_profile(g).constant_order
        if order is None:
            raise RealizationError(f'{g} is not of constant order')
        if order < 2:
            raise RealizationError(f'{g} is not its own cyclic part')
        params = polygon_parameters(g.m, order)

    if params.geometry in (SPHERE, PROJECTIVE_PLANE):
        log.info(f'{g} realized on the {params.geometry}')
        return PolygonRealization(*params, vertex_coords=np.zeros(0, complex),
                                  side_pairing=[], corner_map=[],
                                  side_map=[], walk=walk, scheme=c,
                                  curvature=1.0)

    scale, curvature = 1.0, -1.0 if params.geometry == HYPERBOLIC else 0.0
    if g.is_metric:
        lengths = np.array([e.length for e in g.edges])
        if not np.allclose(lengths, lengths[0], rtol=FLAT_TOLERANCE, atol=0):
            raise RealizationError('a polygon realization makes all edges '
                                   'equally long, prescribed lengths differ')
        if params.geometry == EUCLIDEAN:
            scale = lengths[0] / params.side_length
        else:
            curvature = -(params.side_length / lengths[0]) ** 2
    if scale != 1.0:
        params = params._replace(side_length=params.side_length * scale,
                                 circumradius=params.circumradius * scale,
                                 apothem=params.apothem * scale)

    size = 2 * g.m
    angles = np.pi / size + np.arange(size) * np.pi / g.m
    if params.geometry == HYPERBOLIC:
        radius = np.tanh(params.circumradius / 2)
    else:
        radius = params.circumradius
    coords = radius * np.exp(1j * angles)

    corner_map = [g.owner(d) for d in walk]
    side_map = [d.edge for d in walk]
    steps: Dict[str, List[int]] = {}
    for t, edge in enumerate(side_map):
        steps.setdefault(edge, []).append(t)
    pairing = []
    for edge in (e.id for e in g.edges):
        source, target = steps[edge]
        same = walk[source] == walk[target]
        p1, p2 = coords[source], coords[(source + 1) % size]
        if same:
            q1, q2 = coords[target], coords[(target + 1) % size]
        else:
            q1, q2 = coords[(target + 1) % size], coords[target]
        isometry = Isometry.between(params.geometry, p1, p2, q1, q2, same)
        pairing.append(SidePairing(edge, source, target, same, isometry))

    realization = PolygonRealization(
        *params, vertex_coords=coords, side_pairing=pairing,
        corner_map=corner_map, side_map=side_map, walk=walk, scheme=c,
        curvature=curvature)
    log.info(f'{g} realized as {realization}')
    return realization


class CheckItem(NamedTuple):
    check: str
    item: str
    value: float
    expected: float
    passed: bool


@dataclass
class VerificationReport:
    realization: PolygonRealization
    items: List[CheckItem] = field(default_factory=list)
    area: Optional[float] = None
    samples: int = 0

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(self.items, columns=CheckItem._fields)

    def add(self, check: str, item: str, value: float, expected: float,
            tolerance: float) -> None:
        passed = bool(abs(value - expected) <= tolerance)
        self.items.append(CheckItem(check, item, float(value),
                                    float(expected), passed))
        if not passed:
            log.error(f'{check} {item}: {value} != {expected}')


def verify_realization(r: PolygonRealization,
                       samples: int = DEFAULT_SAMPLES,
                       seed: int = DEFAULT_SEED,
                       tolerance: Optional[float] = None,
                       ) -> VerificationReport:
    """
    Checks, each failure listed as an item:
    corner_angles: angle sum of every corner class equals 2pi
    gauss_bonnet: angle defect (2m - 2)pi - sum of angles equals -2pi*chi,
        hyperbolic area from the centre triangles likewise
    pairing: every pairing joins the two sides of one edge, endpoints
        land on endpoints
    equidistance: sampled boundary points and their identified points
        are equally far from the centre and the pairing maps one onto the
        other
    side_lengths: every side has the polygon's side length

    Args:
    ---------
    tolerance: for equidistance, defaults per geometry; the other checks
        use the flat tolerance
    """
    report = VerificationReport(r)
    if r.geometry in (SPHERE, PROJECTIVE_PLANE):
        return report
    geometry = r.geometry
    exact = FLAT_TOLERANCE
    if tolerance is None:
        tolerance = HYPERBOLIC_TOLERANCE if geometry == HYPERBOLIC else exact
    z = r.vertex_coords
    size = len(z)

    angles = np.array([corner_angle_at(geometry, z[j], z[(j + 1) % size],
                                       z[j - 1]) for j in range(size)])
    for v, corners in r.corner_classes.items():
        report.add('corner_angles', v, angles[corners].sum(), 2 * np.pi,
                   exact)
    defect = (size - 2) * np.pi - angles.sum()
    report.add('gauss_bonnet', 'angle_defect', defect,
               -2 * np.pi * r.euler_characteristic, exact)
    if geometry == HYPERBOLIC:
        report.area = _hyperbolic_area(z)
        report.add('gauss_bonnet', 'area', report.area,
                   -2 * np.pi * r.euler_characteristic, exact)
    else:
        report.area = _flat_area(z)

    for pair in r.side_pairing:
        report.add('pairing', pair.edge,
                   float(r.side_map[pair.source] == r.side_map[pair.target]),
                   1.0, 0)
        a, b = z[pair.source], z[(pair.source + 1) % size]
        ends = (r.identified_point(pair.source, 0.0),
                r.identified_point(pair.source, 1.0))
        error = max(abs(pair.isometry(a) - ends[0]),
                    abs(pair.isometry(b) - ends[1]))
        report.add('pairing', f'{pair.edge} endpoints', error, 0.0, exact)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(samples):
        pair = r.side_pairing[rng.integers(len(r.side_pairing))]
        fraction = rng.random()
        a, b = z[pair.source], z[(pair.source + 1) % size]
        p = point_on_side(geometry, a, b, fraction)
        glued = r.identified_point(pair.source, fraction)
        radial = abs(distance(geometry, 0, p) - distance(geometry, 0, glued))
        landing = abs(pair.isometry(p) - glued)
        error = max(radial, landing)
        worst = max(worst, error)
        if error > tolerance:
            report.add('equidistance', f'sample {i} on {pair.edge}', error,
                       0.0, tolerance)
    report.add('equidistance', f'max over {samples} samples', worst, 0.0,
               tolerance)
    report.samples = samples

    for t in range(size):
        report.add('side_lengths', f'side {t}',
                   distance(geometry, z[t], z[(t + 1) % size]),
                   r.side_length, exact * max(1.0, r.side_length))
    log.info(f'verification of {r}: passed={report.passed}')
    return report


def _hyperbolic_area(z: np.ndarray) -> float:
    """Sum over the triangles (centre, z_j, z_j+1) of pi minus angles."""
    area = 0.0
    size = len(z)
    for j in range(size):
        a, b = z[j], z[(j + 1) % size]
        at_centre = abs(np.angle(b / a))
        at_a = corner_angle_at(HYPERBOLIC, a, 0, b)
        at_b = corner_angle_at(HYPERBOLIC, b, 0, a)
        area += np.pi - at_centre - at_a - at_b
    return float(area)


def _flat_area(z: np.ndarray) -> float:
    return float(0.5 * abs(np.sum(np.imag(np.conj(z) * np.roll(z, -1)))))


def stable_natural_realization(g: MultiGraph) -> Optional[bool]:
    """
    Whether the cut-locus structures on g are stable at the centre of
    their polygon realization: true for constant order k >= 3, None when
    g has no polygon realization of constant order.
    """
    order = degree_profile(g).constant_order
    if order is None or order < 3:
        return None
    return True
