"""
Svg figures: polygon realizations with their side pairs, cut loci on the
fundamental domain of a torus.  Plane coordinates are drawn with y up.
"""
from typing import Optional

import drawsvg as draw
import numpy as np
from logbook import Logger

from constcurv import EUCLIDEAN, HYPERBOLIC, PolygonRealization, point_on_side
from torus_lab import CutLocusGraph, FlatTorus

log = Logger(__name__)

PALETTE = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
           '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf']
SIZE = 480
SIDE_SAMPLES = 32


def _colour(i: int) -> str:
    return PALETTE[i % len(PALETTE)]


def _xy(points, scale: float) -> list:
    """Flattened svg coordinates, y flipped."""
    points = np.asarray(points, dtype=complex).ravel()
    out = np.column_stack([points.real * scale, -points.imag * scale])
    return [float(c) for c in np.round(out, 3).ravel()]


def polygon_svg(r: PolygonRealization, labels: bool = True) -> str:
    """
    The 2m-gon with paired sides in one colour, each side marked with its
    edge and each corner with the graph vertex it is glued to.
    """
    d = draw.Drawing(SIZE, SIZE, origin='center')
    if r.geometry not in (HYPERBOLIC, EUCLIDEAN):
        d.append(draw.Text(f'{r.geometry}: no polygon', 16, 0, 0,
                           text_anchor='middle'))
        return d.as_svg()
    z = r.vertex_coords
    size = len(z)
    extent = 1.0 if r.geometry == HYPERBOLIC else float(np.abs(z).max())
    scale = 0.4 * SIZE / extent
    if r.geometry == HYPERBOLIC:
        d.append(draw.Circle(0, 0, scale, fill='none', stroke='#999',
                             stroke_width=1))
    fractions = np.linspace(0, 1, SIDE_SAMPLES)
    for i, pair in enumerate(r.side_pairing):
        for side in (pair.source, pair.target):
            a, b = z[side], z[(side + 1) % size]
            points = point_on_side(r.geometry, a, b, fractions)
            d.append(draw.Lines(*_xy(points, scale), close=False,
                                fill='none', stroke=_colour(i),
                                stroke_width=2))
            if labels:
                mid = point_on_side(r.geometry, a, b, 0.5)
                at = _xy(mid * 0.88, scale)
                d.append(draw.Text(r.side_map[side], 11, at[0], at[1],
                                   text_anchor='middle', fill=_colour(i)))
    if labels:
        for j, v in enumerate(r.corner_map):
            at = _xy(z[j] * 1.08, scale)
            d.append(draw.Text(v, 11, at[0], at[1], text_anchor='middle'))
    d.append(draw.Circle(0, 0, 3, fill='black'))
    log.debug(f'drew {r}')
    return d.as_svg()


def cut_locus_svg(cl: CutLocusGraph, t: Optional[FlatTorus] = None) -> str:
    """
    Cell boundary around x with paired sides in one colour, ridges in
    grey, the fundamental parallelogram and, when given, the bump.
    """
    d = draw.Drawing(SIZE, SIZE, origin='center')
    corners = np.asarray(cl.corners)
    centre = cl.x

    def local(points):
        points = np.asarray(points, dtype=float).reshape(-1, 2) - centre
        return points[:, 0] + 1j * points[:, 1]

    extent = float(np.abs(local(corners)).max())
    if t is not None:
        u, v = t.basis
        domain = np.array([0 * u, u, u + v, v])
        extent = max(extent, float(np.abs(local(domain)).max()))
    scale = 0.4 * SIZE / extent

    if t is not None:
        d.append(draw.Lines(*_xy(local(domain), scale), close=True,
                            fill='#f4f4f4', stroke='#bbb', stroke_width=1))
        if t.bump is not None:
            c = local(t.bump.center)[0]
            d.append(draw.Circle(c.real * scale, -c.imag * scale,
                                 t.bump.radius * scale, fill='#ffd8a8',
                                 stroke='#e8590c', stroke_width=1))
    pair_index = {}
    size = len(cl.sides)
    for i in range(size):
        key = min(i, next((j for j in range(size) if np.allclose(
            cl.vectors[j], -cl.vectors[i])), i))
        pair_index.setdefault(key, len(pair_index))
        d.append(draw.Lines(*_xy(local(cl.sides[i]), scale), close=False,
                            fill='none', stroke=_colour(pair_index[key]),
                            stroke_width=2))
    for points in cl.ridges:
        d.append(draw.Lines(*_xy(local(points), scale), close=False,
                            fill='none', stroke='#343a40', stroke_width=2))
    for corner in local(corners):
        d.append(draw.Circle(corner.real * scale, -corner.imag * scale, 3,
                             fill='black'))
    d.append(draw.Circle(0, 0, 4, fill='#c92a2a'))
    d.append(draw.Text(f'profile {list(cl.profile)}', 12,
                       -0.45 * SIZE, -0.45 * SIZE))
    return d.as_svg()
