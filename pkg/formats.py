"""
JSON codecs.  Graph:
    {"vertices": [ids], "edges": [{"id", "ends": [u, v], "length"?}]}
Scheme: the graph plus
    {"rotation": {vertex: ["e+", "f-", ...]}, "signature": {edge: 0|1}}
where "e+" is the dart of edge e at its first end, "e-" at its second.
"""
import json
from typing import Any, Dict, List, Optional

import numpy as np
from logbook import Logger

from multigraph import Dart, Edge, GraphError, MultiGraph
from ribbon import EmbeddingScheme, SchemeError, surface_invariants


log = Logger(__name__)


class FormatError(ValueError):
    pass


def dart_str(d: Dart) -> str:
    return str(d)


def parse_dart(text: str) -> Dart:
    text = str(text)
    if len(text) < 2 or text[-1] not in '+-−':
        raise FormatError(f'dart {text!r} must end with + or -')
    return Dart(text[:-1], 0 if text[-1] == '+' else 1)


def graph_to_dict(g: MultiGraph) -> Dict[str, Any]:
    edges = []
    for e in g.edges:
        item: Dict[str, Any] = {'id': e.id, 'ends': [e.u, e.v]}
        if e.length is not None:
            item['length'] = e.length
        edges.append(item)
    return {'vertices': list(g.vertices), 'edges': edges}


def graph_from_dict(data: Dict[str, Any]) -> MultiGraph:
    try:
        vertices = [str(v) for v in data['vertices']]
        edges = []
        for item in data['edges']:
            u, v = item['ends']
            length = item.get('length')
            edges.append(Edge(str(item['id']), str(u), str(v),
                              None if length is None else float(length)))
    except (KeyError, TypeError, ValueError) as error:
        raise FormatError(f'malformed graph: {error!r}') from None
    return MultiGraph(tuple(vertices), tuple(edges))


def scheme_to_dict(s: EmbeddingScheme) -> Dict[str, Any]:
    data = graph_to_dict(s.base)
    data['rotation'] = {v: [dart_str(d) for d in s.rotation[v]]
                        for v in s.base.vertices}
    data['signature'] = {e.id: s.signature[e.id] for e in s.base.edges}
    return data


def scheme_from_dict(data: Dict[str, Any]) -> EmbeddingScheme:
    g = graph_from_dict(data)
    try:
        rotation = {str(v): tuple(parse_dart(d) for d in darts)
                    for v, darts in data['rotation'].items()}
        signature = {str(e): int(bit)
                     for e, bit in data['signature'].items()}
    except (KeyError, TypeError, AttributeError) as error:
        raise FormatError(f'malformed scheme: {error!r}') from None
    return EmbeddingScheme(g, rotation, signature)


def invariants_to_dict(s: EmbeddingScheme) -> Dict[str, Any]:
    return dict(surface_invariants(s)._asdict())


def walk_to_list(walk: List[Dart]) -> List[str]:
    return [dart_str(d) for d in walk]


def realization_to_dict(r) -> Dict[str, Any]:
    """PolygonRealization as plain JSON values."""
    return {
        'geometry': r.geometry,
        'm': r.m,
        'k': r.k,
        'n': r.n,
        'euler_characteristic': r.euler_characteristic,
        'corner_angle': r.corner_angle,
        'side_length': r.side_length,
        'circumradius': r.circumradius,
        'apothem': r.apothem,
        'curvature': r.curvature,
        'vertex_coords': [[float(z.real), float(z.imag)]
                          for z in r.vertex_coords],
        'corner_map': list(r.corner_map),
        'side_map': list(r.side_map),
        'walk': walk_to_list(r.walk),
        'side_pairing': [{
            'edge': p.edge,
            'source': p.source,
            'target': p.target,
            'reflect': p.reflect,
            'matrix': [[[float(c.real), float(c.imag)] for c in row]
                       for row in p.isometry.matrix],
        } for p in r.side_pairing],
    }


def report_to_dict(report) -> Dict[str, Any]:
    """VerificationReport: verdict, area and the failing items."""
    return {
        'passed': report.passed,
        'area': report.area,
        'samples': report.samples,
        'checks': len(report.items),
        'failures': [item._asdict() for item in report.failures()],
    }


def cut_locus_to_dict(cl) -> Dict[str, Any]:
    return {
        'x': cl.x.tolist(),
        'exact': cl.exact,
        'resolution': cl.resolution,
        'graph': graph_to_dict(cl.graph),
        'clns': scheme_to_dict(cl.clns),
        'ridges': [points.tolist() for points in cl.ridges],
        'degrees': cl.degrees,
        'profile': list(cl.profile),
        'q': cl.q,
        'positions': {v: p.tolist() for v, p in cl.positions.items()},
        'epsilon': cl.epsilon,
        'separation': cl.separation,
        'confident': cl.confident,
        'total_length': cl.total_length,
        'notes': cl.notes,
    }


def scan_to_dict(report) -> Dict[str, Any]:
    rows = report.table.to_dict(orient='records')
    for row in rows:
        row['profile'] = list(row['profile'])
    return {
        'solver': report.solver,
        'path_length': report.path_length,
        'points': rows,
        'transitions': [{
            'index': t.index,
            'before': list(t.before),
            'after': list(t.after),
            'point': None if t.point is None else t.point.tolist(),
            'position': t.position,
            'bracket': t.bracket,
        } for t in report.transitions],
        'notes': report.notes,
    }


def census_to_dict(census) -> Dict[str, Any]:
    return {
        'graph': graph_to_dict(census.graph),
        'bound': census.bound,
        'candidates': census.candidates,
        'classes': census.classes,
        'schemes': [scheme_to_dict(s) for s in census.schemes],
    }


class _Encoder(json.JSONEncoder):

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, cls=_Encoder)


def load_json(path: str) -> Dict[str, Any]:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as error:
        raise FormatError(f'{path}: {error}') from None


def load_graph(path: str) -> MultiGraph:
    return graph_from_dict(load_json(path))


def load_scheme(path: str,
                g: Optional[MultiGraph] = None) -> EmbeddingScheme:
    s = scheme_from_dict(load_json(path))
    if g is not None and s.base != g:
        raise SchemeError('scheme file describes a different graph')
    return s

