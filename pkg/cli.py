"""
Command line surface.

    python cli.py analyze petersen
    python cli.py strip C5
    python cli.py census K4 --limit 100000 --workers 4
    python cli.py realize petersen --samples 1000 --seed 42
    python cli.py torus voronoi --lattice hexagonal --x 0.1,0.2
    python cli.py torus field --bump 0.55,0.25,0.12,1 --resolution 128
    python cli.py torus scan --bump 0.55,0.25,0.12,1 --path 0,0,0.3,0,7
    python cli.py resolve-cubic rose2

A graph is a path to a graph JSON file or a catalogue name (K4, K3,3, C5,
rose2, theta, petersen, ...).  Results are printed and saved as JSON (and
SVG where there is a figure) under --output.  Exit status is 0 on success,
1 on bad input and 2 when a realization fails verification.
"""
import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

import numpy as np
from logbook import INFO, WARNING, Logger

import catalog
from config import (DEFAULT_RESOLUTION, DEFAULT_SAMPLES, DEFAULT_SEED,
                    CENSUS_LIMIT, CENSUS_WORKERS, SWEEP_TOLERANCE,
                    TRANSITION_TOLERANCE)
from constcurv import (RealizationError, realize, stable_natural_realization,
                       verify_realization)
from construct import (CensusTooLarge, cubic_resolution,
                       enumerate_cl_structures, one_face_embedding)
from figures import cut_locus_svg, polygon_svg
from formats import (FormatError, census_to_dict, cut_locus_to_dict, dumps,
                     graph_to_dict, invariants_to_dict, load_graph,
                     load_scheme, realization_to_dict, report_to_dict,
                     scan_to_dict, scheme_to_dict, walk_to_list)
from logger import logger
from multigraph import (GraphError, MultiGraph, cyclic_part, degree_profile,
                        generating_cycle_count)
from ribbon import SchemeError, boundary_walk
from saver import FieldSaver, JsonSaver, SvgSaver
from torus_lab import (Bump, ConvergenceError, ExtractionError, FlatTorus,
                       TorusError, bump_distance_field, extract_cut_locus,
                       stability_scan, torus_voronoi_cutlocus)


log = Logger(__name__)

OK, FAILED, UNVERIFIED = 0, 1, 2

DOMAIN_ERRORS = (GraphError, SchemeError, RealizationError, TorusError,
                 FormatError, CensusTooLarge, ConvergenceError,
                 ExtractionError, OSError, json.JSONDecodeError)

LATTICES = {
    'square': lambda bump: FlatTorus.square(bump=bump),
    'hexagonal': lambda bump: FlatTorus.hexagonal(bump=bump),
    'rect12': lambda bump: FlatTorus.rectangular(1.0, 2.0, bump=bump),
}


def floats(count: Optional[int] = None):
    """argparse type: comma separated floats."""
    def parse(text: str) -> List[float]:
        try:
            values = [float(x) for x in text.split(',')]
        except ValueError:
            raise argparse.ArgumentTypeError(f'{text!r} is not a list of '
                                             f'numbers') from None
        if count is not None and len(values) != count:
            raise argparse.ArgumentTypeError(f'{text!r} needs {count} '
                                             f'numbers')
        return values
    return parse


def graph_argument(text: str) -> MultiGraph:
    if os.path.exists(text):
        return load_graph(text)
    return catalog.lookup(text)


def label(text: str) -> str:
    return os.path.splitext(os.path.basename(text))[0]


### commands ###


def analyze(args) -> int:
    g = graph_argument(args.graph)
    cp = cyclic_part(g)
    profile = degree_profile(g)
    cp_profile = degree_profile(cp.graph)
    cubic = cp_profile.is_cubic
    result = {
        'graph': graph_to_dict(g),
        'n': g.n,
        'm': g.m,
        'q': generating_cycle_count(g),
        'degrees': profile.degrees,
        'is_cubic': profile.is_cubic,
        'constant_order': profile.constant_order,
        'cyclic_part': graph_to_dict(cp.graph),
        'cyclic_part_degrees': list(cp_profile.profile),
        'stability': ('globally stable class' if cubic
                      else 'not globally stable'),
        'natural_realization_stable': stable_natural_realization(cp.graph),
    }
    print(f'{g}: n={g.n} m={g.m} q={result["q"]}')
    print(f'degrees: {list(profile.profile)}, cubic: {profile.is_cubic}')
    print(f'cyclic part: n={cp.graph.n} m={cp.graph.m} degrees '
          f'{list(cp_profile.profile)}')
    print(f'cut-locus structures: {result["stability"]} (stability is a '
          f'property of the structures on the cyclic part)')
    print(f'natural realization stable: '
          f'{result["natural_realization_stable"]}')
    JsonSaver(args.output, args.note).save(result, 'analyze', label(
        args.graph))
    return OK


def strip(args) -> int:
    g = graph_argument(args.graph)
    s = one_face_embedding(g)
    data = scheme_to_dict(s)
    data['walk'] = walk_to_list(boundary_walk(s))
    data['invariants'] = invariants_to_dict(s)
    print(dumps(data))
    JsonSaver(args.output, args.note).save(data, 'strip', label(args.graph))
    return OK


def census(args) -> int:
    g = graph_argument(args.graph)
    result = enumerate_cl_structures(g, args.limit, args.workers)
    print(result)
    print(result.summary().to_string(index=False))
    JsonSaver(args.output, args.note).save(census_to_dict(result), 'census',
                                           label(args.graph))
    return OK


def realize_graph(args) -> int:
    g = graph_argument(args.graph)
    if args.scheme:
        s = load_scheme(args.scheme, g)
    else:
        s = one_face_embedding(g)
    r = realize(g, s)
    report = verify_realization(r, args.samples, args.seed, args.tolerance)
    name = label(args.graph)
    JsonSaver(args.output, args.note).save(
        {'realization': realization_to_dict(r),
         'report': report_to_dict(report)}, 'realize', name)
    SvgSaver(args.output, args.note).save(polygon_svg(r), 'realize', name)
    print(r)
    if report.area is not None:
        print(f'area: {report.area:.12f}')
    print(f'verification passed: {report.passed}')
    if not report.passed:
        print(report.table()[~report.table()['passed']].to_string(
            index=False))
        return UNVERIFIED
    return OK


def torus_from(args) -> FlatTorus:
    bump = Bump(tuple(args.bump[:2]), *args.bump[2:]) if args.bump else None
    return LATTICES[args.lattice](bump)


def torus_voronoi(args) -> int:
    t = torus_from(args)
    cl = torus_voronoi_cutlocus(t, args.x)
    return _report_cut_locus(args, t, cl, 'voronoi')


def torus_field(args) -> int:
    t = torus_from(args)
    f = bump_distance_field(t, args.x, args.resolution,
                            args.tolerance or SWEEP_TOLERANCE)
    FieldSaver(args.output, args.note).save(f, 'field', args.lattice)
    cl = extract_cut_locus(f)
    return _report_cut_locus(args, t, cl, 'field')


def _report_cut_locus(args, t, cl, what: str) -> int:
    print(cl)
    print(f'vertices {cl.graph.n} edges {cl.graph.m} degrees '
          f'{list(cl.profile)} q={cl.q} length={cl.total_length:.6f}')
    if cl.ridges:
        print(f'ridges {len(cl.ridges)} arcs off the cyclic part')
    for note in cl.notes:
        print(f'note: {note}')
    JsonSaver(args.output, args.note).save(cut_locus_to_dict(cl), what,
                                           args.lattice)
    SvgSaver(args.output, args.note).save(cut_locus_svg(cl, t), what,
                                          args.lattice)
    return OK


def torus_scan(args) -> int:
    t = torus_from(args)
    x0, y0, x1, y1, count = args.path
    path = np.column_stack([np.linspace(x0, x1, int(count)),
                            np.linspace(y0, y1, int(count))])
    report = stability_scan(t, path, resolution=args.resolution,
                            tolerance=args.tolerance or TRANSITION_TOLERANCE)
    print(report)
    print(report.table[['x', 'y', 'profile', 'q', 'confident']].to_string(
        index=False))
    for transition in report.transitions:
        where = ('' if transition.position is None
                 else f' at arclength {transition.position:.6f}')
        print(f'transition {list(transition.before)} -> '
              f'{list(transition.after)}{where}')
    for note in report.notes:
        print(f'note: {note}')
    JsonSaver(args.output, args.note).save(scan_to_dict(report), 'scan',
                                           args.lattice)
    return OK


def resolve_cubic(args) -> int:
    g = graph_argument(args.graph)
    s = load_scheme(args.scheme, g) if args.scheme else None
    resolution = cubic_resolution(g, s)
    data = {'graph': graph_to_dict(resolution.graph),
            'vertex_map': resolution.vertex_map,
            'inserted': resolution.inserted}
    if resolution.scheme is not None:
        data['scheme'] = scheme_to_dict(resolution.scheme)
    print(f'{resolution.graph}: {len(resolution.inserted)} edges inserted')
    JsonSaver(args.output, args.note).save(data, 'cubic', label(args.graph))
    return OK


### parser ###


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', default=None,
                        help='folder for results, default ~/cutlocus_data/'
                             'output')
    common.add_argument('--note', default='', help='added to file names')

    parser = argparse.ArgumentParser(
        prog='cutlocus', description='Multigraphs as cut loci.')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('analyze', parents=[common],
                            help='cyclic part, q, degrees, stability class')
    p.add_argument('graph')
    p.set_defaults(func=analyze)

    p = commands.add_parser('strip', parents=[common],
                            help='one-face embedding scheme')
    p.add_argument('graph')
    p.set_defaults(func=strip)

    p = commands.add_parser('census', parents=[common],
                            help='all cut-locus structures on a small graph')
    p.add_argument('graph')
    p.add_argument('--limit', type=int, default=CENSUS_LIMIT)
    p.add_argument('--workers', type=int, default=CENSUS_WORKERS)
    p.set_defaults(func=census)

    p = commands.add_parser('realize', parents=[common],
                            help='constant curvature polygon and its checks')
    p.add_argument('graph')
    p.add_argument('--scheme', help='scheme JSON, default one_face_embedding')
    p.add_argument('--samples', type=int, default=DEFAULT_SAMPLES)
    p.add_argument('--seed', type=int, default=DEFAULT_SEED)
    p.add_argument('--tolerance', type=float, default=None)
    p.set_defaults(func=realize_graph)

    p = commands.add_parser('resolve-cubic', parents=[common],
                            help='blow vertices up into a cubic graph')
    p.add_argument('graph')
    p.add_argument('--scheme', help='scheme JSON to carry along')
    p.set_defaults(func=resolve_cubic)

    torus = argparse.ArgumentParser(add_help=False, parents=[common])
    torus.add_argument('--lattice', choices=sorted(LATTICES),
                       default='square')
    torus.add_argument('--bump', type=floats(4), default=None,
                       help='cx,cy,radius,height')
    torus.add_argument('--resolution', type=int, default=DEFAULT_RESOLUTION)
    torus.add_argument('--tolerance', type=float, default=None,
                       help='sweep tolerance for field, transition bracket '
                            'as a fraction of the path for scan')
    p = commands.add_parser('torus', help='cut loci on flat tori')
    kinds = p.add_subparsers(dest='kind', required=True)
    q = kinds.add_parser('voronoi', parents=[torus])
    q.add_argument('--x', type=floats(2), default=[0.0, 0.0])
    q.set_defaults(func=torus_voronoi)
    q = kinds.add_parser('field', parents=[torus])
    q.add_argument('--x', type=floats(2), default=[0.0, 0.0])
    q.set_defaults(func=torus_field)
    q = kinds.add_parser('scan', parents=[torus])
    q.add_argument('--path', type=floats(5), default=[0, 0, 0.3, 0, 7],
                   help='x0,y0,x1,y1,count')
    q.set_defaults(func=torus_scan)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return OK if error.code == 0 else FAILED
    try:
        return args.func(args)
    except DOMAIN_ERRORS as error:
        log.error(f'{args.command}: {error}')
        print(f'error: {error}', file=sys.stderr)
        return FAILED


def main() -> None:
    logger('cutlocus', INFO if '-v' in sys.argv else WARNING)
    sys.exit(run([a for a in sys.argv[1:] if a != '-v']))


if __name__ == '__main__':
    main()
