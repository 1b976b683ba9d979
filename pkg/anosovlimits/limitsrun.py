#!/usr/bin/env python3

import argparse
import concurrent.futures
import contextlib
import csv
import json
import logging
import os
import sys

from .common import AnosovLimitsException, logger
from .boundary import pairwise_oppositeness
from .hilbert import boundary_with_flags, conic_fit_residual, write_boundary_csv, write_boundary_svg
from .groups.words import enumerate_ball
from .groups.utils import format_word
from .groups.cone import limit_cone
from .groups.ballcache import cache_directory, cache_path, write_ball_cache, read_ball_cache
from .classifier import (
    power_sequence, chamber_targets, classify_target, report_to_json,
    radial_direction_probe, sample_elements)
from .scenario import ConfigError, read_scenario, build_presentation
from .results import JSONRunReport, OppositenessStats, ChamberDigest
from . import acceptance


# fixed points closer than this are treated as the same point of the boundary
FIXED_POINT_SEPARATION = 1e-3

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4


def _real(x):
    return "%.17g" % (x)


def load_ball(scenario, presentation, out_dir, report, rebuild=False):
    """
    the ball of the scenario's radius, from the cache when a matching one
    exists; enumerated (and cached, if requested) otherwise
    """
    directory = cache_directory(os.path.join(out_dir, 'cache'))
    path = cache_path(directory, presentation, scenario.radius)
    if not rebuild and os.path.exists(path):
        header, elements = read_ball_cache(path)
        if header['preset'] == presentation.descriptor() and header['radius'] == scenario.radius:
            logger.info("read %d elements from ball cache `%s'" % (len(elements), path))
            report.ball_ready(len(elements), 'cache')
            report.output_written('cache', path)
            return elements
        logger.warning("ball cache `%s' belongs to another scenario, enumerating again" % (path))
    elements = enumerate_ball(presentation, scenario.radius, dedupe_tol=scenario['tol.dedupe'])
    report.ball_ready(len(elements), 'enumerated')
    if rebuild or scenario.wants('cache'):
        os.makedirs(directory, exist_ok=True)
        write_ball_cache(path, presentation, scenario.radius, elements)
        report.output_written('cache', path)
    return elements


def write_json(path, obj):
    with open(path, 'w', newline='\n') as fd:
        json.dump(obj, fd, indent=2, sort_keys=True)
        fd.write('\n')


def write_cone_csv(summary, path):
    "angle, norm, word; sorted by angle, then word"
    rows = sorted(zip(summary.angles, summary.samples), key=lambda t: (t[0], t[1].word))
    with open(path, 'w', newline='') as fd:
        w = csv.writer(fd, lineterminator='\n')
        w.writerow(['angle', 'norm', 'word'])
        for angle, sample in rows:
            w.writerow([_real(angle), _real(sample.norm), sample.word])


def cmd_enumerate(scenario, out_dir, report, mapper):
    elements = load_ball(scenario, build_presentation(scenario), out_dir, report, rebuild=True)
    print("element_count %d" % (len(elements)))
    return True


def cmd_limit_cone(scenario, out_dir, report, mapper):
    elements = load_ball(scenario, build_presentation(scenario), out_dir, report)
    summary = limit_cone(elements, min_norm=scenario['cone.min_norm'])
    report.cone_computed(summary)
    logger.info("limit cone: %d samples, interval [%.6f, %.6f], iota asymmetry %.3g" % (
        len(summary.samples), summary.interval[0], summary.interval[1], summary.iota_asymmetry))
    if scenario.wants('csv'):
        path = os.path.join(out_dir, 'cone.csv')
        write_cone_csv(summary, path)
        report.output_written('csv', path)
    if scenario.wants('json'):
        path = os.path.join(out_dir, 'cone.json')
        obj = summary.to_dict()
        obj['element_count'] = len(elements)
        obj['scenario'] = scenario.echo()
        write_json(path, obj)
        report.output_written('json', path)
    if scenario.wants('png'):
        from .plotting import plot_cone
        path = os.path.join(out_dir, 'cone.png')
        plot_cone(summary, path)
        report.output_written('png', path)
    return True


def cmd_boundary(scenario, out_dir, report, mapper):
    presentation = build_presentation(scenario)
    if presentation.dim != 3:
        raise AnosovLimitsException("boundary curves are drawn for d = 3, the preset has d = %d" % (presentation.dim))
    elements = load_ball(scenario, presentation, out_dir, report)
    omega, flags = boundary_with_flags(elements, scenario['tol.proximal'])
    residual = conic_fit_residual(omega)
    threshold = scenario['tol.opposite']
    tested, lowest, violations = pairwise_oppositeness(flags, threshold, FIXED_POINT_SEPARATION, scaled=True)
    stats = OppositenessStats(len(flags), tested, lowest, violations, threshold)
    report.boundary_computed(residual, stats)
    logger.info("boundary: %d vertices, conic residual %.3g, %d of %d flag pairs fail oppositeness" % (
        omega.size, residual, violations, tested))
    if scenario.wants('csv'):
        path = os.path.join(out_dir, 'boundary.csv')
        write_boundary_csv(omega, path)
        report.output_written('csv', path)
    if scenario.wants('svg'):
        path = os.path.join(out_dir, 'boundary.svg')
        write_boundary_svg(omega, path)
        report.output_written('svg', path)
    if scenario.wants('json'):
        path = os.path.join(out_dir, 'boundary.json')
        write_json(path, {
            'vertices': omega.size,
            'conic_residual': residual,
            'oppositeness': stats.to_dict(),
            'scenario': scenario.echo(),
        })
        report.output_written('json', path)
    if scenario.wants('png'):
        from .plotting import plot_boundary
        path = os.path.join(out_dir, 'boundary.png')
        plot_boundary(omega, [f.basis[:, 0] for f in flags], path)
        report.output_written('png', path)
    return True


def classify_chamber(job):
    """
    classify every target of one chamber against the powers of its element;
    returns (JSON objects, ChamberDigest)
    """
    g, interval, settings, echo = job
    step = settings['classify.grid_step']
    n_max = settings['classify.n_max']
    reach = settings['classify.max_orbit_distance']
    probe = radial_direction_probe(g, grid_step=step, n_max=n_max, max_orbit_distance=reach)
    seq = power_sequence(g, n_max, reach)
    objs = []
    horospherical = radial = 0
    targets = chamber_targets(g, interval, step)
    for angle, xi in targets:
        report = classify_target(seq, xi, depth=settings['classify.depth'])
        horospherical += report.horospherical
        radial += report.radial
        obj = report_to_json(report, config=echo)
        obj['chamber'] = format_word(g.word)
        obj['angle'] = angle
        objs.append(obj)
    digest = ChamberDigest(format_word(g.word), probe.lambda_angle, probe.best_direction, probe.passing,
                           probe.below_threshold, len(targets), horospherical, radial)
    return objs, digest


def cmd_classify(scenario, out_dir, report, mapper):
    elements = load_ball(scenario, build_presentation(scenario), out_dir, report)
    summary = limit_cone(elements, min_norm=scenario['cone.min_norm'])
    report.cone_computed(summary)
    chosen = sample_elements(elements, scenario['classify.elements'], scenario['classify.min_norm'],
                             scenario.seed, scenario['tol.proximal'])
    if not chosen:
        logger.warning("no element qualifies as a chamber for classification")
    echo = scenario.echo()
    jobs = [(g, summary.interval, scenario.settings, echo) for g in chosen]
    stream = os.path.join(out_dir, 'classify.jsonl')
    digests = []
    with open(stream, 'w', newline='\n') as fd:
        for objs, digest in mapper(classify_chamber, jobs):
            for obj in objs:
                fd.write(json.dumps(obj, sort_keys=True) + '\n')
            report.chamber_classified(digest)
            digests.append(digest.to_dict())
            logger.info("chamber %s: %d radial cells, %d/%d targets horospherical" % (
                digest.word, len(digest.radial_cells), digest.horospherical, digest.targets))
    report.output_written('classification', stream)
    if scenario.wants('json'):
        path = os.path.join(out_dir, 'classify-digest.json')
        write_json(path, {'chambers': digests, 'interval': list(summary.interval), 'scenario': echo})
        report.output_written('json', path)
    return True


def cmd_verify(scenario, out_dir, report, mapper):
    outcomes = acceptance.run_acceptance(scenario, report, mapper)
    acceptance.print_table(outcomes)
    path = os.path.join(out_dir, 'verify.json')
    write_json(path, [o._asdict() for o in outcomes])
    report.output_written('verify', path)
    failed = [o.number for o in outcomes if not o.passed]
    if failed:
        logger.error("** ACCEPTANCE FAILED: criteria %s **" % (", ".join(str(t) for t in failed)))
    return not failed


COMMANDS = {
    'enumerate': cmd_enumerate,
    'limit-cone': cmd_limit_cone,
    'boundary': cmd_boundary,
    'classify': cmd_classify,
    'verify': cmd_verify,
}


@contextlib.contextmanager
def worker_pool(workers):
    "an ordered map over ``workers`` processes; the builtin map for one worker"
    if workers is None or workers <= 1:
        yield map
        return
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
        yield executor.map


def parse_args(argv=None):
    parser = argparse.ArgumentParser(prog='anosov-limits')
    parser.add_argument(
        '-q', '--quiet',
        action='store_true', help="Disable informational output")
    parser.add_argument(
        '-v', '--verbose',
        action='store_true', help="Enable debug output")
    parser.add_argument(
        'command',
        choices=sorted(COMMANDS), help="Pipeline stage to run")
    parser.add_argument(
        '--config',
        type=str, help="Scenario file")
    parser.add_argument(
        '--radius',
        type=int, help="Override ball.radius")
    parser.add_argument(
        '--seed',
        type=int, help="Override run.seed")
    parser.add_argument(
        '--out',
        type=str, default='.', help="Output directory")
    parser.add_argument(
        '--workers',
        type=int, default=os.cpu_count() or 1, help="Worker processes")
    parser.add_argument(
        '--list',
        action='store_true', help="List the acceptance criteria and exit")
    args = parser.parse_args(argv)
    if args.config is None and not args.list:
        parser.error("--config is required")
    return args


def execute(args):
    "run one command; returns the process exit code"
    if args.list:
        acceptance.print_criteria()
        return EXIT_OK
    try:
        try:
            scenario = read_scenario(args.config)
        except OSError as e:
            raise ConfigError("cannot read scenario: %s" % (e))
        scenario = scenario.override(radius=args.radius, seed=args.seed)
        os.makedirs(args.out, exist_ok=True)
        report = JSONRunReport(os.path.join(args.out, 'run-%s.json' % (args.command)))
        report.started(args.command, scenario)
        with worker_pool(args.workers) as mapper:
            ok = COMMANDS[args.command](scenario, args.out, report, mapper)
        report.finished()
    except ConfigError as e:
        logger.error("configuration error: %s" % (e))
        return EXIT_CONFIG
    except AnosovLimitsException as e:
        logger.error("%s: %s" % (type(e).__name__, e))
        return EXIT_NUMERICAL
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def main(argv=None):
    args = parse_args(argv)
    if args.quiet:
        logger.setLevel(logging.ERROR)
    elif args.verbose:
        logger.setLevel(logging.DEBUG)
    sys.exit(execute(args))


if __name__ == '__main__':
    main()
