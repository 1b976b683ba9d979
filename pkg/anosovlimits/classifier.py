"""
Numerical classification of boundary points against orbit sequences.

A regular boundary point xi is tested against a sequence of group elements
gamma_n acting on a base point:

    radial:         gamma_n.o stays near the ray toward xi (bounded
                    distance to its Weyl chamber, sublinear drift)
    horospherical:  the Busemann function of xi tends to -infinity along
                    gamma_n.o
    conical:        on the boundary of a divisible convex domain, translates
                    of (probe, point) pairs stay off the diagonal

Finite data never decides these properties; each test reports the numbers
it was decided on next to the verdict.
"""

import collections
import math

import numpy as np

from .common import AnosovLimitsException, logger
from .matrixcore import SpdPoint
from .boundary import (
    NotRegular, attracting_flag, boundary_point_from_direction, chamber_angle,
    direction_at_angle)
from .symspace import (
    GeodesicRay, Flat, WeylChamberSet, busemann, distance, dist_to_chamber,
    dist_to_ray)
from .hilbert import NotOnBoundary, DegenerateHull, ProjPoint
from .groups.words import GroupElement
from .groups.projections import is_positively_biproximal
from .groups.utils import shortlex_key


RADIAL_GROWTH_LIMIT = 0.05
UNBOUNDED_SPAN = 4.0
DEFAULT_DEPTH = 5.0
MONOTONE_SLACK = 1e-6
# relative gap below which two orbit distances count as equal
TIE_TOL = 1e-12
CONICAL_FLOOR = 1e-3
# directions closer than this to a wall are not probed
WALL_MARGIN = 1e-3

ProbeCell = collections.namedtuple('ProbeCell', ['angle', 'sup_dist', 'growth_rate'])

RadialProbe = collections.namedtuple(
    'RadialProbe', ['best_direction', 'profile', 'passing', 'below_threshold', 'lambda_angle'])

ConicalReport = collections.namedtuple('ConicalReport', ['verdict', 'min_separation'])


class NotIncreasing(AnosovLimitsException):
    pass


class OrbitSequence:
    """
    Group elements applied to a base point, sorted by orbit distance. The
    sorted distances must increase strictly; only elements fixing the base
    point may share a distance (so constant sequences of the identity are
    allowed). The sequence is flagged ``unbounded`` when its orbit distances
    span a factor of at least 4.
    """

    def __init__(self, elements, base=None):
        elements = [e if isinstance(e, GroupElement) else GroupElement(e) for e in elements]
        if not elements:
            raise AnosovLimitsException("an orbit sequence needs at least one element")
        if base is None:
            base = SpdPoint.basepoint(elements[0].dim)
        points = [base.act(e.matrix) for e in elements]
        dists = [distance(x, base) for x in points]
        order = sorted(range(len(elements)), key=lambda i: dists[i])
        self.base = base
        self.elements = [elements[i] for i in order]
        self.points = [points[i] for i in order]
        self.distances = np.array([dists[i] for i in order])
        for i in range(1, len(order)):
            here = self.distances[i]
            if here > TIE_TOL and here - self.distances[i - 1] <= TIE_TOL * here:
                raise NotIncreasing("orbit distance %.12g repeats at sorted positions %d and %d" % (here, i - 1, i))

    @property
    def unbounded(self):
        first, last = self.distances[0], self.distances[-1]
        return bool(last > 0.0 and last >= UNBOUNDED_SPAN * first)

    def act(self, h):
        "the sequence h gamma_n h^-1 applied to h.base"
        h = h if isinstance(h, GroupElement) else GroupElement(h)
        return OrbitSequence([e.conjugate(h) for e in self.elements], self.base.act(h.matrix))

    def __len__(self):
        return len(self.elements)


def power_sequence(g, n_max=64, max_orbit_distance=20.0, base=None):
    """
    the powers g^1 .. g^N, with N at most n_max and N |lambda(g)| at most
    max_orbit_distance
    """
    g = g if isinstance(g, GroupElement) else GroupElement(g)
    ell = g.jordan.norm()
    n = n_max
    if ell > 0.0:
        n = max(1, min(n_max, int(math.floor(max_orbit_distance / ell))))
    return OrbitSequence([g.power(k) for k in range(1, n + 1)], base)


def ball_subsequence(elements, base=None):
    """
    a chain of words in the ball, each extending the last by one letter,
    choosing at every step the extension that moves the base point furthest.
    The chain ends where no extension moves the base point further.
    """
    by_word = dict((e.word, e) for e in elements if e.word)
    if not by_word:
        raise AnosovLimitsException("the ball has no words to chain")
    if base is None:
        base = SpdPoint.basepoint(next(iter(by_word.values())).dim)

    def reach(e):
        return distance(base.act(e.matrix), base)

    def extensions(word):
        return sorted((e for w, e in by_word.items() if len(w) == len(word) + 1 and w[:-1] == word),
                      key=lambda e: shortlex_key(e.word))

    chain = []
    last = 0.0
    candidates = extensions(())
    while candidates:
        best = max(candidates, key=reach)
        step = reach(best)
        if step <= last * (1.0 + TIE_TOL):
            break
        chain.append(best)
        last = step
        candidates = extensions(best.word)
    logger.debug("geodesic word chain of length %d" % (len(chain)))
    return OrbitSequence(chain, base)


def _target_chamber(ray):
    "the closed Weyl chamber from the ray's base that contains the ray"
    return WeylChamberSet(Flat(ray.base.factor))


def _check_regular(xi):
    if not xi.is_regular:
        raise NotRegular("classification needs a regular boundary point")


def radial_score(seq, xi, budget=10000):
    """
    (sup_dist, growth_rate): the largest distance from the orbit to the
    closed Weyl chamber from seq.base toward xi, and the least-squares slope
    of the distance to the ray toward xi against orbit distance, fitted on
    the points at least a quarter of the furthest orbit distance out
    """
    _check_regular(xi)
    ray = GeodesicRay.toward(xi, seq.base)
    chamber = _target_chamber(ray)
    sup_dist = max(dist_to_chamber(x, chamber, budget=budget) for x in seq.points)
    t = seq.distances
    drift = np.array([dist_to_ray(x, ray) for x in seq.points])
    mask = t >= t[-1] / 4.0
    if np.count_nonzero(mask) >= 2 and np.ptp(t[mask]) > 0.0:
        slope = float(np.polyfit(t[mask], drift[mask], 1)[0])
    elif t[-1] > 0.0:
        slope = float(drift[-1] / t[-1])
    else:
        slope = 0.0
    return float(sup_dist), slope


def is_horospherical(seq, xi, depth=DEFAULT_DEPTH, slack=MONOTONE_SLACK):
    """
    (verdict, trace): trace holds the Busemann values of xi along the orbit;
    the verdict needs the trace to end below -depth with its last quarter
    non-increasing up to ``slack``
    """
    if depth <= 0.0:
        raise AnosovLimitsException("horoball depth must be positive")
    trace = [busemann(xi, x) for x in seq.points]
    tail = trace[-max(2, int(math.ceil(len(trace) / 4.0))):]
    monotone = all(b - a <= slack for a, b in zip(tail, tail[1:]))
    return bool(trace[-1] < -depth and monotone), trace


class ClassificationReport:
    """
    The classification of one target against one orbit sequence.
      radial: growth_rate < 0.05 over an unbounded sequence
      horospherical: the Busemann trace goes below -depth, monotonely
    """

    def __init__(self, target, radial_sup, radial_growth_rate, busemann_trace, radial, horospherical):
        self.target = target
        self.radial_sup = radial_sup
        self.radial_growth_rate = radial_growth_rate
        self.busemann_trace = list(busemann_trace)
        self.radial = radial
        self.horospherical = horospherical

    @property
    def verdicts(self):
        return {'radial': self.radial, 'horospherical': self.horospherical}


def classify_target(seq, xi, depth=DEFAULT_DEPTH, budget=10000):
    sup_dist, growth = radial_score(seq, xi, budget)
    horospherical, trace = is_horospherical(seq, xi, depth)
    radial = bool(seq.unbounded and np.isfinite(sup_dist) and growth < RADIAL_GROWTH_LIMIT)
    return ClassificationReport(xi, sup_dist, growth, trace, radial, horospherical)


def report_to_json(report, config=None):
    "one JSON-ready object per target"
    obj = {
        'target_flag': [float(t) for t in report.target.flag.basis.ravel()],
        'target_direction': [float(t) for t in report.target.expanded()],
        'radial_sup': report.radial_sup,
        'growth_rate': report.radial_growth_rate,
        'busemann_trace': [float(t) for t in report.busemann_trace],
        'verdicts': report.verdicts,
    }
    if config is not None:
        obj['config'] = config
    return obj


def chamber_targets(g, interval, step, tol=1e-6):
    """
    (angle, boundary point) pairs on a grid of chamber angles over
    ``interval``, all with the attracting flag of g
    """
    flag = attracting_flag(g.matrix if isinstance(g, GroupElement) else g, tol)
    lo, hi = interval
    edge = np.pi / 6.0 - WALL_MARGIN
    lo, hi = max(lo, -edge), min(hi, edge)
    if hi < lo:
        return []
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    angles = lo + step * np.arange(count)
    return [(float(a), boundary_point_from_direction(flag, direction_at_angle(a))) for a in angles]


def sample_elements(elements, count, min_norm=0.5, seed=0, tol=1e-6):
    """
    up to ``count`` positively biproximal elements with translation length at
    least ``min_norm``, drawn without replacement and kept in ball order
    """
    candidates = [e for e in elements if e.jordan.norm() >= min_norm and is_positively_biproximal(e, tol)]
    if len(candidates) <= count:
        return candidates
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(len(candidates), size=count, replace=False))
    return [candidates[i] for i in picked]


def _probe_cell(args):
    seq, flag, angle, budget = args
    xi = boundary_point_from_direction(flag, direction_at_angle(angle))
    sup_dist, growth = radial_score(seq, xi, budget)
    return ProbeCell(float(angle), sup_dist, growth)


def _passing_cells(profile, threshold):
    "cells below the threshold that are also local minima of the growth profile"
    rates = [c.growth_rate for c in profile]
    passing = []
    for i, rate in enumerate(rates):
        if rate >= threshold:
            continue
        left = rates[i - 1] if i > 0 else np.inf
        right = rates[i + 1] if i + 1 < len(rates) else np.inf
        if rate < left and rate <= right:
            passing.append(i)
    return passing


def radial_direction_probe(g, grid_step=0.02, n_max=64, max_orbit_distance=20.0,
                           threshold=RADIAL_GROWTH_LIMIT, budget=10000, mapper=map, tol=1e-6):
    """
    scans the chamber of the attracting flag of g on a grid of cell centres
    and scores the powers of g against each direction. ``mapper`` may be a
    parallel map; it must return results in order.
    """
    if grid_step > 0.02:
        raise AnosovLimitsException("grid step %g is coarser than 0.02 rad" % (grid_step))
    g = g if isinstance(g, GroupElement) else GroupElement(g)
    flag = attracting_flag(g.matrix, tol)
    seq = power_sequence(g, n_max, max_orbit_distance)
    half = np.pi / 6.0
    count = int(math.ceil(2.0 * half / grid_step))
    centres = -half + (np.arange(count) + 0.5) * (2.0 * half / count)
    profile = list(mapper(_probe_cell, [(seq, flag, a, budget) for a in centres]))
    passing = _passing_cells(profile, threshold)
    below = sum(1 for c in profile if c.growth_rate < threshold)
    best = min(profile, key=lambda c: c.growth_rate).angle
    lambda_angle = chamber_angle(g.jordan.unit().coords)
    logger.debug("radial probe: %d cells, %d below %.3g, %d passing, best %.4f, lambda at %.4f" % (
        len(profile), below, threshold, len(passing), best, lambda_angle))
    return RadialProbe(best, profile, [profile[i].angle for i in passing], below, lambda_angle)


def _probe_points(omega, p_xy, probe_count):
    xy = omega.xy
    far = np.linalg.norm(xy - p_xy[None, :], axis=1) >= 0.05 * np.ptp(xy, axis=0).max()
    idx = np.flatnonzero(far)
    if len(idx) < min(8, probe_count):
        raise DegenerateHull("only %d boundary vertices lie away from the point" % (len(idx)))
    pick = np.unique(np.linspace(0, len(idx) - 1, min(probe_count, len(idx))).astype(int))
    return omega.vertices[idx[pick]]


def conical_on_boundary(elements, p, omega, probe_count=16, floor=CONICAL_FLOOR, tol=1e-6):
    """
    smallest chart distance between gamma.x and gamma.p over the elements and
    boundary probes x away from p; conical when it stays above ``floor``
    """
    p = p if isinstance(p, ProjPoint) else ProjPoint(p)
    chart = omega.chart
    p_xy = chart.to_chart(p.coords)[0]
    if omega.boundary_distance(p_xy)[0] > tol * omega.scale():
        raise NotOnBoundary("point is %.3g from the boundary polyline" % (omega.boundary_distance(p_xy)[0]))
    probes = _probe_points(omega, p_xy, probe_count)
    separation = np.inf
    for e in elements:
        m = e.matrix if isinstance(e, GroupElement) else np.asarray(e, dtype=np.float64)
        moved = chart.to_chart(probes @ m.T)
        moved_p = chart.to_chart(m @ p.coords)[0]
        separation = min(separation, float(np.min(np.linalg.norm(moved - moved_p[None, :], axis=1))))
    return ConicalReport(bool(separation >= floor), separation)
