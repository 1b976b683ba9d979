"""
The acceptance suite run by ``anosov-limits verify``: property checks at
desk scale on a Fuchsian preset (the symmetric square of the (2,3,7)
triangle group), a deformed reflection preset ((3,3,4), t = 2) and the
scenario's own preset.

Each check returns (passed, detail); detail is a JSON-ready dict of the
numbers the verdict was decided on.
"""

import collections
import functools
import os
import shutil
import tempfile

import numpy as np
import scipy.integrate
import scipy.linalg

from .common import AnosovLimitsException, logger
from .matrixcore import SpdPoint, unimodular_scaling
from .boundary import (
    Flag, BoundaryPoint, attracting_flags, chordal_distances, flag_distance,
    opposite_involution, pairwise_oppositeness)
from .symspace import busemann_iwasawa, busemann_oracle, distance, angle_in_flat
from .hilbert import (
    NotOnBoundary, boundary_with_flags, conic_fit_residual, hilbert_translation_length, tangent_flag_angles)
from .groups.words import NonDiscreteSuspected, enumerate_ball
from .groups.presets import preset_fuchsian_triangle, preset_reflection_deformation, preset_near_identity
from .groups.projections import jordan_projection, is_positively_biproximal, minimal_displacement, qi_constants
from .groups.cone import limit_cone
from .groups.ballcache import write_ball_cache
from .classifier import chamber_targets, is_horospherical, power_sequence, radial_direction_probe, sample_elements
from .scenario import build_presentation


Criterion = collections.namedtuple('Criterion', ['number', 'name', 'description'])
Outcome = collections.namedtuple('Outcome', ['number', 'name', 'passed', 'detail'])

ACCEPTANCE_RADIUS = 8
# the deformed boundary and limit cone need a denser sample
DENSE_RADIUS = 10
# boundary flags are also moved by the words up to this length
MOVER_LENGTH = 2
CONTROL_RADIUS = 6
# fixed points of far elements carry rounding of this relative size
DENSE_BOUNDARY_TOL = 1e-6
DEFORMATION = 2.0

CRITERIA = [
    Criterion(1, 'metric-convention', "d(o, g.o) from the Cartan vector matches geodesic quadrature within 1e-6 on 50 random g"),
    Criterion(2, 'busemann', "closed-form and direct Busemann values agree within 1e-6 on 200 regular pairs; 1-Lipschitz with slack 1e-7"),
    Criterion(3, 'jordan-cartan-laws', "lambda(g^n) = n lambda(g), lambda(g^-1) = iota lambda(g), |lambda(g)| = minimal displacement"),
    Criterion(4, 'fuchsian-locus', "Sym2(2,3,7): biproximal hyperbolic elements, cone width < 1e-3 at angle 0, conic boundary"),
    Criterion(5, 'deformed-locus', "reflection t = 2 at radius 10: cone width > 1e-2, largest gap < 20% of width, iota asymmetry < 0.02"),
    Criterion(6, 'oppositeness', "attracting flags with separated fixed points are pairwise opposite, scores scaled by separation^2"),
    Criterion(7, 'circle-structure', "fixed point -> flag is injective and V2 stays within 1e-3 of the secant wedge of the boundary"),
    Criterion(8, 'hilbert-translation', "Hilbert translation length equals half log(lambda1 / lambda3) within 1e-4 on 30 elements"),
    Criterion(9, 'radial-uniqueness', "one passing radial cell per chamber, at the lambda direction; off-direction cells grow"),
    Criterion(10, 'horosphericality', "every cone direction of a sampled chamber is horospherical at depth 5"),
    Criterion(11, 'qi-embedding', "A_lower > 0 on both presets and the scenario; near-identity control fails"),
    Criterion(12, 'determinism', "enumerating the scenario twice writes byte-identical caches"),
]


def random_unimodular(rng, d=3, spread=0.7):
    return unimodular_scaling(np.identity(d) + spread * rng.standard_normal((d, d)))


def random_regular_point(rng, d=3):
    u = np.sort(rng.standard_normal(d))[::-1]
    u -= u.mean()
    u /= np.linalg.norm(u)
    return BoundaryPoint(Flag(rng.standard_normal((d, d))), u)


def geodesic_length(g, step=1e-5):
    """
    length of the geodesic from o to g.o by quadrature of the speed
    1/2 |x^-1 x'|, with x' taken by central differences
    """
    x = g @ g.T
    log_x = scipy.linalg.logm(x).real
    log_x = (log_x + log_x.T) / 2.0

    def speed(t):
        here = scipy.linalg.expm(t * log_x)
        rate = (scipy.linalg.expm((t + step) * log_x) - scipy.linalg.expm((t - step) * log_x)) / (2.0 * step)
        m = np.linalg.solve(here, rate)
        return 0.5 * np.sqrt(max(float(np.trace(m @ m)), 0.0))

    value, _ = scipy.integrate.quad(speed, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=200)
    return value


class Workbench:
    """
    Balls and derived data shared by the checks, built on first use.
    """

    def __init__(self, scenario, mapper=map):
        self.scenario = scenario
        self.mapper = mapper

    def rng(self, number):
        return np.random.default_rng(self.scenario.seed + 1000 * number)

    @functools.cached_property
    def fuchsian(self):
        return preset_fuchsian_triangle(2, 3, 7).sym2()

    @functools.cached_property
    def deformed(self):
        return preset_reflection_deformation(3, 3, 4, DEFORMATION)

    @functools.cached_property
    def fuchsian_ball(self):
        return enumerate_ball(self.fuchsian, ACCEPTANCE_RADIUS, self.scenario['tol.dedupe'])

    @functools.cached_property
    def deformed_ball(self):
        return enumerate_ball(self.deformed, ACCEPTANCE_RADIUS, self.scenario['tol.dedupe'])

    @functools.cached_property
    def dense_ball(self):
        return enumerate_ball(self.deformed, DENSE_RADIUS, self.scenario['tol.dedupe'])

    @functools.cached_property
    def deformed_flags(self):
        return [f for _, f in attracting_flags(self.deformed_ball, self.scenario['tol.proximal'])]

    @functools.cached_property
    def deformed_boundary(self):
        "the radius-10 boundary, densified by the images of its flags under short words"
        movers = [e for e in self.dense_ball if len(e.word) <= MOVER_LENGTH]
        return boundary_with_flags(self.dense_ball, self.scenario['tol.proximal'], DENSE_BOUNDARY_TOL, movers)

    @functools.cached_property
    def subject(self):
        return build_presentation(self.scenario)

    def subject_is_builtin(self):
        digest = self.subject.digest()
        return self.scenario.radius == ACCEPTANCE_RADIUS and digest in (self.fuchsian.digest(), self.deformed.digest())

    def sample(self, ball, count, number, min_norm=None):
        if min_norm is None:
            min_norm = self.scenario['cone.min_norm']
        return sample_elements(ball, count, min_norm, self.scenario.seed + number, self.scenario['tol.proximal'])


def check_metric_convention(bench):
    rng = bench.rng(1)
    o = SpdPoint.basepoint(3)
    worst = 0.0
    for _ in range(50):
        g = random_unimodular(rng)
        worst = max(worst, abs(distance(o, SpdPoint.from_factor(g)) - geodesic_length(g)))
    return worst < 1e-6, {'max_error': worst}


def check_busemann(bench):
    rng = bench.rng(2)
    worst = 0.0
    lipschitz = -np.inf
    for _ in range(200):
        xi = random_regular_point(rng)
        x = SpdPoint.from_factor(random_unimodular(rng))
        y = SpdPoint.from_factor(random_unimodular(rng))
        bx = busemann_iwasawa(xi, x)
        worst = max(worst, abs(bx - busemann_oracle(xi, x).value))
        lipschitz = max(lipschitz, abs(bx - busemann_iwasawa(xi, y)) - distance(x, y))
    return worst < 1e-6 and lipschitz <= 1e-7, {'max_error': worst, 'lipschitz_excess': float(lipschitz)}


def check_jordan_cartan_laws(bench):
    elements = bench.sample(bench.deformed_ball, 30, 3)
    power_err = inverse_err = 0.0
    for e in elements:
        lam = e.jordan.coords
        for n in range(1, 6):
            power_err = max(power_err, float(np.max(np.abs(jordan_projection(e.power(n)).coords - n * lam))) / n)
        inv = e.inverse().jordan
        scale = max(1.0, float(np.max(np.abs(lam))))
        inverse_err = max(inverse_err, float(np.max(np.abs(inv.coords - opposite_involution(e.jordan).coords))) / scale)
    displacement_err = 0.0
    for e in elements[:10]:
        displacement_err = max(displacement_err, abs(minimal_displacement(e.matrix) - e.jordan.norm()))
    passed = bool(elements) and power_err < 1e-7 and inverse_err < 1e-9 and displacement_err < 1e-4
    return passed, {
        'elements': len(elements),
        'power_error': power_err,
        'inverse_error': inverse_err,
        'displacement_error': displacement_err,
    }


def check_fuchsian_locus(bench):
    ball = bench.fuchsian_ball
    min_norm = bench.scenario['cone.min_norm']
    hyperbolic = [e for e in ball if e.jordan.norm() >= min_norm]
    failures = sum(1 for e in hyperbolic if not is_positively_biproximal(e, bench.scenario['tol.proximal']))
    cone = limit_cone(ball, min_norm)
    omega, _ = boundary_with_flags(ball, bench.scenario['tol.proximal'])
    residual = conic_fit_residual(omega)
    centred = max(abs(cone.interval[0]), abs(cone.interval[1]))
    passed = bool(hyperbolic) and failures == 0 and cone.width < 1e-3 and centred < 1e-3 and residual < 1e-5
    return passed, {
        'hyperbolic_elements': len(hyperbolic),
        'not_biproximal': failures,
        'cone_width': cone.width,
        'cone_offset': centred,
        'conic_residual': residual,
    }


def check_deformed_locus(bench):
    cone = limit_cone(bench.dense_ball, bench.scenario['cone.min_norm'])
    passed = cone.width > 1e-2 and cone.max_gap < 0.2 * cone.width and cone.iota_asymmetry < 0.02
    return passed, cone.to_dict()


def check_oppositeness(bench):
    flags = bench.deformed_flags
    tested, lowest, violations = pairwise_oppositeness(flags, 1e-6, 1e-3, scaled=True)
    return tested > 0 and violations == 0, {'flags': len(flags), 'pairs_tested': tested, 'min_scaled_score': lowest, 'violations': violations}


def check_circle_structure(bench):
    omega, flags = bench.deformed_boundary
    rng = bench.rng(7)
    if len(flags) > 150:
        flags = [flags[i] for i in np.sort(rng.choice(len(flags), size=150, replace=False))]
    separation = chordal_distances([f.basis[:, 0] for f in flags])
    collisions = 0
    for i in range(len(flags)):
        for j in range(i + 1, len(flags)):
            if separation[i, j] >= 1e-6 and flag_distance(flags[i], flags[j]) <= 1e-8:
                collisions += 1
    angles, wedges = [], []
    for f in flags:
        try:
            angle, wedge = tangent_flag_angles(omega, f)
        except NotOnBoundary:
            continue
        angles.append(angle)
        wedges.append(wedge)
    excess = max(a - w for a, w in zip(angles, wedges)) if angles else None
    passed = collisions == 0 and bool(angles) and excess < 1e-3
    return passed, {
        'flags': len(flags),
        'boundary_vertices': omega.size,
        'collisions': collisions,
        'tangents_checked': len(angles),
        'max_tangent_angle': max(angles) if angles else None,
        'median_wedge': float(np.median(wedges)) if wedges else None,
        'max_excess': excess,
    }


def check_hilbert_translation(bench):
    omega, _ = bench.deformed_boundary
    worst = 0.0
    elements = bench.sample(bench.deformed_ball, 30, 8)
    for e in elements:
        moduli = np.sort(np.abs(np.linalg.eigvals(e.matrix)))[::-1]
        expected = 0.5 * np.log(moduli[0] / moduli[-1])
        worst = max(worst, abs(hilbert_translation_length(omega, e.matrix) - expected))
    return bool(elements) and worst < 1e-4, {'elements': len(elements), 'max_error': float(worst)}


def check_radial_uniqueness(bench):
    s = bench.scenario
    step = s['classify.grid_step']
    chambers = failures = 0
    for number, ball in ((9, bench.fuchsian_ball), (90, bench.deformed_ball)):
        for g in bench.sample(ball, 10, number, s['classify.min_norm']):
            probe = radial_direction_probe(g, grid_step=step, n_max=s['classify.n_max'],
                                           max_orbit_distance=s['classify.max_orbit_distance'], mapper=bench.mapper)
            chambers += 1
            located = len(probe.passing) == 1 and abs(probe.passing[0] - probe.lambda_angle) <= step
            spread = all(c.growth_rate > 0.05 for c in probe.profile if abs(c.angle - probe.lambda_angle) > 0.1)
            if not (located and spread):
                failures += 1
                logger.debug("radial probe failed for %r: passing %r, lambda at %.4f" % (g, probe.passing, probe.lambda_angle))
    return chambers > 0 and failures == 0, {'chambers': chambers, 'failures': failures}


def check_horosphericality(bench):
    s = bench.scenario
    targets = failures = 0
    wide_angle = 0
    for number, ball in ((10, bench.fuchsian_ball), (100, bench.deformed_ball)):
        cone = limit_cone(ball, s['cone.min_norm'])
        for g in bench.sample(ball, 10, number, s['classify.min_norm']):
            seq = power_sequence(g, s['classify.n_max'], s['classify.max_orbit_distance'])
            lam = g.jordan.unit().coords
            for _, xi in chamber_targets(g, cone.interval, s['classify.grid_step']):
                targets += 1
                if angle_in_flat(xi.expanded(), lam) > np.pi / 3.0 + 1e-9:
                    wide_angle += 1
                if not is_horospherical(seq, xi, s['classify.depth'])[0]:
                    failures += 1
    return targets > 0 and failures == 0 and wide_angle == 0, {'targets': targets, 'failures': failures, 'wide_angle_pairs': wide_angle}


def _qi(ball, floor):
    try:
        qi = qi_constants(ball, floor=floor)
    except AnosovLimitsException as e:
        return False, {'error': str(e)}
    return qi.quasi_isometric, qi._asdict()


def check_qi_embedding(bench):
    floor = bench.scenario['qi.floor']
    detail = {}
    passed = True
    for name, ball in (('fuchsian', bench.fuchsian_ball), ('deformed', bench.deformed_ball)):
        ok, detail[name] = _qi(ball, floor)
        passed = passed and ok and detail[name].get('A_lower', 0.0) > 0
    try:
        control = qi_constants(enumerate_ball(preset_near_identity(), CONTROL_RADIUS), floor=floor)
        detail['control'] = control._asdict()
        passed = passed and control.A_lower < 0.05 and not control.quasi_isometric
    except NonDiscreteSuspected as e:
        detail['control'] = {'error': str(e)}
    if not bench.subject_is_builtin():
        try:
            ball = enumerate_ball(bench.subject, bench.scenario.radius, bench.scenario['tol.dedupe'])
            ok, detail['scenario'] = _qi(ball, floor)
        except AnosovLimitsException as e:
            ok, detail['scenario'] = False, {'error': str(e)}
        passed = passed and ok
    return bool(passed), detail


def check_determinism(bench):
    tmpdir = tempfile.mkdtemp()
    try:
        contents = []
        for name in ('first.txt', 'second.txt'):
            path = os.path.join(tmpdir, name)
            ball = enumerate_ball(bench.subject, bench.scenario.radius, bench.scenario['tol.dedupe'])
            write_ball_cache(path, bench.subject, bench.scenario.radius, ball)
            with open(path, 'rb') as fd:
                contents.append(fd.read())
    finally:
        shutil.rmtree(tmpdir)
    return contents[0] == contents[1], {'bytes': len(contents[0])}


CHECKS = {
    1: check_metric_convention,
    2: check_busemann,
    3: check_jordan_cartan_laws,
    4: check_fuchsian_locus,
    5: check_deformed_locus,
    6: check_oppositeness,
    7: check_circle_structure,
    8: check_hilbert_translation,
    9: check_radial_uniqueness,
    10: check_horosphericality,
    11: check_qi_embedding,
    12: check_determinism,
}


def run_acceptance(scenario, report, mapper=map, only=None):
    """
    run the criteria (all, or the numbers in ``only``); a check raising a
    numerical error fails its criterion and the suite carries on
    """
    bench = Workbench(scenario, mapper)
    outcomes = []
    for criterion in CRITERIA:
        if only is not None and criterion.number not in only:
            continue
        try:
            passed, detail = CHECKS[criterion.number](bench)
        except AnosovLimitsException as e:
            passed, detail = False, {'error': "%s: %s" % (type(e).__name__, e)}
        outcome = Outcome(criterion.number, criterion.name, bool(passed), detail)
        report.criterion_checked(*outcome)
        logger.info("criterion %d (%s): %s" % (criterion.number, criterion.name, "PASS" if passed else "FAIL"))
        outcomes.append(outcome)
    return outcomes


def print_criteria():
    for c in CRITERIA:
        print("%2d  %-20s %s" % c)


def print_table(outcomes):
    print("%2s  %-20s %s" % ("#", "criterion", "result"))
    for o in outcomes:
        print("%2d  %-20s %s" % (o.number, o.name, "PASS" if o.passed else "FAIL"))
