"""
Geometry of X = SL(d,R)/SO(d): distances, geodesic rays, flats and Weyl
chambers, Busemann functions.

Conventions: a unit symmetric traceless Y gives the unit-speed geodesic
s -> exp(sY).o, i.e. the SPD matrix exp(2sY), so d(o, exp(a).o) = |a|.
Everything is computed from factors: d(g.o, h.o) is the norm of the Cartan
projection of h^-1 g.
"""

import collections
import itertools

import numpy as np
import scipy.linalg
import scipy.optimize

from .common import AnosovLimitsException, logger, ALGEBRAIC_TOL
from .matrixcore import (
    SpdPoint, NotSpd, as_matrix, frozen, cartan_projection,
    check_symmetric_traceless, exterior_power, graded_log_singular_values,
    gram_schmidt_kan)
from .boundary import NotRegular


class NoConvergence(AnosovLimitsException):
    pass


class BudgetExceeded(AnosovLimitsException):
    pass


class NotInChamber(AnosovLimitsException):
    pass


BusemannEstimate = collections.namedtuple(
    'BusemannEstimate', ['value', 'estimate', 'extrapolated'])

# rounding in a log singular value, in units of eps times its magnitude
RESOLUTION_ULPS = 64.0


def _relative(x, y):
    "the matrix y.factor^-1 x.factor, so that d(x, y) = d(result.o, o)"
    if x.dim != y.dim:
        raise NotSpd("points live in dimensions %d and %d" % (x.dim, y.dim))
    return np.linalg.solve(y.factor, x.factor)


def distance(x, y):
    "Riemannian distance for the trace metric"
    return cartan_projection(_relative(x, y)).norm()


class GeodesicRay:
    """
    The unit-speed ray s -> base.factor . exp(sY) . o. ``direction`` is
    expressed in the frame of the base factor; for a base built from a
    matrix that is the symmetric square root, so Y is a tangent vector at
    the base in the usual sense.
    """

    def __init__(self, base, direction, tol=ALGEBRAIC_TOL):
        y = check_symmetric_traceless(direction, tol)
        if abs(np.linalg.norm(y) - 1.0) > tol:
            raise NotSpd("ray direction must have unit norm, got %.17g" % (np.linalg.norm(y)))
        if y.shape[0] != base.dim:
            raise NotSpd("ray direction has the wrong dimension")
        self.base = base
        self.direction = y
        w, q = np.linalg.eigh(y)
        self._eig = (frozen(w), frozen(q))

    @classmethod
    def toward(cls, xi, base=None):
        """
        the ray from ``base`` (default o) asymptotic to the boundary point
        ``xi``; it starts at base and ends at xi
        """
        k = xi.flag.frame()
        h = np.diag(xi.expanded())
        if base is None:
            return cls(SpdPoint.from_factor(k), h)
        # k^T g = N^-1 A^-1 K^T with (k^T g)^-1 = K A N; N^-1 A^-1 lies in the
        # stabiliser of the standard flag and moves o to k^T.base
        kk, a, n = gram_schmidt_kan(np.linalg.inv(k.T @ base.factor))
        upper = scipy.linalg.solve_triangular(n, np.diag(1.0 / np.diag(a)), unit_diagonal=True)
        return cls(SpdPoint.from_factor(k @ upper), h)

    def factor_at(self, s):
        w, q = self._eig
        return self.base.factor @ ((q * np.exp(s * w)) @ q.T)

    def shifted(self, s):
        "the same geodesic started at parameter s"
        return GeodesicRay(SpdPoint.from_factor(self.factor_at(s)), self.direction)

    def distance_from(self, x, s):
        "d(x, sigma(s)) in log-domain, usable for large s"
        w, q = self._eig
        m = q.T @ np.linalg.solve(self.base.factor, x.factor)
        return float(np.linalg.norm(graded_log_singular_values(-s * w, m, logdet=0.0)))


def geodesic_point(r, s):
    return SpdPoint.from_factor(r.factor_at(s))


def busemann_iwasawa(xi, x):
    """
    b_xi(x) = lim d(x, sigma(t)) - t along the ray from o, in closed form:
    with k the flag frame and k^T g_x = (K A N)^-1, b = <h, log A>
    """
    if not xi.is_regular:
        raise NotRegular("closed-form Busemann function needs a regular point")
    return _busemann_closed_form(xi, x)


def _busemann_closed_form(xi, x):
    k = xi.flag.frame()
    _, a, _ = gram_schmidt_kan(np.linalg.inv(k.T @ x.factor))
    return float(xi.expanded() @ np.log(np.diag(a)))


def busemann_oracle(xi, x, t_max=1e8, tol=1e-6):
    """
    direct evaluation of d(x, sigma(t)) - t at t_max and t_max / 2 in
    log-domain. Returns the value at t_max, the Cauchy estimate between the
    two evaluations and their Richardson extrapolation.
    """
    if t_max < 100.0:
        raise NoConvergence("t_max must be at least 100, got %g" % (t_max))
    ray = GeodesicRay.toward(xi)

    def v(t):
        return ray.distance_from(x, t) - t

    far = v(t_max)
    near = v(t_max / 2.0)
    estimate = abs(near - far)
    if estimate > tol:
        raise NoConvergence("Busemann limit not settled: |v(t/2) - v(t)| = %.3g" % (estimate))
    return BusemannEstimate(far, estimate, 2.0 * far - near)


def busemann(xi, x):
    "closed form for regular points, the direct limit otherwise"
    if xi.is_regular:
        return _busemann_closed_form(xi, x)
    return busemann_oracle(xi, x).value


class Flat:
    "the maximal flat { frame . exp(diag a) . o : sum a = 0 }"

    def __init__(self, frame, tol=ALGEBRAIC_TOL):
        frame = as_matrix(frame)
        if abs(abs(np.linalg.det(frame)) - 1.0) > tol * max(1.0, float(np.max(np.abs(frame)))):
            raise NotSpd("flat frame must be unimodular")
        self.frame = frame

    @classmethod
    def standard(cls, d):
        return cls(np.identity(d))

    @property
    def dim(self):
        return self.frame.shape[0]

    def point(self, a):
        return SpdPoint.from_factor(self.frame @ np.diag(np.exp(np.asarray(a, dtype=np.float64))))

    def act(self, g):
        return Flat(np.asarray(g) @ self.frame)


class WeylChamberSet:
    """
    The closed Weyl chamber of a flat with apex at frame.o:
    a[order[0]] >= a[order[1]] >= ... >= a[order[d-1]].
    """

    def __init__(self, flat, order=None):
        d = flat.dim
        if order is None:
            order = tuple(range(d))
        order = tuple(int(i) for i in order)
        if sorted(order) != list(range(d)):
            raise NotInChamber("order %r is not a permutation of %d items" % (order, d))
        self.flat = flat
        self.order = order

    def act(self, g):
        return WeylChamberSet(self.flat.act(g), self.order)


def _coweights(d):
    "columns omega_k = (1,..,1,0,..,0) - k/d, k = 1..d-1"
    omega = np.zeros((d, d - 1))
    for k in range(1, d):
        omega[:k, k - 1] = 1.0
        omega[:, k - 1] -= k / d
    return omega


class _FlatObjective:
    """
    Phi(a) = |log sigma(exp(-a) M)|^2 in coweight coordinates c, where
    a[order] = Omega c. The partial sums of log sigma come from top singular
    pairs of compound matrices, so the small singular values keep their
    relative accuracy however far x lies from the flat.
    """

    def __init__(self, m, order):
        self.m = m
        self.order = np.array(order)
        d = m.shape[0]
        self.omega = _coweights(d)
        self.compounds = [exterior_power(m, k) for k in range(1, d)]
        self.incidence = []
        for k in range(1, d):
            subsets = list(itertools.combinations(range(d), k))
            inc = np.zeros((len(subsets), d))
            for row, t in enumerate(subsets):
                inc[row, list(t)] = 1.0
            self.incidence.append(inc)

    def coords_to_a(self, c):
        a = np.empty(self.m.shape[0])
        a[self.order] = self.omega @ c
        return a

    def a_to_coords(self, a):
        b = a[self.order]
        return b[:-1] - b[1:]

    def __call__(self, c):
        a = self.coords_to_a(c)
        d = a.size
        partial = [0.0]
        slopes = [np.zeros(d)]
        for comp, inc in zip(self.compounds, self.incidence):
            scales = -inc @ a
            ref = float(np.max(scales))
            u, s, _ = np.linalg.svd(np.exp(scales - ref)[:, None] * comp)
            partial.append(ref + float(np.log(s[0])))
            slopes.append(-inc.T @ (u[:, 0] ** 2))
        # |det M| = 1
        partial.append(-float(a.sum()))
        slopes.append(-np.ones(d))
        logs = np.diff(np.array(partial))
        weights = 2.0 * (logs - np.append(logs[1:], 0.0))
        grad_a = np.zeros(d)
        for k in range(1, d + 1):
            grad_a += weights[k - 1] * slopes[k]
        grad_c = self.omega.T @ grad_a[self.order]
        return float(logs @ logs), grad_c


def _minimise_over_flat(x, flat, order, nonnegative, budget, tol):
    m = np.linalg.solve(flat.frame, x.factor)
    objective = _FlatObjective(m, order)
    a0 = 0.5 * np.log(np.sum(m * m, axis=1))
    a0 -= a0.mean()
    c0 = objective.a_to_coords(a0)
    bounds = None
    if nonnegative:
        c0 = np.maximum(c0, 0.0)
        bounds = [(0.0, None)] * c0.size
    res = scipy.optimize.minimize(
        objective, c0, jac=True, method='L-BFGS-B', bounds=bounds,
        options={'maxiter': budget, 'gtol': 1e-12, 'ftol': 1e-15})
    phi, grad = objective(res.x)
    if nonnegative:
        grad = np.where((res.x <= 0.0) & (grad > 0.0), 0.0, grad)
    gnorm = float(np.linalg.norm(grad))
    logger.debug("flat minimisation: %d iterations, |grad| = %.3g" % (res.nit, gnorm))
    # stationarity relative to the coweight scale, down to the resolution of
    # the log singular values at this distance
    a = objective.coords_to_a(res.x)
    scale = float(np.linalg.norm(objective.omega, 2))
    resolution = RESOLUTION_ULPS * np.finfo(np.float64).eps * (1.0 + np.sqrt(phi) + float(np.max(np.abs(a))))
    if gnorm > scale * (tol + resolution):
        raise BudgetExceeded("no stationary point within %d iterations (|grad| = %.3g)" % (budget, gnorm))
    return np.sqrt(max(phi, 0.0)), a


def dist_to_flat(x, f, budget=10000, tol=1e-7):
    """
    (distance, argmin): the distance from x to the flat and the flat
    coordinates a of the nearest point f.frame . exp(diag a) . o
    """
    dist, a = _minimise_over_flat(x, f, tuple(range(f.dim)), False, budget, tol)
    return float(dist), frozen(a)


def dist_to_chamber(x, w, budget=10000, tol=1e-7):
    "distance from x to the closed Weyl chamber ``w``"
    dist, _ = _minimise_over_flat(x, w.flat, w.order, True, budget, tol)
    return float(dist)


def dist_to_ray(x, ray, xatol=1e-10):
    """
    distance from x to the geodesic ray; s -> d(x, sigma(s)) is convex and
    its minimiser lies in [0, 2 d(x, base)]
    """
    span = 2.0 * distance(x, ray.base) + 1.0
    res = scipy.optimize.minimize_scalar(
        lambda s: ray.distance_from(x, s), bounds=(0.0, span), method='bounded',
        options={'xatol': xatol})
    return float(min(res.fun, ray.distance_from(x, 0.0)))


def angle_in_flat(h1, h2):
    """
    Tits angle between two directions of a common closed chamber: the
    Euclidean angle of their chamber vectors
    """
    vectors = []
    for h in (h1, h2):
        h = np.asarray(h, dtype=np.float64)
        if np.any(np.diff(h) > 1e-12):
            raise NotInChamber("direction %r is not in the closed chamber" % (h.tolist(),))
        vectors.append(h / np.linalg.norm(h))
    return float(np.arccos(np.clip(vectors[0] @ vectors[1], -1.0, 1.0)))


def sublinear_deviation(ray, points):
    """
    ratios d(sigma(t_n), x_n) / t_n with t_n = d(ray.base, x_n); they tend to
    zero when the x_n converge to the ray's endpoint along a flat
    """
    ratios = []
    for x in points:
        t = distance(x, ray.base)
        if t == 0.0:
            ratios.append(0.0)
            continue
        ratios.append(ray.distance_from(x, t) / t)
    return np.array(ratios)
