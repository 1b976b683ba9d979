"""
Projective plane geometry for convex domains: points and lines of RP^2,
convex bodies given by a vertex polyline in an affine chart, cross-ratios,
the Hilbert metric, and boundary curves assembled from attracting fixed
points of a group.
"""

import csv

import numpy as np
import scipy.optimize
import scipy.spatial

from .common import AnosovLimitsException, logger
from .matrixcore import as_matrix, frozen, sign_normalize, eig_real
from .boundary import attracting_flags


# boundary points closer than this (chordal) count as one
MERGE_TOL = 1e-7


class NotCollinear(AnosovLimitsException):
    pass


class CoincidentPoints(AnosovLimitsException):
    pass


class OutsideDomain(AnosovLimitsException):
    pass


class DegenerateHull(AnosovLimitsException):
    pass


class NotOnBoundary(AnosovLimitsException):
    pass


class NotPreserving(AnosovLimitsException):
    pass


class ProjPoint:
    "a point of RP^2, stored as a unit 3-vector with first non-negligible coordinate positive"

    def __init__(self, coords):
        coords = np.asarray(coords, dtype=np.float64)
        if coords.shape != (3,) or not np.all(np.isfinite(coords)) or not np.any(coords):
            raise CoincidentPoints("invalid homogeneous coordinates %r" % (coords,))
        self.coords = frozen(sign_normalize(coords))

    def __repr__(self):
        return "ProjPoint(%s)" % (", ".join("%.6g" % t for t in self.coords))


class ProjLine:
    "a line of RP^2, the kernel of the functional ``coeffs``"

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape != (3,) or not np.all(np.isfinite(coeffs)) or not np.any(coeffs):
            raise CoincidentPoints("invalid line coefficients %r" % (coeffs,))
        self.coeffs = frozen(sign_normalize(coeffs))

    @classmethod
    def through(cls, p, q):
        c = np.cross(_coords(p), _coords(q))
        if np.linalg.norm(c) < 1e-14:
            raise CoincidentPoints("a line needs two distinct points")
        return cls(c)

    def __repr__(self):
        return "ProjLine(%s)" % (", ".join("%.6g" % t for t in self.coeffs))


def _coords(p):
    return p.coords if isinstance(p, ProjPoint) else np.asarray(p, dtype=np.float64)


def meet(l1, l2):
    "intersection point of two lines"
    c = np.cross(l1.coeffs, l2.coeffs)
    if np.linalg.norm(c) < 1e-14:
        raise CoincidentPoints("the lines coincide")
    return ProjPoint(c)


def line_angle(l1, l2):
    "angle between two lines, measured between their unit functionals"
    return float(np.arccos(np.clip(abs(l1.coeffs @ l2.coeffs), 0.0, 1.0)))


class Chart:
    """
    The affine chart {ell . p = 1} with orthonormal coordinates
    (U . p, W . p) / (ell . p).
    """

    def __init__(self, line):
        ell = line.coeffs
        e = np.identity(3)[int(np.argmin(np.abs(ell)))]
        u = e - (e @ ell) * ell
        u /= np.linalg.norm(u)
        self.line = line
        self.ell = ell
        self.u = frozen(u)
        self.w = frozen(np.cross(ell, u))

    def to_chart(self, points):
        "(n, 3) homogeneous points to (n, 2) chart coordinates"
        points = np.atleast_2d(points)
        depth = points @ self.ell
        if np.any(np.abs(depth) <= 1e-9):
            raise OutsideDomain("point on the line at infinity of the chart")
        return np.column_stack([points @ self.u, points @ self.w]) / depth[:, None]

    def lift(self, xy):
        xy = np.atleast_2d(xy)
        return self.ell[None, :] + xy[:, :1] * self.u[None, :] + xy[:, 1:2] * self.w[None, :]


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class ConvexBody:
    """
    A convex domain of RP^2 given by the cyclically ordered vertices of its
    boundary polyline, in an affine chart whose line avoids all of them.
    Vertices are kept in counter-clockwise order in the chart.
    """

    def __init__(self, vertices, chart):
        points = np.array([_coords(v) for v in vertices], dtype=np.float64)
        if points.ndim != 2 or points.shape[0] < 3:
            raise DegenerateHull("a convex body needs at least 3 vertices")
        if not isinstance(chart, Chart):
            chart = Chart(chart)
        xy = chart.to_chart(points)
        turns = _cross2(np.roll(xy, -1, axis=0) - xy, np.roll(xy, -2, axis=0) - np.roll(xy, -1, axis=0))
        slack = 1e-12 * max(1.0, float(np.max(np.abs(xy)))) ** 2
        if np.all(np.abs(turns) <= slack):
            raise DegenerateHull("vertices are collinear in the chart")
        if np.all(turns <= slack):
            xy = xy[::-1]
            turns = -turns[::-1]
        if np.any(turns < -slack):
            raise DegenerateHull("vertex polyline is not convex in the chart")
        self.chart = chart
        self.xy = frozen(xy)
        # unit lifts on the side ell . p > 0, a consistent cone over the body
        lifts = chart.lift(xy)
        self.vertices = frozen(lifts / np.linalg.norm(lifts, axis=1)[:, None])

    @classmethod
    def from_chart_points(cls, xy, line=None):
        chart = Chart(line if line is not None else ProjLine([0.0, 0.0, 1.0]))
        return cls(chart.lift(np.asarray(xy, dtype=np.float64)), chart)

    @property
    def size(self):
        return self.xy.shape[0]

    def scale(self):
        return max(1.0, float(np.max(np.abs(self.xy))))

    def act(self, g):
        "the image g.Omega, charted by the transported line g^-T ell"
        g = as_matrix(g)
        line = ProjLine(np.linalg.solve(g.T, self.chart.ell))
        return ConvexBody(self.vertices @ g.T, Chart(line))

    def edges(self):
        return self.xy, np.roll(self.xy, -1, axis=0) - self.xy

    def boundary_distance(self, xy):
        "chart distance from points (n, 2) to the polyline"
        xy = np.atleast_2d(xy)
        starts, dirs = self.edges()
        rel = xy[:, None, :] - starts[None, :, :]
        lengths = np.maximum(np.sum(dirs * dirs, axis=1), 1e-300)
        tau = np.clip(np.sum(rel * dirs[None, :, :], axis=2) / lengths[None, :], 0.0, 1.0)
        nearest = starts[None, :, :] + tau[:, :, None] * dirs[None, :, :]
        return np.min(np.linalg.norm(xy[:, None, :] - nearest, axis=2), axis=1)

    def __repr__(self):
        return "ConvexBody(%d vertices)" % (self.size,)


def _chart_point(omega, p):
    return omega.chart.to_chart(_coords(p))[0]


def contains(omega, p, slack=1e-9):
    "True when p lies in the closed body, with edge slack relative to the chart scale"
    try:
        xy = _chart_point(omega, p)
    except OutsideDomain:
        return False
    starts, dirs = omega.edges()
    side = _cross2(dirs, xy[None, :] - starts)
    return bool(np.all(side >= -slack * omega.scale() * np.linalg.norm(dirs, axis=1)))


def _strictly_inside(omega, xy, slack=1e-9):
    starts, dirs = omega.edges()
    side = _cross2(dirs, xy[None, :] - starts) / np.linalg.norm(dirs, axis=1)
    return bool(np.all(side > slack * omega.scale()))


def cross_ratio(a, x, y, b, tol=1e-9):
    """
    [a, y][x, b] / ([a, x][y, b]) for four collinear points; with affine
    parameters this is ((y - a)(b - x)) / ((x - a)(b - y))
    """
    pts = np.array([_coords(p) / np.linalg.norm(_coords(p)) for p in (a, x, y, b)])
    _, s, vt = np.linalg.svd(pts)
    if s[2] > tol * s[0]:
        raise NotCollinear("points span the plane (sigma_3 / sigma_1 = %.3g)" % (s[2] / s[0]))
    c = pts @ vt[:2].T

    def bracket(i, j):
        return c[i, 0] * c[j, 1] - c[i, 1] * c[j, 0]

    den = bracket(0, 1) * bracket(2, 3)
    if abs(bracket(0, 1)) < 1e-14 or abs(bracket(2, 3)) < 1e-14:
        raise CoincidentPoints("cross-ratio undefined for coincident points")
    return float(bracket(0, 2) * bracket(1, 3) / den)


def _line_hits(omega, px, py):
    "parameters s where the chart line px + s (py - px) meets the polyline"
    starts, dirs = omega.edges()
    dvec = py - px
    den = _cross2(dvec[None, :], dirs)
    ok = np.abs(den) > 1e-300
    rel = starts - px[None, :]
    s = np.where(ok, _cross2(rel, dirs) / np.where(ok, den, 1.0), np.nan)
    tau = np.where(ok, _cross2(rel, dvec[None, :]) / np.where(ok, den, 1.0), np.nan)
    good = ok & (tau >= -1e-12) & (tau <= 1.0 + 1e-12)
    return s[good]


def _hilbert_chart(omega, px, py):
    if np.linalg.norm(py - px) <= 1e-15 * omega.scale():
        return 0.0
    hits = _line_hits(omega, px, py)
    if hits.size == 0:
        raise OutsideDomain("line misses the domain")
    sa, sb = float(np.min(hits)), float(np.max(hits))
    if not (sa < 0.0 and sb > 1.0):
        raise OutsideDomain("points are not strictly inside the domain")
    return 0.5 * float(np.log((1.0 - sa) * sb / ((-sa) * (sb - 1.0))))


def hilbert_distance(omega, x, y):
    "1/2 log of the cross-ratio of the boundary points of line xy"
    px = _chart_point(omega, x)
    py = _chart_point(omega, y)
    for p in (px, py):
        if not _strictly_inside(omega, p, slack=0.0):
            raise OutsideDomain("point %r is not inside the domain" % (p.tolist(),))
    return _hilbert_chart(omega, px, py)


def _matrix_of(element):
    return np.asarray(getattr(element, 'matrix', element), dtype=np.float64)


def _attracting_point(g, tol):
    pairs = eig_real(g)
    if len(pairs) < 2:
        return None
    moduli = sorted((abs(w) for w in np.linalg.eigvals(g)), reverse=True)
    if moduli[1] == 0.0 or moduli[0] / moduli[1] - 1.0 < tol:
        return None
    return pairs[0][1]


def _candidate_charts(points):
    aligned = points * np.where(points @ points[0] >= 0.0, 1.0, -1.0)[:, None]
    mean = aligned.mean(axis=0)
    if np.linalg.norm(mean) > 1e-12:
        yield ProjLine(mean)
    for e in np.identity(3):
        yield ProjLine(e)


def _hull_in_chart(points, line):
    chart = Chart(line)
    xy = chart.to_chart(points)
    try:
        hull = scipy.spatial.ConvexHull(xy)
    except scipy.spatial.QhullError as e:
        raise DegenerateHull("fixed points are collinear: %s" % (str(e).splitlines()[0]))
    scale = max(1.0, float(np.max(np.abs(xy))))
    normals, offsets = hull.equations[:, :2].T, hull.equations[:, 2][None, :]
    depth = np.concatenate([np.max(xy[k:k + 1024] @ normals + offsets, axis=1) for k in range(0, len(xy), 1024)])
    return chart, xy[hull.vertices], float(np.min(depth)) / scale


def boundary_from_points(points, boundary_tol=1e-8):
    """
    the convex body whose boundary passes through the given points of RP^2,
    in the first chart where every point lies on the hull
    """
    points = np.array([sign_normalize(p) for p in points])
    if len(points) < 3:
        raise DegenerateHull("need at least 3 distinct fixed points, got %d" % (len(points)))
    for line in _candidate_charts(points):
        try:
            chart, hull_xy, worst = _hull_in_chart(points, line)
        except OutsideDomain:
            continue
        if worst >= -boundary_tol:
            logger.debug("boundary hull: %d of %d points are vertices" % (len(hull_xy), len(points)))
            return ConvexBody(chart.lift(hull_xy), chart)
        logger.debug("chart %r rejected: a fixed point lies %.3g inside the hull" % (line, -worst))
    raise DegenerateHull("no affine chart shows the fixed points in convex position")


def boundary_from_orbit(elements, tol=1e-6, boundary_tol=1e-8):
    """
    convex hull of the attracting fixed points of the proximal elements;
    non-proximal elements are skipped
    """
    points = []
    for e in elements:
        v = _attracting_point(_matrix_of(e), tol)
        if v is not None:
            points.append(v)
    logger.debug("%d of %d elements have an attracting fixed point" % (len(points), len(elements)))
    return boundary_from_points(points, boundary_tol)


def distinct_flags(flags, radius=MERGE_TOL):
    "the first flag of every cluster whose lines V1 lie within ``radius`` (chordal)"
    flags = list(flags)
    if not flags:
        return []
    lines = np.array([sign_normalize(f.basis[:, 0]) for f in flags])
    n = len(flags)
    tree = scipy.spatial.cKDTree(np.vstack([lines, -lines]))
    taken = np.zeros(n, dtype=bool)
    kept = []
    for i in range(n):
        if taken[i]:
            continue
        kept.append(flags[i])
        for j in tree.query_ball_point(lines[i], radius):
            taken[j % n] = True
    return kept


def boundary_with_flags(elements, tol=1e-6, boundary_tol=1e-8, movers=()):
    """
    (body, flags): the convex body spanned by the lines V1 of the attracting
    full flags of the elements and of their images under ``movers``, and
    those flags (ball order first, then image by image). Flags whose lines
    coincide within MERGE_TOL are kept once.
    """
    flags = [f for _, f in attracting_flags(elements, tol)]
    found = len(flags)
    for h in movers:
        g = _matrix_of(h)
        flags.extend(f.act(g) for f in flags[:found])
    flags = distinct_flags(flags)
    logger.debug("%d of %d elements have an attracting flag; %d distinct flags with %d movers"
                 % (found, len(elements), len(flags), len(movers)))
    return boundary_from_points([f.basis[:, 0] for f in flags], boundary_tol), flags


def _circle_tangent(a, p, b):
    "tangent direction at p of the circle through a, p, b; the chord a->b if collinear"
    d = 2.0 * _cross2(a - p, b - p)
    chord = b - a
    if abs(d) <= 1e-14 * max(np.dot(chord, chord), 1e-300):
        return chord / np.linalg.norm(chord)
    aa, bb = a - p, b - p
    centre = np.array([bb[1] * aa @ aa - aa[1] * bb @ bb, aa[0] * bb @ bb - bb[0] * aa @ aa]) / d
    t = np.array([-centre[1], centre[0]])
    if t @ chord < 0:
        t = -t
    return t / np.linalg.norm(t)


def tangent_line_at(omega, p, tol=1e-8):
    """
    (line, c1_defect): the supporting line of the polyline at the boundary
    point p, and the exterior angle of the polyline there (0 inside an edge)
    """
    xy = _chart_point(omega, p)
    scale = omega.scale()
    if omega.boundary_distance(xy)[0] > tol * scale:
        raise NotOnBoundary("point is %.3g away from the boundary" % (omega.boundary_distance(xy)[0]))
    n = omega.size
    gaps = np.linalg.norm(omega.xy - xy[None, :], axis=1)
    i = int(np.argmin(gaps))
    prev_v, next_v = omega.xy[(i - 1) % n], omega.xy[(i + 1) % n]
    if gaps[i] <= tol * scale:
        tangent = _circle_tangent(prev_v, omega.xy[i], next_v)
        defect = abs(float(np.arctan2(_cross2(omega.xy[i] - prev_v, next_v - omega.xy[i]),
                                      np.dot(omega.xy[i] - prev_v, next_v - omega.xy[i]))))
    else:
        _, dirs = omega.edges()
        j = int(np.argmin(_edge_distances(omega, xy)))
        tangent = dirs[j] / np.linalg.norm(dirs[j])
        defect = 0.0
    ends = omega.chart.lift(np.array([xy, xy + tangent]))
    return ProjLine(np.cross(ends[0], ends[1])), defect


def _edge_distances(omega, xy):
    starts, dirs = omega.edges()
    rel = xy[None, :] - starts
    tau = np.clip(np.sum(rel * dirs, axis=1) / np.sum(dirs * dirs, axis=1), 0.0, 1.0)
    return np.linalg.norm(rel - tau[:, None] * dirs, axis=1)


def _secant_wedge(omega, p, tol=1e-8):
    "angle between the two edge lines meeting at the vertex p; 0 off the vertices"
    xy = _chart_point(omega, p)
    gaps = np.linalg.norm(omega.xy - xy[None, :], axis=1)
    i = int(np.argmin(gaps))
    if gaps[i] > tol * omega.scale():
        return 0.0
    n = omega.size
    before, here, after = omega.vertices[(i - 1) % n], omega.vertices[i], omega.vertices[(i + 1) % n]
    return line_angle(ProjLine.through(before, here), ProjLine.through(here, after))


def tangent_flag_angles(omega, flag):
    """
    (angle, wedge): the angle between the tangent line at the point V1 of a
    full flag and the projective line V2, and the angle between the two
    polyline edges meeting at V1, both between unit functionals. A line V2
    inside the wedge of those edges has angle at most wedge.
    """
    p = flag.basis[:, 0]
    line, _ = tangent_line_at(omega, p)
    return line_angle(line, ProjLine.through(p, flag.basis[:, 1])), _secant_wedge(omega, p)


def tangent_flag_angle(omega, flag):
    """
    angle between the tangent line at the point V1 of a full flag and the
    projective line V2
    """
    return tangent_flag_angles(omega, flag)[0]


def _sample_indices(n, count=64):
    return np.unique(np.linspace(0, n - 1, min(n, count)).astype(int))


def hilbert_translation_length(omega, g, budget=200, tol=1e-2):
    """
    inf of d(x, g.x) over the axis of g, minimised along the chord between
    its attracting and repelling fixed points
    """
    g = _matrix_of(g)
    d = g.shape[0]
    scaled = g / abs(np.linalg.det(g)) ** (1.0 / d)
    if np.allclose(scaled, np.identity(d), atol=1e-12) or np.allclose(scaled, -np.identity(d), atol=1e-12):
        return 0.0
    try:
        image = omega.chart.to_chart(omega.vertices[_sample_indices(omega.size)] @ g.T)
    except OutsideDomain:
        raise NotPreserving("g moves a boundary sample to the line at infinity")
    drift = float(np.max(omega.boundary_distance(image)))
    if drift > tol * omega.scale():
        raise NotPreserving("g moves boundary samples %.3g off the domain" % (drift))
    pairs = eig_real(g, require_real=True)
    plus = _chart_point(omega, pairs[0][1])
    minus = _chart_point(omega, pairs[-1][1])

    def displacement(s):
        x = (1.0 - s) * plus + s * minus
        gx = omega.chart.to_chart(omega.chart.lift(x) @ g.T)[0]
        return _hilbert_chart(omega, x, gx)

    res = scipy.optimize.minimize_scalar(displacement, bounds=(0.1, 0.9), method='bounded',
                                         options={'maxiter': budget, 'xatol': 1e-10})
    return float(res.fun)


def conic_fit_residual(omega):
    """
    largest geometric distance from a vertex to the least-squares conic
    through all vertices
    """
    x, y = omega.xy[:, 0], omega.xy[:, 1]
    design = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, _, vt = np.linalg.svd(design, full_matrices=False)
    a, b, c, dd, e, f = vt[-1]
    q = design @ vt[-1]
    grad = np.column_stack([2 * a * x + b * y + dd, b * x + 2 * c * y + e])
    return float(np.max(np.abs(q) / np.maximum(np.linalg.norm(grad, axis=1), 1e-300)))


def hausdorff_distance(omega, other):
    "Hausdorff distance between the two boundary polylines, in omega's chart"
    theirs = omega.chart.to_chart(other.vertices)
    body = ConvexBody(omega.chart.lift(theirs), omega.chart)
    return float(max(np.max(omega.boundary_distance(body.xy)), np.max(body.boundary_distance(omega.xy))))


def write_boundary_csv(omega, path):
    "index, chart_x, chart_y, homog_1..3; 17 significant digits, LF line endings"
    with open(path, 'w', newline='') as fd:
        w = csv.writer(fd, lineterminator='\n')
        w.writerow(['index', 'chart_x', 'chart_y', 'homog_1', 'homog_2', 'homog_3'])
        for i, (xy, v) in enumerate(zip(omega.xy, omega.vertices)):
            w.writerow([i] + ['%.17g' % t for t in xy] + ['%.17g' % t for t in v])


def write_boundary_svg(omega, path, size=512):
    "the boundary polyline as a single closed path"
    lo = omega.xy.min(axis=0)
    hi = omega.xy.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    margin = 0.02 * span
    # svg y grows downwards
    pts = [(x - lo[0] + margin, hi[1] - y + margin) for x, y in omega.xy]
    path_d = "M " + " L ".join("%.9g %.9g" % p for p in pts) + " Z"
    view = "0 0 %.9g %.9g" % (hi[0] - lo[0] + 2 * margin, hi[1] - lo[1] + 2 * margin)
    with open(path, 'w', newline='\n') as fd:
        fd.write('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="%s">\n' % (size, size, view))
        fd.write('<path d="%s" fill="none" stroke="black" stroke-width="%.9g"/>\n' % (path_d, span / size))
        fd.write('</svg>\n')
