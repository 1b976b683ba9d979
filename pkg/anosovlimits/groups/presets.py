"""
Generator presets: Fuchsian triangle groups in SL(2,R) and their symmetric
square lifts, deformed reflection groups of triangle type in SL(3,R),
diagonal and custom generators, and a non-discrete control.
"""

import numpy as np
import scipy.linalg

from ..common import AnosovLimitsException, logger
from ..matrixcore import NotUnimodular, as_matrix
from .words import Presentation, sign_fixed


class NotHyperbolicType(AnosovLimitsException):
    pass


class OutsideWindow(AnosovLimitsException):
    pass


REFLECTION_WINDOW = (0.2, 5.0)


def sym2_lift(m2, tol=1e-9):
    """
    action of a 2 x 2 matrix on the symmetric square, basis e1^2, e1 e2, e2^2
    """
    m2 = as_matrix(m2)
    if m2.shape != (2, 2):
        raise NotUnimodular("the symmetric square lift takes 2 x 2 matrices")
    if abs(np.linalg.det(m2) - 1.0) > tol * max(1.0, float(np.max(np.abs(m2)))) ** 2:
        raise NotUnimodular("det = %.17g, expected 1" % (np.linalg.det(m2)))
    (a, b), (c, d) = m2
    return np.array([
        [a * a, a * b, b * b],
        [2 * a * c, a * d + b * c, 2 * b * d],
        [c * c, c * d, d * d]])


def _check_hyperbolic(p, q, r):
    for n in (p, q, r):
        if int(n) != n or n < 2:
            raise NotHyperbolicType("triangle orders must be integers >= 2, got %r" % ((p, q, r),))
    if q * r + p * r + p * q >= p * q * r:
        raise NotHyperbolicType("(%d, %d, %d) is not of hyperbolic type" % (p, q, r))


def _rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, s], [-s, c]])


def triangle_relations(p, q, r):
    return [(1,) * p, (2,) * q, (1, 2) * r]


def preset_fuchsian_triangle(p, q, r):
    """
    rotations x, y in SL(2,R) with x^p, y^q, (xy)^r all +-I: x rotates by
    pi/p about i, y by pi/q about the point at hyperbolic distance l from it
    """
    _check_hyperbolic(p, q, r)
    alpha, beta = np.pi / p, np.pi / q
    cosh_l = (np.cos(np.pi / r) + np.cos(alpha) * np.cos(beta)) / (np.sin(alpha) * np.sin(beta))
    ell = np.arccosh(cosh_l)
    dilation = np.diag([np.exp(ell / 2), np.exp(-ell / 2)])
    x = _rotation(alpha)
    y = dilation @ _rotation(beta) @ np.linalg.inv(dilation)
    return Presentation([x, y], ["x", "y"], "fuchsian_triangle", triangle_relations(p, q, r), datum=[p, q, r])


def reflection_cartan_matrix(p, q, r, t):
    """
    Cartan matrix of the triangle reflection group with orders p (between
    reflections 1, 2), q (2, 3) and r (1, 3); the 1-2 entries are scaled by
    t and 1/t, keeping every product A_ij A_ji = 4 cos^2(pi / m_ij)
    """
    c12, c23, c13 = (2.0 * np.cos(np.pi / m) for m in (p, q, r))
    return np.array([
        [2.0, -c12 * t, -c13],
        [-c12 / t, 2.0, -c23],
        [-c13, -c23, 2.0]])


def reflections(cartan):
    "rho_i = I - e_i alpha_i with alpha_i the i-th row of the Cartan matrix"
    cartan = np.asarray(cartan, dtype=np.float64)
    d = cartan.shape[0]
    out = []
    for i in range(d):
        rho = np.identity(d)
        rho[i, :] -= cartan[i, :]
        out.append(rho)
    return out


def preset_reflection_deformation(p, q, r, t, window=REFLECTION_WINDOW):
    """
    the orientation-preserving subgroup a = rho_1 rho_2, b = rho_2 rho_3 of
    a triangle reflection group; t = 1 lies on the Fuchsian locus
    """
    _check_hyperbolic(p, q, r)
    lo, hi = window
    if not (lo < t < hi):
        raise OutsideWindow("deformation parameter t = %g outside (%g, %g)" % (t, lo, hi))
    cartan = reflection_cartan_matrix(p, q, r, t)
    rho = reflections(cartan)
    a = rho[0] @ rho[1]
    b = rho[1] @ rho[2]
    logger.debug("reflection preset (%d, %d, %d), t = %g, Cartan matrix %r" % (p, q, r, t, cartan.tolist()))
    return Presentation([a, b], ["a", "b"], "reflection", triangle_relations(p, q, r), datum=cartan)


def preset_diagonal(*diagonals):
    "one generator per list of diagonal entries, rescaled to determinant 1"
    generators = []
    for entries in diagonals:
        entries = np.asarray(entries, dtype=np.float64)
        generators.append(np.diag(entries / abs(np.prod(entries)) ** (1.0 / entries.size)))
    return Presentation(generators, None, "diagonal")


def preset_custom(generators, labels=None):
    return Presentation([as_matrix(g) for g in generators], labels, "custom")


def preset_near_identity(amplitude=0.05, count=2, d=3, seed=0):
    """
    exponentials of small random traceless matrices: generators of a dense,
    non-discrete subgroup, used as a negative control
    """
    rng = np.random.default_rng(seed)
    generators = []
    for _ in range(count):
        y = amplitude * rng.standard_normal((d, d))
        y -= np.trace(y) / d * np.identity(d)
        generators.append(scipy.linalg.expm(y))
    return Presentation(generators, None, "near_identity", datum=[amplitude, count, seed])


def relation_defects(p):
    "distance of each relation word from +-I"
    defects = []
    for word in p.relations:
        m = sign_fixed(p.evaluate(word))
        identity = np.identity(p.dim)
        defects.append(float(min(np.max(np.abs(m - identity)), np.max(np.abs(m + identity)))))
    return defects
