"""
Flags, Weyl chambers at infinity and points of the visual boundary of X in
the eigenvalue-flag model.

A boundary point is a flag V1 < ... < Vk = R^d together with one real number
per flag step, the eigenvalues of the unit tangent vector pointing at it.
"""

import numpy as np

from .common import AnosovLimitsException, ALGEBRAIC_TOL, CLUSTER_TOL
from .matrixcore import (
    NonRealSpectrum, CartanVector, as_matrix, frozen, sign_normalize, eig_real,
    gram_schmidt_kan)


class NotSymmetric(AnosovLimitsException):
    pass


class NotUnit(AnosovLimitsException):
    pass


class NotProximal(AnosovLimitsException):
    pass


class DimMismatch(AnosovLimitsException):
    pass


class NotRegular(AnosovLimitsException):
    pass


class InvalidFlag(AnosovLimitsException):
    pass


# default threshold for the oppositeness verdict
OPPOSITE_TOL = 1e-8


class Flag:
    """
    A partial flag. ``basis`` columns span the chain: V_i is the span of the
    first m_1 + ... + m_i columns where ``signature`` = (m_1, ..., m_k).
    Columns are stored unit length with the first non-negligible coordinate
    positive.
    """

    def __init__(self, basis, signature=None):
        basis = as_matrix(basis)
        d = basis.shape[0]
        if signature is None:
            signature = (1,) * d
        signature = tuple(int(m) for m in signature)
        if any(m <= 0 for m in signature) or sum(signature) != d:
            raise InvalidFlag("signature %r does not partition %d" % (signature, d))
        try:
            columns = [sign_normalize(basis[:, j]) for j in range(d)]
        except AnosovLimitsException:
            raise InvalidFlag("flag basis has a zero column")
        basis = np.column_stack(columns)
        if abs(np.linalg.det(basis)) < 1e-10:
            raise InvalidFlag("flag basis is rank deficient")
        self.basis = frozen(basis)
        self.signature = signature

    @classmethod
    def standard(cls, d):
        return cls(np.identity(d))

    @classmethod
    def reversed(cls, d):
        return cls(np.identity(d)[:, ::-1])

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def is_full(self):
        return all(m == 1 for m in self.signature)

    def step_dims(self):
        "dimensions of V_1, ..., V_k"
        return list(np.cumsum(self.signature))

    def subspace(self, i):
        "orthonormal basis of V_i, 1 <= i <= k"
        return self.frame()[:, :self.step_dims()[i - 1]]

    def frame(self):
        """
        orthonormal frame adapted to the flag: the first j columns span the
        span of the first j basis columns, for every j
        """
        k, _, _ = gram_schmidt_kan(self.basis)
        return k

    def act(self, g):
        "the image flag g.F"
        g = as_matrix(g)
        if g.shape[0] != self.dim:
            raise DimMismatch("cannot act by a %d x %d matrix on a flag in R^%d" % (g.shape[0], g.shape[0], self.dim))
        return Flag(g @ self.basis, self.signature)

    def __repr__(self):
        return "Flag(signature=%r, basis=%r)" % (self.signature, self.basis.tolist())


class BoundaryPoint:
    """
    A point of the visual boundary: a flag and one eigenvalue per flag step,
    strictly decreasing, with sum m_i l_i = 0 and sum m_i l_i^2 = 1.
    """

    def __init__(self, flag, direction, tol=ALGEBRAIC_TOL):
        direction = np.array(direction, dtype=np.float64)
        if direction.ndim != 1 or direction.size != len(flag.signature):
            raise DimMismatch("need one eigenvalue per flag step")
        mult = np.array(flag.signature, dtype=np.float64)
        if abs(float(mult @ direction)) > tol:
            raise NotUnit("direction is not traceless")
        if abs(float(mult @ direction ** 2) - 1.0) > tol:
            raise NotUnit("direction does not have unit norm")
        if np.any(np.diff(direction) > -1e-12):
            raise InvalidFlag("direction is not strictly decreasing")
        self.flag = flag
        self.direction = frozen(direction)

    @property
    def dim(self):
        return self.flag.dim

    @property
    def is_regular(self):
        return self.flag.is_full

    def expanded(self):
        "the unit chamber vector with each eigenvalue repeated by its multiplicity"
        return frozen(np.repeat(self.direction, self.flag.signature))

    def tangent(self):
        "the symmetric traceless unit matrix at o pointing at this point"
        k = self.flag.frame()
        y = (k * self.expanded()) @ k.T
        return frozen((y + y.T) / 2.0)

    def __repr__(self):
        return "BoundaryPoint(direction=%r, flag=%r)" % (self.direction.tolist(), self.flag)


class WeylChamberClass:
    "a class of asymptotic Weyl chambers, identified with a full flag"

    def __init__(self, flag):
        if not flag.is_full:
            raise InvalidFlag("a Weyl chamber class needs a full flag")
        self.flag = flag

    def __repr__(self):
        return "WeylChamberClass(%r)" % (self.flag,)


def h1_direction(d):
    "sqrt((d-1)/d) diag(1, -1/(d-1), ...), the unit vector of the singular wall"
    c = np.sqrt((d - 1.0) / d)
    return frozen(np.concatenate([[c], np.full(d - 1, -c / (d - 1.0))]))


def _clusters(values, cluster_tol):
    "group a non-increasing sequence where consecutive gaps are below the threshold"
    scale = max(1.0, float(np.max(np.abs(values))))
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i - 1] - values[i] <= cluster_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _collapse(values, groups):
    "one mean value per group, then renormalise conditions (i) and (ii)"
    mult = np.array([len(g) for g in groups], dtype=np.float64)
    means = np.array([np.mean([values[i] for i in g]) for g in groups])
    means -= (mult @ means) / mult.sum()
    norm = np.sqrt(mult @ means ** 2)
    if norm == 0.0:
        raise NotUnit("direction collapses to zero")
    return means / norm


def boundary_point_of(y, cluster_tol=CLUSTER_TOL, tol=ALGEBRAIC_TOL):
    """
    the boundary point in direction ``y`` from o: eigen-decompose y, merge
    eigenvalues closer than ``cluster_tol`` and emit the flag of eigenspaces
    """
    y = as_matrix(y)
    if np.max(np.abs(y - y.T)) > 1e-12 * max(1.0, float(np.linalg.norm(y))):
        raise NotSymmetric("tangent matrix is not symmetric")
    if abs(np.trace(y)) > tol:
        raise NotUnit("tangent matrix is not traceless")
    if abs(np.linalg.norm(y) - 1.0) > tol:
        raise NotUnit("tangent matrix has norm %.17g" % (np.linalg.norm(y)))
    w, v = np.linalg.eigh((y + y.T) / 2.0)
    w = w[::-1]
    v = v[:, ::-1]
    groups = _clusters(w, cluster_tol)
    direction = _collapse(w, groups)
    return BoundaryPoint(Flag(v, [len(g) for g in groups]), direction)


def boundary_point_from_direction(flag, u, cluster_tol=CLUSTER_TOL):
    """
    the boundary point with full flag ``flag`` and chamber direction ``u``
    (a unit, traceless, non-increasing d-vector); equal coordinates coarsen
    the flag
    """
    if not flag.is_full:
        raise InvalidFlag("expected a full flag")
    u = np.asarray(u, dtype=np.float64)
    if u.size != flag.dim:
        raise DimMismatch("direction has %d coordinates, flag lives in R^%d" % (u.size, flag.dim))
    if np.any(np.diff(u) > 1e-12):
        raise InvalidFlag("chamber direction must be non-increasing")
    groups = _clusters(u, cluster_tol)
    return BoundaryPoint(Flag(flag.basis, [len(g) for g in groups]), _collapse(u, groups))


def attracting_flag(g, tol=1e-6):
    """
    the full flag of eigenvectors of ``g`` ordered by decreasing eigenvalue
    modulus; g must have real spectrum with all consecutive modulus ratios
    above 1 + tol
    """
    g = as_matrix(g)
    pairs = eig_real(g, require_real=True)
    if len(pairs) != g.shape[0]:
        raise NotProximal("spectrum is not simple")
    moduli = [abs(w) for w, _ in pairs]
    for i in range(len(moduli) - 1):
        if moduli[i + 1] == 0.0 or moduli[i] / moduli[i + 1] - 1.0 < tol:
            raise NotProximal("eigenvalue moduli %d and %d are not separated" % (i + 1, i + 2))
    return Flag(np.column_stack([v for _, v in pairs]))


def attracting_flags(elements, tol=1e-6):
    """
    (index, flag) for each element with an attracting full flag; the others
    are skipped
    """
    out = []
    for i, g in enumerate(elements):
        try:
            out.append((i, attracting_flag(getattr(g, 'matrix', g), tol)))
        except (NotProximal, NonRealSpectrum):
            continue
    return out


def _check_pair(f, f2):
    if f.dim != f2.dim:
        raise DimMismatch("flags live in R^%d and R^%d" % (f.dim, f2.dim))
    if not (f.is_full and f2.is_full):
        raise InvalidFlag("oppositeness is tested on full flags")


def is_opposite(f, f2, tol=OPPOSITE_TOL):
    """
    (verdict, score): score is the smallest |det[V_i | W_j]| over i + j = d
    with orthonormal bases; the flags are opposite when score > tol
    """
    _check_pair(f, f2)
    d = f.dim
    kf = f.frame()
    kg = f2.frame()
    score = min(abs(np.linalg.det(np.hstack([kf[:, :i], kg[:, :d - i]]))) for i in range(1, d))
    return score > tol, float(score)


def _opposite_block(left_frames, right_frames):
    "oppositeness scores between every left frame and every right frame"
    d = left_frames.shape[1]
    n, m = len(left_frames), len(right_frames)
    scores = np.full((n, m), np.inf)
    for i in range(1, d):
        left = np.broadcast_to(left_frames[:, None, :, :i], (n, m, d, i))
        right = np.broadcast_to(right_frames[None, :, :, :d - i], (n, m, d, d - i))
        dets = np.abs(np.linalg.det(np.concatenate([left, right], axis=3)))
        scores = np.minimum(scores, dets)
    return scores


def _frames(flags):
    for f in flags:
        _check_pair(flags[0], f)
    return np.array([f.frame() for f in flags])


def opposite_scores(flags):
    "the symmetric matrix of pairwise oppositeness scores"
    flags = list(flags)
    if not flags:
        return np.zeros((0, 0))
    frames = _frames(flags)
    scores = _opposite_block(frames, frames)
    return (scores + scores.T) / 2.0


def chordal_distances(points):
    "sine of the angle between each pair of lines through the origin"
    u = np.array([p / np.linalg.norm(p) for p in points])
    cos = np.clip(np.abs(u @ u.T), 0.0, 1.0)
    return np.sqrt(1.0 - cos * cos)


def pairwise_oppositeness(flags, threshold=OPPOSITE_TOL, separation=1e-3, chunk=256, scaled=False):
    """
    (pairs_tested, min_score, violations) over the pairs of full flags whose
    lines V1 are at least ``separation`` apart; min_score is None when no
    pair qualifies.

    With ``scaled`` each score, min_score included, is divided by
    min(1, s)^2 for s the chordal separation of the pair; flags at points
    s apart on a C^1 boundary curve score of order s^2.
    """
    flags = list(flags)
    if len(flags) < 2:
        return 0, None, 0
    frames = _frames(flags)
    spread = chordal_distances(frames[:, :, 0])
    apart = spread >= separation
    tested, violations, lowest = 0, 0, np.inf
    for start in range(0, len(flags), chunk):
        stop = min(start + chunk, len(flags))
        block = _opposite_block(frames[start:stop], frames)
        if scaled:
            block = block / np.maximum(np.minimum(1.0, spread[start:stop]), separation) ** 2
        mask = apart[start:stop] & (np.arange(len(flags))[None, :] > np.arange(start, stop)[:, None])
        picked = block[mask]
        tested += picked.size
        violations += int(np.sum(picked <= threshold))
        if picked.size:
            lowest = min(lowest, float(np.min(picked)))
    return tested, (lowest if tested else None), violations


def flag_distance(f, f2):
    """
    largest sine of a principal angle between corresponding flag subspaces;
    0 for equal flags
    """
    if f.dim != f2.dim:
        raise DimMismatch("flags live in R^%d and R^%d" % (f.dim, f2.dim))
    if f.signature != f2.signature:
        raise InvalidFlag("flags have different signatures")
    worst = 0.0
    for i in range(1, len(f.signature)):
        a = f.subspace(i)
        b = f2.subspace(i)
        gap = np.linalg.norm(a @ a.T - b @ b.T, 2)
        worst = max(worst, float(gap))
    return worst


def opposite_involution(a):
    "iota: reverse the coordinates and negate"
    return CartanVector(-a.coords[::-1])


def chamber_of(bp):
    if not bp.is_regular:
        raise NotRegular("boundary point with signature %r is singular" % (bp.flag.signature,))
    return WeylChamberClass(bp.flag)


# chamber coordinates in d = 3: an orthonormal basis of the traceless plane
# in which the closed chamber is the sector |theta| <= pi/6 and iota is
# theta -> -theta
_SYMMETRIC_AXIS = np.array([1.0, 0.0, -1.0]) / np.sqrt(2.0)
_WALL_AXIS = np.array([1.0, -2.0, 1.0]) / np.sqrt(6.0)


def chamber_angle(v):
    "angle of a traceless 3-vector in the traceless plane"
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (3,):
        raise DimMismatch("chamber angles are defined for d = 3")
    return float(np.arctan2(v @ _WALL_AXIS, v @ _SYMMETRIC_AXIS))


def direction_at_angle(theta):
    "the unit traceless 3-vector at angle theta"
    return frozen(np.cos(theta) * _SYMMETRIC_AXIS + np.sin(theta) * _WALL_AXIS)
