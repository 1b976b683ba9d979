"""
Small dense real matrix kernel: the decompositions and matrix functions every
other module consumes.

Matrices are plain float64 numpy arrays. Points of the symmetric space
X = SL(d,R)/SO(d) are ``SpdPoint`` instances, which keep a factor ``g`` with
``x = g g^t`` next to the matrix itself, so that far-away orbit points can be
handled without squaring their condition number.
"""

import itertools
from functools import cached_property

import numpy as np
import scipy.linalg

from .common import AnosovLimitsException, ALGEBRAIC_TOL, ITERATIVE_TOL


# products of unimodular matrices drift off |det| = 1 by about this many
# units of roundoff per unit of condition number
DRIFT_ULPS = 1e4
# log|det| uncertainty beyond which a determinant counts as unresolved
DETERMINANT_RESOLUTION = 1e-3


class Singular(AnosovLimitsException):
    pass


class NonRealSpectrum(AnosovLimitsException):
    pass


class NumericalBreakdown(AnosovLimitsException):
    pass


class NotSpd(AnosovLimitsException):
    pass


class NotUnimodular(AnosovLimitsException):
    pass


def as_matrix(m):
    """
    return ``m`` as a read-only float64 square array, raising Singular for
    empty or non-finite input
    """
    arr = np.array(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise Singular("expected a non-empty square matrix, got shape %s" % (arr.shape,))
    if not np.all(np.isfinite(arr)):
        raise Singular("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


def frozen(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def entry_scale(m):
    return max(1.0, float(np.max(np.abs(m))))


def is_unimodular(m, tol=ALGEBRAIC_TOL):
    return abs(np.linalg.det(m) - 1.0) <= tol * entry_scale(m)


def check_unimodular(m, tol=ALGEBRAIC_TOL):
    m = as_matrix(m)
    if not is_unimodular(m, tol):
        raise NotUnimodular("det = %.17g, expected 1" % (np.linalg.det(m)))
    return m


def resolved_log_det(m):
    """
    (log|det m|, drift limit), or (None, None) when float64 cannot resolve
    the determinant of ``m``. Resolution is judged by the condition number,
    capped by |m|^d which bounds it when |det m| = 1; the drift limit is the
    largest |log|det m|| rounding alone explains for a product of unimodular
    matrices.
    """
    m = as_matrix(m)
    d = m.shape[0]
    s = np.linalg.svd(m, compute_uv=False)
    if not s[0] > 0.0:
        raise Singular("matrix vanishes")
    cond = s[0] / s[-1] if s[-1] > 0.0 else np.inf
    with np.errstate(over='ignore'):
        cond = min(cond, s[0] ** d)
    uncertainty = DRIFT_ULPS * np.finfo(np.float64).eps * cond
    if uncertainty > DETERMINANT_RESOLUTION:
        return None, None
    sign, logdet = np.linalg.slogdet(m)
    if sign == 0 or not np.isfinite(logdet):
        raise Singular("matrix is singular")
    return float(logdet), d * max(ITERATIVE_TOL, uncertainty)


def unit_determinant(m):
    "``m`` rescaled to |det| = 1, sign kept; unchanged where |det m| is unresolved"
    m = as_matrix(m)
    logdet, _ = resolved_log_det(m)
    if logdet is None:
        return m
    return frozen(m * np.exp(-logdet / m.shape[0]))


def unimodular_scaling(m):
    """
    rescale an invertible matrix to determinant +-1, preferring +1 (always
    possible in odd dimension)
    """
    m = as_matrix(m)
    d = m.shape[0]
    det = np.linalg.det(m)
    if det == 0.0:
        raise Singular("cannot rescale a singular matrix")
    scaled = m / abs(det) ** (1.0 / d)
    if det < 0 and d % 2 == 1:
        scaled = -scaled
    return frozen(scaled)


def sign_normalize(v):
    "unit vector with the first non-negligible coordinate positive"
    v = np.array(v, dtype=np.float64)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise Singular("cannot normalize the zero vector")
    v = v / norm
    for x in v:
        if abs(x) > 1e-12:
            if x < 0:
                v = -v
            break
    return v


class CartanVector:
    """
    A point of the closed positive chamber: a real d-vector sorted
    non-increasing with zero sum. Houses Jordan and Cartan projections.
    """

    def __init__(self, coords, tol=ALGEBRAIC_TOL):
        coords = np.array(coords, dtype=np.float64)
        if coords.ndim != 1 or coords.size == 0 or not np.all(np.isfinite(coords)):
            raise NumericalBreakdown("invalid chamber coordinates: %r" % (coords,))
        scale = max(1.0, float(np.max(np.abs(coords))))
        if np.any(np.diff(coords) > 1e-12 * scale):
            raise NumericalBreakdown("chamber coordinates not sorted: %r" % (coords,))
        if abs(coords.sum()) > tol * scale:
            raise NumericalBreakdown("chamber coordinates do not sum to zero: %r" % (coords,))
        self.coords = frozen(coords)

    @classmethod
    def from_unsorted(cls, values, tol=ALGEBRAIC_TOL):
        values = np.sort(np.asarray(values, dtype=np.float64))[::-1]
        return cls(values - values.mean(), tol=tol)

    @property
    def dim(self):
        return self.coords.size

    def norm(self):
        return float(np.linalg.norm(self.coords))

    def unit(self):
        n = self.norm()
        if n == 0.0:
            raise NumericalBreakdown("the zero vector has no direction")
        return CartanVector(self.coords / n)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __iter__(self):
        return iter(self.coords.tolist())

    def __eq__(self, other):
        return isinstance(other, CartanVector) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(tuple(self.coords.tolist()))

    def __repr__(self):
        return "CartanVector(%s)" % (", ".join("%.6g" % t for t in self.coords))


class SpdPoint:
    """
    A symmetric positive-definite matrix of determinant 1, i.e. a point of
    X = SL(d,R)/SO(d). The group acts by ``x -> g x g^t``; the basepoint o is
    the identity matrix.
    """

    def __init__(self, mat, tol=ALGEBRAIC_TOL):
        mat = as_matrix(mat)
        norm = max(1.0, float(np.linalg.norm(mat)))
        if np.max(np.abs(mat - mat.T)) > 1e-12 * norm:
            raise NotSpd("matrix is not symmetric")
        mat = frozen((mat + mat.T) / 2.0)
        w = np.linalg.eigvalsh(mat)
        if w[0] <= 0.0:
            raise NotSpd("matrix is not positive definite (smallest eigenvalue %.3g)" % (w[0]))
        if abs(float(np.sum(np.log(w)))) > tol * mat.shape[0]:
            raise NotSpd("determinant is %.17g, expected 1" % (float(np.prod(w))))
        self._mat = mat
        self._factor = None

    @classmethod
    def from_factor(cls, g):
        """
        the point g.o; ``g`` must have |det g| = 1 up to rounding, and is
        rescaled to exactly that where float64 resolves its determinant. No
        product g g^t is formed until ``mat`` is asked for.
        """
        g = as_matrix(g)
        try:
            logdet, limit = resolved_log_det(g)
        except Singular:
            raise NotSpd("factor is singular")
        if logdet is not None:
            if abs(logdet) > limit:
                raise NotSpd("factor must have |det| = 1, got log|det| = %.3g" % (logdet))
            g = g * np.exp(-logdet / g.shape[0])
        pt = cls.__new__(cls)
        pt._mat = None
        pt._factor = frozen(g)
        return pt

    @classmethod
    def basepoint(cls, d):
        return cls.from_factor(np.identity(d))

    @property
    def dim(self):
        return self.factor.shape[0]

    @property
    def mat(self):
        if self._mat is None:
            m = self._factor @ self._factor.T
            self._mat = frozen((m + m.T) / 2.0)
        return self._mat

    @cached_property
    def factor(self):
        if self._factor is not None:
            return self._factor
        w, v = np.linalg.eigh(self._mat)
        return frozen((v * np.sqrt(w)) @ v.T)

    def act(self, g):
        "the point g.x"
        return SpdPoint.from_factor(np.asarray(g) @ self.factor)

    def __repr__(self):
        return "SpdPoint(%r)" % (self.mat.tolist(),)


def eig_real(m, tol=ALGEBRAIC_TOL, require_real=False):
    """
    real eigenpairs of ``m``, sorted by decreasing modulus (ties: real part
    descending). Eigenvectors are unit length with the first non-negligible
    coordinate positive. Eigenvalues with imaginary part above ``tol * |m|``
    are dropped, or raise NonRealSpectrum when ``require_real`` is set.

    LAPACK returns eigenvalues with absolute error about eps * |m| (more for
    ill-conditioned eigenvalues), so ``tol`` must stay well above eps.
    """
    m = as_matrix(m)
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    w, v = np.linalg.eig(m)
    order = sorted(range(len(w)), key=lambda i: (-abs(w[i]), -w[i].real))
    pairs = []
    for i in order:
        if abs(w[i].imag) > tol * scale:
            if require_real:
                raise NonRealSpectrum("eigenvalue %r is not real" % (w[i],))
            continue
        vec = v[:, i]
        # for a real eigenvalue the eigenvector is real up to a complex phase
        k = int(np.argmax(np.abs(vec)))
        vec = (vec / (vec[k] / abs(vec[k]))).real
        pairs.append((float(w[i].real), sign_normalize(vec)))
    return pairs


def svd_cartan(m, tol=ITERATIVE_TOL):
    """
    Cartan decomposition m = k1 . diag(exp(a)) . k2 with k1, k2 orthogonal
    and ``a`` a CartanVector.
    """
    m = as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(m)
    except np.linalg.LinAlgError as e:
        raise NumericalBreakdown("SVD failed to converge: %s" % (e))
    if np.any(s <= 0.0):
        raise Singular("matrix is singular")
    # make both factors rotations where possible
    if np.linalg.det(u) < 0:
        u = u.copy()
        vt = vt.copy()
        u[:, -1] *= -1
        vt[-1, :] *= -1
    a = np.log(s)
    a = a - a.mean()
    return frozen(u), CartanVector(a, tol=tol * len(a)), frozen(vt)


def exterior_power(m, k):
    """
    the k-th compound matrix of ``m``: k x k minors indexed by
    lexicographically ordered index subsets
    """
    m = np.asarray(m, dtype=np.float64)
    d = m.shape[0]
    subsets = np.array(list(itertools.combinations(range(d), k)))
    sub = m[subsets[:, None, :, None], subsets[None, :, None, :]]
    return np.linalg.det(sub)


def subset_log_scales(row_log_scales, k):
    s = np.asarray(row_log_scales, dtype=np.float64)
    return np.array([s[list(t)].sum() for t in itertools.combinations(range(s.size), k)])


def _scaled_log_norm(scales, compound):
    """
    log of the spectral norm of diag(exp(scales)) . compound, computed
    relative to the largest scale whose row is non-zero
    """
    row_norms = np.linalg.norm(compound, axis=1)
    live = row_norms > 0.0
    if not np.any(live):
        raise Singular("compound matrix vanishes")
    ref = np.max(scales[live])
    weights = np.exp(np.where(live, scales - ref, -np.inf))
    return ref + float(np.log(np.linalg.norm(weights[:, None] * compound, 2)))


def graded_log_singular_values(row_log_scales, m, logdet=None):
    """
    log singular values (non-increasing) of diag(exp(row_log_scales)) . m,
    never forming the scaled matrix. The scales may be far outside the
    floating point range. Pass ``logdet`` when log|det m| is known.
    """
    m = as_matrix(m)
    d = m.shape[0]
    s = np.asarray(row_log_scales, dtype=np.float64)
    logs = [0.0]
    for k in range(1, d):
        logs.append(_scaled_log_norm(subset_log_scales(s, k), exterior_power(m, k)))
    if logdet is None:
        sign, logdet = np.linalg.slogdet(m)
        if sign == 0:
            raise Singular("matrix is singular")
    logs.append(float(s.sum() + logdet))
    return np.diff(np.array(logs))


def cartan_projection(m):
    """
    sorted logarithms of the singular values of a unimodular ``m``, using
    norms of compound matrices so the small end is as accurate as the large
    """
    m = as_matrix(m)
    a = graded_log_singular_values(np.zeros(m.shape[0]), m, logdet=0.0)
    if not np.all(np.isfinite(a)):
        raise NumericalBreakdown("non-finite Cartan projection")
    return CartanVector.from_unsorted(a)


def jordan_projection(m):
    """
    sorted logarithms of the eigenvalue moduli of a unimodular ``m``, from
    spectral radii of compound matrices. The last coordinate closes the
    zero sum rather than reading off the determinant.
    """
    m = as_matrix(m)
    d = m.shape[0]
    logs = [0.0]
    try:
        for k in range(1, d):
            rho = float(np.max(np.abs(np.linalg.eigvals(exterior_power(m, k)))))
            if not np.isfinite(rho) or rho <= 0.0:
                raise NumericalBreakdown("degenerate spectral radius of compound %d" % (k))
            logs.append(float(np.log(rho)))
    except np.linalg.LinAlgError as e:
        raise NumericalBreakdown("eigenvalue iteration failed: %s" % (e))
    # log|det m| = 0; slogdet cancels badly on far elements
    logs.append(0.0)
    lam = np.diff(np.array(logs))
    if not np.all(np.isfinite(lam)):
        raise NumericalBreakdown("non-finite Jordan projection")
    return CartanVector.from_unsorted(lam)


def _symmetric_function(mat, fn):
    w, v = np.linalg.eigh(mat)
    return (v * fn(w)) @ v.T


def check_symmetric_traceless(y, tol=ALGEBRAIC_TOL):
    y = as_matrix(y)
    scale = max(1.0, float(np.linalg.norm(y)))
    if np.max(np.abs(y - y.T)) > 1e-12 * scale:
        raise NotSpd("tangent matrix is not symmetric")
    if abs(np.trace(y)) > tol * scale:
        raise NotSpd("tangent matrix is not traceless (trace %.3g)" % (np.trace(y)))
    return frozen((y + y.T) / 2.0)


def spd_log(p):
    "matrix logarithm of an SpdPoint; symmetric and traceless"
    if not isinstance(p, SpdPoint):
        p = SpdPoint(p)
    y = _symmetric_function(p.mat, np.log)
    y = (y + y.T) / 2.0
    return frozen(y - np.trace(y) / y.shape[0] * np.identity(y.shape[0]))


def spd_exp(y):
    "matrix exponential of a symmetric traceless matrix, as an SpdPoint"
    y = check_symmetric_traceless(y)
    half = _symmetric_function(y, lambda w: np.exp(w / 2.0))
    return SpdPoint.from_factor((half + half.T) / 2.0)


def gram_schmidt_kan(m):
    """
    Iwasawa factorisation m = k . a . n adapted to the standard flag: k
    orthogonal, a positive diagonal, n unit upper triangular.
    """
    m = as_matrix(m)
    q, r = scipy.linalg.qr(m)
    diag = np.diag(r)
    if np.min(np.abs(diag)) <= 1e-14 * max(1.0, float(np.max(np.abs(r)))):
        raise Singular("matrix is rank deficient")
    signs = np.sign(diag)
    k = q * signs
    r = signs[:, None] * r
    a = np.diag(r)
    n = r / a[:, None]
    return frozen(k), frozen(np.diag(a)), frozen(n)
