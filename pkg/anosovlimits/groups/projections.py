"""
Jordan and Cartan projections of group elements, translation lengths,
proximality, minimal displacement and quasi-isometry constants of the orbit
map.
"""

import collections

import numpy as np
import scipy.linalg
import scipy.optimize

from ..common import AnosovLimitsException, logger
from ..matrixcore import SpdPoint, as_matrix, cartan_projection as _cartan
from ..symspace import distance
from .words import GroupElement


class InsufficientData(AnosovLimitsException):
    pass


ProximalityReport = collections.namedtuple(
    'ProximalityReport', ['proximal', 'biproximal', 'positively', 'gaps'])

QIConstants = collections.namedtuple(
    'QIConstants', ['A_lower', 'B_lower', 'A_upper', 'B_upper', 'quasi_isometric'])


def _as_element(g):
    return g if isinstance(g, GroupElement) else GroupElement(g)


def jordan_projection(g):
    "sorted log-moduli of the eigenvalues"
    return _as_element(g).jordan


def cartan_projection(g):
    "sorted log singular values"
    return _as_element(g).cartan


def translation_length(g):
    "|lambda(g)|, the displacement of g on X"
    return jordan_projection(g).norm()


def proximality_check(g, tol=1e-6):
    """
    gaps are lambda_i / lambda_(i+1) - 1 for consecutive eigenvalue moduli;
    ``positively`` means the top eigenvalue is simple, real and positive
    """
    g = _as_element(g)
    lam = g.jordan.coords
    gaps = np.expm1(lam[:-1] - lam[1:])
    proximal = bool(gaps[0] > tol)
    biproximal = proximal and bool(gaps[-1] > tol)
    positively = False
    if proximal:
        w = np.linalg.eigvals(g.matrix)
        top = w[int(np.argmax(np.abs(w)))]
        positively = bool(abs(top.imag) <= tol * abs(top) and top.real > 0)
    return ProximalityReport(proximal, biproximal, positively, [float(t) for t in gaps])


def is_positively_biproximal(g, tol=1e-6):
    "g and g^-1 are both positively proximal"
    g = _as_element(g)
    forward = proximality_check(g, tol)
    if not (forward.biproximal and forward.positively):
        return False
    return proximality_check(g.inverse(), tol).positively


def _symmetric_basis(d):
    "an orthonormal basis of the symmetric traceless d x d matrices"
    basis = []
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d))
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(e)
    for k in range(1, d):
        e = np.zeros((d, d))
        e[np.arange(k), np.arange(k)] = 1.0
        e[k, k] = -float(k)
        basis.append(e / np.linalg.norm(e))
    return np.array(basis)


def minimal_displacement(g, budget=4000):
    """
    inf over x in X of d(x, g.x), minimised directly with Nelder-Mead over
    x = exp(Y).o from the basepoint and, for a real diagonalisable g, from a
    point on its axis flat
    """
    m = as_matrix(_as_element(g).matrix)
    d = m.shape[0]
    basis = _symmetric_basis(d)

    def displacement(coords):
        y = np.tensordot(coords, basis, axes=1)
        w, q = np.linalg.eigh(y)
        half = (q * np.exp(w)) @ q.T
        inv_half = (q * np.exp(-w)) @ q.T
        return _cartan(inv_half @ m @ half).norm()

    starts = [np.zeros(len(basis))]
    w, v = np.linalg.eig(m)
    if np.all(np.abs(w.imag) <= 1e-12 * np.max(np.abs(w))):
        v = v.real
        sign, logdet = np.linalg.slogdet(v)
        if sign != 0:
            frame = v / np.exp(logdet / d)
            y = 0.5 * scipy.linalg.logm(frame @ frame.T).real
            starts.append(np.array([np.sum(y * e) for e in basis]))
    best = np.inf
    for start in starts:
        res = scipy.optimize.minimize(displacement, start, method='Nelder-Mead',
                                      options={'maxiter': budget, 'xatol': 1e-10, 'fatol': 1e-12})
        best = min(best, float(res.fun), displacement(start))
    return best


def qi_constants(elements, base=None, floor=0.01, min_elements=20, min_lengths=3):
    """
    envelopes of d(base, g.base) against word length: the L1-tightest line
    A_upper n + B_upper above all points and A_lower n - B_lower below, with
    B >= 0. The orbit map looks quasi-isometric when A_lower > floor.
    """
    elements = [e for e in elements if len(e.word) > 0]
    lengths = np.array([len(e.word) for e in elements], dtype=np.float64)
    if len(elements) < min_elements or len(set(lengths.tolist())) < min_lengths:
        raise InsufficientData("need %d elements over %d word lengths, got %d over %d" % (
            min_elements, min_lengths, len(elements), len(set(lengths.tolist()))))
    if base is None:
        base = SpdPoint.basepoint(elements[0].dim)
    dists = np.array([distance(base.act(e.matrix), base) for e in elements])
    n = len(elements)
    # upper: minimise sum(A n_i + B - d_i) subject to A n_i + B >= d_i
    upper = scipy.optimize.linprog(
        [lengths.sum(), n], A_ub=np.column_stack([-lengths, -np.ones(n)]), b_ub=-dists,
        bounds=[(None, None), (0, None)], method='highs')
    # lower: maximise sum(A n_i - B) subject to A n_i - B <= d_i
    lower = scipy.optimize.linprog(
        [-lengths.sum(), n], A_ub=np.column_stack([lengths, -np.ones(n)]), b_ub=dists,
        bounds=[(None, None), (0, None)], method='highs')
    if upper.status != 0 or lower.status != 0:
        raise InsufficientData("envelope fit failed: %s / %s" % (upper.message, lower.message))
    a_up, b_up = upper.x
    a_lo, b_lo = lower.x
    logger.debug("QI envelopes: lower %.4g n - %.4g, upper %.4g n + %.4g" % (a_lo, b_lo, a_up, b_up))
    return QIConstants(float(a_lo), float(b_lo), float(a_up), float(b_up), bool(a_lo > floor))
