"""
Group elements as (matrix, word) pairs, generator presentations, and the
enumeration of word balls.
"""

import hashlib

import numpy as np
import scipy.spatial

from ..common import AnosovLimitsException, logger, ALGEBRAIC_TOL
from ..matrixcore import (
    as_matrix, frozen, check_unimodular, cartan_projection, jordan_projection,
    unit_determinant)
from .utils import alphabet, free_reduce, format_word, shortlex_key


class ToleranceCollision(AnosovLimitsException):
    pass


class NonDiscreteSuspected(AnosovLimitsException):
    pass


# a non-trivial word this close to the identity suggests a non-discrete group
NEAR_IDENTITY_TOL = 1e-6


def sign_fixed(m):
    """
    representative of +-m with the first non-negligible entry positive; in
    odd dimension the determinant already fixes the sign
    """
    if m.shape[0] % 2 == 1:
        return m
    flat = m.ravel()
    scale = np.max(np.abs(flat))
    for x in flat:
        if abs(x) > 1e-12 * scale:
            return m if x > 0 else -m
    return m


class GroupElement:
    """
    A matrix together with a freely reduced word in the generators that
    evaluates to it (up to sign in even dimension). Jordan and Cartan
    projections are computed on first use and cached.
    """

    def __init__(self, matrix, word=(), jordan=None, cartan=None):
        self.matrix = as_matrix(matrix)
        self.word = free_reduce(tuple(int(t) for t in word))
        self._jordan = jordan
        self._cartan = cartan

    @classmethod
    def identity(cls, d):
        return cls(np.identity(d), ())

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def jordan(self):
        if self._jordan is None:
            self._jordan = jordan_projection(self.matrix)
        return self._jordan

    @property
    def cartan(self):
        if self._cartan is None:
            self._cartan = cartan_projection(self.matrix)
        return self._cartan

    def __len__(self):
        return len(self.word)

    def __mul__(self, other):
        return GroupElement(self.matrix @ other.matrix, self.word + other.word)

    def inverse(self):
        return GroupElement(np.linalg.inv(self.matrix), tuple(-t for t in reversed(self.word)))

    def power(self, n):
        if n < 0:
            return self.inverse().power(-n)
        base = unit_determinant(self.matrix)
        m = np.identity(self.dim)
        for _ in range(n):
            m = unit_determinant(m @ base)
        return GroupElement(m, self.word * n)

    def conjugate(self, h):
        "h g h^-1"
        return h * self * h.inverse()

    def is_identity(self, tol=ALGEBRAIC_TOL):
        m = sign_fixed(self.matrix)
        return bool(np.max(np.abs(m - np.identity(self.dim))) <= tol * max(1.0, float(np.max(np.abs(m)))))

    def __repr__(self):
        return "GroupElement(word=%s)" % (format_word(self.word),)


class Presentation:
    """
    Generators of a subgroup of SL(d,R). ``kind`` names the preset family,
    ``relations`` lists words that evaluate to +-I, and ``datum`` carries
    whatever raw data the preset was built from.
    """

    def __init__(self, generators, labels=None, kind="custom", relations=(), datum=None, tol=ALGEBRAIC_TOL):
        if not generators:
            raise AnosovLimitsException("a presentation needs at least one generator")
        self.generators = [check_unimodular(g, tol) for g in generators]
        dims = set(g.shape[0] for g in self.generators)
        if len(dims) != 1:
            raise AnosovLimitsException("generators have mixed dimensions %r" % (sorted(dims),))
        if labels is None:
            labels = ["g%d" % (i + 1) for i in range(len(generators))]
        self.labels = list(labels)
        self.kind = kind
        self.relations = [tuple(w) for w in relations]
        self.datum = datum
        self._inverses = [frozen(np.linalg.inv(g)) for g in self.generators]

    @property
    def dim(self):
        return self.generators[0].shape[0]

    def letter(self, t):
        "matrix of the signed generator index t"
        return self.generators[t - 1] if t > 0 else self._inverses[-t - 1]

    def evaluate(self, word):
        m = np.identity(self.dim)
        for t in word:
            m = m @ self.letter(t)
        return m

    def element(self, word):
        return GroupElement(self.evaluate(free_reduce(word)), word)

    def sym2(self):
        "the presentation lifted through the symmetric square of a 2 x 2 presentation"
        from .presets import sym2_lift
        return Presentation([sym2_lift(g) for g in self.generators], self.labels,
                            "sym2_" + self.kind, self.relations, self.datum)

    def descriptor(self):
        "canonical text naming this presentation; equal presentations give equal text"
        parts = ["kind=%s" % (self.kind), "labels=%s" % (",".join(self.labels))]
        for g in self.generators:
            parts.append("gen=" + " ".join("%.17g" % x for x in g.ravel()))
        if self.datum is not None:
            parts.append("datum=" + " ".join("%.17g" % x for x in np.ravel(self.datum)))
        return ";".join(parts)

    def digest(self):
        return hashlib.sha256(self.descriptor().encode('utf8')).hexdigest()


def _normalised_rows(matrices):
    "each matrix flattened and divided by its largest entry modulus"
    flat = np.array([m.ravel() for m in matrices])
    scale = np.maximum(np.max(np.abs(flat), axis=1), 1.0)
    return flat / scale[:, None]


def _dedupe_level(candidates, kept_rows, dedupe_tol):
    """
    indices of candidates that are new: not within dedupe_tol of a kept
    matrix and not within dedupe_tol of an earlier candidate
    """
    rows = _normalised_rows([m for m, _ in candidates])
    fresh = np.ones(len(candidates), dtype=bool)
    radius = 10.0 * dedupe_tol
    old = scipy.spatial.cKDTree(kept_rows)
    for i, hits in enumerate(old.query_ball_point(rows, r=radius, p=np.inf)):
        if not hits:
            continue
        gap = np.min(np.max(np.abs(kept_rows[hits] - rows[i]), axis=1))
        if gap > dedupe_tol:
            raise ToleranceCollision("word %s is %.3g from a known element" % (format_word(candidates[i][1]), gap))
        fresh[i] = False
    current = scipy.spatial.cKDTree(rows)
    for i, j in sorted(current.query_pairs(r=radius, p=np.inf)):
        gap = float(np.max(np.abs(rows[i] - rows[j])))
        if gap > dedupe_tol:
            raise ToleranceCollision("words %s and %s differ by %.3g" % (
                format_word(candidates[i][1]), format_word(candidates[j][1]), gap))
        fresh[j] = False
    return [i for i in range(len(candidates)) if fresh[i]], rows


def enumerate_ball(p, radius, dedupe_tol=ALGEBRAIC_TOL, near_identity_tol=NEAR_IDENTITY_TOL):
    """
    one element per distinct matrix among freely reduced words of length at
    most ``radius``, identity excluded, in shortlex order of the shortest
    word reaching each matrix
    """
    if radius < 1:
        raise AnosovLimitsException("ball radius must be at least 1")
    d = p.dim
    letters = alphabet(len(p.generators))
    identity = np.identity(d)
    kept_rows = _normalised_rows([identity])
    frontier = [(identity, ())]
    ball = []
    for length in range(1, radius + 1):
        candidates = []
        for m, word in frontier:
            for t in letters:
                if word and t == -word[-1]:
                    continue
                candidates.append((sign_fixed(m @ p.letter(t)), word + (t,)))
        if not candidates:
            break
        fresh, rows = _dedupe_level(candidates, kept_rows, dedupe_tol)
        frontier = [candidates[i] for i in fresh]
        if length >= 2:
            for m, word in frontier:
                if np.max(np.abs(m - identity)) <= near_identity_tol:
                    raise NonDiscreteSuspected("word %s is within %.3g of the identity" % (
                        format_word(word), np.max(np.abs(m - identity))))
        kept_rows = np.vstack([kept_rows, rows[fresh]])
        ball.extend(GroupElement(m, word) for m, word in frontier)
        logger.debug("ball level %d: %d candidates, %d new" % (length, len(candidates), len(fresh)))
    ball.sort(key=lambda e: shortlex_key(e.word))
    logger.info("enumerated %d elements in the ball of radius %d" % (len(ball), radius))
    return ball
