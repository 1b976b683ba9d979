"""
Limit cone estimation: normalised Jordan projections of ball elements,
summarised by their angular interval in the positive chamber, the gaps
inside it and their asymmetry under the opposite involution.
"""

import collections

import numpy as np

from ..common import AnosovLimitsException
from ..boundary import chamber_angle
from ..matrixcore import CartanVector
from .utils import format_word


class EmptyCone(AnosovLimitsException):
    pass


LimitConeSample = collections.namedtuple('LimitConeSample', ['direction', 'norm', 'word'])

DEFAULT_MIN_NORM = 0.2


def iota_asymmetry(angles):
    "Hausdorff distance between a set of chamber angles and its mirror image"
    a = np.sort(np.asarray(angles, dtype=np.float64))
    mirror = -a[::-1]
    idx = np.searchsorted(mirror, a)
    hi = np.clip(idx, 0, len(a) - 1)
    lo = np.clip(idx - 1, 0, len(a) - 1)
    # the mirror is symmetric, so one direction of the Hausdorff distance suffices
    return float(np.max(np.minimum(np.abs(mirror[hi] - a), np.abs(mirror[lo] - a))))


class ConeSummary:
    """
    Samples of the limit cone, with:
      interval: (min_angle, max_angle) of the sampled directions, both attained
      convexity_gaps: angular gaps between consecutive sampled directions,
                      in increasing angle order
      iota_asymmetry: Hausdorff distance between the angle set and its image
                      under theta -> -theta
    """

    def __init__(self, samples):
        self.samples = list(samples)
        self.angles = np.array([chamber_angle(s.direction.coords) for s in self.samples])
        order = np.argsort(self.angles, kind='stable')
        ordered = self.angles[order]
        self.interval = (float(ordered[0]), float(ordered[-1]))
        self.convexity_gaps = [float(t) for t in np.diff(ordered)]
        self.iota_asymmetry = iota_asymmetry(self.angles)

    @property
    def width(self):
        return self.interval[1] - self.interval[0]

    @property
    def max_gap(self):
        return max(self.convexity_gaps) if self.convexity_gaps else 0.0

    def to_dict(self):
        return {
            'samples': len(self.samples),
            'interval': list(self.interval),
            'width': self.width,
            'max_gap': self.max_gap,
            'iota_asymmetry': self.iota_asymmetry,
        }


def limit_cone(elements, min_norm=DEFAULT_MIN_NORM):
    """
    the normalised Jordan projections of elements with translation length at
    least ``min_norm``
    """
    samples = []
    for e in elements:
        lam = e.jordan
        n = lam.norm()
        if n >= min_norm:
            samples.append(LimitConeSample(CartanVector(lam.coords / n), n, format_word(e.word)))
    if not samples:
        raise EmptyCone("no element has translation length >= %g" % (min_norm))
    return ConeSummary(samples)
