import unittest

import numpy as np

from ..boundary import direction_at_angle
from ..matrixcore import CartanVector
from ..groups.words import GroupElement, enumerate_ball
from ..groups.presets import preset_diagonal, preset_reflection_deformation
from ..groups.cone import EmptyCone, LimitConeSample, ConeSummary, limit_cone, iota_asymmetry


def sample_at(theta, norm=1.0):
    return LimitConeSample(CartanVector(direction_at_angle(theta)), norm, "e")


class IotaAsymmetryTests(unittest.TestCase):

    def test_symmetric(self):
        self.assertEqual(0.0, iota_asymmetry([-0.3, -0.1, 0.1, 0.3]))

    def test_one_sided(self):
        self.assertAlmostEqual(0.3, iota_asymmetry([0.1, 0.2]), places=12)

    def test_single_wall_direction(self):
        self.assertAlmostEqual(np.pi / 3, iota_asymmetry([np.pi / 6]), places=12)


class ConeSummaryTests(unittest.TestCase):

    def test_interval_attained(self):
        cone = ConeSummary([sample_at(t) for t in (0.1, -0.2, 0.05)])
        self.assertAlmostEqual(-0.2, cone.interval[0], places=12)
        self.assertAlmostEqual(0.1, cone.interval[1], places=12)
        self.assertIn(cone.interval[0], cone.angles)
        self.assertIn(cone.interval[1], cone.angles)

    def test_gaps(self):
        cone = ConeSummary([sample_at(t) for t in (0.1, -0.2, 0.05)])
        self.assertTrue(np.allclose([0.25, 0.05], cone.convexity_gaps, atol=1e-12))
        self.assertAlmostEqual(0.25, cone.max_gap, places=12)
        self.assertAlmostEqual(0.3, cone.width, places=12)

    def test_to_dict(self):
        d = ConeSummary([sample_at(0.0)]).to_dict()
        self.assertEqual(1, d['samples'])
        self.assertEqual(0.0, d['max_gap'])


class LimitConeTests(unittest.TestCase):

    def test_powers_single_direction(self):
        cone = limit_cone(enumerate_ball(preset_diagonal([2.0, 1.0, 0.5]), 5))
        self.assertEqual(10, len(cone.samples))
        self.assertLess(cone.width, 1e-12)
        self.assertLess(abs(cone.interval[0]), 1e-12)

    def test_unit_directions(self):
        cone = limit_cone(enumerate_ball(preset_reflection_deformation(3, 3, 4, 2.0), 5))
        for s in cone.samples:
            self.assertAlmostEqual(1.0, np.linalg.norm(s.direction.coords), places=9)
            self.assertGreaterEqual(s.norm, 0.2)

    def test_min_norm_filter(self):
        small = GroupElement(np.diag([1.01, 1.0, 1 / 1.01]), (1,))
        self.assertRaises(EmptyCone, limit_cone, [small])
        self.assertEqual(1, len(limit_cone([small], min_norm=0.001).samples))

    def test_deformed_cone_is_nearly_symmetric(self):
        cone = limit_cone(enumerate_ball(preset_reflection_deformation(3, 3, 4, 2.0), 8))
        self.assertLess(cone.iota_asymmetry, 0.5 * cone.width)


def test_empty():
    try:
        limit_cone([])
    except EmptyCone:
        pass
    else:
        assert(False)
