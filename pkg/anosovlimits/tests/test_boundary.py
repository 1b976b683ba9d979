import unittest

import numpy as np
from scipy.stats import special_ortho_group

from ..boundary import (
    Flag, BoundaryPoint, NotProximal, NotRegular, NotUnit, NotSymmetric,
    DimMismatch, boundary_point_of, boundary_point_from_direction,
    attracting_flag, attracting_flags, is_opposite, opposite_scores,
    pairwise_oppositeness, chordal_distances, flag_distance,
    opposite_involution, chamber_of, h1_direction, chamber_angle,
    direction_at_angle)
from ..matrixcore import (
    CartanVector, NonRealSpectrum, jordan_projection, unimodular_scaling)


def rotation(seed):
    return special_ortho_group.rvs(3, random_state=seed)


class BoundaryPointTests(unittest.TestCase):

    def test_h1_is_singular(self):
        bp = boundary_point_of(np.diag(h1_direction(3)))
        self.assertEqual((1, 2), bp.flag.signature)
        self.assertTrue(np.allclose(bp.direction, [np.sqrt(2 / 3), -np.sqrt(2 / 3) / 2]))
        self.assertTrue(np.allclose(bp.flag.subspace(1).ravel() ** 2, [1.0, 0.0, 0.0]))
        with self.assertRaises(NotRegular):
            chamber_of(bp)

    def test_regular_diagonal(self):
        u = np.array([3.0, 1.0, -4.0])
        u /= np.linalg.norm(u)
        bp = boundary_point_of(np.diag(u))
        self.assertEqual((1, 1, 1), bp.flag.signature)
        self.assertTrue(np.allclose(bp.flag.basis, np.identity(3)))
        chamber = chamber_of(bp)
        self.assertTrue(chamber.flag.is_full)

    def test_reconstruction_and_equivariance(self):
        u = np.array([2.0, 0.5, -2.5])
        u /= np.linalg.norm(u)
        q = rotation(11)
        y = q @ np.diag(u) @ q.T
        bp = boundary_point_of(y)
        self.assertTrue(np.allclose(bp.direction, u))
        self.assertTrue(np.allclose(bp.tangent(), y, atol=1e-8))
        self.assertLess(flag_distance(bp.flag, Flag.standard(3).act(q)), 1e-8)

    def test_rejects_bad_tangent(self):
        with self.assertRaises(NotUnit):
            boundary_point_of(np.diag([2.0, 0.0, -2.0]))
        with self.assertRaises(NotSymmetric):
            boundary_point_of(np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))

    def test_from_direction_coarsens(self):
        bp = boundary_point_from_direction(Flag.standard(3), h1_direction(3))
        self.assertEqual((1, 2), bp.flag.signature)

    def test_conditions_checked(self):
        with self.assertRaises(NotUnit):
            BoundaryPoint(Flag.standard(3), [1.0, 0.0, -0.5])


class AttractingFlagTests(unittest.TestCase):

    def test_diagonal(self):
        flag = attracting_flag(np.diag([2.0, 1.0, 0.5]))
        self.assertTrue(np.allclose(flag.basis, np.identity(3)))

    def test_conjugated(self):
        q = rotation(3)
        g = q @ np.diag([2.0, 1.0, 0.5]) @ q.T
        self.assertLess(flag_distance(attracting_flag(g), Flag.standard(3).act(q)), 1e-8)

    def test_invariant(self):
        rng = np.random.default_rng(12)
        g = unimodular_scaling(np.diag([4.0, 1.0, 0.25]) + 0.3 * rng.standard_normal((3, 3)))
        flag = attracting_flag(g)
        self.assertLess(flag_distance(flag.act(g), flag), 1e-8)

    def test_identity_not_proximal(self):
        with self.assertRaises(NotProximal):
            attracting_flag(np.identity(3))

    def test_inverse_flag_opposite(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            g = unimodular_scaling(np.diag([5.0, 1.0, 0.2]) + 0.5 * rng.standard_normal((3, 3)))
            try:
                plus = attracting_flag(g)
                minus = attracting_flag(np.linalg.inv(g))
            except (NotProximal, NonRealSpectrum):
                continue
            verdict, score = is_opposite(plus, minus)
            self.assertTrue(verdict)
            self.assertGreater(score, 1e-8)


class OppositenessTests(unittest.TestCase):

    def test_standard_vs_reversed(self):
        verdict, score = is_opposite(Flag.standard(3), Flag.reversed(3))
        self.assertTrue(verdict)
        self.assertAlmostEqual(1.0, score)

    def test_adjacent(self):
        adjacent = Flag(np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]))
        verdict, _ = is_opposite(Flag.standard(3), adjacent)
        self.assertFalse(verdict)

    def test_self(self):
        verdict, score = is_opposite(Flag.standard(3), Flag.standard(3))
        self.assertFalse(verdict)
        self.assertAlmostEqual(0.0, score)

    def test_symmetric_and_batched(self):
        rng = np.random.default_rng(14)
        flags = [Flag(rng.standard_normal((3, 3))) for _ in range(6)]
        scores = opposite_scores(flags)
        for i in range(6):
            for j in range(6):
                self.assertAlmostEqual(scores[i, j], is_opposite(flags[i], flags[j])[1])
                self.assertAlmostEqual(is_opposite(flags[i], flags[j])[1], is_opposite(flags[j], flags[i])[1])

    def test_verdict_invariant_under_action(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            f = Flag(rng.standard_normal((3, 3)))
            f2 = Flag(rng.standard_normal((3, 3)))
            g = unimodular_scaling(np.identity(3) + 0.5 * rng.standard_normal((3, 3)))
            self.assertEqual(is_opposite(f, f2)[0], is_opposite(f.act(g), f2.act(g))[0])

    def test_dim_mismatch(self):
        with self.assertRaises(DimMismatch):
            is_opposite(Flag.standard(3), Flag.standard(4))


class PairwiseOppositenessTests(unittest.TestCase):

    def test_matches_single_pairs(self):
        rng = np.random.default_rng(16)
        flags = [Flag(rng.standard_normal((3, 3))) for _ in range(20)]
        tested, lowest, violations = pairwise_oppositeness(flags, chunk=7)
        self.assertEqual(190, tested)
        self.assertEqual(0, violations)
        expected = min(is_opposite(flags[i], flags[j])[1] for i in range(20) for j in range(i + 1, 20))
        self.assertAlmostEqual(expected, lowest, places=12)

    def test_same_fixed_point_skipped(self):
        f = Flag(rotation(3))
        tested, _, _ = pairwise_oppositeness([f, f, Flag(rotation(4))])
        self.assertEqual(2, tested)

    def test_threshold(self):
        rng = np.random.default_rng(17)
        flags = [Flag(rng.standard_normal((3, 3))) for _ in range(5)]
        tested, _, violations = pairwise_oppositeness(flags, threshold=1.0)
        self.assertEqual(tested, violations)

    def test_scaled_by_separation(self):
        def tangent_flag(t):
            c, s = np.cos(t), np.sin(t)
            p = np.array([c * c, 2 * c * s, s * s])
            dp = np.array([-2 * c * s, 2 * (c * c - s * s), 2 * c * s])
            return Flag(np.column_stack([p, dp, np.cross(p, dp)]))

        # nearby tangent flags of a conic score of order s^2
        flags = [tangent_flag(0.3), tangent_flag(0.3015)]
        sep = chordal_distances([f.basis[:, 0] for f in flags])[0, 1]
        tested, raw, _ = pairwise_oppositeness(flags)
        _, scaled, _ = pairwise_oppositeness(flags, scaled=True)
        self.assertEqual(1, tested)
        self.assertAlmostEqual(raw / sep ** 2, scaled, delta=1e-9 * scaled)
        self.assertGreater(scaled, 1e-3)
        self.assertEqual(1, pairwise_oppositeness(flags, threshold=2 * raw)[2])
        self.assertEqual(0, pairwise_oppositeness(flags, threshold=2 * raw, scaled=True)[2])

    def test_too_few(self):
        self.assertEqual((0, None, 0), pairwise_oppositeness([Flag.standard(3)]))

    def test_chordal_distances(self):
        dist = chordal_distances([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [1.0, 1.0, 0.0]])
        self.assertAlmostEqual(1.0, dist[0, 1], places=12)
        self.assertAlmostEqual(np.sqrt(0.5), dist[0, 2], places=12)
        self.assertAlmostEqual(0.0, dist[2, 2], places=6)

    def test_attracting_flags_skip(self):
        rot = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        found = attracting_flags([np.diag([2.0, 1.0, 0.5]), rot, np.identity(3)])
        self.assertEqual([0], [i for i, _ in found])


def test_involution_examples():
    v = CartanVector([0.9, 0.1, -1.0])
    assert(np.allclose(opposite_involution(v).coords, [1.0, -0.1, -0.9]))
    s = CartanVector(np.array([1.0, 0.0, -1.0]) / np.sqrt(2))
    assert(np.allclose(opposite_involution(s).coords, s.coords))
    assert(opposite_involution(opposite_involution(v)) == v)


def test_involution_matches_inverse_spectrum():
    rng = np.random.default_rng(16)
    for _ in range(100):
        g = unimodular_scaling(np.identity(3) + rng.standard_normal((3, 3)))
        lam = jordan_projection(g)
        assert(np.allclose(opposite_involution(lam).coords, jordan_projection(np.linalg.inv(g)).coords, atol=1e-8))


def test_chamber_angles():
    assert(abs(chamber_angle(h1_direction(3)) - np.pi / 6) < 1e-12)
    assert(abs(chamber_angle(np.array([1.0, 0.0, -1.0])) - 0.0) < 1e-12)
    assert(np.allclose(direction_at_angle(-np.pi / 6), -h1_direction(3)[::-1]))
