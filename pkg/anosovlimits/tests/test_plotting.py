import os
import shutil
import tempfile
import unittest

import numpy as np

from ..hilbert import ConvexBody
from ..groups.presets import preset_reflection_deformation
from ..groups.words import enumerate_ball
from ..groups.cone import limit_cone
from ..plotting import plot_boundary, plot_cone


PNG_MAGIC = b'\x89PNG\r\n\x1a\n'


class PlottingTests(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def assertPng(self, path):
        with open(path, 'rb') as fd:
            self.assertEqual(PNG_MAGIC, fd.read(8))

    def test_boundary(self):
        angles = 2 * np.pi * np.arange(64) / 64
        xy = np.column_stack([np.cos(angles), np.sin(angles)])
        omega = ConvexBody.from_chart_points(xy)
        path = os.path.join(self.tmpdir, 'boundary.png')
        plot_boundary(omega, omega.vertices[::8], path)
        self.assertPng(path)

    def test_cone(self):
        cone = limit_cone(enumerate_ball(preset_reflection_deformation(3, 3, 4, 2.0), 4))
        path = os.path.join(self.tmpdir, 'cone.png')
        plot_cone(cone, path)
        self.assertPng(path)
