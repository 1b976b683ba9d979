import os
import shutil
import tempfile
import unittest

import numpy as np

from ..groups.words import enumerate_ball
from ..groups.presets import preset_reflection_deformation
from ..groups.ballcache import CacheFormatError, MAGIC, cache_path, write_ball_cache, read_ball_cache


class BallCacheTests(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.presentation = preset_reflection_deformation(3, 3, 4, 2.0)
        self.ball = enumerate_ball(self.presentation, 3)

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def write(self, name):
        path = os.path.join(self.tmpdir, name)
        write_ball_cache(path, self.presentation, 3, self.ball)
        return path

    def read_text(self, path):
        with open(path) as fd:
            return fd.read()

    def test_header(self):
        header, elements = read_ball_cache(self.write("a.txt"))
        self.assertEqual(3, header['radius'])
        self.assertEqual(3, header['dim'])
        self.assertEqual(len(self.ball), header['elements'])
        self.assertEqual(self.presentation.descriptor(), header['preset'])

    def test_elements_restored(self):
        _, elements = read_ball_cache(self.write("a.txt"))
        self.assertEqual([e.word for e in self.ball], [e.word for e in elements])
        for a, b in zip(self.ball, elements):
            self.assertTrue(np.array_equal(a.matrix, b.matrix))
            self.assertEqual(a.jordan, b.jordan)
            self.assertEqual(a.cartan, b.cartan)

    def test_byte_identical(self):
        self.assertEqual(self.read_text(self.write("a.txt")), self.read_text(self.write("b.txt")))

    def test_bad_magic(self):
        path = os.path.join(self.tmpdir, "bad.txt")
        with open(path, 'w') as fd:
            fd.write("# something else\n")
        self.assertRaises(CacheFormatError, read_ball_cache, path)

    def test_truncated(self):
        path = self.write("a.txt")
        lines = self.read_text(path).split('\n')
        with open(path, 'w') as fd:
            fd.write('\n'.join(lines[:-2]) + '\n')
        self.assertRaises(CacheFormatError, read_ball_cache, path)

    def test_bad_field_count(self):
        path = os.path.join(self.tmpdir, "short.txt")
        with open(path, 'w') as fd:
            fd.write('\n'.join([MAGIC, "# preset x", "# radius 1", "# dim 3", "# elements 1", "1\t1\t0"]) + '\n')
        self.assertRaises(CacheFormatError, read_ball_cache, path)

    def test_cache_path(self):
        path = cache_path(self.tmpdir, self.presentation, 3)
        self.assertEqual(self.tmpdir, os.path.dirname(path))
        self.assertIn(self.presentation.digest()[:16], path)
        self.assertNotEqual(path, cache_path(self.tmpdir, self.presentation, 4))
