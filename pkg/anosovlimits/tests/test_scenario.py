import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from ..scenario import ConfigError, MAX_RADIUS, parse_scenario, read_scenario, build_presentation


REFLECTION = """
# deformed (3,3,4) reflection group
preset.name = reflection
preset.p = 3
preset.q = 3
preset.r = 4
preset.t = 2.0   # off the Fuchsian locus

ball.radius = 4
outputs.png = no
"""


def error_of(text):
    try:
        parse_scenario(text)
    except ConfigError as e:
        return e
    raise AssertionError("no ConfigError raised")


class ParseTests(unittest.TestCase):

    def test_reflection(self):
        s = parse_scenario(REFLECTION)
        self.assertEqual('reflection', s['preset.name'])
        self.assertEqual(4, s.radius)
        self.assertEqual(2.0, s['preset.t'])
        self.assertFalse(s.wants('png'))
        self.assertTrue(s.wants('csv'))
        self.assertEqual(0, s.seed)
        self.assertEqual(0.02, s['classify.grid_step'])
        self.assertEqual(7, s.lines['preset.t'])

    def test_presentation(self):
        p = build_presentation(parse_scenario(REFLECTION))
        self.assertEqual('reflection', p.kind)
        self.assertEqual(3, p.dim)

    def test_fuchsian_lift(self):
        text = "preset.name = fuchsian_triangle\npreset.p = 2\npreset.q = 3\npreset.r = 7\n"
        self.assertEqual(3, build_presentation(parse_scenario(text)).dim)
        self.assertEqual(2, build_presentation(parse_scenario(text + "preset.sym2 = no\n")).dim)

    def test_custom_generators(self):
        s = parse_scenario("preset.name = custom\npreset.generators = 2 0 0; 0 1 0; 0 0 0.5 | 1 1 0; 0 1 0; 0 0 1\n")
        p = build_presentation(s)
        self.assertEqual(2, len(p.generators))
        self.assertTrue(np.allclose(np.diag([2.0, 1.0, 0.5]), p.generators[0]))

    def test_diagonal(self):
        p = build_presentation(parse_scenario("preset.name = diagonal\npreset.diagonal = 2 1 0.5\n"))
        self.assertEqual(1, len(p.generators))
        self.assertAlmostEqual(1.0, np.linalg.det(p.generators[0]), places=12)

    def test_near_identity_uses_seed(self):
        a = build_presentation(parse_scenario("preset.name = near_identity\nrun.seed = 1\n"))
        b = build_presentation(parse_scenario("preset.name = near_identity\nrun.seed = 2\n"))
        self.assertNotEqual(a.digest(), b.digest())

    def test_booleans(self):
        for word, value in (('yes', True), ('TRUE', True), ('1', True), ('no', False), ('false', False), ('0', False)):
            s = parse_scenario(REFLECTION.replace("outputs.png = no", "outputs.png = %s" % (word)))
            self.assertEqual(value, s.wants('png'))


class ErrorTests(unittest.TestCase):

    def test_unknown_preset(self):
        e = error_of("preset.name = hexagon\n")
        self.assertEqual(1, e.line)
        self.assertEqual('preset.name', e.field)

    def test_unknown_key(self):
        e = error_of(REFLECTION + "ball.size = 3\n")
        self.assertEqual('ball.size', e.field)
        self.assertEqual(11, e.line)

    def test_missing_parameter(self):
        e = error_of(REFLECTION.replace("preset.t = 2.0", ""))
        self.assertEqual('preset.t', e.field)

    def test_missing_preset(self):
        self.assertEqual('preset.name', error_of("ball.radius = 3\n").field)

    def test_radius_range(self):
        e = error_of(REFLECTION.replace("ball.radius = 4", "ball.radius = %d" % (MAX_RADIUS + 1)))
        self.assertEqual('ball.radius', e.field)
        self.assertEqual(9, e.line)
        self.assertRaises(ConfigError, parse_scenario(REFLECTION).override, radius=0)

    def test_bad_values(self):
        self.assertEqual('preset.p', error_of(REFLECTION.replace("preset.p = 3", "preset.p = three")).field)
        self.assertEqual('outputs.png', error_of(REFLECTION.replace("outputs.png = no", "outputs.png = maybe")).field)
        self.assertEqual('preset.generators', error_of("preset.name = custom\npreset.generators = 1 0; 0 1 0\n").field)

    def test_syntax(self):
        self.assertEqual(2, error_of("preset.name = diagonal\nball.radius 3\n").line)
        self.assertEqual('radius', error_of("preset.name = diagonal\nradius = 3\n").field)
        self.assertEqual('a.b.c', error_of("a.b.c = 1\n").field)

    def test_duplicate(self):
        e = error_of(REFLECTION + "preset.t = 1.0\n")
        self.assertEqual('preset.t', e.field)
        self.assertIn("line 7", str(e))


class OverrideTests(unittest.TestCase):

    def test_override(self):
        s = parse_scenario(REFLECTION)
        o = s.override(radius=6, seed=9)
        self.assertEqual(6, o.radius)
        self.assertEqual(9, o.seed)
        self.assertEqual(4, s.radius)
        self.assertEqual(s.override().settings, s.settings)

    def test_echo(self):
        s = parse_scenario("preset.name = custom\npreset.generators = 2 0 0; 0 1 0; 0 0 0.5\n")
        echo = s.echo()
        self.assertEqual(sorted(echo), list(echo))
        self.assertEqual([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]], echo['preset.generators'][0])
        self.assertNotIn('preset.t', echo)
        json.dumps(echo)


class ReadScenarioTests(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_read(self):
        path = os.path.join(self.tmpdir, 'deformed.conf')
        with open(path, 'w') as fd:
            fd.write(REFLECTION)
        s = read_scenario(path)
        self.assertEqual(path, s.path)
        self.assertEqual(4, s.radius)
