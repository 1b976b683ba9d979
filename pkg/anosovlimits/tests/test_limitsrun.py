import contextlib
import csv
import io
import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from ..limitsrun import parse_args, execute, EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL
from ..acceptance import CRITERIA


SCENARIOS = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', '..', 'scenarios')


DIAGONAL = """
preset.name = diagonal
preset.diagonal = 2 1 0.5
ball.radius = 3
classify.elements = 1
classify.n_max = 12
"""

REFLECTION = """
preset.name = reflection
preset.p = 3
preset.q = 3
preset.r = 4
preset.t = 2.0
ball.radius = 4
"""


class LimitsRunTests(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.out = os.path.join(self.tmpdir, 'out')
        env = dict(os.environ)
        env.pop('ANOSOV_LIMITS_CACHE', None)
        self.env = mock.patch.dict(os.environ, env, clear=True)
        self.env.start()

    def tearDown(self):
        self.env.stop()
        shutil.rmtree(self.tmpdir)

    def scenario(self, text, name='scenario.conf'):
        path = os.path.join(self.tmpdir, name)
        with open(path, 'w') as fd:
            fd.write(text)
        return path

    def run_cli(self, *argv):
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout):
            code = execute(parse_args(list(argv) + ['--out', self.out, '--workers', '1']))
        return code, stdout.getvalue()

    def shipped(self, name, settings):
        "a copy of a shipped scenario with the given keys replaced"
        with open(os.path.join(SCENARIOS, name)) as fd:
            lines = [line.rstrip('\n') + '\n' for line in fd if line.split('=')[0].strip() not in settings]
        lines += ["%s = %s\n" % (key, value) for key, value in sorted(settings.items())]
        return self.scenario(''.join(lines), name)

    def read(self, name, mode='r'):
        with open(os.path.join(self.out, name), mode) as fd:
            return fd.read()

    def cache_files(self):
        return sorted(os.listdir(os.path.join(self.out, 'cache')))

    def test_enumerate(self):
        code, stdout = self.run_cli('enumerate', '--config', self.scenario(DIAGONAL))
        self.assertEqual(EXIT_OK, code)
        self.assertIn("element_count 6", stdout)
        self.assertEqual(1, len(self.cache_files()))
        report = json.loads(self.read('run-enumerate.json'))
        self.assertEqual(6, report['summary']['element_count'])
        self.assertIn('cache', report['outputs'])

    def test_enumerate_idempotent(self):
        config = self.scenario(REFLECTION)
        self.run_cli('enumerate', '--config', config)
        name = self.cache_files()[0]
        first = self.read(os.path.join('cache', name), 'rb')
        self.run_cli('enumerate', '--config', config)
        self.assertEqual(first, self.read(os.path.join('cache', name), 'rb'))

    def test_cache_directory_from_environment(self):
        cache = os.path.join(self.tmpdir, 'elsewhere')
        os.environ['ANOSOV_LIMITS_CACHE'] = cache
        self.run_cli('enumerate', '--config', self.scenario(DIAGONAL))
        self.assertEqual(1, len(os.listdir(cache)))

    def test_radius_override(self):
        code, stdout = self.run_cli('enumerate', '--config', self.scenario(DIAGONAL), '--radius', '2')
        self.assertEqual(EXIT_OK, code)
        self.assertIn("element_count 4", stdout)

    def test_config_errors(self):
        self.assertEqual(EXIT_CONFIG, self.run_cli('enumerate', '--config', self.scenario("preset.name = hexagon\n"))[0])
        self.assertEqual(EXIT_CONFIG, self.run_cli('enumerate', '--config', os.path.join(self.tmpdir, 'missing.conf'))[0])
        self.assertEqual(EXIT_CONFIG, self.run_cli('enumerate', '--config', self.scenario(DIAGONAL), '--radius', '15')[0])

    def test_limit_cone(self):
        code, _ = self.run_cli('limit-cone', '--config', self.scenario(DIAGONAL))
        self.assertEqual(EXIT_OK, code)
        rows = list(csv.reader(io.StringIO(self.read('cone.csv'))))
        self.assertEqual(['angle', 'norm', 'word'], rows[0])
        self.assertEqual(6, len(rows) - 1)
        self.assertTrue(all(abs(float(r[0])) < 1e-12 for r in rows[1:]))
        self.assertNotIn('\r', self.read('cone.csv'))
        summary = json.loads(self.read('cone.json'))
        self.assertLess(summary['width'], 1e-12)
        self.assertEqual(6, summary['element_count'])

    def test_limit_cone_uses_cache(self):
        config = self.scenario(DIAGONAL)
        self.run_cli('enumerate', '--config', config)
        self.run_cli('limit-cone', '--config', config)
        report = json.loads(self.read('run-limit-cone.json'))
        self.assertEqual('cache', report['summary']['ball_source'])

    def test_limit_cone_deterministic(self):
        config = self.scenario(REFLECTION)
        self.run_cli('limit-cone', '--config', config)
        first = self.read('cone.csv'), self.read('cone.json')
        shutil.rmtree(self.out)
        self.run_cli('limit-cone', '--config', config)
        self.assertEqual(first, (self.read('cone.csv'), self.read('cone.json')))

    def test_boundary(self):
        code, _ = self.run_cli('boundary', '--config', self.scenario(REFLECTION))
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(self.read('boundary.svg').startswith('<svg'))
        self.assertEqual('index,chart_x,chart_y,homog_1,homog_2,homog_3', self.read('boundary.csv').split('\n')[0])
        stats = json.loads(self.read('boundary.json'))
        self.assertIn('conic_residual', stats)
        self.assertEqual(0, stats['oppositeness']['violations'])
        report = json.loads(self.read('run-boundary.json'))
        for kind in ('csv', 'svg', 'json'):
            self.assertIn(kind, report['outputs'])

    def test_boundary_needs_plane(self):
        config = self.scenario("preset.name = fuchsian_triangle\npreset.p = 2\npreset.q = 3\npreset.r = 7\npreset.sym2 = no\nball.radius = 3\n")
        self.assertEqual(EXIT_NUMERICAL, self.run_cli('boundary', '--config', config)[0])

    def test_classify(self):
        code, _ = self.run_cli('classify', '--config', self.scenario(DIAGONAL))
        self.assertEqual(EXIT_OK, code)
        lines = self.read('classify.jsonl').splitlines()
        self.assertEqual(1, len(lines))
        obj = json.loads(lines[0])
        self.assertTrue(obj['verdicts']['horospherical'])
        self.assertEqual('diagonal', obj['config']['preset.name'])
        digest = json.loads(self.read('classify-digest.json'))
        self.assertEqual(1, digest['chambers'][0]['radial_cells'])

    def test_classify_empty(self):
        code, _ = self.run_cli('classify', '--config', self.scenario(DIAGONAL.replace("classify.elements = 1", "classify.elements = 0")))
        self.assertEqual(EXIT_OK, code)
        self.assertEqual('', self.read('classify.jsonl'))

    def test_classify_shipped_scenarios(self):
        for name in ('reflection_334.conf', 'fuchsian_237.conf'):
            code, _ = self.run_cli('classify', '--config', self.shipped(name, {'classify.elements': '2', 'outputs.png': 'no'}))
            self.assertEqual(EXIT_OK, code, name)
            objs = [json.loads(line) for line in self.read('classify.jsonl').splitlines()]
            self.assertTrue(objs, name)
            self.assertTrue(all(obj['verdicts']['horospherical'] for obj in objs), name)
            digest = json.loads(self.read('classify-digest.json'))
            self.assertEqual(2, len(digest['chambers']), name)
            self.assertEqual([1, 1], [c['radial_cells'] for c in digest['chambers']], name)

    def test_verify_shipped_scenario(self):
        code, _ = self.run_cli('verify', '--config', self.shipped('reflection_334.conf', {'outputs.png': 'no'}))
        outcomes = json.loads(self.read('verify.json'))
        self.assertEqual(12, len(outcomes))
        self.assertEqual([], [o['number'] for o in outcomes if not o['passed']])
        self.assertEqual(EXIT_OK, code)

    def test_list(self):
        code, stdout = self.run_cli('verify', '--list')
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(len(CRITERIA), len(stdout.strip().splitlines()))
        self.assertFalse(os.path.exists(self.out))


def test_config_required():
    try:
        with contextlib.redirect_stderr(io.StringIO()):
            parse_args(['enumerate'])
    except SystemExit as e:
        assert(e.code == 2)
    else:
        assert(False)
