import json
import os
import shutil
import tempfile
import unittest

from ..scenario import parse_scenario
from ..groups.presets import preset_diagonal
from ..groups.words import enumerate_ball
from ..groups.cone import limit_cone
from ..results import BaseReport, JSONRunReport, OppositenessStats, ChamberDigest


SCENARIO = "preset.name = diagonal\npreset.diagonal = 2 1 0.5\nball.radius = 3\n"


class JSONRunReportTests(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.path = os.path.join(self.tmpdir, 'run.json')

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def read(self):
        with open(self.path) as fd:
            return json.load(fd)

    def test_events(self):
        report = JSONRunReport(self.path)
        report.started('limit-cone', parse_scenario(SCENARIO))
        report.ball_ready(6, 'enumerated')
        report.cone_computed(limit_cone(enumerate_ball(preset_diagonal([2.0, 1.0, 0.5]), 3)))
        report.boundary_computed(1e-7, OppositenessStats(4, 6, 0.25, 0, 1e-8))
        report.chamber_classified(ChamberDigest("1", 0.0, 0.01, [0.01], 1, 1, 1, 1))
        report.criterion_checked(12, 'determinism', True, {'bytes': 10})
        report.output_written('csv', 'cone.csv')
        report.finished()
        obj = self.read()
        self.assertEqual('limit-cone', obj['parameters']['command'])
        self.assertGreaterEqual(obj['parameters']['elapsed_seconds'], 0.0)
        self.assertEqual('diagonal', obj['scenario']['preset.name'])
        self.assertEqual({'csv': 'cone.csv'}, obj['outputs'])
        summary = obj['summary']
        self.assertEqual(6, summary['element_count'])
        self.assertEqual(6, summary['cone']['samples'])
        self.assertEqual(0, summary['boundary']['oppositeness']['violations'])
        self.assertEqual(1, summary['classification'][0]['radial_cells'])
        self.assertTrue(summary['acceptance'][0]['passed'])

    def test_minimal(self):
        report = JSONRunReport(self.path)
        report.started('enumerate', parse_scenario(SCENARIO))
        report.ball_ready(6, 'cache')
        report.finished()
        summary = self.read()['summary']
        self.assertEqual('cache', summary['ball_source'])
        self.assertNotIn('cone', summary)
        self.assertNotIn('classification', summary)


def test_base_report_is_abstract():
    try:
        BaseReport()
    except TypeError:
        pass
    else:
        assert(False)


def test_digest_dict():
    d = ChamberDigest("1,2", 0.1, 0.11, [0.11, 0.3], 3, 5, 5, 1).to_dict()
    assert(d['radial_cells'] == 2)
    assert(d['radial_cell_angles'] == [0.11, 0.3])
    assert(d['word'] == "1,2")
