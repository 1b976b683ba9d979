"""
This module tracks the outcome of a pipeline run, and provides a base class
to be implemented by callers for reporting or analysis.

The exposed class, BaseReport, is an abstract base class.
Your implementation should inherit from BaseReport.
"""

import datetime
import json
import abc
import time

from .common import logger


class OppositenessStats:
    """
    Pairwise oppositeness of the attracting flags of a ball.
    """

    def __init__(self, flag_count, pairs_tested, min_score, violations, threshold):
        """
        flag_count: number of distinct attracting flags
        pairs_tested: number of pairs whose fixed points are far enough apart to be tested
        min_score: smallest oppositeness score over the tested pairs (None if no pairs)
        violations: number of tested pairs scoring at or below threshold
        """
        self.flag_count = flag_count
        self.pairs_tested = pairs_tested
        self.min_score = min_score
        self.violations = violations
        self.threshold = threshold

    def to_dict(self):
        return {
            'flags': self.flag_count,
            'pairs_tested': self.pairs_tested,
            'min_score': self.min_score,
            'violations': self.violations,
            'threshold': self.threshold,
        }


class ChamberDigest:
    """
    Classification outcome for the chamber of one group element.
    """

    def __init__(self, word, lambda_angle, best_direction, radial_cells, below_threshold, targets, horospherical, radial):
        """
        word: the element whose attracting flag gives the chamber
        radial_cells: chamber angles of the passing radial probe cells
        targets: number of targets classified in the chamber
        horospherical, radial: number of targets with a true verdict
        """
        self.word = word
        self.lambda_angle = lambda_angle
        self.best_direction = best_direction
        self.radial_cells = radial_cells
        self.below_threshold = below_threshold
        self.targets = targets
        self.horospherical = horospherical
        self.radial = radial

    def to_dict(self):
        return {
            'word': self.word,
            'lambda_angle': self.lambda_angle,
            'best_direction': self.best_direction,
            'radial_cells': len(self.radial_cells),
            'radial_cell_angles': self.radial_cells,
            'below_threshold': self.below_threshold,
            'targets': self.targets,
            'horospherical': self.horospherical,
            'radial': self.radial,
        }


class BaseReport(metaclass=abc.ABCMeta):
    """
    Base class, with callback hooks for each event of a pipeline run.
    The concrete implementation is responsible for tracking events.
    """

    @abc.abstractmethod
    def started(self, command, scenario):
        """
        Called when a command begins. ``scenario`` is a Scenario instance.
        """
        pass

    @abc.abstractmethod
    def ball_ready(self, element_count, source):
        """
        Called once the word ball is available; ``source`` is 'enumerated'
        or 'cache'.
        """
        pass

    @abc.abstractmethod
    def cone_computed(self, summary):
        """
        ``summary`` is a ConeSummary.
        """
        pass

    @abc.abstractmethod
    def boundary_computed(self, conic_residual, stats):
        """
        ``stats`` is an OppositenessStats instance.
        """
        pass

    @abc.abstractmethod
    def chamber_classified(self, digest):
        """
        ``digest`` is a ChamberDigest instance.
        """
        pass

    @abc.abstractmethod
    def criterion_checked(self, number, name, passed, detail):
        """
        Called by the acceptance suite after each criterion.
        """
        pass

    @abc.abstractmethod
    def output_written(self, kind, path):
        """
        Called whenever an output file is written.
        """
        pass

    @abc.abstractmethod
    def finished(self):
        """
        Called when the command has finished.
        """
        pass


class JSONRunReport(BaseReport):
    def __init__(self, filename):
        self.filename = filename
        self.command = None
        self.scenario = None
        self.element_count = None
        self.ball_source = None
        self.cone = None
        self.boundary = None
        self.digests = []
        self.criteria = []
        self.outputs = {}
        self._start_time = datetime.datetime.now()
        self._clock = time.perf_counter()

    def started(self, command, scenario):
        self.command = command
        self.scenario = scenario

    def ball_ready(self, element_count, source):
        self.element_count = element_count
        self.ball_source = source

    def cone_computed(self, summary):
        self.cone = summary.to_dict()

    def boundary_computed(self, conic_residual, stats):
        self.boundary = {
            'conic_residual': conic_residual,
            'oppositeness': stats.to_dict(),
        }

    def chamber_classified(self, digest):
        self.digests.append(digest.to_dict())

    def criterion_checked(self, number, name, passed, detail):
        self.criteria.append({
            'criterion': number,
            'name': name,
            'passed': passed,
            'detail': detail,
        })

    def output_written(self, kind, path):
        self.outputs[kind] = path

    def finished(self):
        self._end_time = datetime.datetime.now()
        self._elapsed = time.perf_counter() - self._clock
        self.write_json()

    def summary(self):
        r = {
            'element_count': self.element_count,
            'ball_source': self.ball_source,
        }
        if self.cone is not None:
            r['cone'] = self.cone
        if self.boundary is not None:
            r['boundary'] = self.boundary
        if self.digests:
            r['classification'] = self.digests
        if self.criteria:
            r['acceptance'] = self.criteria
        return r

    def write_json(self):
        params = {
            'command': self.command,
            'started': self._start_time.strftime("%Y-%m-%d %H:%M:%S"),
            'finished': self._end_time.strftime("%Y-%m-%d %H:%M:%S"),
            'elapsed_seconds': self._elapsed,
        }
        obj = {
            'parameters': params,
            'scenario': self.scenario.echo() if self.scenario is not None else None,
            'outputs': self.outputs,
            'summary': self.summary(),
        }
        with open(self.filename, 'w') as fd:
            try:
                json.dump(obj, fd, indent=2, sort_keys=True)
            except TypeError:
                logger.error("failed to serialise run report")
                logger.error("%s" % (repr(obj)))
                raise
