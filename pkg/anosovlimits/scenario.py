"""
Scenario files: flat ``section.key = value`` text, ``#`` comments.

    preset.name = reflection
    preset.p = 3
    preset.q = 3
    preset.r = 4
    preset.t = 2.0
    ball.radius = 8
    outputs.png = no

Inline matrices (``preset.generators``) separate entries by whitespace,
rows by ``;`` and matrices by ``|``; ``preset.diagonal`` separates the
diagonals of the generators by ``|``.
"""

import numpy as np

from .common import AnosovLimitsException, logger, ALGEBRAIC_TOL
from .boundary import OPPOSITE_TOL
from .groups.cone import DEFAULT_MIN_NORM
from .groups.presets import (
    preset_diagonal, preset_fuchsian_triangle, preset_reflection_deformation,
    preset_custom, preset_near_identity)


class ConfigError(AnosovLimitsException):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append("line %d" % (line))
        if field is not None:
            where.append("`%s'" % (field))
        super().__init__("%s: %s" % (", ".join(where), message) if where else message)


MAX_RADIUS = 14

PRESETS = ('diagonal', 'fuchsian_triangle', 'reflection', 'custom', 'near_identity')


def _boolean(s):
    v = s.lower()
    if v in ('yes', 'true', '1'):
        return True
    if v in ('no', 'false', '0'):
        return False
    raise ValueError("expected yes/no/true/false/1/0, got `%s'" % (s))


def _matrices(s):
    out = []
    for block in s.split('|'):
        rows = [[float(t) for t in row.split()] for row in block.split(';') if row.strip()]
        if not rows or len(set(len(r) for r in rows)) != 1 or len(rows) != len(rows[0]):
            raise ValueError("`%s' is not a square matrix" % (block.strip()))
        out.append(np.array(rows))
    return out


def _vectors(s):
    out = [[float(t) for t in block.split()] for block in s.split('|')]
    if any(not v for v in out):
        raise ValueError("empty diagonal")
    return out


def _preset_name(s):
    if s not in PRESETS:
        raise ValueError("unknown preset `%s', expected one of %s" % (s, ", ".join(PRESETS)))
    return s


# key -> (parser, default); a default of None means "required by some presets"
KEYS = {
    'preset.name': (_preset_name, None),
    'preset.p': (int, None),
    'preset.q': (int, None),
    'preset.r': (int, None),
    'preset.t': (float, None),
    'preset.sym2': (_boolean, True),
    'preset.diagonal': (_vectors, None),
    'preset.generators': (_matrices, None),
    'preset.amplitude': (float, 0.05),
    'preset.count': (int, 2),
    'ball.radius': (int, 6),
    'tol.dedupe': (float, ALGEBRAIC_TOL),
    'tol.proximal': (float, 1e-6),
    'tol.opposite': (float, OPPOSITE_TOL),
    'cone.min_norm': (float, DEFAULT_MIN_NORM),
    'classify.elements': (int, 10),
    'classify.grid_step': (float, 0.02),
    'classify.depth': (float, 5.0),
    'classify.n_max': (int, 64),
    'classify.max_orbit_distance': (float, 20.0),
    'classify.min_norm': (float, 0.5),
    'qi.floor': (float, 0.01),
    'run.seed': (int, 0),
    'outputs.cache': (_boolean, True),
    'outputs.csv': (_boolean, True),
    'outputs.json': (_boolean, True),
    'outputs.svg': (_boolean, True),
    'outputs.png': (_boolean, False),
}

# keys each preset needs, in addition to preset.name
PRESET_KEYS = {
    'diagonal': ('preset.diagonal',),
    'fuchsian_triangle': ('preset.p', 'preset.q', 'preset.r'),
    'reflection': ('preset.p', 'preset.q', 'preset.r', 'preset.t'),
    'custom': ('preset.generators',),
    'near_identity': (),
}


class Scenario:
    """
    A parsed scenario. ``settings`` maps every key of KEYS to its value,
    defaults filled in; ``lines`` records where each key was set.
    """

    def __init__(self, settings, lines=None, path=None):
        self.settings = settings
        self.lines = lines or {}
        self.path = path
        self.check()

    def __getitem__(self, key):
        return self.settings[key]

    def get(self, key, default=None):
        return self.settings.get(key, default)

    def check(self):
        name = self.settings.get('preset.name')
        if name is None:
            raise ConfigError("no preset given", field='preset.name')
        for key in PRESET_KEYS[name]:
            if self.settings.get(key) is None:
                raise ConfigError("preset `%s' needs a value" % (name), line=self.lines.get('preset.name'), field=key)
        radius = self.settings['ball.radius']
        if not (1 <= radius <= MAX_RADIUS):
            raise ConfigError("radius %d outside [1, %d]" % (radius, MAX_RADIUS),
                              line=self.lines.get('ball.radius'), field='ball.radius')
        for key in ('classify.grid_step', 'classify.depth', 'classify.max_orbit_distance', 'qi.floor'):
            if self.settings[key] <= 0:
                raise ConfigError("must be positive", line=self.lines.get(key), field=key)

    @property
    def radius(self):
        return self.settings['ball.radius']

    @property
    def seed(self):
        return self.settings['run.seed']

    def wants(self, output):
        return self.settings['outputs.' + output]

    def override(self, radius=None, seed=None):
        "a copy with command-line overrides applied"
        settings = dict(self.settings)
        lines = dict(self.lines)
        if radius is not None:
            settings['ball.radius'] = radius
            lines.pop('ball.radius', None)
        if seed is not None:
            settings['run.seed'] = seed
            lines.pop('run.seed', None)
        return Scenario(settings, lines, self.path)

    def echo(self):
        "the settings as JSON-ready values, sorted by key"
        def plain(v):
            if isinstance(v, list):
                return [plain(t) for t in v]
            if isinstance(v, np.ndarray):
                return v.tolist()
            return v
        return dict((k, plain(self.settings[k])) for k in sorted(self.settings) if self.settings[k] is not None)


def parse_scenario(text, path=None):
    settings = dict((k, default) for k, (_, default) in KEYS.items())
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError("expected `key = value'", line=lineno)
        if key.count('.') != 1:
            raise ConfigError("keys take the form section.name", line=lineno, field=key)
        if key not in KEYS:
            raise ConfigError("unknown key", line=lineno, field=key)
        if key in lines:
            raise ConfigError("already set on line %d" % (lines[key]), line=lineno, field=key)
        parser, _ = KEYS[key]
        try:
            settings[key] = parser(value)
        except ValueError as e:
            raise ConfigError(str(e), line=lineno, field=key)
        lines[key] = lineno
    return Scenario(settings, lines, path)


def read_scenario(path):
    with open(path) as fd:
        scenario = parse_scenario(fd.read(), path)
    logger.debug("read scenario `%s': preset %s, radius %d" % (path, scenario['preset.name'], scenario.radius))
    return scenario


def build_presentation(scenario):
    "the generators named by the scenario's preset keys"
    name = scenario['preset.name']
    if name == 'diagonal':
        return preset_diagonal(*scenario['preset.diagonal'])
    if name == 'fuchsian_triangle':
        p = preset_fuchsian_triangle(scenario['preset.p'], scenario['preset.q'], scenario['preset.r'])
        return p.sym2() if scenario['preset.sym2'] else p
    if name == 'reflection':
        return preset_reflection_deformation(
            scenario['preset.p'], scenario['preset.q'], scenario['preset.r'], scenario['preset.t'])
    if name == 'custom':
        return preset_custom(scenario['preset.generators'])
    return preset_near_identity(scenario['preset.amplitude'], scenario['preset.count'], seed=scenario.seed)
