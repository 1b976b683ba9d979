"""
Text cache of enumerated word balls.

    # anosov-limits ball cache v1
    # preset <descriptor>
    # radius <r>
    # dim <d>
    # elements <n>
    <word>\t<d*d entries>\t<jordan>\t<cartan>

Words are comma-separated signed generator indices, vectors are
comma-separated, and all reals carry 17 significant digits so equal runs
write byte-identical files.
"""

import os

import numpy as np

from ..common import AnosovLimitsException, logger
from ..matrixcore import CartanVector
from .utils import format_word, parse_word
from .words import GroupElement


class CacheFormatError(AnosovLimitsException):
    pass


FORMAT_VERSION = 1
MAGIC = "# anosov-limits ball cache v%d" % (FORMAT_VERSION)


def cache_directory(default):
    return os.environ.get('ANOSOV_LIMITS_CACHE', default)


def cache_path(directory, presentation, radius):
    return os.path.join(directory, "ball-%s-r%d.txt" % (presentation.digest()[:16], radius))


def _real(x):
    return "%.17g" % (x)


def write_ball_cache(path, presentation, radius, elements):
    with open(path, 'w', newline='\n') as fd:
        print(MAGIC, file=fd)
        print("# preset %s" % (presentation.descriptor()), file=fd)
        print("# radius %d" % (radius), file=fd)
        print("# dim %d" % (presentation.dim), file=fd)
        print("# elements %d" % (len(elements)), file=fd)
        for e in elements:
            fields = [format_word(e.word)]
            fields += [_real(x) for x in e.matrix.ravel()]
            fields.append(",".join(_real(x) for x in e.jordan.coords))
            fields.append(",".join(_real(x) for x in e.cartan.coords))
            print("\t".join(fields), file=fd)
    logger.info("wrote %d elements to ball cache %s" % (len(elements), path))


def read_ball_cache(path):
    """
    returns (header, elements); header maps 'preset', 'radius', 'dim' and
    'elements' to their values
    """
    with open(path) as fd:
        lines = fd.read().split('\n')
    if not lines or lines[0] != MAGIC:
        raise CacheFormatError("%s: not a version %d ball cache" % (path, FORMAT_VERSION))
    header = {}
    body = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line.startswith('# '):
            key, _, value = line[2:].partition(' ')
            header[key] = value
        else:
            body.append((lineno, line))
    try:
        header['radius'] = int(header['radius'])
        header['dim'] = int(header['dim'])
        header['elements'] = int(header['elements'])
    except (KeyError, ValueError) as e:
        raise CacheFormatError("%s: bad header: %s" % (path, e))
    d = header['dim']
    elements = []
    for lineno, line in body:
        fields = line.split('\t')
        if len(fields) != d * d + 3:
            raise CacheFormatError("%s:%d: expected %d fields, got %d" % (path, lineno, d * d + 3, len(fields)))
        try:
            word = parse_word(fields[0])
            matrix = np.array([float(x) for x in fields[1:d * d + 1]]).reshape(d, d)
            jordan = CartanVector([float(x) for x in fields[-2].split(',')])
            cartan = CartanVector([float(x) for x in fields[-1].split(',')])
        except (ValueError, AnosovLimitsException) as e:
            raise CacheFormatError("%s:%d: %s" % (path, lineno, e))
        elements.append(GroupElement(matrix, word, jordan=jordan, cartan=cartan))
    if len(elements) != header['elements']:
        raise CacheFormatError("%s: header promises %d elements, found %d" % (path, header['elements'], len(elements)))
    return header, elements
