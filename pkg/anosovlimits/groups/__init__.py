from .words import (
    GroupElement, Presentation, ToleranceCollision, NonDiscreteSuspected,
    enumerate_ball)
from .presets import (
    NotHyperbolicType, OutsideWindow, sym2_lift, preset_fuchsian_triangle,
    preset_reflection_deformation, preset_diagonal, preset_custom,
    preset_near_identity, relation_defects)
from .projections import (
    InsufficientData, jordan_projection, cartan_projection,
    translation_length, proximality_check, is_positively_biproximal,
    minimal_displacement, qi_constants)
from .cone import EmptyCone, LimitConeSample, ConeSummary, limit_cone
from .ballcache import CacheFormatError, write_ball_cache, read_ball_cache
from .utils import shortlex_key

__all__ = [
    "GroupElement",
    "Presentation",
    "ToleranceCollision",
    "NonDiscreteSuspected",
    "enumerate_ball",
    "NotHyperbolicType",
    "OutsideWindow",
    "sym2_lift",
    "preset_fuchsian_triangle",
    "preset_reflection_deformation",
    "preset_diagonal",
    "preset_custom",
    "preset_near_identity",
    "relation_defects",
    "InsufficientData",
    "jordan_projection",
    "cartan_projection",
    "translation_length",
    "proximality_check",
    "is_positively_biproximal",
    "minimal_displacement",
    "qi_constants",
    "EmptyCone",
    "LimitConeSample",
    "ConeSummary",
    "limit_cone",
    "CacheFormatError",
    "write_ball_cache",
    "read_ball_cache",
    "shortlex_key",
]
