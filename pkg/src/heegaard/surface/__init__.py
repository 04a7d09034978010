"""Exact simple closed curves on closed orientable surfaces.

Layers, bottom up:
  * cells: the doubled-polygon cell complex of the genus-g surface;
  * trace: embedded curves as exact edge passages, crossing counts, regions;
  * moves: isotopy reductions, pushoffs, Dehn twists, topological predicates;
  * curves: integer pants coordinates, canonical classes, twist words.
"""

from .cells import CellComplex, doubled_surface
from .trace import Arrangement, EngineLimitError, TracedCurve, validate_curve
from .moves import (
    algebraic_intersection,
    complement_all_disks,
    dehn_twist,
    edge_cycle_pushoff,
    filling_pair,
    geometric_intersection,
    is_isotopic,
    is_nullhomotopic,
    is_separating,
    minimal_position,
    tighten,
)
from .curves import (
    CoordinateError,
    CurveClass,
    EnumerationResult,
    GrowthReport,
    MulticurveError,
    POSITIVE_TWIST_HANDEDNESS,
    SurfaceSpec,
    TwistWord,
    apply_word,
    apply_word_traced,
    are_disjoint,
    build_multicurve,
    canonicalize,
    chain_classes,
    check_admissible,
    class_of_traced,
    curve_from_coords,
    curve_from_json_dict,
    curve_to_json_dict,
    enumerate_curves,
    homology_class,
    intersection_number,
    is_filling_pair,
    measure_curve,
    pa_growth_check,
    pants_curve_class,
    representative,
    surface_spec,
)

__all__ = [
    "Arrangement", "CellComplex", "CoordinateError", "CurveClass",
    "EngineLimitError", "EnumerationResult", "GrowthReport", "MulticurveError",
    "POSITIVE_TWIST_HANDEDNESS", "SurfaceSpec", "TracedCurve", "TwistWord",
    "algebraic_intersection", "apply_word", "apply_word_traced", "are_disjoint",
    "build_multicurve", "canonicalize", "chain_classes", "check_admissible",
    "class_of_traced", "complement_all_disks", "curve_from_coords",
    "curve_from_json_dict", "curve_to_json_dict",
    "dehn_twist", "doubled_surface", "edge_cycle_pushoff", "enumerate_curves",
    "filling_pair", "geometric_intersection", "homology_class",
    "intersection_number", "is_filling_pair", "is_isotopic",
    "is_nullhomotopic", "is_separating", "measure_curve", "minimal_position",
    "pa_growth_check", "pants_curve_class", "representative", "surface_spec",
    "tighten", "validate_curve",
]
