"""Geodesic metric-space testbeds and instance-wise lemma verification."""

from .spaces import (
    FreeGroupSpace,
    GraphSpace,
    IsometryHandle,
    OrbitTruncationError,
    QuasiConvexSet,
    QuasiGeodesicPath,
    SizeCapError,
    SpaceHandle,
    cycle_rotation,
    free_group_left_multiplication,
    free_group_translation_length,
    grid_translation,
    make_testbed_space,
    measure_quasiconvexity,
    space_from_adjacency_text,
    space_to_adjacency_text,
    tiling_layer_sizes,
    tree_left_multiplication,
)
from .suites import (
    SuiteResult,
    default_suite_spaces,
    random_quasiconvex_set,
    run_quadrilateral_suite,
    run_triangle_suite,
)
from .lemmas import (
    DegenerateAxisError,
    DisplacementProfile,
    LemmaReport,
    build_axis,
    compute_m0,
    displacement_profile,
    gromov_product,
    projection_diameter,
    quasi_project,
    quasiconvex_proximity_check,
    stability_estimate,
    thinness_check,
    verify_axis_product_floor,
    verify_bounded_implies_linear,
    verify_quadrilateral_lemma,
    verify_triangle_lemma,
)
