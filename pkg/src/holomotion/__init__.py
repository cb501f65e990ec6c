"""Computable extension theory for holomorphic motions.

Exact monodromy and trace-monodromy triviality tests over free groups,
the commutator counterexample families, a discretized radial-structure /
flow extension engine over the disk, the conformal barycenter extension,
and quantitative annulus extendability bounds.
"""

from .words import (
    Letter,
    Word,
    build_chirka_word,
    build_trace_word,
    commutator,
    delete_generator,
    exponent_sums,
    fill_infinity,
    format_word,
    is_trivial,
    parse_word,
    reduce_word,
)
from .monodromy import (
    CoveringMotionSpec,
    PointConfig,
    SubsetRestriction,
    build_chirka_counterexample,
    build_trace_counterexample,
    chirka_numbers,
    monodromy_is_trivial,
    restrict_to_subset,
    trace_monodromy_trivial,
    verify_property_A,
)
from .geometry import (
    HyperbolicAnnulus,
    LengthBound,
    annulus_core_length,
    annulus_curve_length,
    annulus_extension_threshold,
    check_short_generator_criterion,
    config_length_bound,
)
from .circle import (
    AnalyticBoundaryFunction,
    BoundaryFunction,
    analyticity_residual,
    cauchy_eval,
    hilbert_transform,
    holder_half_seminorm,
    poisson_eval,
)
from .radial import (
    MonotonicityViolation,
    MotionTraces,
    Radii,
    RadialStructure,
    angle_field,
    build_radial_structure,
    compute_radii,
    tangent_field,
    verify_lemma_properties,
)
from .flow import (
    ExtendedMotion,
    FlowState,
    OutsideFlowRegion,
    extend_motion,
    flow_step,
    holomorphy_residual,
    injectivity_certificate,
    integrate_to_point,
    psi,
    vector_field_F,
)
from .barycentric import (
    CircleHomeo,
    DiskMobius,
    barycentric_extend,
    beltrami_of_extension,
    check_conformal_naturality,
)

__version__ = "0.1.0"
