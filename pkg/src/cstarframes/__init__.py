"""Frame operators on Hilbert modules over matrix algebras.

Numerical tools for module-valued frames: frame operator assembly by
quadrature, optimal scalar and algebra-valued bound certificates with
witnesses, Neumann-series inversion with contraction tracking, frame
transport along commuting surjections, and a randomized property suite.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    Structure,
    loewner_leq,
)
from .errors import (
    CStarFramesError,
    DescriptorMismatchError,
    MaxIterExceededError,
    NonCommutingError,
    NotAFrameError,
    NotCommutativeError,
    NotInGlPlusError,
    NotMultiplicationOperatorError,
    NotPositiveError,
    NotSelfAdjointError,
    NotSurjectiveError,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    SingularError,
)
from .frames import (
    CoefficientVector,
    FrameFamily,
    FrameReport,
    NeumannResult,
    ReconstructionResult,
    ScalarBounds,
    StarBounds,
    Tightness,
    analysis,
    classify_tightness,
    controlled_frame_operator,
    convert_controlled_to_plain,
    convert_plain_to_controlled,
    convert_star_bounds,
    derive_tight_star_bound,
    frame_operator,
    identity_controller,
    is_controlled_frame,
    neumann_inverse_apply,
    neumann_solve,
    norm_form_check,
    optimal_scalar_bounds,
    reconstruct,
    reconstruct_detailed,
    synthesis,
    transform_frame,
    transform_star_frame,
    verify_star_bounds,
)
from .integration import (
    MeasureKind,
    MeasureSpace,
    counting,
    gauss_legendre,
    integrate_algebra_valued,
    integrate_module_valued,
    riemann_midpoint,
    trapezoid,
)
from .module import (
    GlPlusCertificate,
    ModuleDescriptor,
    ModuleElement,
    ModuleOperator,
)
from .sampling import (
    commuting_controller,
    commuting_surjective,
    planted_frame,
    random_module_element,
)
from .scenario import (
    AnalysisReport,
    Scenario,
    Tolerances,
    builtin_example1,
    builtin_example2,
    emit,
    load_scenario,
    run_analysis,
    run_verification,
)
from .suite import SuiteReport, run_property_suite

__all__ = [
    "AlgebraDescriptor",
    "AlgebraElement",
    "AnalysisReport",
    "CStarFramesError",
    "CoefficientVector",
    "DescriptorMismatchError",
    "FrameFamily",
    "FrameReport",
    "GlPlusCertificate",
    "MaxIterExceededError",
    "MeasureKind",
    "MeasureSpace",
    "ModuleDescriptor",
    "ModuleElement",
    "ModuleOperator",
    "NeumannResult",
    "NonCommutingError",
    "NotAFrameError",
    "NotCommutativeError",
    "NotInGlPlusError",
    "NotMultiplicationOperatorError",
    "NotPositiveError",
    "NotSelfAdjointError",
    "NotSurjectiveError",
    "ReconstructionResult",
    "ScalarBounds",
    "Scenario",
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "SingularError",
    "StarBounds",
    "Structure",
    "SuiteReport",
    "Tightness",
    "Tolerances",
    "analysis",
    "builtin_example1",
    "builtin_example2",
    "classify_tightness",
    "commuting_controller",
    "commuting_surjective",
    "controlled_frame_operator",
    "convert_controlled_to_plain",
    "convert_plain_to_controlled",
    "convert_star_bounds",
    "counting",
    "derive_tight_star_bound",
    "emit",
    "frame_operator",
    "gauss_legendre",
    "identity_controller",
    "integrate_algebra_valued",
    "integrate_module_valued",
    "is_controlled_frame",
    "load_scenario",
    "loewner_leq",
    "neumann_inverse_apply",
    "neumann_solve",
    "norm_form_check",
    "optimal_scalar_bounds",
    "planted_frame",
    "random_module_element",
    "reconstruct",
    "reconstruct_detailed",
    "riemann_midpoint",
    "run_analysis",
    "run_property_suite",
    "run_verification",
    "synthesis",
    "transform_frame",
    "transform_star_frame",
    "trapezoid",
    "verify_star_bounds",
]
