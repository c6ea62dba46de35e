"""balayage-kit: genus-q balayage onto ray systems, growth-condition
functionals, and the principal-value criterion for completely regular
growth on a ray.

All angles are radians. All charges are finite atomic measures.
"""

from .errors import (
    BalayageKitError,
    BranchError,
    ExponentMismatchError,
    GeometryError,
    InsufficientGridError,
    IntegrabilityError,
    OriginAtomError,
    OscillationError,
    ParseError,
    QuadratureError,
    RegimeError,
    SingularityError,
    SupportConditionError,
)
from .kernels import (
    AngleSpec,
    BoundReport,
    KernelEval,
    angle_reduce,
    hadamard_kernel,
    harmonic_charge_angle,
    harmonic_charge_interval,
    harmonic_charge_slitplane,
    harmonic_measure_interval,
    interval_bounds_check,
    kernel_bounds_check,
    poisson_kernel,
    sandwich_bounds,
    sqrt_slit,
)
from .measures import (
    ComplexAtom,
    DensityGroup,
    DiscreteCharge,
    GrowthVerdict,
    RadialProfile,
    RaySystem,
    SweptCharge,
    SweptRay,
    distribution_on_ray,
    estimate_order_type,
    profile_from_charge,
    radial_counting,
)
from .quadrature import QuadSpec, integrate, principal_value
from .balayage import (
    AngleDecision,
    CheckReport,
    SweepPlan,
    genus_shift_identity_check,
    growth_verdict_swept,
    interval_variation_bound_check,
    line_distribution,
    near_origin_decay_check,
    sweep_angle,
    sweep_halfplane,
    sweep_ray_system,
    swept_total_mass,
    swept_variation_profile,
    tail_bound_check,
)
from .growth import (
    CarlemanReport,
    ConditionTrace,
    DetectorReport,
    EstimateReport,
    LogModulusOracle,
    akhiezer_J,
    akhiezer_class_verdict,
    blaschke_functional,
    boundedness_detector,
    carleman_AB,
    integral_estimate_check,
    lindelof_functional,
)
from .crg import (
    CriterionTrace,
    PVResult,
    RayCountingFunction,
    RobustLimit,
    crg_check_ray,
    crg_check_ray_system,
    crg_functional,
    robust_limit,
    swept_counting_on_ray,
)

__version__ = "0.1.0"
