"""Semi-inner products with values in a vector lattice.

Library layers, bottom up: componentwise lattice/f-algebra primitives
(lattice), the geometric and square means with their grid oracles (means),
concrete semi-inner products and axiom checking (sip), the Cauchy-Schwarz
identity and defect (cauchy_schwarz), weighted vector seminorms and the
triangle-type theorems (seminorms), and the randomized verification
harness plus CLI (harness, cli).
"""

from .lattice import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    DimensionMismatch,
    FAlgebraContext,
    NotInPositiveCone,
    abs_val,
    as_lattice_vector,
    cone_violation,
    f_mul,
    f_sqrt,
    in_positive_cone,
    join,
    meet,
    rel_residual,
)
from .means import (
    AngleGrid,
    ThetaGrid,
    box_plus,
    box_plus_oracle,
    box_times,
    box_times_oracle,
    theta_minimizer,
)
from .sip import (
    AxiomReport,
    MultiplicationSip,
    NoNontrivialOrthogonal,
    PsdFamilySip,
    check_axioms,
    make_psd_sip,
    orthogonal_sample,
    sip_eval,
    sip_from_dict,
    sip_to_dict,
)
from .cauchy_schwarz import (
    CsCheck,
    DefectResult,
    LambdaGrid,
    cs_check,
    cs_identity_residual,
    defect_closed,
    defect_grid,
    defect_with_oracle,
)
from .seminorms import (
    AdditivityCheck,
    PreconditionViolated,
    SeminormSpec,
    SharpTriangle,
    additivity_check,
    parallelogram_residual,
    pythagoras_check,
    seminorm_eval,
    seminorm_sq,
    sharpened_triangle,
    triangle_residual,
    vsn_axiom_check,
)
from .harness import (
    ConfigError,
    Counterexample,
    GenerationExhausted,
    Instance,
    StudyReport,
    THEOREMS,
    Tolerances,
    TrialConfig,
    VerificationReport,
    convergence_study,
    emit_report,
    generate_instance,
    replay_counterexample,
    run_suite,
    shrink,
)

__version__ = "0.1.0"
