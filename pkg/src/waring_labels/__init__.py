"""Conjugation-invariant additive decompositions with label certificates."""

from .algebra import (
    EngineError,
    HomogeneousForm,
    PairingFailure,
    ProjectivePoint,
    catalecticant,
    conjugate_point,
    evaluate,
    numeric_rank,
    pair_conjugate_roots,
    power_of_linear_form,
    univariate_roots,
)
from .binary import (
    CubicClass,
    RankSearchExhausted,
    RealRankResult,
    apolar_kernel,
    classify_cubic,
    complex_rank_binary,
    real_rank_binary,
    sylvester_decompose,
    weight_within_curve_bound,
)
from .decompose import (
    DecompositionFailure,
    DecompositionProblem,
    NLSConfig,
    conjugate_only_decompose,
    decompose_weight,
    decompose_with_template,
    generic_rank,
    generic_rank_flags,
    join_decompose,
    residual_and_gradient,
    secant_membership_filter,
    weight_templates,
)
from .hypersurface import (
    HypersurfaceInstance,
    RetriesExhausted,
    find_label_hypersurface,
    restrict_to_line,
)
from .labels import (
    DuplicatePoint,
    Label,
    LabeledSet,
    NotInSpan,
    NotSigmaInvariant,
    SpanCertificate,
    label_of,
    reconstruct,
    span_membership,
    span_membership_point,
)
from .survey import (
    BinaryGeometry,
    EnsembleSpec,
    HypersurfaceGeometry,
    LabelHistogram,
    VeroneseGeometry,
    sample_random_form,
    survey_labels,
)

__version__ = "0.1.0"
