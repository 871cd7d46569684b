"""V-convergence diagnostics: shrinking-neighbourhood semidistances between
functions, convergence-mode classification, series rules and closure checks."""

__version__ = "0.1.0"

from .closure import (
    CoverPiece,
    OscillationProfile,
    PatchReport,
    PropertyOracle,
    continuous_oracle,
    oscillation_defect,
    patch,
    patch_check,
    piecewise_constant_oracle,
    semicontinuity_defect,
    semilocal_condition,
)
from .convergence import (
    AbelReport,
    CauchyWitness,
    ConvergenceVerdict,
    InterchangeReport,
    LimitTest,
    SeriesReport,
    abel_series,
    classify,
    interchange_check,
    normal_series_test,
    v_cauchy_sequence,
    v_limit_test,
)
from .corpus import CorpusEntry, corpus_families, lookup
from .errors import (
    ConfigError,
    DimensionMismatchError,
    EvaluationError,
    HorizonMismatchError,
    MemberIndexError,
    PointOutsideDomainError,
    UnknownFamilyError,
    VConvError,
)
from .options import DEFAULT, Options
from .report import emit_report, load_report
from .space import (
    DomainSpec,
    FnObject,
    FnSequence,
    Member,
    ProbeSet,
    Region,
    SemidistanceFamily,
    Space,
    constant,
    load_space,
    neighborhood,
    partial_sums,
    sample_region,
    semidistance,
)
from .verdict import Verdict
from .vmetric import (
    Entourage,
    EntourageVerdict,
    ScaleProfile,
    SupEstimate,
    VDistanceReport,
    entourage_test,
    point_v_semidistance,
    sup_over_region,
    v_semidistance,
)

__all__ = [
    "AbelReport",
    "CauchyWitness",
    "ConfigError",
    "ConvergenceVerdict",
    "CorpusEntry",
    "CoverPiece",
    "DEFAULT",
    "DimensionMismatchError",
    "DomainSpec",
    "Entourage",
    "EntourageVerdict",
    "EvaluationError",
    "FnObject",
    "FnSequence",
    "HorizonMismatchError",
    "InterchangeReport",
    "LimitTest",
    "Member",
    "MemberIndexError",
    "Options",
    "OscillationProfile",
    "PatchReport",
    "PointOutsideDomainError",
    "ProbeSet",
    "PropertyOracle",
    "Region",
    "ScaleProfile",
    "SemidistanceFamily",
    "SeriesReport",
    "Space",
    "SupEstimate",
    "UnknownFamilyError",
    "VConvError",
    "VDistanceReport",
    "Verdict",
    "abel_series",
    "classify",
    "constant",
    "continuous_oracle",
    "corpus_families",
    "emit_report",
    "entourage_test",
    "interchange_check",
    "load_report",
    "load_space",
    "lookup",
    "neighborhood",
    "normal_series_test",
    "oscillation_defect",
    "partial_sums",
    "patch",
    "patch_check",
    "piecewise_constant_oracle",
    "point_v_semidistance",
    "sample_region",
    "semicontinuity_defect",
    "semidistance",
    "semilocal_condition",
    "sup_over_region",
    "v_cauchy_sequence",
    "v_limit_test",
    "v_semidistance",
]
