"""Homogeneous Ricci flow on two five-dimensional homogeneous spaces.

The library covers the full pipeline: structure-constant models of the
two transitive groups, the five-parameter invariant metric family, Ricci
curvature by both a general oracle and closed forms, gauge reduction,
flow integration with extinction detection, and monitors for the
monotonicity and conservation claims.
"""
from .lie_algebra import (
    HomogeneousModel,
    ModelDiagnostics,
    StructureConstants,
    bracket,
    build_sl2c,
    build_so3_r3,
    check_model,
    is_unimodular,
    killing_form,
    killing_form_p,
)
from .metric import (
    Case,
    Frame,
    InvalidMetricError,
    MetricParams,
    adjoint_matrix,
    eigen_lambdas,
    gauge_reduce,
    lambda_min_block,
    metric_matrix,
    orthonormal_frame,
)
from .ricci import (
    RicciComponents,
    components_from_matrix,
    ricci_closed,
    ricci_closed_sl2c,
    ricci_closed_so3r3,
    ricci_oracle,
    scalar_curvature,
    scalar_curvature_closed,
)
from .flow import (
    FlowState,
    IntegrateOptions,
    MonitorReport,
    MonitorSample,
    TerminationKind,
    TerminationRecord,
    Trajectory,
    Verdict,
    flow_rhs,
    identity_residuals,
    integrate,
    monitors,
    time_to_scal,
)
from .verify import CheckResult, VerificationReport, random_metric, run_verification

__all__ = [
    "Case",
    "CheckResult",
    "FlowState",
    "Frame",
    "HomogeneousModel",
    "IntegrateOptions",
    "InvalidMetricError",
    "MetricParams",
    "ModelDiagnostics",
    "MonitorReport",
    "MonitorSample",
    "RicciComponents",
    "StructureConstants",
    "TerminationKind",
    "TerminationRecord",
    "Trajectory",
    "Verdict",
    "VerificationReport",
    "adjoint_matrix",
    "bracket",
    "build_sl2c",
    "build_so3_r3",
    "check_model",
    "components_from_matrix",
    "eigen_lambdas",
    "flow_rhs",
    "gauge_reduce",
    "identity_residuals",
    "integrate",
    "is_unimodular",
    "killing_form",
    "killing_form_p",
    "lambda_min_block",
    "metric_matrix",
    "monitors",
    "orthonormal_frame",
    "random_metric",
    "ricci_closed",
    "ricci_closed_sl2c",
    "ricci_closed_so3r3",
    "ricci_oracle",
    "run_verification",
    "scalar_curvature",
    "scalar_curvature_closed",
    "time_to_scal",
]
