"""Open-loop driving trajectory evaluation toolkit."""

from .core import (
    EgoStatus,
    PerScenarioScore,
    RaterTrajectory,
    RoutingCommand,
    Scenario,
    ScenarioCategory,
    ScoreReport,
    Submission,
    SubmissionMetadata,
    Trajectory,
    Waypoint,
    initial_speed,
    trajectory_from_xy,
    waypoint_at_time,
)
from .evaluate import RunConfig, evaluate_submission, score_scenario
from .geometry import (
    CameraCalibration,
    CameraIntrinsics,
    CameraName,
    ErrorDecomposition,
    RigidTransform,
    decompose_error,
    heading_at_time,
    project_to_image,
    vehicle_to_camera,
)
from .ingestion import (
    Severity,
    ValidationIssue,
    parse_report,
    parse_scenarios,
    parse_submission,
    write_report,
    write_scenarios,
    write_submission,
)
from .metrics import RfsBreakdown, TrustThresholds, ade, aggregate, per_rater_score, rfs, speed_scale, thresholds_for
from .routing import DegenerateRouteError, RouteWindow, derive_command
from .synth import ScenarioTemplate, bucket_and_sample, generate_scenario, make_ade_rfs_divergent_pair

__version__ = "0.1.0"

__all__ = [
    "CameraCalibration",
    "CameraIntrinsics",
    "CameraName",
    "DegenerateRouteError",
    "EgoStatus",
    "ErrorDecomposition",
    "PerScenarioScore",
    "RaterTrajectory",
    "RfsBreakdown",
    "RigidTransform",
    "RouteWindow",
    "RoutingCommand",
    "RunConfig",
    "Scenario",
    "ScenarioCategory",
    "ScenarioTemplate",
    "ScoreReport",
    "Severity",
    "Submission",
    "SubmissionMetadata",
    "Trajectory",
    "TrustThresholds",
    "ValidationIssue",
    "Waypoint",
    "ade",
    "aggregate",
    "bucket_and_sample",
    "decompose_error",
    "derive_command",
    "evaluate_submission",
    "generate_scenario",
    "heading_at_time",
    "initial_speed",
    "make_ade_rfs_divergent_pair",
    "parse_report",
    "parse_scenarios",
    "parse_submission",
    "per_rater_score",
    "project_to_image",
    "rfs",
    "score_scenario",
    "speed_scale",
    "thresholds_for",
    "trajectory_from_xy",
    "vehicle_to_camera",
    "waypoint_at_time",
    "write_report",
    "write_scenarios",
    "write_submission",
]
