"""Core domain types for ego-trajectory evaluation.

All positions live in the vehicle frame at the anchor timestamp: x forward,
y left, units in meters. Trajectories are sampled at a fixed 4 Hz, so a
5-second future holds exactly 20 waypoints (first sample at 0.25 s) and a
4-second past holds exactly 16 (first sample at -4.0 s). The anchor point
(0, 0) itself is never stored.

Every type validates its invariants at construction time and is immutable
afterwards, so values can be shared freely across evaluation workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:
    from .geometry import CameraCalibration

CADENCE_HZ = 4.0
STEP_S = 1.0 / CADENCE_HZ
FUTURE_LEN = 20  # 5 s at 4 Hz
PAST_LEN = 16  # 4 s at 4 Hz
ROUTE_LEN = 40  # 10 s at 4 Hz

RFS_FLOOR = 4.0


class RoutingCommand(Enum):
    """High-level routing command at a decision point (no micro maneuvers)."""

    GO_STRAIGHT = "GO_STRAIGHT"
    GO_LEFT = "GO_LEFT"
    GO_RIGHT = "GO_RIGHT"


class ScenarioCategory(Enum):
    """The 11 long-tail scenario clusters."""

    CONSTRUCTION = "construction"
    INTERSECTION = "intersection"
    PEDESTRIANS = "pedestrians"
    CYCLISTS = "cyclists"
    MULTI_LANE_MANEUVERS = "multi_lane_maneuvers"
    SINGLE_LANE_MANEUVERS = "single_lane_maneuvers"
    CUT_INS = "cut_ins"
    FOREIGN_OBJECT_DEBRIS = "foreign_object_debris"
    SPECIAL_VEHICLES = "special_vehicles"
    SPOTLIGHT = "spotlight"
    OTHERS = "others"


@dataclass(frozen=True)
class Waypoint:
    """A planar vehicle-frame position in meters (x forward, y left)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"waypoint coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Trajectory:
    """An ordered 4 Hz waypoint sequence.

    ``t0_offset_s`` is the timestamp of the first waypoint relative to the
    anchor frame: 0.25 for futures, -4.0 for 4-second pasts. Waypoint ``i``
    is at ``t0_offset_s + 0.25 * i``.
    """

    waypoints: tuple[Waypoint, ...]
    t0_offset_s: float = STEP_S
    cadence_hz: float = field(default=CADENCE_HZ, init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "waypoints", tuple(self.waypoints))

    def __len__(self) -> int:
        return len(self.waypoints)

    def timestamp(self, index: int) -> float:
        return self.t0_offset_s + STEP_S * index

    def as_xy(self) -> list[tuple[float, float]]:
        return [(w.x, w.y) for w in self.waypoints]


def trajectory_from_xy(points: Iterable[tuple[float, float]], t0_offset_s: float = STEP_S) -> Trajectory:
    return Trajectory(tuple(Waypoint(float(x), float(y)) for x, y in points), t0_offset_s)


def waypoint_at_time(traj: Trajectory, t: float) -> Waypoint:
    """Return the waypoint sampled exactly at time ``t`` seconds.

    ``t`` must be a whole multiple of the 0.25 s step within the trajectory
    span; anything else is a range error.
    """
    raw_index = (t - traj.t0_offset_s) / STEP_S
    index = round(raw_index)
    if abs(raw_index - index) > 1e-9:
        raise ValueError(f"t={t} is not a 0.25 s sample time of this trajectory")
    if not 0 <= index < len(traj.waypoints):
        raise ValueError(
            f"t={t} outside trajectory span "
            f"[{traj.timestamp(0)}, {traj.timestamp(len(traj.waypoints) - 1)}]"
        )
    return traj.waypoints[index]


def initial_speed(traj: Trajectory) -> float:
    """Speed in m/s implied by the first step away from the anchor origin."""
    if not traj.waypoints:
        raise ValueError("cannot take the initial speed of an empty trajectory")
    first = traj.waypoints[0]
    return math.hypot(first.x, first.y) * CADENCE_HZ


@dataclass(frozen=True)
class EgoStatus:
    """Past motion of the ego vehicle, aligned to the anchor timestamp."""

    past: Trajectory
    velocity: tuple[float, ...]
    acceleration: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "velocity", tuple(self.velocity))
        object.__setattr__(self, "acceleration", tuple(self.acceleration))
        n = len(self.past.waypoints)
        if len(self.velocity) != n or len(self.acceleration) != n:
            raise ValueError(
                f"velocity/acceleration series must match the {n} past waypoints, "
                f"got {len(self.velocity)}/{len(self.acceleration)}"
            )


@dataclass(frozen=True)
class RaterTrajectory:
    """A rater-annotated 5-second candidate future with its score and rank."""

    trajectory: Trajectory
    score: float
    rank: int

    def __post_init__(self) -> None:
        if len(self.trajectory.waypoints) != FUTURE_LEN:
            raise ValueError(
                f"rater trajectory must have {FUTURE_LEN} waypoints, got {len(self.trajectory.waypoints)}"
            )
        if not 0.0 <= self.score <= 10.0:
            raise ValueError(f"rater score must be in [0, 10], got {self.score}")
        if self.rank not in (1, 2, 3):
            raise ValueError(f"rater rank must be 1, 2 or 3, got {self.rank}")


@dataclass(frozen=True)
class Scenario:
    """One evaluation scenario: context, rater labels, and optional log future."""

    id: str
    category: ScenarioCategory
    routing: RoutingCommand
    ego: EgoStatus
    raters: tuple[RaterTrajectory, ...]
    log_future: Trajectory | None = None
    future_route_10s: tuple[Waypoint, ...] | None = None
    cameras: tuple["CameraCalibration", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "raters", tuple(self.raters))
        object.__setattr__(self, "cameras", tuple(self.cameras))
        if self.future_route_10s is not None:
            object.__setattr__(self, "future_route_10s", tuple(self.future_route_10s))
        if len(self.raters) != 3:
            raise ValueError(f"scenario {self.id!r} must have exactly 3 rater trajectories")
        ranks = [r.rank for r in self.raters]
        if sorted(ranks) != [1, 2, 3]:
            raise ValueError(f"scenario {self.id!r} rater ranks must be a permutation of 1..3, got {ranks}")
        by_rank = sorted(self.raters, key=lambda r: r.rank)
        for a, b in zip(by_rank[:-1], by_rank[1:]):
            if a.score < b.score:
                raise ValueError(f"scenario {self.id!r} rater scores must be non-increasing with rank")
        if not any(r.score > 6.0 for r in self.raters):
            raise ValueError(f"scenario {self.id!r} needs at least one rater score > 6")
        if self.log_future is not None and len(self.log_future.waypoints) != FUTURE_LEN:
            raise ValueError(
                f"scenario {self.id!r} log future must have {FUTURE_LEN} waypoints, "
                f"got {len(self.log_future.waypoints)}"
            )

    def rater_by_rank(self, rank: int) -> RaterTrajectory:
        for r in self.raters:
            if r.rank == rank:
                return r
        raise ValueError(f"no rater with rank {rank}")


@dataclass(frozen=True)
class SubmissionMetadata:
    submitter: str
    method: str
    timestamp: str | None = None


@dataclass(frozen=True)
class Submission:
    """A predicted 5-second trajectory per scenario id."""

    entries: Mapping[str, Trajectory]
    metadata: SubmissionMetadata

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", dict(self.entries))
        for sid, traj in self.entries.items():
            if len(traj.waypoints) != FUTURE_LEN:
                raise ValueError(
                    f"submission entry {sid!r} must have {FUTURE_LEN} waypoints, got {len(traj.waypoints)}"
                )


@dataclass(frozen=True)
class PerScenarioScore:
    """Scores for one scenario; ``ade`` is None for floored missing entries."""

    scenario_id: str
    category: ScenarioCategory
    rfs: float
    ade: float | None
    ade_reference: str | None
    per_rater_detail: tuple
    missing: bool = False


@dataclass(frozen=True)
class CategoryAggregate:
    mean_rfs: float
    mean_ade: float | None
    count: int


@dataclass(frozen=True)
class Aggregates:
    mean_rfs: float
    mean_ade: float | None
    count: int
    per_category: Mapping[str, CategoryAggregate]

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_category", dict(self.per_category))


@dataclass(frozen=True)
class ScoreReport:
    """Per-scenario RFS/ADE breakdown plus dataset aggregates."""

    per_scenario: Mapping[str, PerScenarioScore]
    aggregates: Aggregates
    submitter: str = ""
    method: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_scenario", dict(self.per_scenario))
