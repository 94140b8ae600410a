"""Deterministic synthetic scenarios and brute-force oracles for testing.

Generation is a pure function of the template, so fixture files are
byte-reproducible. The rank-1 trajectory is the template's ideal path at
score 10; rank-2 is a perturbed variant docked one minor or major
infraction (9 or 8); rank-3 is a distinct behavior mode with cumulative
deductions capping it at 5.

``rfs_bruteforce_oracle`` re-derives the rater feedback score from raw
coordinates with no code shared with the metrics module; it exists to
cross-check that implementation and is only meant for tests.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .core import (
    FUTURE_LEN,
    PAST_LEN,
    ROUTE_LEN,
    STEP_S,
    EgoStatus,
    RaterTrajectory,
    RoutingCommand,
    Scenario,
    ScenarioCategory,
    Trajectory,
    Waypoint,
    trajectory_from_xy,
)
from .geometry import CameraCalibration, CameraIntrinsics, CameraName, RigidTransform

TEMPLATE_KINDS = (
    "straight_follow",
    "left_turn",
    "right_turn",
    "lane_change",
    "hard_brake",
    "swerve_avoid",
)

# One speed per speed_scale regime plus ramp interior points.
SPEED_CYCLE_MPS = (0.8, 3.0, 6.2, 9.5, 11.0, 14.0)

LANE_WIDTH_M = 3.5
TURN_DURATION_S = 5.0
BRAKE_STOP_S = 2.5
SWERVE_AMPLITUDE_M = 1.5

_KIND_ROUTING = {
    "straight_follow": RoutingCommand.GO_STRAIGHT,
    "left_turn": RoutingCommand.GO_LEFT,
    "right_turn": RoutingCommand.GO_RIGHT,
    "lane_change": RoutingCommand.GO_STRAIGHT,
    "hard_brake": RoutingCommand.GO_STRAIGHT,
    "swerve_avoid": RoutingCommand.GO_STRAIGHT,
}

_KIND_CATEGORY = {
    "straight_follow": ScenarioCategory.OTHERS,
    "left_turn": ScenarioCategory.INTERSECTION,
    "right_turn": ScenarioCategory.INTERSECTION,
    "lane_change": ScenarioCategory.MULTI_LANE_MANEUVERS,
    "hard_brake": ScenarioCategory.PEDESTRIANS,
    "swerve_avoid": ScenarioCategory.FOREIGN_OBJECT_DEBRIS,
}

# Rank-3 plays out the plausible-but-wrong alternative to the ideal behavior.
_DISTINCT_MODE = {
    "straight_follow": "hard_brake",
    "left_turn": "straight_follow",
    "right_turn": "straight_follow",
    "lane_change": "straight_follow",
    "hard_brake": "straight_follow",
    "swerve_avoid": "straight_follow",
}


@dataclass(frozen=True)
class ScenarioTemplate:
    kind: str
    speed: float
    noise_seed: int

    def __post_init__(self) -> None:
        if self.kind not in TEMPLATE_KINDS:
            raise ValueError(f"unknown template kind {self.kind!r}")
        if self.speed < 0:
            raise ValueError(f"template speed must be non-negative, got {self.speed}")


@dataclass(frozen=True)
class DecisionBucket:
    key: tuple[str, str]
    members: tuple[Trajectory, ...]


def _smoothstep(u: float) -> float:
    u = min(max(u, 0.0), 1.0)
    return u * u * (3.0 - 2.0 * u)


def _ideal_position(kind: str, v: float, t: float) -> tuple[float, float]:
    """Continuous-time position of the template's ideal path."""
    if v <= 0.0:
        return (0.0, 0.0)
    if kind == "straight_follow":
        return (v * t, 0.0)
    if kind in ("left_turn", "right_turn"):
        omega = (math.pi / 2.0) / TURN_DURATION_S
        radius = v / omega
        if t <= TURN_DURATION_S:
            x = radius * math.sin(omega * t)
            y = radius * (1.0 - math.cos(omega * t))
        else:
            x = radius
            y = radius + v * (t - TURN_DURATION_S)
        return (x, y) if kind == "left_turn" else (x, -y)
    if kind == "lane_change":
        return (v * t, LANE_WIDTH_M * _smoothstep(t / 4.0))
    if kind == "hard_brake":
        decel = v / BRAKE_STOP_S
        t_move = min(t, BRAKE_STOP_S)
        return (v * t_move - 0.5 * decel * t_move * t_move, 0.0)
    if kind == "swerve_avoid":
        phase = min(t, TURN_DURATION_S) / TURN_DURATION_S
        return (v * t, SWERVE_AMPLITUDE_M * math.sin(math.pi * phase) ** 2)
    raise ValueError(f"unknown template kind {kind!r}")


def _sample_path(kind: str, v: float, count: int, lateral_shift: float = 0.0) -> Trajectory:
    points = []
    for i in range(count):
        t = STEP_S * (i + 1)
        x, y = _ideal_position(kind, v, t)
        points.append((x, y + lateral_shift))
    return trajectory_from_xy(points)


def _front_camera() -> CameraCalibration:
    return CameraCalibration(
        name=CameraName.FRONT,
        intrinsics=CameraIntrinsics(f_u=2055.0, f_v=2055.0, c_u=960.0, c_v=640.0, width=1920.0, height=1280.0),
        extrinsics=RigidTransform(np.eye(3), np.array([1.5, 0.0, 2.0])),
    )


def generate_scenario(template: ScenarioTemplate) -> Scenario:
    """Build a fully valid scenario from a template, deterministically."""
    rng = random.Random(template.noise_seed)
    kind, v = template.kind, template.speed

    ideal = _sample_path(kind, v, FUTURE_LEN)

    # Rank 2: same behavior mode, slightly off in speed and lateral placement.
    speed_factor = 1.0 + rng.uniform(-0.08, 0.08)
    shift = rng.uniform(0.3, 0.8) * rng.choice((-1.0, 1.0))
    rank2_traj = _sample_path(kind, v * speed_factor, FUTURE_LEN, lateral_shift=shift)
    rank2_score = float(rng.choice((9, 8)))

    # Rank 3: a distinct mode with cumulative major/minor deductions.
    rank3_traj = _sample_path(_DISTINCT_MODE[kind], v, FUTURE_LEN)
    deductions = 2 * rng.randint(1, 3) + rng.randint(0, 2)
    rank3_score = float(min(5, max(0, 10 - deductions)))

    past_points = [(v * (-4.0 + STEP_S * j), 0.0) for j in range(PAST_LEN)]
    ego = EgoStatus(
        past=trajectory_from_xy(past_points, t0_offset_s=-4.0),
        velocity=(v,) * PAST_LEN,
        acceleration=(0.0,) * PAST_LEN,
    )

    route = tuple(
        Waypoint(*_ideal_position(kind, v, STEP_S * (i + 1))) for i in range(ROUTE_LEN)
    )

    return Scenario(
        id=f"{kind}-{v:g}mps-{template.noise_seed:06d}",
        category=_KIND_CATEGORY[kind],
        routing=_KIND_ROUTING[kind],
        ego=ego,
        raters=(
            RaterTrajectory(ideal, 10.0, 1),
            RaterTrajectory(rank2_traj, rank2_score, 2),
            RaterTrajectory(rank3_traj, rank3_score, 3),
        ),
        log_future=ideal,
        future_route_10s=route,
        cameras=(_front_camera(),),
    )


def generate_batch(count: int, seed: int, kind: str | None = None, speed: float | None = None) -> list[Scenario]:
    """Generate ``count`` scenarios; cycles kinds and speeds when unpinned."""
    scenarios = []
    for i in range(count):
        k = kind if kind is not None else TEMPLATE_KINDS[i % len(TEMPLATE_KINDS)]
        s = speed if speed is not None else SPEED_CYCLE_MPS[(i // len(TEMPLATE_KINDS)) % len(SPEED_CYCLE_MPS)]
        scenarios.append(generate_scenario(ScenarioTemplate(k, s, seed + i)))
    return scenarios


# --- diverse-trajectory bucket sampling ----------------------------------

_SPEED_CLASSES = ("slow", "medium", "fast")
_LATERAL_CLASSES = ("left", "center", "right")
_LATERAL_SPLIT_M = 1.0


def _final_speed(traj: Trajectory) -> float:
    pts = traj.waypoints
    if len(pts) >= 2:
        return math.hypot(pts[-1].x - pts[-2].x, pts[-1].y - pts[-2].y) * 4.0
    if len(pts) == 1:
        return math.hypot(pts[0].x, pts[0].y) * 4.0
    return 0.0


def classify_bucket(traj: Trajectory) -> tuple[str, str]:
    """(speed class, lateral class) of a candidate by its final waypoint."""
    v = _final_speed(traj)
    if v < 1.4:
        speed_class = "slow"
    elif v < 11.0:
        speed_class = "medium"
    else:
        speed_class = "fast"
    final_y = traj.waypoints[-1].y if traj.waypoints else 0.0
    if final_y > _LATERAL_SPLIT_M:
        lateral_class = "left"
    elif final_y < -_LATERAL_SPLIT_M:
        lateral_class = "right"
    else:
        lateral_class = "center"
    return (speed_class, lateral_class)


def bucket_and_sample(candidates: list[Trajectory], k: int) -> list[Trajectory]:
    """Pick up to ``k`` diverse candidates: extremes and median per decision bucket."""
    if not candidates:
        raise ValueError("no candidate trajectories to sample from")
    if not 0 <= k <= len(candidates):
        raise ValueError(f"k must be in [0, {len(candidates)}], got {k}")

    grouped: dict[tuple[str, str], list[int]] = {}
    for index, traj in enumerate(candidates):
        grouped.setdefault(classify_bucket(traj), []).append(index)

    def key_order(key: tuple[str, str]) -> tuple[int, int]:
        return (_SPEED_CLASSES.index(key[0]), _LATERAL_CLASSES.index(key[1]))

    picked: list[int] = []
    for key in sorted(grouped, key=key_order):
        members = grouped[key]
        # leftmost = max lateral offset (y points left); ties broken by index
        by_lateral = sorted(members, key=lambda i: (candidates[i].waypoints[-1].y, i))
        for index in (by_lateral[0], by_lateral[(len(by_lateral) - 1) // 2], by_lateral[-1]):
            if index not in picked:
                picked.append(index)

    return [candidates[i] for i in picked[:k]]


def decision_buckets(candidates: list[Trajectory]) -> list[DecisionBucket]:
    grouped: dict[tuple[str, str], list[Trajectory]] = {}
    for traj in candidates:
        grouped.setdefault(classify_bucket(traj), []).append(traj)
    keys = sorted(grouped, key=lambda key: (_SPEED_CLASSES.index(key[0]), _LATERAL_CLASSES.index(key[1])))
    return [DecisionBucket(key, tuple(grouped[key])) for key in keys]


# --- independent re-derivation of the rater feedback score ---------------


def rfs_bruteforce_oracle(pred: Trajectory, raters: tuple[RaterTrajectory, ...]) -> float:
    """Straight-line recomputation of the RFS, sharing nothing with metrics."""
    pred_pts = [(w.x, w.y) for w in pred.waypoints]
    if len(pred_pts) != 20:
        raise ValueError("prediction must have 20 waypoints")
    if len(raters) != 3:
        raise ValueError("expected exactly 3 rater trajectories")

    bests = []
    for t_index, t in ((11, 3.0), (19, 5.0)):
        scores = []
        for rater in raters:
            pts = [(w.x, w.y) for w in rater.trajectory.waypoints]
            if len(pts) != 20:
                raise ValueError("rater trajectory must have 20 waypoints")

            v = math.sqrt(pts[0][0] ** 2 + pts[0][1] ** 2) * 4.0
            if v < 1.4:
                scale = 0.5
            elif v >= 11.0:
                scale = 1.0
            else:
                scale = 0.5 + 0.5 * (v - 1.4) / (11.0 - 1.4)
            base_lat = 1.0 if t == 3.0 else 1.8
            tau_lat = scale * base_lat
            tau_lng = scale * base_lat * 4.0

            lo = max(t_index - 1, 0)
            hi = min(t_index + 1, len(pts) - 1)
            tx = pts[hi][0] - pts[lo][0]
            ty = pts[hi][1] - pts[lo][1]
            norm = math.sqrt(tx * tx + ty * ty)
            if norm < 1e-6:
                tx, ty = 1.0, 0.0
            else:
                tx, ty = tx / norm, ty / norm

            ex = pred_pts[t_index][0] - pts[t_index][0]
            ey = pred_pts[t_index][1] - pts[t_index][1]
            d_lng = abs(ex * tx + ey * ty)
            d_lat = abs(-ex * ty + ey * tx)

            ratio = max(d_lng / tau_lng, d_lat / tau_lat)
            exponent = ratio - 1.0 if ratio > 1.0 else 0.0
            scores.append(rater.score * 0.1 ** exponent)
        bests.append(max(scores))

    mean = (bests[0] + bests[1]) / 2.0
    return mean if mean > 4.0 else 4.0


# --- constructed ADE/RFS divergence --------------------------------------


def make_ade_rfs_divergent_pair(seed: int) -> tuple[Scenario, Trajectory, Trajectory]:
    """A scenario plus two predictions where the better ADE gets the worse RFS.

    Prediction A hugs the log future, which runs at high speed through the
    unrated gap between the lane-keep and lane-change modes, so its RFS is
    floored. Prediction B replays the rank-1 mode: worse ADE, perfect RFS.
    """
    rng = random.Random(seed)
    v = rng.uniform(11.5, 14.0)
    gap = rng.uniform(5.0, 7.0)

    def offset_path(target_y: float, ramp_s: float = 2.5) -> list[tuple[float, float]]:
        return [
            (v * (STEP_S * (i + 1)), target_y * _smoothstep(STEP_S * (i + 1) / ramp_s))
            for i in range(FUTURE_LEN)
        ]

    keep_lane = _sample_path("straight_follow", v, FUTURE_LEN)
    change_lane = trajectory_from_xy(offset_path(2.0 * gap))
    brake = _sample_path("hard_brake", v, FUTURE_LEN)
    log_future = trajectory_from_xy(offset_path(gap))

    jitter = [(x + rng.uniform(-0.05, 0.05), y + rng.uniform(-0.05, 0.05)) for x, y in log_future.as_xy()]
    pred_a = trajectory_from_xy(jitter)
    pred_b = keep_lane

    past_points = [(v * (-4.0 + STEP_S * j), 0.0) for j in range(PAST_LEN)]
    route = tuple(
        Waypoint(v * (STEP_S * (i + 1)), gap * _smoothstep(STEP_S * (i + 1) / 2.5))
        for i in range(ROUTE_LEN)
    )
    scenario = Scenario(
        id=f"divergent-{seed:06d}",
        category=ScenarioCategory.MULTI_LANE_MANEUVERS,
        routing=RoutingCommand.GO_STRAIGHT,
        ego=EgoStatus(
            past=trajectory_from_xy(past_points, t0_offset_s=-4.0),
            velocity=(v,) * PAST_LEN,
            acceleration=(0.0,) * PAST_LEN,
        ),
        raters=(
            RaterTrajectory(keep_lane, 10.0, 1),
            RaterTrajectory(change_lane, 8.0, 2),
            RaterTrajectory(brake, 3.0, 3),
        ),
        log_future=log_future,
        future_route_10s=route,
        cameras=(_front_camera(),),
    )
    return scenario, pred_a, pred_b
