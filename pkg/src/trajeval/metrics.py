"""Rater Feedback Score and baseline distance metrics.

The per-rater score is flat at the rater's own score while the prediction
stays inside a speed-scaled trust rectangle around the rater waypoint, and
decays by a factor of 10 for every additional threshold-width outside it:

    score = s_rater * 0.1 ** max(max(d_lng / tau_lng, d_lat / tau_lat) - 1, 0)

Per evaluation time (3 s and 5 s) the best rater wins; the final score is
the two-time mean floored at 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    FUTURE_LEN,
    RFS_FLOOR,
    Aggregates,
    CategoryAggregate,
    PerScenarioScore,
    RaterTrajectory,
    Trajectory,
    initial_speed,
    waypoint_at_time,
)
from .geometry import ErrorDecomposition, decompose_error

EVAL_TIMES_S = (3.0, 5.0)

# Base trust-region half-widths in meters, keyed by evaluation time; the
# longitudinal threshold is 4x the lateral one by construction.
BASE_TAU_LAT = {3: 1.0, 5: 1.8}
LNG_LAT_RATIO = 4.0

# Piecewise-linear speed scaling of the thresholds.
SCALE_FLOOR = 0.5
SLOW_SPEED_MPS = 1.4
FAST_SPEED_MPS = 11.0

DECAY_BASE = 0.1


@dataclass(frozen=True)
class TrustThresholds:
    """Speed-scaled trust-region half-widths at one evaluation time."""

    tau_lng: float
    tau_lat: float
    t: float

    def __post_init__(self) -> None:
        if self.tau_lng <= 0 or self.tau_lat <= 0:
            raise ValueError(f"thresholds must be positive, got ({self.tau_lng}, {self.tau_lat})")


@dataclass(frozen=True)
class TimeSliceScores:
    per_rater_scores: tuple[float, float, float]
    best: float


@dataclass(frozen=True)
class RfsBreakdown:
    per_time: Mapping[int, TimeSliceScores]
    final: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_time", dict(self.per_time))


def speed_scale(v: float) -> float:
    """Threshold scaling as a piecewise-linear function of initial speed."""
    if v < 0:
        raise ValueError(f"speed must be non-negative, got {v}")
    if v < SLOW_SPEED_MPS:
        return SCALE_FLOOR
    if v >= FAST_SPEED_MPS:
        return 1.0
    return SCALE_FLOOR + SCALE_FLOOR * (v - SLOW_SPEED_MPS) / (FAST_SPEED_MPS - SLOW_SPEED_MPS)


def thresholds_for(t: float, v: float) -> TrustThresholds:
    """Trust-region thresholds at evaluation time ``t`` for initial speed ``v``."""
    base_lat = BASE_TAU_LAT.get(int(t)) if float(t).is_integer() else None
    if base_lat is None:
        raise ValueError(f"evaluation time must be 3 or 5 seconds, got {t}")
    scale = speed_scale(v)
    return TrustThresholds(scale * LNG_LAT_RATIO * base_lat, scale * base_lat, float(t))


def per_rater_score(s_rater: float, err: ErrorDecomposition, th: TrustThresholds) -> float:
    """Decayed score contributed by a single rater trajectory."""
    if not 0.0 <= s_rater <= 10.0:
        raise ValueError(f"rater score must be in [0, 10], got {s_rater}")
    ratio = max(err.delta_lng / th.tau_lng, err.delta_lat / th.tau_lat)
    return s_rater * DECAY_BASE ** max(ratio - 1.0, 0.0)


def rfs(pred: Trajectory, raters: Sequence[RaterTrajectory]) -> RfsBreakdown:
    """Rater Feedback Score of a predicted future against three rated futures."""
    if len(pred.waypoints) != FUTURE_LEN:
        raise ValueError(f"prediction must have {FUTURE_LEN} waypoints, got {len(pred.waypoints)}")
    if len(raters) != 3:
        raise ValueError(f"expected exactly 3 rater trajectories, got {len(raters)}")

    per_time: dict[int, TimeSliceScores] = {}
    for t in EVAL_TIMES_S:
        pred_pt = waypoint_at_time(pred, t)
        scores = []
        for rater in raters:
            v = initial_speed(rater.trajectory)
            th = thresholds_for(t, v)
            err = decompose_error(pred_pt, rater.trajectory, t)
            scores.append(per_rater_score(rater.score, err, th))
        per_time[int(t)] = TimeSliceScores(tuple(scores), max(scores))

    mean_best = sum(slice_.best for slice_ in per_time.values()) / len(per_time)
    return RfsBreakdown(per_time, max(mean_best, RFS_FLOOR))


def ade(pred: Trajectory, reference: Trajectory) -> float:
    """Mean Euclidean distance between aligned waypoints."""
    if len(pred.waypoints) != len(reference.waypoints):
        raise ValueError(
            f"trajectories must have equal length, got {len(pred.waypoints)} vs {len(reference.waypoints)}"
        )
    if not pred.waypoints:
        raise ValueError("cannot compute ADE of empty trajectories")
    total = sum(math.hypot(p.x - r.x, p.y - r.y) for p, r in zip(pred.waypoints, reference.waypoints))
    return total / len(pred.waypoints)


def aggregate(scores: Iterable[PerScenarioScore]) -> Aggregates:
    """Unweighted overall and per-category means; ADE skips floored missing entries."""
    scores = list(scores)
    if not scores:
        raise ValueError("cannot aggregate an empty score list")

    def summarize(group: list[PerScenarioScore]) -> tuple[float, float | None, int]:
        mean_rfs = sum(s.rfs for s in group) / len(group)
        ades = [s.ade for s in group if s.ade is not None]
        mean_ade = sum(ades) / len(ades) if ades else None
        return mean_rfs, mean_ade, len(group)

    by_category: dict[str, list[PerScenarioScore]] = {}
    for s in scores:
        by_category.setdefault(s.category.value, []).append(s)

    per_category = {}
    for name in sorted(by_category):
        mean_rfs, mean_ade, count = summarize(by_category[name])
        per_category[name] = CategoryAggregate(mean_rfs, mean_ade, count)

    mean_rfs, mean_ade, count = summarize(scores)
    return Aggregates(mean_rfs, mean_ade, count, per_category)
