from __future__ import annotations

import json

import pytest

from trajeval.core import (
    FUTURE_LEN,
    PAST_LEN,
    EgoStatus,
    RaterTrajectory,
    RoutingCommand,
    Scenario,
    ScenarioCategory,
    Trajectory,
    trajectory_from_xy,
)
from trajeval.ingestion import scenario_to_record
from trajeval.synth import generate_batch


def straight_future(speed: float, y: float = 0.0) -> Trajectory:
    """A 20-point constant-speed future along +x at lateral offset y."""
    return trajectory_from_xy([(speed * 0.25 * (i + 1), y) for i in range(FUTURE_LEN)])


def straight_past(speed: float) -> Trajectory:
    return trajectory_from_xy([(speed * (-4.0 + 0.25 * j), 0.0) for j in range(PAST_LEN)], t0_offset_s=-4.0)


def make_scenario(
    scenario_id: str,
    raters: tuple[RaterTrajectory, RaterTrajectory, RaterTrajectory],
    speed: float = 10.0,
    log_future: Trajectory | None = None,
) -> Scenario:
    return Scenario(
        id=scenario_id,
        category=ScenarioCategory.OTHERS,
        routing=RoutingCommand.GO_STRAIGHT,
        ego=EgoStatus(straight_past(speed), (speed,) * PAST_LEN, (0.0,) * PAST_LEN),
        raters=raters,
        log_future=log_future,
    )


@pytest.fixture
def three_lane_raters() -> tuple[RaterTrajectory, RaterTrajectory, RaterTrajectory]:
    """Fast parallel lanes at y = 0 / +10 / -10 with scores 10 / 8 / 6."""
    return (
        RaterTrajectory(straight_future(11.0, 0.0), 10.0, 1),
        RaterTrajectory(straight_future(11.0, 10.0), 8.0, 2),
        RaterTrajectory(straight_future(11.0, -10.0), 6.0, 3),
    )


# --- deliberately corrupted scenario corpora ------------------------------

CORRUPTION_KINDS = ("rater_count", "past_count", "nonfinite", "low_scores", "duplicate_id")


def corrupt_record(record: dict, kind: str) -> tuple[dict, tuple[str, str, str, str]]:
    """Apply one corruption; returns (record, expected (sid, path, severity, message))."""
    sid = record["id"]
    if kind == "rater_count":
        del record["raters"][1]["waypoints"][-1]
        return record, (sid, "raters[1].waypoints", "error", "expected 20 waypoints, got 19")
    if kind == "past_count":
        del record["ego"]["past"][0]
        return record, (sid, "ego.past", "error", "expected 16 waypoints, got 15")
    if kind == "nonfinite":
        record["raters"][0]["waypoints"][4] = [float("nan"), 0.0]
        return record, (sid, "raters[0].waypoints[4]", "error", "non-finite waypoint")
    if kind == "low_scores":
        for rater, score in zip(record["raters"], (6.0, 5.0, 2.0)):
            rater["score"] = score
        return record, (sid, "raters", "error", "no rater score > 6")
    if kind == "duplicate_id":
        return record, (sid, "id", "error", "duplicate scenario id")
    raise ValueError(f"unknown corruption {kind!r}")


def build_corrupted_corpus(path, n_corrupt: int, seed: int = 500):
    """Write n_corrupt valid records followed by one corrupted twin each.

    Returns the expected (scenario_id, field_path, severity, message) tuples,
    sorted the way the parser reports them.
    """
    scenarios = generate_batch(n_corrupt, seed=seed)
    lines = []
    expected = []
    for i, scenario in enumerate(scenarios):
        record = scenario_to_record(scenario)
        lines.append(json.dumps(record, sort_keys=True))
        twin = json.loads(json.dumps(scenario_to_record(scenario)))
        kind = CORRUPTION_KINDS[i % len(CORRUPTION_KINDS)]
        if kind != "duplicate_id":
            twin["id"] = f"{scenario.id}-corrupt"
        twin, issue = corrupt_record(twin, kind)
        lines.append(json.dumps(twin, sort_keys=True))
        expected.append(issue)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return sorted(expected), scenarios
