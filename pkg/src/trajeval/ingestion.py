"""Parsing, validation, and canonical serialization of benchmark files.

All three wire formats are line-delimited JSON:

* scenario files: one scenario object per line;
* submission files: one header record ``{submitter, method}`` followed by
  one ``{scenario_id, waypoints}`` record per scenario;
* report files: one aggregate record followed by per-scenario records,
  every float at a fixed 4-decimal precision.

Parsing never raises on bad records: each violation becomes a
:class:`ValidationIssue` and the offending record is excluded, so a core
value that violates its invariants is never constructed. Writers emit a
canonical form (sorted keys, compact separators) so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .core import (
    FUTURE_LEN,
    PAST_LEN,
    ROUTE_LEN,
    Aggregates,
    CategoryAggregate,
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
    trajectory_from_xy,
)
from .geometry import CameraCalibration, CameraIntrinsics, CameraName, RigidTransform

REPORT_DECIMALS = 4

_SCENARIO_FIELDS = {
    "id", "category", "routing", "ego", "raters", "log_future", "future_route_10s", "cameras",
}


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    scenario_id: str
    field_path: str
    severity: Severity
    message: str

    def __str__(self) -> str:
        where = self.scenario_id or "<file>"
        return f"[{self.severity.value}] {where} {self.field_path}: {self.message}"


def _sorted_issues(issues: list[ValidationIssue]) -> list[ValidationIssue]:
    return sorted(issues, key=lambda i: (i.scenario_id, i.field_path, i.severity.value, i.message))


class _RecordChecker:
    """Collects issues for one record; tracks whether any were errors."""

    def __init__(self, scenario_id: str, issues: list[ValidationIssue]):
        self.scenario_id = scenario_id
        self.issues = issues
        self.failed = False

    def error(self, field_path: str, message: str) -> None:
        self.failed = True
        self.issues.append(ValidationIssue(self.scenario_id, field_path, Severity.ERROR, message))

    def warning(self, field_path: str, message: str) -> None:
        self.issues.append(ValidationIssue(self.scenario_id, field_path, Severity.WARNING, message))


def _as_number(value: Any) -> float | None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return None
    return float(value)


def _check_xy_list(
    chk: _RecordChecker, value: Any, count: int | None, path: str
) -> list[tuple[float, float]] | None:
    if not isinstance(value, list):
        chk.error(path, "expected a list of [x, y] pairs")
        return None
    if count is not None and len(value) != count:
        chk.error(path, f"expected {count} waypoints, got {len(value)}")
        return None
    points: list[tuple[float, float]] = []
    ok = True
    for i, item in enumerate(value):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            chk.error(f"{path}[{i}]", "expected an [x, y] pair")
            ok = False
            continue
        x, y = _as_number(item[0]), _as_number(item[1])
        if x is None or y is None:
            chk.error(f"{path}[{i}]", "waypoint coordinates must be numbers")
            ok = False
        elif not (math.isfinite(x) and math.isfinite(y)):
            chk.error(f"{path}[{i}]", "non-finite waypoint")
            ok = False
        else:
            points.append((x, y))
    return points if ok else None


def _check_number_list(chk: _RecordChecker, value: Any, count: int, path: str) -> list[float] | None:
    if not isinstance(value, list) or len(value) != count:
        got = len(value) if isinstance(value, list) else type(value).__name__
        chk.error(path, f"expected {count} numbers, got {got}")
        return None
    out: list[float] = []
    for i, item in enumerate(value):
        num = _as_number(item)
        if num is None or not math.isfinite(num):
            chk.error(f"{path}[{i}]", "expected a finite number")
            return None
        out.append(num)
    return out


def _check_camera(chk: _RecordChecker, value: Any, path: str) -> CameraCalibration | None:
    if not isinstance(value, dict):
        chk.error(path, "expected a camera calibration object")
        return None
    try:
        name = CameraName(value.get("name"))
    except ValueError:
        chk.error(f"{path}.name", f"unknown camera name {value.get('name')!r}")
        return None

    intr_raw = value.get("intrinsics")
    if not isinstance(intr_raw, dict):
        chk.error(f"{path}.intrinsics", "expected an intrinsics object")
        return None
    intr_vals = {}
    for key in ("f_u", "f_v", "c_u", "c_v", "width", "height"):
        num = _as_number(intr_raw.get(key))
        if num is None or not math.isfinite(num):
            chk.error(f"{path}.intrinsics.{key}", "expected a finite number")
            return None
        intr_vals[key] = num
    try:
        intrinsics = CameraIntrinsics(**intr_vals)
    except ValueError as exc:
        chk.error(f"{path}.intrinsics", str(exc))
        return None

    extr_raw = value.get("extrinsics")
    if not isinstance(extr_raw, dict):
        chk.error(f"{path}.extrinsics", "expected an extrinsics object")
        return None
    rotation = extr_raw.get("rotation")
    translation = extr_raw.get("translation")
    try:
        rot = np.asarray(rotation, dtype=float)
        trans = np.asarray(translation, dtype=float)
        if not (np.all(np.isfinite(rot)) and np.all(np.isfinite(trans))):
            raise ValueError("non-finite extrinsics")
        extrinsics = RigidTransform(rot, trans)
    except (ValueError, TypeError) as exc:
        chk.error(f"{path}.extrinsics", f"invalid rigid transform: {exc}")
        return None

    distortion = value.get("distortion", [])
    if not isinstance(distortion, list) or any(_as_number(d) is None for d in distortion):
        chk.error(f"{path}.distortion", "expected a list of numbers")
        return None
    image_path = value.get("image_path")
    if image_path is not None and not isinstance(image_path, str):
        chk.error(f"{path}.image_path", "expected a string path")
        return None

    return CameraCalibration(
        name=name,
        intrinsics=intrinsics,
        extrinsics=extrinsics,
        distortion=tuple(float(d) for d in distortion),
        image_path=image_path,
    )


def _check_scenario(chk: _RecordChecker, record: dict) -> Scenario | None:
    for key in sorted(record):
        if key not in _SCENARIO_FIELDS:
            chk.warning(key, "unknown field ignored")

    try:
        category = ScenarioCategory(record.get("category"))
    except ValueError:
        chk.error("category", f"unknown category {record.get('category')!r}")
        category = None
    try:
        routing = RoutingCommand(record.get("routing"))
    except ValueError:
        chk.error("routing", f"unknown routing command {record.get('routing')!r}")
        routing = None

    ego = None
    ego_raw = record.get("ego")
    if not isinstance(ego_raw, dict):
        chk.error("ego", "expected an ego status object")
    else:
        past = _check_xy_list(chk, ego_raw.get("past"), PAST_LEN, "ego.past")
        velocity = _check_number_list(chk, ego_raw.get("velocity"), PAST_LEN, "ego.velocity")
        accel = _check_number_list(chk, ego_raw.get("acceleration"), PAST_LEN, "ego.acceleration")
        if past is not None and velocity is not None and accel is not None:
            ego = EgoStatus(
                trajectory_from_xy(past, t0_offset_s=-4.0), tuple(velocity), tuple(accel)
            )

    raters: list[RaterTrajectory] = []
    raters_raw = record.get("raters")
    if not isinstance(raters_raw, list) or len(raters_raw) != 3:
        got = len(raters_raw) if isinstance(raters_raw, list) else type(raters_raw).__name__
        chk.error("raters", f"expected exactly 3 rater trajectories, got {got}")
    else:
        for i, rater_raw in enumerate(raters_raw):
            path = f"raters[{i}]"
            if not isinstance(rater_raw, dict):
                chk.error(path, "expected a rater trajectory object")
                continue
            waypoints = _check_xy_list(chk, rater_raw.get("waypoints"), FUTURE_LEN, f"{path}.waypoints")
            score = _as_number(rater_raw.get("score"))
            rank = rater_raw.get("rank")
            if score is None or not (math.isfinite(score) and 0.0 <= score <= 10.0):
                chk.error(f"{path}.score", f"score must be in [0, 10], got {rater_raw.get('score')!r}")
                score = None
            if not isinstance(rank, int) or isinstance(rank, bool) or rank not in (1, 2, 3):
                chk.error(f"{path}.rank", f"rank must be 1, 2 or 3, got {rank!r}")
                rank = None
            if waypoints is not None and score is not None and rank is not None:
                raters.append(RaterTrajectory(trajectory_from_xy(waypoints), score, rank))
        if len(raters) == 3:
            if sorted(r.rank for r in raters) != [1, 2, 3]:
                chk.error("raters", "rater ranks must be a permutation of 1..3")
            else:
                by_rank = sorted(raters, key=lambda r: r.rank)
                if any(a.score < b.score for a, b in zip(by_rank[:-1], by_rank[1:])):
                    chk.error("raters", "rater scores must be non-increasing with rank")
                if not any(r.score > 6.0 for r in raters):
                    chk.error("raters", "no rater score > 6")

    log_future = None
    if record.get("log_future") is not None:
        log_points = _check_xy_list(chk, record["log_future"], FUTURE_LEN, "log_future")
        if log_points is not None:
            log_future = trajectory_from_xy(log_points)

    route = None
    if record.get("future_route_10s") is not None:
        route_points = _check_xy_list(chk, record["future_route_10s"], ROUTE_LEN, "future_route_10s")
        if route_points is not None:
            route = tuple(Waypoint(x, y) for x, y in route_points)

    cameras: list[CameraCalibration] = []
    cameras_raw = record.get("cameras", [])
    if not isinstance(cameras_raw, list):
        chk.error("cameras", "expected a list of camera calibrations")
    else:
        for i, cam_raw in enumerate(cameras_raw):
            cam = _check_camera(chk, cam_raw, f"cameras[{i}]")
            if cam is not None:
                cameras.append(cam)

    if chk.failed or category is None or routing is None or ego is None:
        return None
    return Scenario(
        id=chk.scenario_id,
        category=category,
        routing=routing,
        ego=ego,
        raters=tuple(raters),
        log_future=log_future,
        future_route_10s=route,
        cameras=tuple(cameras),
    )


def _iter_records(path: Path) -> Iterable[tuple[int, str]]:
    with path.open("r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if line:
                yield line_no, line


def _iter_record_lines(text: str) -> Iterable[tuple[int, str]]:
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line:
            yield line_no, line


def parse_scenarios(path: str | Path) -> tuple[list[Scenario], list[ValidationIssue]]:
    """Parse a scenario file; invalid records become issues, never exceptions."""
    issues: list[ValidationIssue] = []
    scenarios: list[Scenario] = []
    seen_ids: set[str] = set()

    for line_no, line in _iter_records(Path(path)):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            issues.append(ValidationIssue("", f"line {line_no}", Severity.ERROR, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            issues.append(ValidationIssue("", f"line {line_no}", Severity.ERROR, "expected a JSON object"))
            continue

        sid = record.get("id")
        if not isinstance(sid, str) or not sid:
            issues.append(ValidationIssue("", f"line {line_no}", Severity.ERROR, "missing or empty scenario id"))
            continue
        chk = _RecordChecker(sid, issues)
        if sid in seen_ids:
            chk.error("id", "duplicate scenario id")
            continue
        seen_ids.add(sid)

        scenario = _check_scenario(chk, record)
        if scenario is not None:
            scenarios.append(scenario)

    return scenarios, _sorted_issues(issues)


def parse_submission(
    path: str | Path, scenarios: Sequence[Scenario]
) -> tuple[Submission, list[ValidationIssue]]:
    """Parse a submission file and cross-check it against the scenario set."""
    return parse_submission_text(Path(path).read_text(encoding="utf-8"), scenarios)


def parse_submission_text(
    text: str, scenarios: Sequence[Scenario]
) -> tuple[Submission, list[ValidationIssue]]:
    """Same as :func:`parse_submission` but on in-memory bytes (service path)."""
    issues: list[ValidationIssue] = []
    entries: dict[str, Trajectory] = {}
    known_ids = {s.id for s in scenarios}
    metadata = SubmissionMetadata(submitter="", method="")
    saw_header = False

    for line_no, line in _iter_record_lines(text):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            issues.append(ValidationIssue("", f"line {line_no}", Severity.ERROR, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            issues.append(ValidationIssue("", f"line {line_no}", Severity.ERROR, "expected a JSON object"))
            continue

        if "submitter" in record or "method" in record:
            if saw_header:
                issues.append(ValidationIssue("", "header", Severity.ERROR, "duplicate header record"))
                continue
            saw_header = True
            submitter = record.get("submitter")
            method = record.get("method")
            timestamp = record.get("timestamp")
            if not isinstance(submitter, str) or not submitter:
                issues.append(ValidationIssue("", "header.submitter", Severity.ERROR, "missing submitter"))
                continue
            if not isinstance(method, str) or not method:
                issues.append(ValidationIssue("", "header.method", Severity.ERROR, "missing method"))
                continue
            metadata = SubmissionMetadata(
                submitter, method, timestamp if isinstance(timestamp, str) else None
            )
            continue

        sid = record.get("scenario_id")
        if not isinstance(sid, str) or not sid:
            issues.append(ValidationIssue("", f"line {line_no}", Severity.ERROR, "missing scenario_id"))
            continue
        chk = _RecordChecker(sid, issues)
        if sid in entries:
            chk.error("scenario_id", "duplicate scenario id")
            continue
        if sid not in known_ids:
            chk.warning("scenario_id", "unknown scenario id; entry ignored")
            continue
        waypoints = _check_xy_list(chk, record.get("waypoints"), FUTURE_LEN, "waypoints")
        if waypoints is not None:
            entries[sid] = trajectory_from_xy(waypoints)

    if not saw_header:
        issues.append(ValidationIssue("", "header", Severity.ERROR, "missing header record"))
    for sid in sorted(known_ids - set(entries)):
        issues.append(ValidationIssue(sid, "", Severity.ERROR, "missing submission entry"))

    return Submission(entries, metadata), _sorted_issues(issues)


# --- canonical writers ---------------------------------------------------


def _dump_canonical(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _xy(traj: Trajectory) -> list[list[float]]:
    return [[w.x, w.y] for w in traj.waypoints]


def scenario_to_record(scenario: Scenario) -> dict:
    record: dict[str, Any] = {
        "id": scenario.id,
        "category": scenario.category.value,
        "routing": scenario.routing.value,
        "ego": {
            "past": _xy(scenario.ego.past),
            "velocity": list(scenario.ego.velocity),
            "acceleration": list(scenario.ego.acceleration),
        },
        "raters": [
            {"waypoints": _xy(r.trajectory), "score": r.score, "rank": r.rank}
            for r in sorted(scenario.raters, key=lambda r: r.rank)
        ],
    }
    if scenario.log_future is not None:
        record["log_future"] = _xy(scenario.log_future)
    if scenario.future_route_10s is not None:
        record["future_route_10s"] = [[w.x, w.y] for w in scenario.future_route_10s]
    if scenario.cameras:
        record["cameras"] = [
            {
                "name": cam.name.value,
                "intrinsics": {
                    "f_u": cam.intrinsics.f_u,
                    "f_v": cam.intrinsics.f_v,
                    "c_u": cam.intrinsics.c_u,
                    "c_v": cam.intrinsics.c_v,
                    "width": cam.intrinsics.width,
                    "height": cam.intrinsics.height,
                },
                "extrinsics": {
                    "rotation": [[float(v) for v in row] for row in cam.extrinsics.rotation],
                    "translation": [float(v) for v in cam.extrinsics.translation],
                },
                **({"distortion": list(cam.distortion)} if cam.distortion else {}),
                **({"image_path": cam.image_path} if cam.image_path is not None else {}),
            }
            for cam in scenario.cameras
        ]
    return record


def write_scenarios(scenarios: Sequence[Scenario], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        for scenario in scenarios:
            f.write(_dump_canonical(scenario_to_record(scenario)) + "\n")


def write_submission(submission: Submission, path: str | Path) -> None:
    header: dict[str, Any] = {
        "submitter": submission.metadata.submitter,
        "method": submission.metadata.method,
    }
    if submission.metadata.timestamp is not None:
        header["timestamp"] = submission.metadata.timestamp
    with Path(path).open("w", encoding="utf-8") as f:
        f.write(_dump_canonical(header) + "\n")
        for sid in sorted(submission.entries):
            f.write(_dump_canonical({"scenario_id": sid, "waypoints": _xy(submission.entries[sid])}) + "\n")


# --- report serialization at fixed 4-decimal precision -------------------


def _fmt(value: float | None) -> str:
    if value is None:
        return "null"
    rounded = round(value, REPORT_DECIMALS) + 0.0  # normalize -0.0
    return f"{rounded:.{REPORT_DECIMALS}f}"


def _detail_json(detail: tuple) -> str:
    parts = []
    for t, per_rater, best in sorted(detail):
        scores = ",".join(_fmt(s) for s in per_rater)
        parts.append(f'"t{t}":{{"best":{_fmt(best)},"per_rater":[{scores}]}}')
    return "{" + ",".join(parts) + "}"


def _scenario_score_json(score: PerScenarioScore) -> str:
    ref = "null" if score.ade_reference is None else json.dumps(score.ade_reference)
    return (
        f'{{"ade":{_fmt(score.ade)},"ade_reference":{ref},'
        f'"category":{json.dumps(score.category.value)},"detail":{_detail_json(score.per_rater_detail)},'
        f'"missing":{json.dumps(score.missing)},"rfs":{_fmt(score.rfs)},'
        f'"scenario_id":{json.dumps(score.scenario_id)}}}'
    )


def _aggregate_json(report: ScoreReport) -> str:
    agg = report.aggregates
    cats = ",".join(
        f'{json.dumps(name)}:{{"count":{c.count},"mean_ade":{_fmt(c.mean_ade)},"mean_rfs":{_fmt(c.mean_rfs)}}}'
        for name, c in sorted(agg.per_category.items())
    )
    return (
        f'{{"count":{agg.count},"mean_ade":{_fmt(agg.mean_ade)},"mean_rfs":{_fmt(agg.mean_rfs)},'
        f'"method":{json.dumps(report.method)},"per_category":{{{cats}}},'
        f'"submitter":{json.dumps(report.submitter)}}}'
    )


def report_to_text(report: ScoreReport) -> str:
    """Serialize a report to its line-delimited wire form."""
    if not report.per_scenario:
        raise ValueError("cannot write a report with no per-scenario scores")
    lines = [_aggregate_json(report)]
    for sid in sorted(report.per_scenario):
        lines.append(_scenario_score_json(report.per_scenario[sid]))
    return "\n".join(lines) + "\n"


def write_report(report: ScoreReport, path: str | Path) -> None:
    Path(path).write_text(report_to_text(report), encoding="utf-8")


def parse_report(path: str | Path) -> ScoreReport:
    """Read back a report file written by :func:`write_report`."""
    text = Path(path).read_text(encoding="utf-8")
    return report_from_text(text)


def report_from_text(text: str) -> ScoreReport:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty report")
    agg_raw = json.loads(lines[0])
    per_category = {
        name: CategoryAggregate(c["mean_rfs"], c["mean_ade"], c["count"])
        for name, c in agg_raw["per_category"].items()
    }
    aggregates = Aggregates(agg_raw["mean_rfs"], agg_raw["mean_ade"], agg_raw["count"], per_category)

    per_scenario: dict[str, PerScenarioScore] = {}
    for line in lines[1:]:
        raw = json.loads(line)
        detail = tuple(
            (int(key[1:]), tuple(val["per_rater"]), val["best"])
            for key, val in sorted(raw["detail"].items())
        )
        score = PerScenarioScore(
            scenario_id=raw["scenario_id"],
            category=ScenarioCategory(raw["category"]),
            rfs=raw["rfs"],
            ade=raw["ade"],
            ade_reference=raw["ade_reference"],
            per_rater_detail=detail,
            missing=raw["missing"],
        )
        per_scenario[score.scenario_id] = score
    return ScoreReport(per_scenario, aggregates, agg_raw.get("submitter", ""), agg_raw.get("method", ""))
