from __future__ import annotations

import json

import pytest

from trajeval.core import Submission, SubmissionMetadata
from trajeval.evaluate import evaluate_submission
from trajeval.ingestion import (
    Severity,
    parse_report,
    parse_scenarios,
    parse_submission,
    report_to_text,
    scenario_to_record,
    write_report,
    write_scenarios,
    write_submission,
)
from trajeval.synth import generate_batch

from conftest import build_corrupted_corpus


def issue_tuples(issues):
    return [(i.scenario_id, i.field_path, i.severity.value, i.message) for i in issues]


@pytest.fixture
def fixture_scenarios():
    return generate_batch(10, seed=900)


class TestParseScenarios:
    def test_valid_fixtures_clean(self, fixture_scenarios, tmp_path):
        path = tmp_path / "ok.scenarios.jsonl"
        write_scenarios(fixture_scenarios, path)
        scenarios, issues = parse_scenarios(path)
        assert len(scenarios) == 10
        assert issues == []

    def test_round_trip_byte_identical(self, fixture_scenarios, tmp_path):
        first = tmp_path / "a.jsonl"
        second = tmp_path / "b.jsonl"
        write_scenarios(fixture_scenarios, first)
        scenarios, _ = parse_scenarios(first)
        write_scenarios(scenarios, second)
        assert first.read_bytes() == second.read_bytes()

    def test_no_rater_above_six(self, fixture_scenarios, tmp_path):
        record = scenario_to_record(fixture_scenarios[0])
        for rater, score in zip(record["raters"], (6.0, 5.0, 2.0)):
            rater["score"] = score
        path = tmp_path / "low.jsonl"
        path.write_text(json.dumps(record) + "\n")
        scenarios, issues = parse_scenarios(path)
        assert scenarios == []
        assert issue_tuples(issues) == [(record["id"], "raters", "error", "no rater score > 6")]

    def test_nineteen_point_rater(self, fixture_scenarios, tmp_path):
        record = scenario_to_record(fixture_scenarios[0])
        del record["raters"][2]["waypoints"][0]
        path = tmp_path / "short.jsonl"
        path.write_text(json.dumps(record) + "\n")
        _, issues = parse_scenarios(path)
        assert issue_tuples(issues) == [
            (record["id"], "raters[2].waypoints", "error", "expected 20 waypoints, got 19")
        ]

    def test_duplicate_ids(self, fixture_scenarios, tmp_path):
        record = json.dumps(scenario_to_record(fixture_scenarios[0]))
        path = tmp_path / "dup.jsonl"
        path.write_text(record + "\n" + record + "\n")
        scenarios, issues = parse_scenarios(path)
        assert len(scenarios) == 1
        assert issue_tuples(issues) == [
            (fixture_scenarios[0].id, "id", "error", "duplicate scenario id")
        ]

    def test_malformed_json_never_crashes(self, tmp_path):
        path = tmp_path / "garbage.jsonl"
        path.write_text('{"id": "x"\nnot json at all\n[1,2,3]\n')
        scenarios, issues = parse_scenarios(path)
        assert scenarios == []
        assert len(issues) == 3
        assert all(i.severity is Severity.ERROR for i in issues)

    def test_unknown_field_is_warning(self, fixture_scenarios, tmp_path):
        record = scenario_to_record(fixture_scenarios[0])
        record["bogus"] = 1
        path = tmp_path / "extra.jsonl"
        path.write_text(json.dumps(record) + "\n")
        scenarios, issues = parse_scenarios(path)
        assert len(scenarios) == 1
        assert issue_tuples(issues) == [(record["id"], "bogus", "warning", "unknown field ignored")]

    def test_bad_camera_rotation(self, fixture_scenarios, tmp_path):
        record = scenario_to_record(fixture_scenarios[0])
        record["cameras"][0]["extrinsics"]["rotation"] = [[2, 0, 0], [0, 1, 0], [0, 0, 1]]
        path = tmp_path / "cam.jsonl"
        path.write_text(json.dumps(record) + "\n")
        scenarios, issues = parse_scenarios(path)
        assert scenarios == []
        assert len(issues) == 1
        assert issues[0].field_path == "cameras[0].extrinsics"

    def test_corrupted_corpus_exact_issue_list(self, tmp_path):
        path = tmp_path / "corrupt.jsonl"
        expected, originals = build_corrupted_corpus(path, n_corrupt=20)
        scenarios, issues = parse_scenarios(path)
        assert issue_tuples(issues) == expected
        assert len(scenarios) == len(originals)

    def test_missing_file_raises_io_error(self, tmp_path):
        with pytest.raises(OSError):
            parse_scenarios(tmp_path / "nope.jsonl")


class TestParseSubmission:
    def make_submission(self, scenarios, drop=(), metadata=None):
        entries = {
            s.id: s.rater_by_rank(1).trajectory for s in scenarios if s.id not in drop
        }
        return Submission(entries, metadata or SubmissionMetadata("alice", "replay-rank1"))

    def test_complete_submission_clean(self, fixture_scenarios, tmp_path):
        path = tmp_path / "sub.jsonl"
        write_submission(self.make_submission(fixture_scenarios), path)
        submission, issues = parse_submission(path, fixture_scenarios)
        assert issues == []
        assert len(submission.entries) == 10
        assert submission.metadata.submitter == "alice"

    def test_missing_scenario_named(self, fixture_scenarios, tmp_path):
        missing_id = fixture_scenarios[3].id
        path = tmp_path / "sub.jsonl"
        write_submission(self.make_submission(fixture_scenarios, drop={missing_id}), path)
        _, issues = parse_submission(path, fixture_scenarios)
        assert issue_tuples(issues) == [(missing_id, "", "error", "missing submission entry")]

    def test_unknown_id_is_warning(self, fixture_scenarios, tmp_path):
        submission = self.make_submission(fixture_scenarios)
        path = tmp_path / "sub.jsonl"
        write_submission(submission, path)
        extra = {"scenario_id": "not-a-scenario", "waypoints": [[1.0, 0.0]] * 20}
        path.write_text(path.read_text() + json.dumps(extra) + "\n")
        parsed, issues = parse_submission(path, fixture_scenarios)
        assert "not-a-scenario" not in parsed.entries
        assert issue_tuples(issues) == [
            ("not-a-scenario", "scenario_id", "warning", "unknown scenario id; entry ignored")
        ]

    def test_duplicate_entry_is_error(self, fixture_scenarios, tmp_path):
        path = tmp_path / "sub.jsonl"
        write_submission(self.make_submission(fixture_scenarios), path)
        dup = {"scenario_id": fixture_scenarios[0].id, "waypoints": [[1.0, 0.0]] * 20}
        path.write_text(path.read_text() + json.dumps(dup) + "\n")
        _, issues = parse_submission(path, fixture_scenarios)
        assert (fixture_scenarios[0].id, "scenario_id", "error", "duplicate scenario id") in issue_tuples(issues)

    def test_nan_waypoint_is_error(self, fixture_scenarios, tmp_path):
        sid = fixture_scenarios[0].id
        header = {"submitter": "bob", "method": "nan-bomb"}
        bad = {"scenario_id": sid, "waypoints": [[float("nan"), 0.0]] + [[1.0, 0.0]] * 19}
        path = tmp_path / "sub.jsonl"
        path.write_text(json.dumps(header) + "\n" + json.dumps(bad) + "\n")
        _, issues = parse_submission(path, fixture_scenarios[:1])
        assert (sid, "waypoints[0]", "error", "non-finite waypoint") in issue_tuples(issues)

    def test_missing_header_is_error(self, fixture_scenarios, tmp_path):
        path = tmp_path / "sub.jsonl"
        entry = {"scenario_id": fixture_scenarios[0].id, "waypoints": [[1.0, 0.0]] * 20}
        path.write_text(json.dumps(entry) + "\n")
        _, issues = parse_submission(path, fixture_scenarios[:1])
        assert ("", "header", "error", "missing header record") in issue_tuples(issues)


class TestReportSerialization:
    def make_report(self, scenarios):
        submission = Submission(
            {s.id: s.rater_by_rank(2).trajectory for s in scenarios},
            SubmissionMetadata("carol", "rank2-replay"),
        )
        return evaluate_submission(scenarios, submission)

    def test_deterministic_bytes(self, fixture_scenarios, tmp_path):
        report = self.make_report(fixture_scenarios)
        a, b = tmp_path / "a.report.jsonl", tmp_path / "b.report.jsonl"
        write_report(report, a)
        write_report(report, b)
        assert a.read_bytes() == b.read_bytes()

    def test_round_trip_zero_drift(self, fixture_scenarios, tmp_path):
        report = self.make_report(fixture_scenarios)
        path = tmp_path / "r.report.jsonl"
        write_report(report, path)
        parsed = parse_report(path)
        assert report_to_text(parsed) == path.read_text()
        assert parsed.aggregates.mean_rfs == pytest.approx(report.aggregates.mean_rfs, abs=5e-5)
        assert parsed.aggregates.count == report.aggregates.count
        for sid, score in report.per_scenario.items():
            assert parsed.per_scenario[sid].rfs == pytest.approx(score.rfs, abs=5e-5)

    def test_empty_report_rejected(self, fixture_scenarios):
        report = self.make_report(fixture_scenarios)
        object.__setattr__(report, "per_scenario", {})
        with pytest.raises(ValueError, match="no per-scenario"):
            report_to_text(report)
