"""Leaderboard scoring service.

Scenarios are loaded once at startup; each POSTed submission runs through
the exact same parse/evaluate path as the batch CLI. Accepted runs are
appended to the leaderboard store, which is rebuilt from its log on
restart.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Sequence

import json

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .core import Scenario
from .evaluate import evaluate_submission
from .ingestion import Severity, parse_submission_text, report_to_text
from .leaderboard import LeaderboardEntry, LeaderboardStore, report_id_for

DEFAULT_MAX_BODY_BYTES = 16 * 1024 * 1024
NDJSON = "application/x-ndjson"

MISSING_ENTRY_MESSAGE = "missing submission entry"


def _issue_payload(issues) -> dict:
    return {
        "issues": [
            {
                "scenario_id": i.scenario_id,
                "field_path": i.field_path,
                "severity": i.severity.value,
                "message": i.message,
            }
            for i in issues
        ]
    }


def create_app(
    scenarios: Sequence[Scenario],
    store: LeaderboardStore,
    *,
    lenient_missing: bool = False,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
) -> FastAPI:
    app = FastAPI(title="trajeval scoring service")

    @app.post("/submissions")
    async def post_submission(request: Request):
        body = await request.body()
        if len(body) > max_body_bytes:
            return Response(status_code=413, content=f"body exceeds {max_body_bytes} bytes")
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            return Response(status_code=400, content="submission must be utf-8 text")

        submission, issues = parse_submission_text(text, scenarios)
        blocking = [
            i
            for i in issues
            if i.severity is Severity.ERROR
            and not (lenient_missing and i.message == MISSING_ENTRY_MESSAGE)
        ]
        if blocking:
            return JSONResponse(status_code=400, content=_issue_payload(blocking))

        report = evaluate_submission(scenarios, submission, lenient_missing=lenient_missing)
        report_text = report_to_text(report)
        report_id = report_id_for(report_text)
        agg = report.aggregates
        entry = LeaderboardEntry(
            submitter=submission.metadata.submitter,
            method=submission.metadata.method,
            mean_rfs=round(agg.mean_rfs, 4),
            mean_ade=round(agg.mean_ade, 4) if agg.mean_ade is not None else None,
            scenario_count=agg.count,
            submitted_at=submission.metadata.timestamp or datetime.now(timezone.utc).isoformat(),
            report_id=report_id,
        )
        store.record(entry, report_text)
        return {
            "report_id": report_id,
            "mean_rfs": entry.mean_rfs,
            "mean_ade": entry.mean_ade,
            "scenario_count": entry.scenario_count,
        }

    @app.get("/reports/{report_id}")
    def get_report(report_id: str):
        text = store.report_text(report_id)
        if text is None:
            return Response(status_code=404, content=f"no report {report_id}")
        return Response(content=text, media_type=NDJSON)

    @app.get("/leaderboard")
    def get_leaderboard():
        lines = [json.dumps(e.to_record(), sort_keys=True, separators=(",", ":")) for e in store.entries()]
        return Response(content="\n".join(lines) + ("\n" if lines else ""), media_type=NDJSON)

    return app
