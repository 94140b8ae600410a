"""Batch evaluation of a submission against a scenario set.

Scenario scoring is pure and embarrassingly parallel; scenarios are scored
in sorted-id order and reduced deterministically, so the report bytes do
not depend on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .core import PerScenarioScore, Scenario, ScoreReport, Submission, Trajectory
from .metrics import ade, aggregate, rfs
from .routing import DEFAULT_BRANCH_ANGLE_DEG

ADE_REF_LOG = "log_future"
ADE_REF_RANK1 = "rater_rank1"


@dataclass(frozen=True)
class RunConfig:
    scenarios_path: str
    submission_path: str
    report_path: str
    lenient_missing: bool = False
    branch_angle_deg: float = DEFAULT_BRANCH_ANGLE_DEG
    parallelism: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self) -> None:
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {self.parallelism}")


def score_scenario(scenario: Scenario, pred: Trajectory) -> PerScenarioScore:
    """RFS against the raters plus ADE against the log future (or rank-1)."""
    breakdown = rfs(pred, scenario.raters)
    detail = tuple(
        (t, slice_.per_rater_scores, slice_.best) for t, slice_ in sorted(breakdown.per_time.items())
    )
    if scenario.log_future is not None:
        reference, ref_name = scenario.log_future, ADE_REF_LOG
    else:
        reference, ref_name = scenario.rater_by_rank(1).trajectory, ADE_REF_RANK1
    return PerScenarioScore(
        scenario_id=scenario.id,
        category=scenario.category,
        rfs=breakdown.final,
        ade=ade(pred, reference),
        ade_reference=ref_name,
        per_rater_detail=detail,
    )


def _floored_score(scenario: Scenario) -> PerScenarioScore:
    return PerScenarioScore(
        scenario_id=scenario.id,
        category=scenario.category,
        rfs=4.0,
        ade=None,
        ade_reference=None,
        per_rater_detail=(),
        missing=True,
    )


def evaluate_submission(
    scenarios: Sequence[Scenario],
    submission: Submission,
    *,
    lenient_missing: bool = False,
    parallelism: int = 1,
) -> ScoreReport:
    """Score every scenario; missing entries are floored at 4.0 in lenient mode."""
    ordered = sorted(scenarios, key=lambda s: s.id)
    missing = [s.id for s in ordered if s.id not in submission.entries]
    if missing and not lenient_missing:
        raise ValueError(f"submission is missing {len(missing)} scenario(s): {missing[:5]}")

    def score(scenario: Scenario) -> PerScenarioScore:
        pred = submission.entries.get(scenario.id)
        if pred is None:
            return _floored_score(scenario)
        return score_scenario(scenario, pred)

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            scores = list(pool.map(score, ordered))
    else:
        scores = [score(s) for s in ordered]

    return ScoreReport(
        per_scenario={s.scenario_id: s for s in scores},
        aggregates=aggregate(scores),
        submitter=submission.metadata.submitter,
        method=submission.metadata.method,
    )
