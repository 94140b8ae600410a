"""Append-only leaderboard persistence with replay on startup.

Every accepted submission appends one JSON line to the log and stores its
full report under ``reports/<id>``. The live ranking is a pure fold over
the log (last entry per (submitter, method) wins), so restarting the
service reproduces the leaderboard exactly.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

LOG_NAME = "leaderboard.jsonl"
REPORTS_DIR = "reports"


@dataclass(frozen=True)
class LeaderboardEntry:
    submitter: str
    method: str
    mean_rfs: float
    mean_ade: float | None
    scenario_count: int
    submitted_at: str
    report_id: str

    def sort_key(self) -> tuple:
        ade = self.mean_ade if self.mean_ade is not None else float("inf")
        return (-self.mean_rfs, ade, self.submitted_at)

    def to_record(self) -> dict:
        return {
            "submitter": self.submitter,
            "method": self.method,
            "mean_rfs": self.mean_rfs,
            "mean_ade": self.mean_ade,
            "scenario_count": self.scenario_count,
            "submitted_at": self.submitted_at,
            "report_id": self.report_id,
        }

    @classmethod
    def from_record(cls, record: dict) -> "LeaderboardEntry":
        return cls(
            submitter=record["submitter"],
            method=record["method"],
            mean_rfs=record["mean_rfs"],
            mean_ade=record["mean_ade"],
            scenario_count=record["scenario_count"],
            submitted_at=record["submitted_at"],
            report_id=record["report_id"],
        )


def report_id_for(report_text: str) -> str:
    return hashlib.sha256(report_text.encode("utf-8")).hexdigest()[:16]


class LeaderboardStore:
    """Single-writer append-only store; reads work on immutable snapshots."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / REPORTS_DIR).mkdir(exist_ok=True)
        self._lock = threading.Lock()
        self._by_key: dict[tuple[str, str], LeaderboardEntry] = {}
        self._replay()

    @property
    def log_path(self) -> Path:
        return self.root / LOG_NAME

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with self.log_path.open("r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                entry = LeaderboardEntry.from_record(json.loads(line))
                self._by_key[(entry.submitter, entry.method)] = entry

    def record(self, entry: LeaderboardEntry, report_text: str) -> None:
        """Persist a report and append the entry; replaces any prior entry for the same key."""
        with self._lock:
            report_path = self.root / REPORTS_DIR / f"{entry.report_id}.report.jsonl"
            report_path.write_text(report_text, encoding="utf-8")
            with self.log_path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(entry.to_record(), sort_keys=True, separators=(",", ":")) + "\n")
            self._by_key[(entry.submitter, entry.method)] = entry

    def entries(self) -> list[LeaderboardEntry]:
        """Current ranking: mean RFS desc, mean ADE asc, then submission time."""
        with self._lock:
            snapshot = list(self._by_key.values())
        return sorted(snapshot, key=LeaderboardEntry.sort_key)

    def report_text(self, report_id: str) -> str | None:
        path = self.root / REPORTS_DIR / f"{report_id}.report.jsonl"
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")
