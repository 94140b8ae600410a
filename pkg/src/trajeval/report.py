"""Report rendering: text summary, per-category CSV, scatter data, figures.

The ``plotdata`` format emits (mean_ade, mean_rfs) pairs, one per stored
leaderboard entry, mirroring the usual RFS-vs-ADE scatter. When a figures
directory is given, the same data is also rendered to PNG files next to
the delimited output.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .core import RFS_FLOOR, ScoreReport


@dataclass(frozen=True)
class ScatterPoint:
    mean_ade: float | None
    mean_rfs: float
    submitter: str
    method: str


def scatter_points_from_report(report: ScoreReport) -> list[ScatterPoint]:
    agg = report.aggregates
    return [ScatterPoint(agg.mean_ade, agg.mean_rfs, report.submitter, report.method)]


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def render_text(report: ScoreReport) -> str:
    agg = report.aggregates
    floored = sum(1 for s in report.per_scenario.values() if s.rfs == RFS_FLOOR)
    missing = sum(1 for s in report.per_scenario.values() if s.missing)
    lines = [
        f"submission: {report.submitter} / {report.method}",
        f"scenarios:  {agg.count}",
        f"mean RFS:   {agg.mean_rfs:.4f}",
        f"mean ADE:   {_fmt(agg.mean_ade) or 'n/a'}",
        f"floored:    {floored} scenario(s) at RFS={RFS_FLOOR:.1f}",
    ]
    if missing:
        lines.append(f"missing:    {missing} entry(s) floored in lenient mode")
    lines.append("")
    lines.append(f"{'category':<24} {'count':>5} {'mean_rfs':>9} {'mean_ade':>9}")
    for name, cat in sorted(agg.per_category.items()):
        lines.append(f"{name:<24} {cat.count:>5} {cat.mean_rfs:>9.4f} {_fmt(cat.mean_ade) or 'n/a':>9}")
    return "\n".join(lines) + "\n"


def render_csv(report: ScoreReport) -> str:
    lines = ["category,count,mean_rfs,mean_ade"]
    for name, cat in sorted(report.aggregates.per_category.items()):
        lines.append(f"{name},{cat.count},{cat.mean_rfs:.4f},{_fmt(cat.mean_ade)}")
    return "\n".join(lines) + "\n"


def render_plotdata(points: list[ScatterPoint]) -> str:
    lines = ["mean_ade,mean_rfs,submitter,method"]
    for p in points:
        lines.append(f"{_fmt(p.mean_ade)},{p.mean_rfs:.4f},{p.submitter},{p.method}")
    return "\n".join(lines) + "\n"


def render_figures(report: ScoreReport, points: list[ScatterPoint], out_dir: str | Path) -> list[Path]:
    """Render the RFS-vs-ADE scatter, category bars, and RFS histogram to PNGs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    fig, ax = plt.subplots(figsize=(6, 4.5))
    plotted = [p for p in points if p.mean_ade is not None]
    ax.scatter([p.mean_ade for p in plotted], [p.mean_rfs for p in plotted], s=36)
    for p in plotted:
        ax.annotate(p.method, (p.mean_ade, p.mean_rfs), fontsize=8, xytext=(4, 4), textcoords="offset points")
    ax.set_xlabel("mean ADE (m)")
    ax.set_ylabel("mean RFS")
    ax.set_title("RFS vs ADE")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = out / "rfs_vs_ade.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    cats = sorted(report.aggregates.per_category.items())
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(range(len(cats)), [c.mean_rfs for _, c in cats])
    ax.set_xticks(range(len(cats)))
    ax.set_xticklabels([name for name, _ in cats], rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("mean RFS")
    ax.set_ylim(0, 10.5)
    ax.set_title("mean RFS per scenario category")
    fig.tight_layout()
    path = out / "category_mean_rfs.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.hist([s.rfs for s in report.per_scenario.values()], bins=24, range=(4.0, 10.0))
    ax.set_xlabel("per-scenario RFS")
    ax.set_ylabel("scenarios")
    ax.set_title("RFS distribution")
    fig.tight_layout()
    path = out / "rfs_histogram.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    return written
