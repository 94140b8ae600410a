"""Command-line entry point.

Exit codes: 0 on success, 1 when validation errors were found, 2 on I/O or
usage failures.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .evaluate import evaluate_submission
from .ingestion import (
    Severity,
    ValidationIssue,
    parse_report,
    parse_scenarios,
    parse_submission,
    write_report,
    write_scenarios,
)
from .leaderboard import LeaderboardStore
from .report import (
    ScatterPoint,
    render_csv,
    render_figures,
    render_plotdata,
    render_text,
    scatter_points_from_report,
)
from .routing import DEFAULT_BRANCH_ANGLE_DEG, RouteWindow, derive_command
from .synth import TEMPLATE_KINDS, generate_batch

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _print_issues(issues: list[ValidationIssue]) -> None:
    for issue in issues:
        print(str(issue), file=sys.stderr)


def _routing_consistency_issues(scenarios, branch_angle_deg: float) -> list[ValidationIssue]:
    """Warn when the stored routing command disagrees with the 10 s route."""
    issues = []
    for scenario in scenarios:
        if scenario.future_route_10s is None:
            continue
        derived = derive_command(RouteWindow(scenario.future_route_10s), branch_angle_deg)
        if derived is not scenario.routing:
            issues.append(
                ValidationIssue(
                    scenario.id,
                    "routing",
                    Severity.WARNING,
                    f"stored {scenario.routing.value} but 10s route derives {derived.value}",
                )
            )
    return issues


def cmd_validate(args: argparse.Namespace) -> int:
    scenarios, issues = parse_scenarios(args.scenarios)
    issues = issues + _routing_consistency_issues(scenarios, args.branch_angle_deg)
    _print_issues(issues)
    errors = sum(1 for i in issues if i.severity is Severity.ERROR)
    print(f"{len(scenarios)} valid scenario(s), {errors} error(s), {len(issues) - errors} warning(s)")
    return EXIT_OK if errors == 0 else EXIT_VALIDATION


def cmd_evaluate(args: argparse.Namespace) -> int:
    scenarios, s_issues = parse_scenarios(args.scenarios)
    submission, m_issues = parse_submission(args.submission, scenarios)
    issues = s_issues + m_issues
    _print_issues(issues)

    has_errors = any(i.severity is Severity.ERROR for i in issues)
    if not scenarios or (has_errors and not args.lenient):
        print("evaluation aborted: input validation failed", file=sys.stderr)
        return EXIT_VALIDATION

    report = evaluate_submission(
        scenarios, submission, lenient_missing=args.lenient, parallelism=args.parallelism
    )
    write_report(report, args.report)
    agg = report.aggregates
    ade_str = f"{agg.mean_ade:.4f}" if agg.mean_ade is not None else "n/a"
    print(f"scored {agg.count} scenario(s): mean RFS {agg.mean_rfs:.4f}, mean ADE {ade_str}")
    print(f"wrote report: {args.report}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    report = parse_report(args.report)
    if args.store is not None:
        store = LeaderboardStore(args.store)
        points = [
            ScatterPoint(e.mean_ade, e.mean_rfs, e.submitter, e.method) for e in store.entries()
        ]
    else:
        points = scatter_points_from_report(report)

    if args.format == "text":
        rendered = render_text(report)
    elif args.format == "csv":
        rendered = render_csv(report)
    else:
        rendered = render_plotdata(points)

    if args.out is not None:
        Path(args.out).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.format} output: {args.out}")
    else:
        print(rendered, end="")

    if args.figures is not None:
        for path in render_figures(report, points, args.figures):
            print(f"wrote figure: {path}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    kind = None if args.template == "mixed" else args.template
    scenarios = generate_batch(args.count, args.seed, kind=kind, speed=args.speed)
    write_scenarios(scenarios, args.out)
    print(f"wrote {len(scenarios)} scenario(s): {args.out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    scenarios, issues = parse_scenarios(args.scenarios)
    _print_issues(issues)
    if any(i.severity is Severity.ERROR for i in issues) or not scenarios:
        print("refusing to serve an invalid scenario set", file=sys.stderr)
        return EXIT_VALIDATION

    host, _, port = args.listen.rpartition(":")
    store = LeaderboardStore(args.store)
    app = create_app(
        scenarios, store, lenient_missing=args.lenient, max_body_bytes=args.max_body_bytes
    )
    print(f"serving {len(scenarios)} scenario(s) on {args.listen}")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trajeval", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="Validate a scenario file.")
    p.add_argument("--scenarios", required=True)
    p.add_argument("--branch-angle-deg", type=float, default=DEFAULT_BRANCH_ANGLE_DEG,
                   help="routing.branch_angle_deg used for route/command consistency checks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="Score a submission against a scenario file.")
    p.add_argument("--scenarios", required=True)
    p.add_argument("--submission", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--lenient", action="store_true",
                   help="floor missing entries at RFS 4.0 instead of failing")
    p.add_argument("--parallelism", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="Render a report as text, CSV, or scatter data.")
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=("text", "csv", "plotdata"), default="text")
    p.add_argument("--store", default=None,
                   help="leaderboard store directory; plotdata then covers all stored entries")
    p.add_argument("--out", default=None, help="write rendered output here instead of stdout")
    p.add_argument("--figures", default=None, help="also render PNG figures into this directory")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("gen", help="Generate synthetic scenario fixtures.")
    p.add_argument("--template", choices=TEMPLATE_KINDS + ("mixed",), default="mixed")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--speed", type=float, default=None,
                   help="pin the template speed; defaults to cycling the speed classes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("serve", help="Run the leaderboard scoring service.")
    p.add_argument("--scenarios", required=True)
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--store", required=True, help="leaderboard store directory")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--max-body-bytes", type=int, default=16 * 1024 * 1024)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
