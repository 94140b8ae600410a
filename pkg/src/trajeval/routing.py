"""High-level routing command derived from the 10-second future driven route.

The command encodes the driving direction at a decision point: the net
heading change between the route's initial and final tangents decides
GO_LEFT / GO_RIGHT once it exceeds a branch angle (default 45 degrees).
Lane changes and nudges end parallel to where they started, so they stay
GO_STRAIGHT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import ROUTE_LEN, RoutingCommand, Waypoint
from .geometry import DEGENERATE_STEP_M, FALLBACK_HEADING

DEFAULT_BRANCH_ANGLE_DEG = 45.0


class DegenerateRouteError(ValueError):
    """Raised when a route has too few points to carry a direction."""


@dataclass(frozen=True)
class RouteWindow:
    """Exactly 10 s of future driven route at 4 Hz, in the anchor vehicle frame."""

    points: tuple[Waypoint, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) != ROUTE_LEN:
            raise ValueError(f"route window must have {ROUTE_LEN} points, got {len(self.points)}")


def _tangent(points: tuple[Waypoint, ...], indices: range) -> tuple[float, float] | None:
    """First non-degenerate segment direction scanning ``indices``; None if all flat."""
    for i in indices:
        dx = points[i + 1].x - points[i].x
        dy = points[i + 1].y - points[i].y
        norm = math.hypot(dx, dy)
        if norm >= DEGENERATE_STEP_M:
            return (dx / norm, dy / norm)
    return None


def derive_command(
    route: RouteWindow | Sequence[Waypoint], branch_angle_deg: float = DEFAULT_BRANCH_ANGLE_DEG
) -> RoutingCommand:
    """Classify the route's net heading change into a routing command."""
    points = route.points if isinstance(route, RouteWindow) else tuple(route)
    if len(points) < 2:
        raise DegenerateRouteError("route needs at least 2 points to derive a command")

    start = _tangent(points, range(len(points) - 1))
    if start is None:
        # Fully stationary route: no decision point ahead.
        start = FALLBACK_HEADING
    end = _tangent(points, range(len(points) - 2, -1, -1)) or start

    delta_theta = math.atan2(
        start[0] * end[1] - start[1] * end[0],
        start[0] * end[0] + start[1] * end[1],
    )
    branch = math.radians(branch_angle_deg)
    if delta_theta > branch:
        return RoutingCommand.GO_LEFT
    if delta_theta < -branch:
        return RoutingCommand.GO_RIGHT
    return RoutingCommand.GO_STRAIGHT
