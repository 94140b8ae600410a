from __future__ import annotations

import math

import numpy as np
import pytest

from trajeval.core import RoutingCommand, Waypoint
from trajeval.routing import DegenerateRouteError, RouteWindow, derive_command


def route_from_xy(points) -> RouteWindow:
    return RouteWindow(tuple(Waypoint(float(x), float(y)) for x, y in points))


def straight_route(speed: float = 10.0) -> RouteWindow:
    return route_from_xy([(speed * 0.25 * (i + 1), 0.0) for i in range(40)])


def turn_route(sign: float, speed: float = 8.0) -> RouteWindow:
    """90-degree constant-speed turn over the full 10 s window."""
    omega = (math.pi / 2) / 10.0
    radius = speed / omega
    pts = []
    for i in range(40):
        theta = omega * 0.25 * (i + 1)
        pts.append((radius * math.sin(theta), sign * radius * (1 - math.cos(theta))))
    return route_from_xy(pts)


def lane_change_route(speed: float = 10.0) -> RouteWindow:
    # S-curve to the next lane, ending parallel to the start heading
    def smooth(u):
        u = min(max(u, 0.0), 1.0)
        return u * u * (3 - 2 * u)

    return route_from_xy(
        [(speed * 0.25 * (i + 1), 3.5 * smooth(0.25 * (i + 1) / 4.0)) for i in range(40)]
    )


class TestFixtures:
    def test_straight(self):
        assert derive_command(straight_route()) is RoutingCommand.GO_STRAIGHT

    def test_left_turn(self):
        assert derive_command(turn_route(+1.0)) is RoutingCommand.GO_LEFT

    def test_right_turn(self):
        assert derive_command(turn_route(-1.0)) is RoutingCommand.GO_RIGHT

    def test_lane_change_is_straight(self):
        assert derive_command(lane_change_route()) is RoutingCommand.GO_STRAIGHT

    def test_stationary_is_straight(self):
        assert derive_command(route_from_xy([(0.0, 0.0)] * 40)) is RoutingCommand.GO_STRAIGHT


class TestProperties:
    def random_route(self, rng) -> list[tuple[float, float]]:
        # smooth random route: integrate a random-walk heading
        heading = rng.uniform(-math.pi, math.pi)
        speed = rng.uniform(0.5, 15.0)
        x, y = 0.0, 0.0
        pts = []
        for _ in range(40):
            heading += rng.normal(0.0, 0.12)
            x += speed * 0.25 * math.cos(heading)
            y += speed * 0.25 * math.sin(heading)
            pts.append((x, y))
        return pts

    def test_mirror_antisymmetry(self):
        rng = np.random.default_rng(61)
        swapped = {
            RoutingCommand.GO_LEFT: RoutingCommand.GO_RIGHT,
            RoutingCommand.GO_RIGHT: RoutingCommand.GO_LEFT,
            RoutingCommand.GO_STRAIGHT: RoutingCommand.GO_STRAIGHT,
        }
        for _ in range(300):
            pts = self.random_route(rng)
            cmd = derive_command(route_from_xy(pts))
            mirrored = derive_command(route_from_xy([(x, -y) for x, y in pts]))
            assert mirrored is swapped[cmd]

    def test_scale_invariance(self):
        rng = np.random.default_rng(67)
        for _ in range(300):
            pts = self.random_route(rng)
            cmd = derive_command(route_from_xy(pts))
            k = float(rng.uniform(0.05, 20.0))
            scaled = derive_command(route_from_xy([(k * x, k * y) for x, y in pts]))
            assert scaled is cmd


class TestEdges:
    def test_route_window_needs_forty_points(self):
        with pytest.raises(ValueError, match="40 points"):
            RouteWindow((Waypoint(0.0, 0.0),) * 39)

    def test_fewer_than_two_points_degenerate(self):
        with pytest.raises(DegenerateRouteError):
            derive_command([Waypoint(0.0, 0.0)])

    def test_branch_angle_configurable(self):
        # a 30-degree drift: straight at the default, a turn at a tight branch angle
        pts = []
        x = y = 0.0
        for i in range(40):
            theta = math.radians(30.0) * (0.25 * (i + 1) / 10.0)
            x += 10.0 * 0.25 * math.cos(theta)
            y += 10.0 * 0.25 * math.sin(theta)
            pts.append((x, y))
        window = route_from_xy(pts)
        assert derive_command(window) is RoutingCommand.GO_STRAIGHT
        assert derive_command(window, branch_angle_deg=20.0) is RoutingCommand.GO_LEFT
