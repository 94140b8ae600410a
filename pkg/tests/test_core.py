from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from trajeval.core import (
    EgoStatus,
    RaterTrajectory,
    Trajectory,
    Waypoint,
    initial_speed,
    trajectory_from_xy,
    waypoint_at_time,
)

from conftest import make_scenario, straight_future


class TestWaypoint:
    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="finite"):
            Waypoint(float("nan"), 0.0)

    def test_rejects_inf(self):
        with pytest.raises(ValueError, match="finite"):
            Waypoint(0.0, float("inf"))


class TestWaypointAtTime:
    def test_last_sample_of_future(self):
        traj = straight_future(10.0)
        assert waypoint_at_time(traj, 5.0) == traj.waypoints[19]

    def test_three_seconds_is_index_eleven(self):
        # oracle: enumerate timestamps 0.25*(i+1) and find the one equal to 3.0
        traj = straight_future(10.0)
        timestamps = [0.25 * (i + 1) for i in range(20)]
        assert timestamps.index(3.0) == 11
        assert waypoint_at_time(traj, 3.0) == traj.waypoints[11]

    def test_beyond_horizon_is_range_error(self):
        with pytest.raises(ValueError, match="outside"):
            waypoint_at_time(straight_future(10.0), 5.25)

    def test_non_sample_time_is_range_error(self):
        with pytest.raises(ValueError, match="sample time"):
            waypoint_at_time(straight_future(10.0), 0.3)

    def test_inverse_of_timestamp_enumeration(self):
        traj = straight_future(7.0, y=1.25)
        for i in range(len(traj.waypoints)):
            assert waypoint_at_time(traj, 0.25 * (i + 1)) == traj.waypoints[i]

    def test_past_trajectory_lookup(self):
        past = trajectory_from_xy([(-4.0 + 0.25 * j, 0.0) for j in range(16)], t0_offset_s=-4.0)
        assert waypoint_at_time(past, -0.25) == past.waypoints[15]
        assert waypoint_at_time(past, -4.0) == past.waypoints[0]


class TestInitialSpeed:
    def test_finite_difference_oracle(self):
        # speed = distance(origin -> first waypoint) / 0.25 s
        traj = trajectory_from_xy([(2.75, 0.0)] + [(2.75 + i, 0.0) for i in range(1, 20)])
        assert initial_speed(traj) == pytest.approx(math.hypot(2.75, 0.0) / 0.25, abs=1e-12)
        assert initial_speed(traj) == pytest.approx(11.0, abs=1e-12)

    def test_stationary(self):
        assert initial_speed(trajectory_from_xy([(0.0, 0.0)] * 20)) == 0.0

    def test_scale_breakpoint_speed(self):
        traj = trajectory_from_xy([(0.35 * (i + 1), 0.0) for i in range(20)])
        assert initial_speed(traj) == pytest.approx(1.4, abs=1e-12)

    def test_empty_trajectory(self):
        with pytest.raises(ValueError, match="empty"):
            initial_speed(Trajectory(()))

    @given(st.floats(-50, 50), st.floats(-50, 50))
    def test_mirror_invariance(self, x: float, y: float):
        up = trajectory_from_xy([(x, y)])
        down = trajectory_from_xy([(x, -y)])
        assert initial_speed(up) == initial_speed(down)


class TestTypeInvariants:
    def test_rater_needs_twenty_waypoints(self):
        with pytest.raises(ValueError, match="20 waypoints"):
            RaterTrajectory(trajectory_from_xy([(1.0, 0.0)] * 19), 10.0, 1)

    def test_rater_score_bounds(self):
        with pytest.raises(ValueError, match=r"\[0, 10\]"):
            RaterTrajectory(straight_future(5.0), 10.5, 1)

    def test_rater_rank_values(self):
        with pytest.raises(ValueError, match="rank"):
            RaterTrajectory(straight_future(5.0), 10.0, 4)

    def test_ego_series_length_mismatch(self):
        past = trajectory_from_xy([(0.25 * j, 0.0) for j in range(16)], t0_offset_s=-4.0)
        with pytest.raises(ValueError, match="match"):
            EgoStatus(past, (1.0,) * 15, (0.0,) * 16)

    def test_scenario_needs_distinct_ranks(self):
        raters = tuple(RaterTrajectory(straight_future(5.0), 10.0, 1) for _ in range(3))
        with pytest.raises(ValueError, match="permutation"):
            make_scenario("bad-ranks", raters)

    def test_scenario_scores_non_increasing_with_rank(self):
        raters = (
            RaterTrajectory(straight_future(5.0), 7.0, 1),
            RaterTrajectory(straight_future(5.0, 1.0), 9.0, 2),
            RaterTrajectory(straight_future(5.0, -1.0), 3.0, 3),
        )
        with pytest.raises(ValueError, match="non-increasing"):
            make_scenario("bad-order", raters)

    def test_scenario_needs_rater_above_six(self):
        raters = (
            RaterTrajectory(straight_future(5.0), 6.0, 1),
            RaterTrajectory(straight_future(5.0, 1.0), 5.0, 2),
            RaterTrajectory(straight_future(5.0, -1.0), 2.0, 3),
        )
        with pytest.raises(ValueError, match="score > 6"):
            make_scenario("low-scores", raters)
