import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deadreckon.errors import DegenerateField, EmptyLog, NonMonotonicTime, ZeroTimeStep
from deadreckon.odometry import (ROOMBA_600, EncoderSample, Pose, RobotGeometry, UpdateMode,
                                 accelerations, advance_pose, counts_per_degree, counts_per_mm,
                                 delta_counts, geometry_from_string, heading_from_magnetometer,
                                 path_length, step_acceleration, step_distance,
                                 step_heading_change, step_speed, track)

# Reference values computed with mpmath at 30 digits.
CPM_ROOMBA = 2.24938986236545407886689052233
CPD_ROOMBA = 9.22592592592592592592592592593


def _unwrap_oracle(a, b, m):
    d = b - a
    return min((d, d + m, d - m), key=abs)


class TestGeometry:
    def test_defaults(self):
        g = RobotGeometry()
        assert (g.wheel_diameter, g.wheelbase, g.counts_per_rev, g.wrap_modulus) == (72, 235, 508.8, 65536)

    @pytest.mark.parametrize("kw", [
        {"wheel_diameter": 0}, {"wheelbase": -1}, {"counts_per_rev": 0}, {"wrap_modulus": 1},
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            RobotGeometry(**kw)

    def test_from_string(self):
        assert geometry_from_string("roomba-600") is ROOMBA_600
        g = geometry_from_string("100,200,1000")
        assert (g.wheel_diameter, g.wheelbase, g.counts_per_rev) == (100, 200, 1000)
        with pytest.raises(ValueError):
            geometry_from_string("nope")


class TestConstants:
    def test_counts_per_mm_roomba(self):
        assert counts_per_mm(ROOMBA_600) == pytest.approx(2.2494, abs=1e-4)
        assert counts_per_mm(ROOMBA_600) == pytest.approx(CPM_ROOMBA, rel=1e-14)
        assert 2.249 <= counts_per_mm(ROOMBA_600) <= 2.250

    def test_counts_per_mm_identity(self):
        g = RobotGeometry(wheel_diameter=1 / math.pi, counts_per_rev=1)
        assert counts_per_mm(g) == pytest.approx(1.0, rel=1e-15)

    def test_counts_per_mm_other(self):
        g = RobotGeometry(wheel_diameter=100, counts_per_rev=1000)
        assert counts_per_mm(g) == pytest.approx(3.18309886183790671, rel=1e-12)

    def test_counts_per_degree_roomba(self):
        assert counts_per_degree(ROOMBA_600) == pytest.approx(9.2259, abs=1e-3)
        assert counts_per_degree(ROOMBA_600) == pytest.approx(CPD_ROOMBA, rel=1e-14)
        assert 9.225 <= counts_per_degree(ROOMBA_600) <= 9.227

    def test_full_revolution(self):
        # both wheels ride a 235 mm circle: 2 * 235 * pi * 2.2494 differential counts
        oracle = 2 * 235 * math.pi * 508.8 / (72 * math.pi)
        assert 360 * counts_per_degree(ROOMBA_600) == pytest.approx(3321.33, abs=0.01)
        assert 360 * counts_per_degree(ROOMBA_600) == pytest.approx(oracle, rel=1e-12)

    def test_linear_in_wheelbase(self):
        g2 = RobotGeometry(wheelbase=470)
        assert counts_per_degree(g2) == pytest.approx(2 * counts_per_degree(ROOMBA_600), rel=1e-15)


class TestDeltaCounts:
    def test_plain(self):
        a, b = EncoderSample(0, 0, 100), EncoderSample(0.5, 0, 250)
        assert delta_counts(a, b) == (0, 150)

    def test_wrap_forward(self):
        a, b = EncoderSample(0, 65530, 0), EncoderSample(0.5, 10, 0)
        assert delta_counts(a, b)[0] == 16 == _unwrap_oracle(65530, 10, 65536)

    def test_wrap_backward(self):
        a, b = EncoderSample(0, 0, 10), EncoderSample(0.5, 0, 65530)
        assert delta_counts(a, b)[1] == -16 == _unwrap_oracle(10, 65530, 65536)

    def test_no_wrap_modulus(self):
        g = RobotGeometry(wrap_modulus=None)
        a, b = EncoderSample(0, 65530, 0), EncoderSample(0.5, 10, 0)
        assert delta_counts(a, b, g)[0] == -65520

    def test_half_modulus_boundary(self):
        # representative lies in (-M/2, M/2]
        g = RobotGeometry(wrap_modulus=100)
        assert delta_counts(EncoderSample(0, 0, 0), EncoderSample(1, 50, -50), g) == (50, 50)

    @pytest.mark.parametrize("t1", [0.0, -1.0])
    def test_non_monotonic(self, t1):
        with pytest.raises(NonMonotonicTime):
            delta_counts(EncoderSample(0, 0, 0), EncoderSample(t1, 1, 1))

    @given(s=st.integers(0, 65535), d=st.integers(-32767, 32767))
    def test_unwrap_property(self, s, d):
        a = EncoderSample(0, s, s)
        b = EncoderSample(1, (s + d) % 65536, (s - d) % 65536)
        assert delta_counts(a, b) == (d, -d)


class TestStep:
    def test_distance(self):
        assert step_distance(0, 0) == 0
        assert step_distance(225, 225) == pytest.approx(100.03, abs=0.01)
        assert step_distance(225, 225) == pytest.approx(100.027124583637284, rel=1e-12)
        assert step_distance(-500, 500) == 0

    def test_heading_change(self):
        assert step_heading_change(40, 40) == 0
        assert step_heading_change(0, 3321.33) == pytest.approx(2 * math.pi, abs=1e-3)
        assert step_heading_change(0, 9.226) == pytest.approx(math.pi / 180, abs=1e-4)

    def test_heading_sign(self):
        assert step_heading_change(0, 10) > 0
        assert step_heading_change(10, 0) < 0

    @given(st.floats(-1e4, 1e4), st.floats(-1e4, 1e4), st.floats(-10, 10))
    def test_linearity(self, dl, dr, k):
        assert step_distance(k * dl, k * dr) == pytest.approx(k * step_distance(dl, dr), abs=1e-6)
        assert step_heading_change(k * dl, k * dr) == pytest.approx(
            k * step_heading_change(dl, dr), abs=1e-9)

    @given(st.floats(-1e6, 1e6))
    def test_in_place_turn_moves_nothing(self, c):
        assert step_distance(-c, c) == 0

    def test_speed(self):
        assert step_speed(37.5, 0.5) == 75
        assert step_speed(0, 0.5) == 0
        assert step_speed(50, 0.25) == 200
        with pytest.raises(ZeroTimeStep):
            step_speed(1, 0)

    def test_acceleration(self):
        assert step_acceleration(70, 70, 0.5) == 0
        assert step_acceleration(80, 70, 0.5) == 20
        assert step_acceleration(0, 75, 0.5) == -150
        with pytest.raises(ZeroTimeStep):
            step_acceleration(1, 0, -0.5)


class TestAdvancePose:
    @pytest.mark.parametrize("mode", list(UpdateMode))
    def test_straight(self, mode):
        p = advance_pose(Pose(), 100, 0, mode)
        assert (p.x, p.y) == (0, 100)

    @pytest.mark.parametrize("mode", ["literal", "accumulated"])
    def test_quarter_turn(self, mode):
        p = advance_pose(Pose(), 100, math.pi / 2, mode)
        assert p.x == pytest.approx(100, abs=1e-9)
        assert p.y == pytest.approx(0, abs=1e-9)

    def test_modes_diverge(self):
        acc = lit = Pose()
        for _ in range(2):
            acc = advance_pose(acc, 100, math.pi / 2, "accumulated")
            lit = advance_pose(lit, 100, math.pi / 2, "literal")
        assert (acc.x, acc.y) == pytest.approx((100, -100), abs=1e-6)
        assert (lit.x, lit.y) == pytest.approx((200, 0), abs=1e-6)
        assert acc.theta == pytest.approx(math.pi)
        assert lit.theta == pytest.approx(math.pi / 2)


class TestMagnetometer:
    def test_axes(self):
        assert heading_from_magnetometer(1, 0) == 0
        assert heading_from_magnetometer(0, 1) == pytest.approx(math.pi / 2)

    def test_quadrant(self):
        assert heading_from_magnetometer(-1, -1) == pytest.approx(-3 * math.pi / 4, abs=1e-15)

    def test_range_closed_at_pi(self):
        assert heading_from_magnetometer(-1, -0.0) == math.pi
        assert heading_from_magnetometer(-1, 0) == math.pi

    def test_degenerate(self):
        with pytest.raises(DegenerateField):
            heading_from_magnetometer(0, 0)


def _log(deltas, dt=0.5):
    samples = [EncoderSample(0.0, 0, 0)]
    l = r = 0
    for i, (dl, dr) in enumerate(deltas, start=1):
        l += dl
        r += dr
        samples.append(EncoderSample(i * dt, l, r))
    return samples


class TestTrack:
    def test_equal_counts(self):
        pts = track([EncoderSample(0, 5, 5), EncoderSample(0.5, 5, 5)])
        assert len(pts) == 1
        p = pts[0]
        assert (p.n, p.beta, p.mu, p.v) == (1, 0, 0, 0)
        assert p.pose == Pose()

    def test_errors(self):
        with pytest.raises(EmptyLog):
            track([EncoderSample(0, 0, 0)])
        with pytest.raises(NonMonotonicTime):
            track([EncoderSample(0, 0, 0), EncoderSample(0, 1, 1)])

    def test_origin_and_flags(self):
        pts = track(_log([(84, 84)] * 3), origin=Pose(10, 20, 0), flagged={2})
        assert pts[0].pose.x == 10
        assert [p.flagged for p in pts] == [False, True, False]

    def test_speed_times_dt_is_beta(self):
        pts = track(_log([(84, 90), (10, -4), (300, 250)], dt=0.37))
        for p in pts:
            assert p.v * 0.37 == pytest.approx(p.beta, rel=1e-9)

    def test_acceleration_series(self):
        pts = track(_log([(84, 84), (100, 100)]))
        acc = accelerations(pts)
        assert len(acc) == 1
        assert acc[0] == pytest.approx((pts[1].v - pts[0].v) / 0.5)

    def test_full_revolution_accumulated(self):
        c = 360 * counts_per_degree(ROOMBA_600)
        steps = 40
        pts = track(_log([(-c / 2 / steps, c / 2 / steps)] * steps), mode="accumulated")
        assert pts[-1].pose.theta == pytest.approx(2 * math.pi, abs=1e-3)
        assert math.hypot(pts[-1].pose.x, pts[-1].pose.y) < 1e-9

    @settings(max_examples=60)
    @given(st.lists(st.tuples(st.integers(-400, 400), st.integers(-400, 400)), min_size=1, max_size=50),
           st.sampled_from(["literal", "accumulated"]))
    def test_displacement_bounded_by_path(self, deltas, mode):
        pts = track(_log(deltas), mode=mode)
        end = pts[-1].pose
        assert math.hypot(end.x, end.y) <= path_length(pts) * (1 + 1e-12) + 1e-9

    @given(st.lists(st.integers(-400, 400), min_size=1, max_size=50))
    def test_modes_agree_without_turning(self, deltas):
        log = _log([(d, d) for d in deltas])
        assert track(log, mode="literal") == track(log, mode="accumulated")
