import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import angle_distance, euler_pose, reduce_angle_by_subtraction
from wolly.errors import InvalidAngle, InvalidParameter
from wolly.kinematics import (
    DEFAULT_TRACK_WIDTH,
    TAU,
    Pose,
    WheelSpeeds,
    check_speed_limit,
    normalize_heading,
    step,
)

angles = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
speeds = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False, allow_infinity=False)
durations = st.floats(min_value=1e-3, max_value=1.0, allow_nan=False, allow_infinity=False)
coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


# --- normalize_heading -------------------------------------------------------

def test_normalize_zero_is_identity():
    assert normalize_heading(0.0) == 0.0


def test_normalize_single_wrap():
    assert normalize_heading(-math.pi / 2) == pytest.approx(3 * math.pi / 2, abs=1e-12)


def test_normalize_seven_pi_matches_subtraction_oracle():
    got = normalize_heading(7 * math.pi)
    want = reduce_angle_by_subtraction(7 * math.pi)
    assert got == pytest.approx(want, abs=1e-9)
    assert got == pytest.approx(math.pi, abs=1e-9)


@given(angles)
def test_normalize_lands_in_half_open_range(theta):
    result = normalize_heading(theta)
    assert 0.0 <= result < TAU


@given(st.floats(min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False))
def test_normalize_preserves_angle_mod_tau(theta):
    assert angle_distance(normalize_heading(theta), theta) < 1e-9


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_normalize_rejects_non_finite(bad):
    with pytest.raises(InvalidAngle):
        normalize_heading(bad)


# --- step: pinned examples ---------------------------------------------------

def test_equal_speeds_drive_straight():
    pose = step(Pose(0, 0, 0), WheelSpeeds(0.2, 0.2), dt=1.0)
    assert pose.x == pytest.approx(0.2, abs=1e-12)
    assert pose.y == pytest.approx(0.0, abs=1e-12)
    assert pose.theta == 0.0


def test_opposite_speeds_rotate_in_place():
    for dt in (0.1, 0.5, 1.0, 3.0):
        pose = step(Pose(0, 0, 0), WheelSpeeds(-0.1, 0.1), dt=dt)
        assert pose.x == 0.0
        assert pose.y == 0.0
        # omega = (0.1 - (-0.1)) / 0.2 = 1 rad/s
        assert pose.theta == pytest.approx(normalize_heading(dt), abs=1e-12)


def test_arc_matches_euler_oracle():
    got = step(Pose(0, 0, 0), WheelSpeeds(0.1, 0.2), track_width=0.2, dt=1.0)
    ex, ey, etheta = euler_pose(0, 0, 0, 0.1, 0.2, 0.2, 1.0)
    assert got.x == pytest.approx(ex, abs=1e-3)
    assert got.y == pytest.approx(ey, abs=1e-3)
    assert angle_distance(got.theta, etheta) < 1e-3


def test_random_segments_match_euler_oracle():
    # 50 samples here; the full 1,000-sample sweep lives in the acceptance suite
    rng = random.Random(42)
    for _ in range(50):
        pose = Pose(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, TAU))
        vl, vr = rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)
        dt = rng.uniform(0.05, 1.0)
        got = step(pose, WheelSpeeds(vl, vr), dt=dt)
        ex, ey, etheta = euler_pose(pose.x, pose.y, pose.theta, vl, vr, DEFAULT_TRACK_WIDTH, dt)
        assert math.hypot(got.x - ex, got.y - ey) < 1e-3
        assert angle_distance(got.theta, etheta) < 1e-3


# --- step: invariants --------------------------------------------------------

@given(coords, coords, angles, speeds, speeds, durations)
def test_heading_always_normalized(x, y, theta, vl, vr, dt):
    pose = step(Pose(x, y, theta), WheelSpeeds(vl, vr), dt=dt)
    assert 0.0 <= pose.theta < TAU


@given(coords, coords, angles, speeds, durations)
def test_straight_line_invariance(x, y, theta, v, dt):
    start = Pose(x, y, theta)
    pose = step(start, WheelSpeeds(v, v), dt=dt)
    assert pose.theta == start.theta
    displacement = math.hypot(pose.x - start.x, pose.y - start.y)
    assert displacement == pytest.approx(abs(v) * dt, abs=1e-9)


@given(coords, coords, angles, speeds, durations)
def test_rotation_in_place_invariance(x, y, theta, v, dt):
    start = Pose(x, y, theta)
    pose = step(start, WheelSpeeds(v, -v), dt=dt)
    assert math.hypot(pose.x - start.x, pose.y - start.y) < 1e-9


@given(coords, coords, angles, speeds, speeds, durations)
def test_half_step_composition(x, y, theta, vl, vr, dt):
    wheels = WheelSpeeds(vl, vr)
    start = Pose(x, y, theta)
    whole = step(start, wheels, dt=dt)
    halves = step(step(start, wheels, dt=dt / 2), wheels, dt=dt / 2)
    assert math.hypot(whole.x - halves.x, whole.y - halves.y) < 1e-9
    assert angle_distance(whole.theta, halves.theta) < 1e-9


# --- validation --------------------------------------------------------------

def test_non_positive_dt_rejected():
    with pytest.raises(InvalidParameter):
        step(Pose(0, 0, 0), WheelSpeeds(0.1, 0.1), dt=0.0)
    with pytest.raises(InvalidParameter):
        step(Pose(0, 0, 0), WheelSpeeds(0.1, 0.1), dt=-1.0)


def test_non_positive_track_width_rejected():
    with pytest.raises(InvalidParameter):
        step(Pose(0, 0, 0), WheelSpeeds(0.1, 0.1), track_width=0.0)


def test_speed_limit_enforced():
    with pytest.raises(InvalidParameter):
        step(Pose(0, 0, 0), WheelSpeeds(0.6, 0.1), dt=1.0)
    with pytest.raises(InvalidParameter):
        check_speed_limit(WheelSpeeds(0.0, -0.51), 0.5)
    check_speed_limit(WheelSpeeds(0.5, -0.5), 0.5)  # boundary is legal


def test_speed_limit_can_be_disabled():
    pose = step(Pose(0, 0, 0), WheelSpeeds(1.0, 1.0), dt=1.0, v_max=None)
    assert pose.x == pytest.approx(1.0, abs=1e-12)


def test_pose_rejects_non_finite():
    with pytest.raises(InvalidAngle):
        Pose(0, 0, math.nan)
    with pytest.raises(InvalidParameter):
        WheelSpeeds(math.inf, 0.0)
