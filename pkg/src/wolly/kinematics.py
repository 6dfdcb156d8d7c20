"""Continuous differential-drive motion model.

The robot's four motorized wheels are collapsed to an effective left/right
pair and treated as a unicycle:

    v = (v_left + v_right) / 2          forward speed
    w = (v_right - v_left) / track      turn rate (counter-clockwise > 0)

``step`` advances a pose along the exact circular arc those speeds trace,
written in the cancellation-free form

    dx = v * dt * cos(theta + h) * sin(h)/h      with h = w * dt / 2
    dy = v * dt * sin(theta + h) * sin(h)/h

which degenerates smoothly to a straight segment as w -> 0, so the same
expression is exact on arcs, lines, and spins in place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidAngle, InvalidParameter

TAU = 2.0 * math.pi

# Physical defaults: desktop robot roughly the size of a small dog.
DEFAULT_TRACK_WIDTH = 0.2  # meters between the effective wheel pair
DEFAULT_V_MAX = 0.5  # meters/second per wheel

# Below this |w| the update uses the straight-segment limit sin(h)/h = 1.
OMEGA_EPSILON = 1e-9  # rad/s


def normalize_heading(theta: float) -> float:
    """Wrap an angle into [0, 2*pi)."""
    if not math.isfinite(theta):
        raise InvalidAngle(f"heading must be finite, got {theta!r}")
    wrapped = math.fmod(theta, TAU)
    if wrapped < 0.0:
        wrapped += TAU
    # fmod can land exactly on TAU after the negative fixup
    if wrapped >= TAU:
        wrapped -= TAU
    return wrapped


@dataclass(frozen=True)
class Pose:
    """Planar configuration: position in meters, heading in radians
    counter-clockwise from the +x axis, always kept in [0, 2*pi)."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        for name in ("x", "y"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameter(f"{name} must be finite")
        object.__setattr__(self, "theta", normalize_heading(self.theta))


@dataclass(frozen=True)
class WheelSpeeds:
    """Effective left/right wheel speeds in meters/second."""

    left: float
    right: float

    def __post_init__(self):
        for name in ("left", "right"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameter(f"{name} wheel speed must be finite")


def check_speed_limit(wheels: WheelSpeeds, v_max: float = DEFAULT_V_MAX) -> None:
    """Raise InvalidParameter unless both wheel speeds are within +-v_max."""
    if v_max <= 0:
        raise InvalidParameter("v_max must be positive")
    for name in ("left", "right"):
        if abs(getattr(wheels, name)) > v_max:
            raise InvalidParameter(f"{name} wheel speed exceeds limit {v_max} m/s")


def step(
    pose: Pose,
    wheels: WheelSpeeds,
    track_width: float = DEFAULT_TRACK_WIDTH,
    dt: float = 1.0,
    v_max: float | None = DEFAULT_V_MAX,
) -> Pose:
    """Advance ``pose`` for ``dt`` seconds of constant wheel speeds.

    Closed-form arc update: exact for any dt, so splitting an interval in
    half and stepping twice lands on the same pose as one step. Pass
    ``v_max=None`` to skip the wheel-speed limit check.
    """
    if not (isinstance(dt, (int, float)) and math.isfinite(dt)) or dt <= 0:
        raise InvalidParameter("dt must be a positive finite number")
    if not (isinstance(track_width, (int, float)) and math.isfinite(track_width)) or track_width <= 0:
        raise InvalidParameter("track_width must be a positive finite number")
    if v_max is not None:
        check_speed_limit(wheels, v_max)

    v = (wheels.left + wheels.right) / 2.0
    w = (wheels.right - wheels.left) / track_width

    if abs(w) < OMEGA_EPSILON:
        # Straight segment
        return Pose(
            pose.x + v * dt * math.cos(pose.theta),
            pose.y + v * dt * math.sin(pose.theta),
            pose.theta,
        )

    h = w * dt / 2.0
    chord = v * dt * math.sin(h) / h  # chord length of the arc
    mid = pose.theta + h  # chord direction bisects the heading change
    return Pose(
        pose.x + chord * math.cos(mid),
        pose.y + chord * math.sin(mid),
        pose.theta + w * dt,
    )
