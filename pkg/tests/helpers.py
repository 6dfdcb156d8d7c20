"""Shared reference implementations used as oracles by the tests.

These are deliberately independent of the library code paths they check:
the Euler integrator knows nothing about the closed-form arc update, the
size counter never calls flatten, and the angle reducer uses repeated
subtraction instead of fmod.
"""

from __future__ import annotations

import math


def euler_pose(x, y, theta, vl, vr, track_width, total_dt, slice_dt=1e-4):
    """Forward-Euler integration of the unicycle model."""
    v = (vl + vr) / 2.0
    w = (vr - vl) / track_width
    steps = round(total_dt / slice_dt)
    h = total_dt / steps
    for _ in range(steps):
        x += v * math.cos(theta) * h
        y += v * math.sin(theta) * h
        theta += w * h
    return x, y, theta


def euler_pose_batch(x, y, theta, vl, vr, track_width, total_dt=1.0, slice_dt=1e-4):
    """Vectorized forward-Euler over numpy arrays of samples."""
    import numpy as np

    v = (vl + vr) / 2.0
    w = (vr - vl) / track_width
    steps = round(total_dt / slice_dt)
    h = total_dt / steps
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    theta = np.array(theta, dtype=float)
    for _ in range(steps):
        x = x + v * np.cos(theta) * h
        y = y + v * np.sin(theta) * h
        theta = theta + w * h
    return x, y, theta


def reduce_angle_by_subtraction(theta: float) -> float:
    """Map an angle into [0, 2*pi) one full turn at a time."""
    tau = 2.0 * math.pi
    while theta >= tau:
        theta -= tau
    while theta < 0.0:
        theta += tau
    return theta


def angle_distance(a: float, b: float) -> float:
    """Shortest circular distance between two angles."""
    tau = 2.0 * math.pi
    d = math.fmod(abs(a - b), tau)
    return min(d, tau - d)


def recursive_size(statements) -> int:
    """Primitive count of a statement list, never expanding loops."""
    from wolly.wollyscript import Repeat

    total = 0
    for stmt in statements:
        if isinstance(stmt, Repeat):
            total += stmt.count * recursive_size(stmt.body)
        else:
            total += 1
    return total


SAY_TEXTS = ["hi", "go wolly", 'he said "hi"', "back\\slash", "", "two  spaces"]


def random_program(rng, max_depth=3, max_repeat=5, max_block_len=5):
    """Random AST within the stated bounds (repeat depth and count)."""
    from wolly.emotion import EmotionState
    from wolly.wollyscript import (
        Beep,
        Emote,
        Move,
        Program,
        Repeat,
        Say,
        TurnLeft,
        TurnRight,
    )

    def block(depth):
        out = []
        for _ in range(rng.randrange(max_block_len + 1)):
            kinds = ["move", "left", "right", "beep", "say", "emote"]
            if depth < max_depth:
                kinds += ["repeat", "repeat"]
            kind = rng.choice(kinds)
            if kind == "move":
                out.append(Move())
            elif kind == "left":
                out.append(TurnLeft())
            elif kind == "right":
                out.append(TurnRight())
            elif kind == "beep":
                out.append(Beep())
            elif kind == "say":
                out.append(Say(rng.choice(SAY_TEXTS)))
            elif kind == "emote":
                out.append(Emote(rng.choice(list(EmotionState))))
            else:
                out.append(Repeat(rng.randint(1, max_repeat), tuple(block(depth + 1))))
        return out

    return Program(tuple(block(1)))
