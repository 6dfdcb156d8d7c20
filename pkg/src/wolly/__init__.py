"""Wolly: a simulated open educational robot.

Differential-drive kinematics, a grid maze world, a child-level movement
language, an emotion engine, the Taboo guessing game, and an HTTP service
with an append-only event log.
"""

from .emotion import (
    DEFAULT_EMOTION,
    EmotionState,
    FaceDescriptor,
    GameEvent,
    emotion_for,
    face_for,
)
from .errors import WollyError
from .gridworld import Action, GridHeading, GridPose, Maze, apply_action, at_goal, parse_maze
from .kinematics import Pose, WheelSpeeds, normalize_heading, step
from .protocol import Event, EventBody, EventLog, decode_command, encode_event
from .taboo import Deck, TabooCard, load_deck, start_game, submit_guess
from .wollyscript import Program, execute, execute_flat, parse, pretty

__version__ = "0.1.0"

__all__ = [
    "Action",
    "DEFAULT_EMOTION",
    "Deck",
    "EmotionState",
    "Event",
    "EventBody",
    "EventLog",
    "FaceDescriptor",
    "GameEvent",
    "GridHeading",
    "GridPose",
    "Maze",
    "Pose",
    "Program",
    "TabooCard",
    "WheelSpeeds",
    "WollyError",
    "__version__",
    "apply_action",
    "at_goal",
    "decode_command",
    "emotion_for",
    "encode_event",
    "execute",
    "execute_flat",
    "face_for",
    "load_deck",
    "normalize_heading",
    "parse",
    "parse_maze",
    "pretty",
    "start_game",
    "step",
    "submit_guess",
]
