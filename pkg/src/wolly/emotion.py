"""Affective state of the robot and its visual rendering.

Four discrete states drive a cartoon face plus a body LED color. The face
deliberately has no nose and always has a mouth. Guessing at the first
clue is the only way to reach VERY_HAPPY (heart eyes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import InvalidParameter


class EmotionState(str, Enum):
    VERY_HAPPY = "very_happy"
    HAPPY = "happy"
    NEUTRAL = "neutral"
    SAD = "sad"


DEFAULT_EMOTION = EmotionState.NEUTRAL


class Eyes(str, Enum):
    ROUND = "round"
    HEART = "heart"
    DROOPY = "droopy"


class Mouth(str, Enum):
    SMILE = "smile"
    BIG_SMILE = "big_smile"
    FLAT = "flat"
    FROWN = "frown"


@dataclass(frozen=True)
class FaceDescriptor:
    eyes: Eyes
    mouth: Mouth
    led_color: tuple[int, int, int]
    nose: str = field(default="absent", init=False)  # never drawn

    def to_wire(self) -> dict:
        return {
            "eyes": self.eyes.value,
            "mouth": self.mouth.value,
            "nose": self.nose,
            "led_color": list(self.led_color),
        }


# LED palette is a presentation default, overridable via face_for(palette=...)
DEFAULT_LED_COLORS: dict[EmotionState, tuple[int, int, int]] = {
    EmotionState.VERY_HAPPY: (255, 64, 128),
    EmotionState.HAPPY: (0, 200, 0),
    EmotionState.NEUTRAL: (255, 255, 255),
    EmotionState.SAD: (0, 64, 255),
}

_FACES: dict[EmotionState, tuple[Eyes, Mouth]] = {
    EmotionState.VERY_HAPPY: (Eyes.HEART, Mouth.BIG_SMILE),
    EmotionState.HAPPY: (Eyes.ROUND, Mouth.SMILE),
    EmotionState.NEUTRAL: (Eyes.ROUND, Mouth.FLAT),
    EmotionState.SAD: (Eyes.DROOPY, Mouth.FROWN),
}


class GameEventKind(str, Enum):
    GUESSED_AT_CLUE = "guessed_at_clue"
    FAILED_ALL_CLUES = "failed_all_clues"
    WRONG_ATTEMPT = "wrong_attempt"
    GAME_START = "game_start"


@dataclass(frozen=True)
class GameEvent:
    """Something that happened in a game round, as the emotion engine
    sees it. ``clue_index`` is set only for GUESSED_AT_CLUE."""

    kind: GameEventKind
    clue_index: int | None = None

    def __post_init__(self):
        if self.kind is GameEventKind.GUESSED_AT_CLUE:
            if self.clue_index is None or not 1 <= self.clue_index <= 4:
                raise InvalidParameter("clue_index must be in 1..4")
        elif self.clue_index is not None:
            raise InvalidParameter(f"{self.kind.value} carries no clue index")

    @classmethod
    def guessed_at_clue(cls, index: int) -> "GameEvent":
        return cls(GameEventKind.GUESSED_AT_CLUE, index)

    @classmethod
    def failed_all_clues(cls) -> "GameEvent":
        return cls(GameEventKind.FAILED_ALL_CLUES)

    @classmethod
    def wrong_attempt(cls) -> "GameEvent":
        return cls(GameEventKind.WRONG_ATTEMPT)

    @classmethod
    def game_start(cls) -> "GameEvent":
        return cls(GameEventKind.GAME_START)


def emotion_for(event: GameEvent) -> EmotionState:
    """Total mapping from game events to the robot's emotion.

    A first-clue guess is the robot's peak: heart-eyed very happy. Later
    clues still make it happy, a lost round makes it sad, and between
    wrong attempts it stays neutral.
    """
    if event.kind is GameEventKind.GUESSED_AT_CLUE:
        return EmotionState.VERY_HAPPY if event.clue_index == 1 else EmotionState.HAPPY
    if event.kind is GameEventKind.FAILED_ALL_CLUES:
        return EmotionState.SAD
    return EmotionState.NEUTRAL  # WRONG_ATTEMPT and GAME_START


def face_for(
    emotion: EmotionState,
    palette: Mapping[EmotionState, tuple[int, int, int]] | None = None,
) -> FaceDescriptor:
    eyes, mouth = _FACES[emotion]
    colors = DEFAULT_LED_COLORS if palette is None else palette
    return FaceDescriptor(eyes=eyes, mouth=mouth, led_color=tuple(colors[emotion]))
