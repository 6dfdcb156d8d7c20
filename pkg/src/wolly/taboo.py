"""The word-guessing game the robot plays.

One round: the robot explains the rules, gives a clue, leaves a think
window (default 20 s), beeps, and only then listens. A correct guess wins
the round; a wrong one costs a clue. Cards carry 3 or 4 clues, easiest
last; running out of clues loses the round and the robot reveals the word.
After either outcome it asks whether to play again.

The whole machine is pure: ``(state, input, now) -> (state, events)``.
Time is an argument, never read from a wall clock, so every transcript is
replayable byte-for-byte. Speech is emitted as catalog keys plus rendered
text; transcript assertions should bind to the keys.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from enum import Enum

from .emotion import DEFAULT_EMOTION, EmotionState, GameEvent, emotion_for
from .errors import CardError, FormatError, InvalidAnswer, InvalidPhase, NotListening
from .protocol import EventBody

DEFAULT_THINK_WINDOW_MS = 20_000  # "about twenty seconds"
MIN_CLUES = 3
MAX_CLUES = 4

MESSAGES = {
    "rule_explanation": (
        "I am thinking of a word and I will give you clues, each easier than "
        "the last. Think it over; you may answer only after my beep. When you "
        "guess it, answer yes or no to keep playing."
    ),
    "compliment": "Yes! That is exactly right, well done!",
    "try_again": "Not quite, try again. Here is another clue.",
    "comfort": "Do not give up, we can try again together.",
    "reveal_word": "The word I was thinking of was {word}.",
    "play_again_question": "Do you want to play again? Answer yes or no.",
}


def _speech(key: str, **kwargs) -> EventBody:
    return EventBody("speech", {"key": key, "text": MESSAGES[key].format(**kwargs)})


@dataclass(frozen=True)
class TabooCard:
    word: str
    clues: tuple[str, ...]

    def __post_init__(self):
        word = self.word.strip()
        if not word:
            raise CardError(self.word, "word must not be empty")
        if not MIN_CLUES <= len(self.clues) <= MAX_CLUES:
            raise CardError(word, f"needs {MIN_CLUES}-{MAX_CLUES} clues, has {len(self.clues)}")
        for i, clue in enumerate(self.clues, start=1):
            if not isinstance(clue, str) or not clue.strip():
                raise CardError(word, f"clue {i} must be a non-empty string")
            if word.casefold() in clue.casefold():
                raise CardError(word, f"clue {i} contains the word itself")

    def matches(self, guess: str) -> bool:
        return guess.strip().casefold() == self.word.strip().casefold()


@dataclass(frozen=True)
class Deck:
    cards: tuple[TabooCard, ...]

    def __post_init__(self):
        if not self.cards:
            raise FormatError("deck must contain at least one card")
        seen: set[str] = set()
        for card in self.cards:
            key = card.word.strip().casefold()
            if key in seen:
                raise CardError(card.word, "duplicate word in deck")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.cards)


def load_deck(text: str) -> Deck:
    """Parse the deck file: a UTF-8 JSON array of
    ``{"word": str, "clues": [str, ...]}`` objects."""
    try:
        data = json.loads(text)
    except ValueError as exc:
        raise FormatError(f"deck is not valid json: {exc}")
    if not isinstance(data, list):
        raise FormatError("deck must be a json array of cards")
    cards = []
    for i, item in enumerate(data):
        if not isinstance(item, dict):
            raise FormatError(f"card {i} must be an object")
        extras = set(item) - {"word", "clues"}
        if extras:
            raise FormatError(f"card {i} has unknown field {sorted(extras)[0]!r}")
        if "word" not in item or "clues" not in item:
            raise FormatError(f"card {i} needs 'word' and 'clues'")
        word, clues = item["word"], item["clues"]
        if not isinstance(word, str):
            raise FormatError(f"card {i}: word must be a string")
        if not isinstance(clues, list) or not all(isinstance(c, str) for c in clues):
            raise FormatError(f"card {i}: clues must be an array of strings")
        cards.append(TabooCard(word=word, clues=tuple(clues)))
    return Deck(tuple(cards))


class Phase(str, Enum):
    EXPLAINING_RULES = "explaining_rules"
    THINKING = "thinking"
    AWAITING_GUESS = "awaiting_guess"
    ASK_REPLAY = "ask_replay"
    FINISHED = "finished"


@dataclass(frozen=True)
class TabooGameState:
    phase: Phase
    clue_index: int  # 1-based, <= len(card.clues)
    deadline_ms: int | None  # set only while THINKING
    card: TabooCard
    emotion: EmotionState
    rng_seed: int
    think_window_ms: int
    deck: Deck
    round_index: int  # 0-based round counter across replays
    won: bool | None  # outcome of the last resolved round


def _card_order(deck: Deck, seed: int) -> list[int]:
    # One seeded shuffle fixes the card order for the whole session, so
    # consecutive rounds never repeat a card while the deck has >= 2.
    return random.Random(seed).sample(range(len(deck)), len(deck))


def _card_for_round(deck: Deck, seed: int, round_index: int) -> TabooCard:
    order = _card_order(deck, seed)
    return deck.cards[order[round_index % len(deck)]]


def _begin_round(
    deck: Deck,
    seed: int,
    clock_now: int,
    think_window_ms: int,
    round_index: int,
    won: bool | None,
) -> tuple[TabooGameState, list[EventBody]]:
    card = _card_for_round(deck, seed, round_index)
    state = TabooGameState(
        phase=Phase.THINKING,
        clue_index=1,
        deadline_ms=clock_now + think_window_ms,
        card=card,
        emotion=emotion_for(GameEvent.game_start()),
        rng_seed=seed,
        think_window_ms=think_window_ms,
        deck=deck,
        round_index=round_index,
        won=won,
    )
    events = [
        EventBody("rule_explanation", {"key": "rule_explanation", "text": MESSAGES["rule_explanation"]}),
        EventBody("clue", {"index": 1, "text": card.clues[0]}),
    ]
    return state, events


def start_game(
    deck: Deck,
    seed: int,
    clock_now: int,
    think_window_ms: int = DEFAULT_THINK_WINDOW_MS,
) -> tuple[TabooGameState, list[EventBody]]:
    """Open a session: explain the rules, give the first clue, and start
    the think window. The card is a deterministic function of the seed."""
    return _begin_round(deck, seed, clock_now, think_window_ms, round_index=0, won=None)


def tick(state: TabooGameState, clock_now: int) -> tuple[TabooGameState, list[EventBody]]:
    """Advance time only: when the think window has elapsed, beep and
    start listening. Anywhere else this is a no-op."""
    if state.phase is Phase.THINKING and clock_now >= state.deadline_ms:
        new = replace(state, phase=Phase.AWAITING_GUESS, deadline_ms=None)
        return new, [EventBody("beep", {})]
    return state, []


def submit_guess(
    state: TabooGameState,
    guess: str,
    clock_now: int,
) -> tuple[TabooGameState, list[EventBody]]:
    """Judge a guess. Only legal between the beep and the round's end;
    any other moment raises NotListening (the beep gate)."""
    if state.phase is not Phase.AWAITING_GUESS:
        raise NotListening("the robot is not listening for a guess right now")

    i = state.clue_index
    if state.card.matches(guess):
        feeling = emotion_for(GameEvent.guessed_at_clue(i))
        new = replace(state, phase=Phase.ASK_REPLAY, emotion=feeling, won=True)
        events = [
            EventBody("emotion_changed", {"emotion": feeling.value}),
            _speech("compliment"),
            _speech("play_again_question"),
        ]
        return new, events

    if i < len(state.card.clues):
        feeling = emotion_for(GameEvent.wrong_attempt())
        new = replace(
            state,
            phase=Phase.THINKING,
            clue_index=i + 1,
            deadline_ms=clock_now + state.think_window_ms,
            emotion=feeling,
        )
        events = [
            _speech("try_again"),
            EventBody("emotion_changed", {"emotion": feeling.value}),
            EventBody("clue", {"index": i + 1, "text": state.card.clues[i]}),
        ]
        return new, events

    # Out of clues: lost round. Comfort, reveal, and still offer a replay.
    feeling = emotion_for(GameEvent.failed_all_clues())
    new = replace(state, phase=Phase.ASK_REPLAY, emotion=feeling, won=False)
    events = [
        EventBody("emotion_changed", {"emotion": feeling.value}),
        _speech("comfort"),
        _speech("reveal_word", word=state.card.word),
        _speech("play_again_question"),
    ]
    return new, events


def answer_replay(
    state: TabooGameState,
    answer: str,
    clock_now: int,
) -> tuple[TabooGameState, list[EventBody]]:
    """Handle the yes/no answer to "play again?". Yes starts the next
    round on the next card; no finishes the session."""
    if state.phase is not Phase.ASK_REPLAY:
        raise InvalidPhase(f"replay answer only makes sense in ask_replay, not {state.phase.value}")
    normalized = answer.strip().casefold()
    if normalized not in ("yes", "no"):
        raise InvalidAnswer(f"answer must be yes or no, got {answer!r}")

    if normalized == "yes":
        return _begin_round(
            state.deck,
            state.rng_seed,
            clock_now,
            state.think_window_ms,
            round_index=state.round_index + 1,
            won=state.won,
        )

    new = replace(state, phase=Phase.FINISHED, deadline_ms=None)
    events = [EventBody("game_over", {"won": bool(state.won), "word": state.card.word})]
    return new, events


def state_to_wire(state: TabooGameState) -> dict:
    """Serialized game state for the wire. The secret word is omitted;
    it only ever leaves the machine via the reveal speech or game_over."""
    in_round = state.phase in (Phase.THINKING, Phase.AWAITING_GUESS)
    return {
        "phase": state.phase.value,
        "clue_index": state.clue_index if in_round else None,
        "deadline_ms": state.deadline_ms,
        "clue": state.card.clues[state.clue_index - 1] if in_round else None,
        "emotion": state.emotion.value,
        "round": state.round_index,
        "won": state.won,
        "think_window_ms": state.think_window_ms,
    }
