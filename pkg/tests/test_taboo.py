import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wolly.emotion import EmotionState, GameEvent, emotion_for
from wolly.errors import CardError, FormatError, InvalidAnswer, InvalidPhase, NotListening
from wolly.protocol import EventLog, encode_event
from wolly.taboo import (
    DEFAULT_THINK_WINDOW_MS,
    Deck,
    Phase,
    TabooCard,
    answer_replay,
    load_deck,
    start_game,
    state_to_wire,
    submit_guess,
    tick,
)

CARD4 = TabooCard(
    "panda",
    ("It lives in China", "It is black and white", "A bear that eats bamboo", "You can see one at the zoo"),
)
CARD3 = TabooCard("rain", ("It falls from clouds", "Umbrellas block it", "Water from the sky"))
DECK = Deck((CARD4, CARD3))
SOLO4 = Deck((CARD4,))
SOLO3 = Deck((CARD3,))


def card_json(word="panda", clues=("It lives in China", "Black and white", "Eats bamboo")):
    return {"word": word, "clues": list(clues)}


def advance_to_beep(state):
    now = state.deadline_ms
    state, events = tick(state, now)
    assert [e.kind for e in events] == ["beep"]
    return state, now


# --- cards and decks -----------------------------------------------------------

def test_three_and_four_clue_cards_accepted():
    TabooCard("chair", ("a", "b", "c"))
    TabooCard("chair", ("a", "b", "c", "d"))


def test_two_and_five_clue_cards_rejected():
    with pytest.raises(CardError):
        TabooCard("chair", ("a", "b"))
    with pytest.raises(CardError):
        TabooCard("chair", ("a", "b", "c", "d", "e"))


def test_word_leaked_in_clue_rejected():
    with pytest.raises(CardError):
        TabooCard("rain", ("It falls", "A RAINY day brings it", "From clouds"))


def test_leak_check_matches_substring_oracle():
    words = ["cat", "sun", "book"]
    clue_sets = [
        ("soft pet", "likes milk", "chases mice"),
        ("a concatenation of things", "b", "c"),  # contains 'cat'
        ("shines by day", "a sunny sky", "bright"),  # contains 'sun'
    ]
    for word in words:
        for clues in clue_sets:
            leaked = any(word.casefold() in clue.casefold() for clue in clues)
            if leaked:
                with pytest.raises(CardError):
                    TabooCard(word, clues)
            else:
                TabooCard(word, clues)


def test_guess_matching_is_trimmed_and_case_insensitive():
    assert CARD4.matches("  PaNdA \n")
    assert not CARD4.matches("pandas")
    assert not CARD4.matches("")


def test_deck_requires_cards_and_unique_words():
    with pytest.raises(FormatError):
        Deck(())
    with pytest.raises(CardError):
        Deck((CARD3, TabooCard("RAIN", ("x", "y", "z"))))


def test_load_deck_round_trip():
    deck = load_deck(json.dumps([card_json(), card_json(word="chair")]))
    assert [c.word for c in deck.cards] == ["panda", "chair"]


def test_load_deck_rejects_bad_shapes():
    for bad in ("{}", "[]", "[1]", json.dumps([{"word": "x"}]),
                json.dumps([dict(card_json(), extra=1)]),
                json.dumps([{"word": "x", "clues": "not a list"}])):
        with pytest.raises((FormatError, CardError)):
            load_deck(bad)


def test_load_deck_clue_count_examples():
    with pytest.raises(CardError):
        load_deck(json.dumps([card_json(clues=("a", "b"))]))
    with pytest.raises(CardError):
        load_deck(json.dumps([card_json(clues=("a", "b", "c", "d", "e"))]))


# --- start_game ------------------------------------------------------------------

def test_start_game_is_deterministic_per_seed():
    for seed in range(10):
        first, _ = start_game(DECK, seed, 0)
        second, _ = start_game(DECK, seed, 0)
        assert first.card == second.card


def test_start_game_event_order_and_deadline():
    state, events = start_game(SOLO4, 0, 1000)
    assert [e.kind for e in events] == ["rule_explanation", "clue"]
    assert events[1].payload["index"] == 1
    assert events[1].payload["text"] == CARD4.clues[0]
    assert state.phase is Phase.THINKING
    assert state.deadline_ms == 1000 + 20000
    assert state.emotion is EmotionState.NEUTRAL


def test_think_window_is_configurable():
    state, _ = start_game(SOLO4, 0, 500, think_window_ms=3000)
    assert state.deadline_ms == 3500
    state, _ = start_game(SOLO4, 0, 500, think_window_ms=0)
    assert state.deadline_ms == 500  # degenerate window beeps immediately


# --- tick ---------------------------------------------------------------------------

def test_tick_before_deadline_is_a_no_op():
    state, _ = start_game(SOLO4, 0, 0)
    same, events = tick(state, state.deadline_ms - 1)
    assert same == state
    assert events == []


def test_tick_at_deadline_beeps_once():
    state, _ = start_game(SOLO4, 0, 0)
    state, events = tick(state, state.deadline_ms)
    assert [e.kind for e in events] == ["beep"]
    assert events[0].payload == {}
    assert state.phase is Phase.AWAITING_GUESS
    again, events = tick(state, 10**9)
    assert again == state
    assert events == []


def test_tick_outside_thinking_is_idempotent():
    state, _ = start_game(SOLO4, 0, 0)
    state, _ = tick(state, state.deadline_ms)
    state, _ = submit_guess(state, "panda", state.think_window_ms)
    assert state.phase is Phase.ASK_REPLAY
    same, events = tick(state, 10**9)
    assert same == state and events == []


# --- submit_guess ---------------------------------------------------------------------

def test_guess_during_thinking_is_rejected():
    state, _ = start_game(SOLO4, 0, 0)
    with pytest.raises(NotListening):
        submit_guess(state, "panda", state.deadline_ms - 1)


def test_guess_during_replay_question_is_rejected():
    state, _ = start_game(SOLO4, 0, 0)
    state, now = advance_to_beep(state)
    state, _ = submit_guess(state, "panda", now)
    with pytest.raises(NotListening):
        submit_guess(state, "panda", now)


def test_correct_guess_at_first_clue():
    state, _ = start_game(SOLO4, 0, 0)
    state, now = advance_to_beep(state)
    state, events = submit_guess(state, "panda", now)
    assert [e.kind for e in events] == ["emotion_changed", "speech", "speech"]
    assert events[0].payload == {"emotion": "very_happy"}
    assert events[1].payload["key"] == "compliment"
    assert events[2].payload["key"] == "play_again_question"
    assert state.phase is Phase.ASK_REPLAY
    assert state.won is True


def test_wrong_guess_advances_to_next_clue():
    state, _ = start_game(SOLO4, 0, 0)
    state, now = advance_to_beep(state)
    state, events = submit_guess(state, "koala", now)
    assert [e.kind for e in events] == ["speech", "emotion_changed", "clue"]
    assert events[0].payload["key"] == "try_again"
    assert events[1].payload == {"emotion": "neutral"}
    assert events[2].payload == {"index": 2, "text": CARD4.clues[1]}
    assert state.phase is Phase.THINKING
    assert state.clue_index == 2
    assert state.deadline_ms == now + state.think_window_ms


def test_wrong_guess_at_last_clue_reveals_word():
    state, _ = start_game(SOLO3, 0, 0)
    for _ in range(3):
        state, now = advance_to_beep(state)
        state, events = submit_guess(state, "wrong", now)
    assert [e.kind for e in events] == ["emotion_changed", "speech", "speech", "speech"]
    assert events[0].payload == {"emotion": "sad"}
    assert events[1].payload["key"] == "comfort"
    assert events[2].payload["key"] == "reveal_word"
    assert "rain" in events[2].payload["text"]
    assert events[3].payload["key"] == "play_again_question"
    assert state.phase is Phase.ASK_REPLAY
    assert state.won is False


def test_correct_guess_matches_loosely():
    state, _ = start_game(SOLO4, 0, 0)
    state, now = advance_to_beep(state)
    state, _ = submit_guess(state, "  PANDA  ", now)
    assert state.won is True


def test_clue_indices_strictly_increasing_and_bounded():
    for deck, n in ((SOLO3, 3), (SOLO4, 4)):
        state, events = start_game(deck, 0, 0)
        transcript = list(events)
        while state.phase is not Phase.ASK_REPLAY:
            state, now = advance_to_beep(state)
            state, evs = submit_guess(state, "nope", now)
            transcript += evs
        indices = [e.payload["index"] for e in transcript if e.kind == "clue"]
        assert indices == list(range(1, n + 1))


def test_emotion_events_match_emotion_module():
    # winning at each clue index of the 4-clue card
    for win_at in range(1, 5):
        state, _ = start_game(SOLO4, 0, 0)
        emotions = []
        for attempt in range(1, win_at + 1):
            state, now = advance_to_beep(state)
            guess = "panda" if attempt == win_at else "nope"
            state, events = submit_guess(state, guess, now)
            emotions += [e.payload["emotion"] for e in events if e.kind == "emotion_changed"]
        expected_final = emotion_for(GameEvent.guessed_at_clue(win_at)).value
        assert emotions[-1] == expected_final
        assert emotions[:-1] == ["neutral"] * (win_at - 1)
        assert state.emotion.value == expected_final


# --- answer_replay ----------------------------------------------------------------------

def won_state(deck=DECK, seed=0):
    state, _ = start_game(deck, seed, 0)
    state, now = advance_to_beep(state)
    state, _ = submit_guess(state, state.card.word, now)
    return state, now


def test_replay_guard_phases():
    state, _ = start_game(SOLO4, 0, 0)
    with pytest.raises(InvalidPhase):
        answer_replay(state, "yes", 0)
    state, now = advance_to_beep(state)
    with pytest.raises(InvalidPhase):
        answer_replay(state, "yes", now)


def test_replay_answer_vocabulary():
    state, now = won_state()
    for bad in ("maybe", "", "yess", "si"):
        with pytest.raises(InvalidAnswer):
            answer_replay(state, bad, now)
    for ok in ("yes", "YES", " no ", "No"):
        answer_replay(state, ok, now)


def test_replay_no_finishes_with_game_over():
    state, now = won_state(SOLO4)
    state, events = answer_replay(state, "no", now)
    assert state.phase is Phase.FINISHED
    assert [e.kind for e in events] == ["game_over"]
    assert events[0].payload == {"won": True, "word": "panda"}


def test_replay_after_loss_reports_lost_game():
    state, _ = start_game(SOLO3, 0, 0)
    for _ in range(3):
        state, now = advance_to_beep(state)
        state, _ = submit_guess(state, "wrong", now)
    state, events = answer_replay(state, "no", now)
    assert events[0].payload == {"won": False, "word": "rain"}


def test_replay_yes_starts_a_new_round_on_a_different_card():
    for seed in range(10):
        state, now = won_state(DECK, seed)
        first_word = state.card.word
        state, events = answer_replay(state, "yes", now)
        assert state.phase is Phase.THINKING
        assert state.round_index == 1
        assert state.clue_index == 1
        assert [e.kind for e in events] == ["rule_explanation", "clue"]
        assert state.card.word != first_word  # deck has 2 cards, rounds must differ
        assert state.deadline_ms == now + state.think_window_ms


def test_rounds_cycle_through_the_whole_deck():
    state, now = won_state(DECK, 3)
    seen = [state.card.word]
    for _ in range(3):
        state, _ = answer_replay(state, "yes", now)
        state, now = advance_to_beep(state)
        state, _ = submit_guess(state, state.card.word, now)
        seen.append(state.card.word)
    assert seen[:2] == sorted(set(seen[:2]), key=seen.index)  # two distinct words first
    assert seen[2:] == seen[:2]  # then the shuffled order repeats


# --- beep gate property ------------------------------------------------------------------

@given(st.lists(st.tuples(st.sampled_from(["tick", "guess"]),
                           st.integers(min_value=0, max_value=30000)), max_size=30))
@settings(max_examples=200, deadline=None)
def test_no_guess_accepted_before_the_beep(ops):
    state, _ = start_game(SOLO4, 0, 0)
    now = 0
    for op, dt in ops:
        now += dt
        if state.phase in (Phase.ASK_REPLAY, Phase.FINISHED):
            break
        if op == "tick":
            state, events = tick(state, now)
            for e in events:
                assert e.kind == "beep"
        else:
            before = state
            if state.phase is Phase.AWAITING_GUESS:
                state, _ = submit_guess(state, "nope", now)
            else:
                with pytest.raises(NotListening):
                    submit_guess(state, "nope", now)
                assert state == before  # rejection leaves the machine untouched


# --- full determinism ----------------------------------------------------------------------

def run_scripted_session(deck, seed):
    """Fixed script; returns the serialized transcript bytes."""
    log = EventLog()
    state, events = start_game(deck, seed, 0)
    for e in events:
        log.append(e, 0)
    now = 0
    for guess in ("nope", "still nope", "panda"):
        now = state.deadline_ms
        state, events = tick(state, now)
        for e in events:
            log.append(e, now)
        state, events = submit_guess(state, guess, now)
        for e in events:
            log.append(e, now)
        if state.phase is Phase.ASK_REPLAY:
            break
    state, events = answer_replay(state, "no", now)
    for e in events:
        log.append(e, now)
    return b"\n".join(encode_event(e) for e in log.events_since(0))


def test_scripted_transcripts_are_byte_identical():
    runs = {run_scripted_session(SOLO4, 0) for _ in range(5)}
    assert len(runs) == 1
    assert b'"kind":"beep"' in next(iter(runs))


# --- exhaustive small-instance check ----------------------------------------------------------

def brute_force_outcome(guesses):
    """Independent model of one 3-clue round: returns (status, clue_index)."""
    clue = 1
    for guess in guesses:
        if guess == "correct":
            return ("won", clue)
        if clue == 3:
            return ("lost", 3)
        clue += 1
    return ("playing", clue)


def machine_outcome(guesses):
    state, _ = start_game(SOLO3, 0, 0)
    for guess in guesses:
        if state.phase is Phase.ASK_REPLAY:
            break
        state, now = advance_to_beep(state)
        word = "rain" if guess == "correct" else "xxxx"
        state, _ = submit_guess(state, word, now)
    if state.phase is Phase.ASK_REPLAY:
        return ("won" if state.won else "lost", state.clue_index)
    return ("playing", state.clue_index)


def test_exhaustive_guess_sequences_match_brute_force():
    for n in range(0, 4):
        for guesses in itertools.product(["correct", "wrong"], repeat=n):
            want = brute_force_outcome(guesses)
            got = machine_outcome(guesses)
            assert got == want, f"sequence {guesses}: {got} != {want}"


# --- wire form of the state ---------------------------------------------------------------------

def test_state_wire_shape_and_secrecy():
    state, _ = start_game(SOLO4, 0, 0)
    wire = state_to_wire(state)
    assert wire["phase"] == "thinking"
    assert wire["clue_index"] == 1
    assert wire["clue"] == CARD4.clues[0]
    assert wire["deadline_ms"] == 20000
    assert wire["round"] == 0
    assert "panda" not in json.dumps(wire)  # the secret word never leaks

    state, now = advance_to_beep(state)
    wire = state_to_wire(state)
    assert wire["phase"] == "awaiting_guess"
    assert wire["deadline_ms"] is None

    state, _ = submit_guess(state, "panda", now)
    wire = state_to_wire(state)
    assert wire["phase"] == "ask_replay"
    assert wire["won"] is True
