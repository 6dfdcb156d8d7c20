"""The robot's movement programming language.

A program is a flat sequence of child-level instructions - the text form
of a block program, one keyword per block::

    MOVE LEFT RIGHT BEEP
    SAY "hello"
    EMOTE happy
    REPEAT 3 { MOVE RIGHT }
    # comment to end of line

Keywords are case-insensitive, whitespace is free-form. Limits keep
programs child-sized: REPEAT counts 1..100, nesting depth <= 8, SAY text
<= 200 characters, at most 10,000 executed steps.

Two interpreters are provided on purpose: ``execute`` walks the tree and
``execute_flat`` unrolls the loops first. They must produce identical
traces; the test suite holds them against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

from . import gridworld
from .emotion import EmotionState
from .errors import LimitError, ProgramSyntaxError, WallCollision
from .gridworld import Action, GridPose, Maze
from .protocol import EventBody

MAX_REPEAT_COUNT = 100
MAX_NESTING_DEPTH = 8
MAX_SAY_LENGTH = 200
DEFAULT_STEP_LIMIT = 10_000


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Move:
    pass


@dataclass(frozen=True)
class TurnLeft:
    pass


@dataclass(frozen=True)
class TurnRight:
    pass


@dataclass(frozen=True)
class Beep:
    pass


@dataclass(frozen=True)
class Say:
    text: str


@dataclass(frozen=True)
class Emote:
    emotion: EmotionState


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple["Statement", ...]


Primitive = Union[Move, TurnLeft, TurnRight, Beep, Say, Emote]
Statement = Union[Primitive, Repeat]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]

    def __len__(self) -> int:
        return len(self.statements)


_KEYWORD_OF = {Move: "MOVE", TurnLeft: "LEFT", TurnRight: "RIGHT", Beep: "BEEP"}
_ACTION_OF = {
    Move: Action.MOVE_FORWARD,
    TurnLeft: Action.TURN_LEFT,
    TurnRight: Action.TURN_RIGHT,
}


def statement_name(stmt: Primitive) -> str:
    """Lowercase wire name of a primitive: move, left, right, beep, say, emote."""
    if isinstance(stmt, Say):
        return "say"
    if isinstance(stmt, Emote):
        return "emote"
    return _KEYWORD_OF[type(stmt)].lower()


# --- Lexer -----------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # WORD, INT, STRING, LBRACE, RBRACE, EOF
    value: object
    line: int
    col: int


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)

    def advance(ch: str):
        nonlocal line, col
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1

    while i < n:
        ch = source[i]
        if ch.isspace():
            advance(ch)
            i += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        start_line, start_col = line, col
        if ch == "{":
            tokens.append(_Token("LBRACE", "{", start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == "}":
            tokens.append(_Token("RBRACE", "}", start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            i += 1
            col += 1
            chars: list[str] = []
            while True:
                if i >= n or source[i] == "\n":
                    raise ProgramSyntaxError(start_line, start_col, "unterminated string")
                c = source[i]
                if c == '"':
                    i += 1
                    col += 1
                    break
                if c == "\\":
                    if i + 1 >= n or source[i + 1] not in ('"', "\\"):
                        raise ProgramSyntaxError(line, col, "bad escape, only \\\" and \\\\ are allowed")
                    chars.append(source[i + 1])
                    i += 2
                    col += 2
                    continue
                chars.append(c)
                i += 1
                col += 1
            tokens.append(_Token("STRING", "".join(chars), start_line, start_col))
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(_Token("INT", int(source[i:j]), start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("WORD", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        raise ProgramSyntaxError(start_line, start_col, f"unexpected character {ch!r}")
    tokens.append(_Token("EOF", None, line, col))
    return tokens


# --- Parser ----------------------------------------------------------------

_EMOTIONS_BY_NAME = {state.value: state for state in EmotionState}


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    @property
    def _current(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        token = self._current
        self._pos += 1
        return token

    def _expect(self, kind: str, what: str) -> _Token:
        token = self._current
        if token.kind != kind:
            raise ProgramSyntaxError(token.line, token.col, f"expected {what}")
        return self._advance()

    def parse_program(self) -> Program:
        statements = self._statements(depth=0, stop_at_rbrace=False)
        return Program(tuple(statements))

    def _statements(self, depth: int, stop_at_rbrace: bool) -> list[Statement]:
        out: list[Statement] = []
        while True:
            token = self._current
            if token.kind == "EOF":
                if stop_at_rbrace:
                    raise ProgramSyntaxError(token.line, token.col, "expected '}' before end of program")
                return out
            if token.kind == "RBRACE":
                if stop_at_rbrace:
                    return out
                raise ProgramSyntaxError(token.line, token.col, "'}' without matching REPEAT")
            out.append(self._statement(depth))

    def _statement(self, depth: int) -> Statement:
        token = self._current
        if token.kind != "WORD":
            raise ProgramSyntaxError(token.line, token.col, f"expected an instruction, got {token.value!r}")
        self._advance()
        keyword = str(token.value).upper()
        if keyword == "MOVE":
            return Move()
        if keyword == "LEFT":
            return TurnLeft()
        if keyword == "RIGHT":
            return TurnRight()
        if keyword == "BEEP":
            return Beep()
        if keyword == "SAY":
            text_token = self._expect("STRING", 'a quoted string after SAY')
            text = str(text_token.value)
            if len(text) > MAX_SAY_LENGTH:
                raise LimitError(f"SAY text longer than {MAX_SAY_LENGTH} characters")
            return Say(text)
        if keyword == "EMOTE":
            name_token = self._expect("WORD", "an emotion name after EMOTE")
            name = str(name_token.value).lower()
            if name not in _EMOTIONS_BY_NAME:
                choices = ", ".join(sorted(_EMOTIONS_BY_NAME))
                raise ProgramSyntaxError(name_token.line, name_token.col, f"unknown emotion {name!r} (one of: {choices})")
            return Emote(_EMOTIONS_BY_NAME[name])
        if keyword == "REPEAT":
            count_token = self._expect("INT", "a repeat count after REPEAT")
            count = int(count_token.value)
            if not 1 <= count <= MAX_REPEAT_COUNT:
                raise LimitError(f"REPEAT count must be 1..{MAX_REPEAT_COUNT}, got {count}")
            if depth + 1 > MAX_NESTING_DEPTH:
                raise LimitError(f"REPEAT nesting deeper than {MAX_NESTING_DEPTH}")
            self._expect("LBRACE", "'{' after the repeat count")
            body = self._statements(depth + 1, stop_at_rbrace=True)
            self._expect("RBRACE", "'}'")
            return Repeat(count, tuple(body))
        raise ProgramSyntaxError(token.line, token.col, f"unknown instruction {token.value!r}")


def parse(source: str) -> Program:
    """Parse program text. Raises ProgramSyntaxError with a 1-based
    line/col, or LimitError for count/depth/length violations."""
    return _Parser(_lex(source)).parse_program()


def pretty(program: Program) -> str:
    """Canonical text form; parse(pretty(p)) == p."""
    lines: list[str] = []

    def emit(statements: Iterable[Statement], indent: int):
        pad = "  " * indent
        for stmt in statements:
            if isinstance(stmt, Repeat):
                lines.append(f"{pad}REPEAT {stmt.count} {{")
                emit(stmt.body, indent + 1)
                lines.append(f"{pad}}}")
            elif isinstance(stmt, Say):
                escaped = stmt.text.replace("\\", "\\\\").replace('"', '\\"')
                lines.append(f'{pad}SAY "{escaped}"')
            elif isinstance(stmt, Emote):
                lines.append(f"{pad}EMOTE {stmt.emotion.value}")
            else:
                lines.append(pad + _KEYWORD_OF[type(stmt)])

    emit(program.statements, 0)
    return "\n".join(lines) + ("\n" if lines else "")


# --- Flattening ------------------------------------------------------------

def iter_flatten(program: Program) -> Iterator[Primitive]:
    """Primitives in execution order, loops unrolled, lazily."""

    def walk(statements: tuple[Statement, ...]) -> Iterator[Primitive]:
        for stmt in statements:
            if isinstance(stmt, Repeat):
                for _ in range(stmt.count):
                    yield from walk(stmt.body)
            else:
                yield stmt

    return walk(program.statements)


def flatten(program: Program, step_limit: int = DEFAULT_STEP_LIMIT) -> list[Primitive]:
    """Fully unrolled statement list; LimitError if longer than step_limit."""
    out: list[Primitive] = []
    for stmt in iter_flatten(program):
        if len(out) >= step_limit:
            raise LimitError(f"program expands to more than {step_limit} steps")
        out.append(stmt)
    return out


# --- Execution -------------------------------------------------------------

class Outcome(str, Enum):
    SUCCESS = "success"
    REACHED_GOAL = "reached_goal"
    WALL_COLLISION = "wall_collision"
    STEP_LIMIT_EXCEEDED = "step_limit_exceeded"


@dataclass(frozen=True)
class TraceStep:
    """One executed primitive: movement steps record the resulting pose,
    expressive steps record the event they raised."""

    index: int  # 1-based position in flatten order
    statement: Primitive
    pose: GridPose | None = None
    event: EventBody | None = None


@dataclass(frozen=True)
class ExecutionTrace:
    steps: tuple[TraceStep, ...]
    outcome: Outcome
    failed_step: int | None  # set for WALL_COLLISION
    final_pose: GridPose


def _expressive_event(stmt: Primitive) -> EventBody:
    if isinstance(stmt, Beep):
        return EventBody("beep", {})
    if isinstance(stmt, Say):
        return EventBody("speech", {"key": "say", "text": stmt.text})
    if isinstance(stmt, Emote):
        return EventBody("emotion_changed", {"emotion": stmt.emotion.value})
    raise TypeError(f"{stmt!r} is not expressive")


def run_primitives(
    primitives: Iterable[Primitive],
    maze: Maze,
    step_limit: int = DEFAULT_STEP_LIMIT,
) -> ExecutionTrace:
    """Run already-flattened statements against a maze from its start.

    Stops at the first wall collision, on reaching the goal, or when the
    step limit would be exceeded. Expressive statements never move the
    robot.
    """
    steps: list[TraceStep] = []
    pose = maze.start
    outcome = Outcome.SUCCESS
    failed: int | None = None

    for stmt in primitives:
        index = len(steps) + 1
        if index > step_limit:
            outcome = Outcome.STEP_LIMIT_EXCEEDED
            break
        if type(stmt) in _ACTION_OF:
            try:
                pose = gridworld.apply_action(pose, _ACTION_OF[type(stmt)], maze)
            except WallCollision:
                steps.append(TraceStep(index, stmt, pose=pose))
                outcome = Outcome.WALL_COLLISION
                failed = index
                break
            steps.append(TraceStep(index, stmt, pose=pose))
        else:
            steps.append(TraceStep(index, stmt, event=_expressive_event(stmt)))
        if gridworld.at_goal(pose, maze):
            outcome = Outcome.REACHED_GOAL
            break

    return ExecutionTrace(tuple(steps), outcome, failed, pose)


def execute(program: Program, maze: Maze, step_limit: int = DEFAULT_STEP_LIMIT) -> ExecutionTrace:
    """Tree-walking interpreter: runs the program without materializing
    the unrolled statement list."""
    steps: list[TraceStep] = []
    state = {"pose": maze.start, "outcome": Outcome.SUCCESS, "failed": None}

    def run_block(statements: tuple[Statement, ...]) -> bool:
        for stmt in statements:
            if isinstance(stmt, Repeat):
                for _ in range(stmt.count):
                    if not run_block(stmt.body):
                        return False
                continue
            index = len(steps) + 1
            if index > step_limit:
                state["outcome"] = Outcome.STEP_LIMIT_EXCEEDED
                return False
            if type(stmt) in _ACTION_OF:
                try:
                    state["pose"] = gridworld.apply_action(state["pose"], _ACTION_OF[type(stmt)], maze)
                except WallCollision:
                    steps.append(TraceStep(index, stmt, pose=state["pose"]))
                    state["outcome"] = Outcome.WALL_COLLISION
                    state["failed"] = index
                    return False
                steps.append(TraceStep(index, stmt, pose=state["pose"]))
            else:
                steps.append(TraceStep(index, stmt, event=_expressive_event(stmt)))
            if gridworld.at_goal(state["pose"], maze):
                state["outcome"] = Outcome.REACHED_GOAL
                return False
        return True

    run_block(program.statements)
    return ExecutionTrace(tuple(steps), state["outcome"], state["failed"], state["pose"])


def execute_flat(program: Program, maze: Maze, step_limit: int = DEFAULT_STEP_LIMIT) -> ExecutionTrace:
    """Unroll-then-interpret twin of ``execute``; must agree with it."""
    return run_primitives(iter_flatten(program), maze, step_limit)
