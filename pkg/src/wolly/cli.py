"""Operator entry points.

Subcommands: serve (HTTP service), run (headless program runner), taboo
(terminal game), validate (content checker), replay (event log renderer).
Every subcommand is a thin wrapper over the library modules; exit codes
are 0 for success, 1 for content or game-outcome errors, 2 for usage and
IO problems.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import protocol, taboo, wollyscript
from .errors import WollyError
from .gridworld import parse_maze
from .server import ServerConfig, WollyServer, apply_port_env, load_config, packaged_text
from .taboo import Phase, load_deck
from .wollyscript import Outcome

EXIT_OK = 0
EXIT_CONTENT = 1
EXIT_USAGE = 2

BEEP_LINE = "*** BEEP ***"


def render_event(obj: dict) -> str:
    """One deterministic text line per event; speech prints its message
    key, not prose, so transcripts do not depend on wording."""
    kind = obj["kind"]
    payload = obj["payload"]
    if kind in ("speech", "rule_explanation"):
        return f"SAY: {payload['key']}"
    if kind == "clue":
        return f"CLUE {payload['index']}: {payload['text']}"
    if kind == "beep":
        return BEEP_LINE
    if kind == "emotion_changed":
        return f"EMOTION: {payload['emotion']}"
    if kind == "pose_changed":
        pose = payload["pose"]
        grid = payload["grid_pose"]
        return (
            f"POSE: x={pose['x']:.4f} y={pose['y']:.4f} theta={pose['theta']:.4f}"
            f" grid=({grid['col']},{grid['row']},{grid['heading']})"
        )
    if kind == "program_step":
        grid = payload["grid_pose"]
        return (
            f"STEP {payload['index']}: {payload['statement']}"
            f" -> ({grid['col']},{grid['row']},{grid['heading']})"
        )
    if kind == "game_over":
        won = "yes" if payload["won"] else "no"
        return f"GAME OVER: word={payload['word']} won={won}"
    if kind == "feedback_received":
        return f"FEEDBACK: {payload['rating']}"
    raise ValueError(f"unknown event kind {kind!r}")


def _render_bodies(bodies) -> None:
    for body in bodies:
        print(render_event({"kind": body.kind, "payload": body.payload}))


# --- serve -------------------------------------------------------------------

def cmd_serve(args) -> int:
    config = load_config(args.config) if args.config else ServerConfig()
    overrides = {}
    if args.port is not None:
        overrides["port"] = args.port
    if args.maze is not None:
        overrides["maze"] = args.maze
    if args.deck is not None:
        overrides["deck"] = args.deck
    if args.logical_clock:
        overrides["logical_clock"] = True
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    config = apply_port_env(config)
    server = WollyServer(config, ui_dir=args.ui)
    mode = "logical clock" if config.logical_clock else "wall clock"
    print(f"wolly listening on port {server.port} ({mode})")
    server.serve_forever()
    return EXIT_OK


# --- run ---------------------------------------------------------------------

def _render_trace_step(step: wollyscript.TraceStep) -> str:
    stmt = step.statement
    name = wollyscript.statement_name(stmt).upper()
    if step.pose is not None:
        pose = step.pose
        return f"STEP {step.index}: {name} -> ({pose.col},{pose.row},{pose.heading.value})"
    if isinstance(stmt, wollyscript.Say):
        return f'STEP {step.index}: SAY "{stmt.text}"'
    if isinstance(stmt, wollyscript.Emote):
        return f"STEP {step.index}: EMOTE {stmt.emotion.value}"
    return f"STEP {step.index}: {name}"


def cmd_run(args) -> int:
    program = wollyscript.parse(_read_text(args.program))
    maze_text = _read_text(args.maze) if args.maze else packaged_text("maze.txt")
    maze = parse_maze(maze_text)
    trace = wollyscript.execute(program, maze, args.step_limit)
    for step in trace.steps:
        print(_render_trace_step(step))
    if trace.outcome is Outcome.WALL_COLLISION:
        print(f"OUTCOME: {trace.outcome.value} at step {trace.failed_step}")
    else:
        print(f"OUTCOME: {trace.outcome.value}")
    ok = trace.outcome in (Outcome.SUCCESS, Outcome.REACHED_GOAL)
    return EXIT_OK if ok else EXIT_CONTENT


# --- taboo -------------------------------------------------------------------

def _sleep_until(deadline_ms: int, now_ms) -> None:
    # chunked so Ctrl-C stays responsive
    while True:
        remaining = deadline_ms - now_ms()
        if remaining <= 0:
            return
        time.sleep(min(remaining, 200) / 1000.0)


def _prompt(text: str) -> str:
    # prompt on stderr so stdout stays a clean event transcript
    print(text, end="", file=sys.stderr, flush=True)
    try:
        return input()
    except EOFError:
        raise SystemExit(EXIT_OK)


def cmd_taboo(args) -> int:
    deck_text = _read_text(args.deck) if args.deck else packaged_text("deck.json")
    deck = load_deck(deck_text)
    zero = time.monotonic()

    def now_ms() -> int:
        return int((time.monotonic() - zero) * 1000)

    state, events = taboo.start_game(deck, args.seed, now_ms(), args.think_ms)
    _render_bodies(events)
    while state.phase is not Phase.FINISHED:
        if state.phase is Phase.THINKING:
            _sleep_until(state.deadline_ms, now_ms)
            state, events = taboo.tick(state, now_ms())
            _render_bodies(events)
        elif state.phase is Phase.AWAITING_GUESS:
            guess = _prompt("YOUR GUESS> ").strip()
            if not guess:
                continue
            state, events = taboo.submit_guess(state, guess, now_ms())
            _render_bodies(events)
        elif state.phase is Phase.ASK_REPLAY:
            answer = _prompt("PLAY AGAIN? (yes/no)> ")
            try:
                state, events = taboo.answer_replay(state, answer, now_ms())
            except WollyError:
                print("Please answer yes or no.", file=sys.stderr)
                continue
            _render_bodies(events)
    return EXIT_OK


# --- validate ----------------------------------------------------------------

def _infer_kind(path: Path) -> str:
    if path.suffix == ".json":
        return "deck"
    if path.suffix == ".ws":
        return "program"
    return "maze"


def cmd_validate(args) -> int:
    path = Path(args.path)
    kind = args.kind or _infer_kind(path)
    text = _read_text(path)
    if kind == "deck":
        load_deck(text)
    elif kind == "program":
        wollyscript.parse(text)
    else:
        parse_maze(text)
    print("OK")
    return EXIT_OK


# --- replay ------------------------------------------------------------------

def cmd_replay(args) -> int:
    data = json.loads(_read_text(args.events))
    items = data["events"] if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise WollyError("event log must be a json array or {\"events\": [...]}")
    for obj in items:
        event = protocol.event_from_obj(obj)
        print(render_event(protocol.event_to_obj(event)))
    return EXIT_OK


# --- wiring ------------------------------------------------------------------

def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wolly", description="Wolly robot simulator")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--port", type=int, help="listen port (env WOLLY_PORT wins)")
    p.add_argument("--maze", help="maze file")
    p.add_argument("--deck", help="taboo deck file")
    p.add_argument("--logical-clock", action="store_true", help="time advances only via /clock/advance")
    p.add_argument("--ui", help="directory of static files to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("run", help="execute a program file against a maze")
    p.add_argument("program", help="program file")
    p.add_argument("--maze", help="maze file (default: the bundled maze)")
    p.add_argument("--step-limit", type=int, default=wollyscript.DEFAULT_STEP_LIMIT)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("taboo", help="play the guessing game in the terminal")
    p.add_argument("--deck", help="deck file (default: the bundled deck)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--think-ms", type=int, default=taboo.DEFAULT_THINK_WINDOW_MS)
    p.set_defaults(func=cmd_taboo)

    p = sub.add_parser("validate", help="check a deck, maze, or program file")
    p.add_argument("path")
    p.add_argument("--kind", choices=["deck", "maze", "program"])
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("replay", help="render an exported event log")
    p.add_argument("events", help="json file: {\"events\": [...]} or a bare array")
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WollyError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_CONTENT
    except (ValueError, KeyError) as exc:
        print(f"error [invalid_content]: {exc}", file=sys.stderr)
        return EXIT_CONTENT
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
