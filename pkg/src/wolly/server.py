"""HTTP service owning one robot session.

All mutating commands funnel through one lock, so the event log is always
SOME sequential ordering of the requests. Time is injectable: in logical
mode it advances only via POST /api/v1/clock/advance, which makes the 20 s
think window testable; in wall mode a background ticker fires the beep.

The continuous pose and the grid pose live side by side: /drive moves the
continuous pose freely, while grid commands (/move, program runs) move the
grid pose and snap the continuous pose onto the cell-center mapping
(x = col * cell_size, y = -row * cell_size, heading from the compass).
"""

from __future__ import annotations

import json
import logging
import math
import mimetypes
import os
import threading
import time
from dataclasses import dataclass, fields, replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources
from pathlib import Path
from typing import Any
from urllib.parse import parse_qs, urlsplit

from . import kinematics, protocol, taboo, wollyscript
from .emotion import DEFAULT_EMOTION, EmotionState, face_for
from .errors import (
    InvalidAngle,
    InvalidAnswer,
    InvalidParameter,
    InvalidPhase,
    LimitError,
    NotListening,
    ProgramSyntaxError,
    SchemaError,
    UnknownEndpoint,
    WallCollision,
    WollyError,
)
from .gridworld import Action, GridHeading, GridPose, Maze, apply_action, parse_maze
from .kinematics import Pose, WheelSpeeds
from .protocol import CommandEnvelope, Event, EventBody, EventLog
from .taboo import Deck, load_deck

log = logging.getLogger("wolly.server")

DEFAULT_PORT = 8377
DEFAULT_CELL_SIZE = 0.5  # meters of continuous travel per grid cell
TICK_INTERVAL_S = 0.05  # wall-mode taboo ticker, 20 Hz

_STATUS_OF = {
    WallCollision: 409,
    NotListening: 409,
    InvalidPhase: 409,
    ProgramSyntaxError: 400,
    LimitError: 400,
    SchemaError: 400,
    InvalidParameter: 400,
    InvalidAngle: 400,
    InvalidAnswer: 400,
    UnknownEndpoint: 404,
}

_THETA_OF_HEADING = {
    GridHeading.EAST: 0.0,
    GridHeading.NORTH: math.pi / 2,
    GridHeading.WEST: math.pi,
    GridHeading.SOUTH: 3 * math.pi / 2,
}


# --- Clocks ----------------------------------------------------------------

class WallClock:
    """Monotonic milliseconds since session start."""

    def __init__(self):
        self._zero = time.monotonic()

    def now_ms(self) -> int:
        return int((time.monotonic() - self._zero) * 1000)


class LogicalClock:
    """Time that moves only when told to."""

    def __init__(self):
        self._now = 0

    def now_ms(self) -> int:
        return self._now

    def advance(self, ms: int) -> int:
        self._now += ms
        return self._now


# --- Config ----------------------------------------------------------------

@dataclass(frozen=True)
class ServerConfig:
    port: int = DEFAULT_PORT
    maze: str | None = None  # path; packaged default when None
    deck: str | None = None
    track_width: float = kinematics.DEFAULT_TRACK_WIDTH
    cell_size: float = DEFAULT_CELL_SIZE
    v_max: float = kinematics.DEFAULT_V_MAX
    think_window_ms: int = taboo.DEFAULT_THINK_WINDOW_MS
    step_limit: int = wollyscript.DEFAULT_STEP_LIMIT
    seed: int = 0
    logical_clock: bool = False


def load_config(path: str | os.PathLike) -> ServerConfig:
    """Read a JSON config file; unknown keys are rejected."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise InvalidParameter(f"config is not valid json: {exc}")
    if not isinstance(data, dict):
        raise InvalidParameter("config must be a json object")
    known = {f.name for f in fields(ServerConfig)}
    for key in data:
        if key not in known:
            raise InvalidParameter(f"unknown config key {key!r}")
    return replace(ServerConfig(), **data)


def apply_port_env(config: ServerConfig) -> ServerConfig:
    """WOLLY_PORT beats every other port source."""
    raw = os.environ.get("WOLLY_PORT")
    if raw is None:
        return config
    if not raw.isdigit():
        raise InvalidParameter(f"WOLLY_PORT must be an integer, got {raw!r}")
    return replace(config, port=int(raw))


def packaged_text(name: str) -> str:
    return resources.files("wolly.data").joinpath(name).read_text(encoding="utf-8")


def load_content(config: ServerConfig) -> tuple[Maze, Deck]:
    maze_text = Path(config.maze).read_text(encoding="utf-8") if config.maze else packaged_text("maze.txt")
    deck_text = Path(config.deck).read_text(encoding="utf-8") if config.deck else packaged_text("deck.json")
    return parse_maze(maze_text), load_deck(deck_text)


# --- Session ---------------------------------------------------------------

def pose_to_wire(pose: Pose) -> dict:
    return {"x": pose.x, "y": pose.y, "theta": pose.theta}


def grid_pose_to_wire(pose: GridPose) -> dict:
    return {"col": pose.col, "row": pose.row, "heading": pose.heading.value}


@dataclass
class _Stepper:
    """Single-stepping cursor over a precomputed execution trace."""

    trace: wollyscript.ExecutionTrace
    next_index: int = 0

    @property
    def done(self) -> bool:
        return self.next_index >= len(self.trace.steps)


class RobotSession:
    """One robot: poses, programs, the running game, feedback, and the
    event log. ``handle`` is the single entry point for commands."""

    def __init__(self, config: ServerConfig, maze: Maze, deck: Deck, clock):
        self.config = config
        self.maze = maze
        self.deck = deck
        self.clock = clock
        self.grid_pose: GridPose = maze.start
        self.pose: Pose = self._snap_to_grid(maze.start)
        self.emotion: EmotionState = DEFAULT_EMOTION
        self.programs: dict[int, wollyscript.Program] = {}
        self.steppers: dict[int, _Stepper] = {}
        self.taboo_state: taboo.TabooGameState | None = None
        self.feedback_counts = [0, 0, 0, 0, 0]
        self.event_log = EventLog()
        self._lock = threading.RLock()

    # mapping from grid cells to the continuous plane
    def _snap_to_grid(self, grid_pose: GridPose) -> Pose:
        return Pose(
            grid_pose.col * self.config.cell_size,
            -grid_pose.row * self.config.cell_size,
            _THETA_OF_HEADING[grid_pose.heading],
        )

    def _append(self, body: EventBody) -> Event:
        if body.kind == "emotion_changed":
            self.emotion = EmotionState(body.payload["emotion"])
        return self.event_log.append(body, self.clock.now_ms())

    def _append_all(self, bodies: list[EventBody]) -> None:
        for body in bodies:
            self._append(body)

    def handle(self, env: CommandEnvelope) -> tuple[int, dict]:
        """Dispatch one validated command; returns (http status, body)."""
        with self._lock:
            handler = getattr(self, f"_handle_{env.endpoint}")
            return handler(env)

    def tick_taboo(self) -> None:
        """Fire the beep when the think window has elapsed."""
        with self._lock:
            if self.taboo_state is None:
                return
            new_state, events = taboo.tick(self.taboo_state, self.clock.now_ms())
            self.taboo_state = new_state
            self._append_all(events)

    # -- drive and state

    def _pose_body(self) -> dict:
        return {"pose": pose_to_wire(self.pose), "grid_pose": grid_pose_to_wire(self.grid_pose)}

    def _handle_move(self, env: CommandEnvelope) -> tuple[int, dict]:
        action = {
            "forward": Action.MOVE_FORWARD,
            "left": Action.TURN_LEFT,
            "right": Action.TURN_RIGHT,
        }[env.body["cmd"]]
        self.grid_pose = apply_action(self.grid_pose, action, self.maze)
        self.pose = self._snap_to_grid(self.grid_pose)
        self._append(EventBody("pose_changed", self._pose_body()))
        return 200, self._pose_body()

    def _handle_drive(self, env: CommandEnvelope) -> tuple[int, dict]:
        wheels = WheelSpeeds(env.body["left"], env.body["right"])
        dt = env.body["duration_ms"] / 1000.0
        self.pose = kinematics.step(
            self.pose, wheels, self.config.track_width, dt, v_max=self.config.v_max
        )
        self._append(EventBody("pose_changed", self._pose_body()))
        return 200, self._pose_body()

    def _handle_state(self, env: CommandEnvelope) -> tuple[int, dict]:
        body = self._pose_body()
        body["emotion"] = self.emotion.value
        body["face"] = face_for(self.emotion).to_wire()
        return 200, body

    # -- programs

    def _handle_program(self, env: CommandEnvelope) -> tuple[int, dict]:
        program = wollyscript.parse(env.body["source"])
        program_id = len(self.programs) + 1
        self.programs[program_id] = program
        return 201, {"program_id": program_id}

    def _get_program(self, env: CommandEnvelope) -> tuple[int, wollyscript.Program] | None:
        program_id = env.params["program_id"]
        program = self.programs.get(program_id)
        if program is None:
            return None
        return program_id, program

    def _program_step_events(self, program_id: int, step: wollyscript.TraceStep, pose: GridPose) -> list[EventBody]:
        events = [
            EventBody(
                "program_step",
                {
                    "program_id": program_id,
                    "index": step.index,
                    "statement": wollyscript.statement_name(step.statement),
                    "grid_pose": grid_pose_to_wire(pose),
                },
            )
        ]
        if step.event is not None:
            events.append(step.event)
        return events

    def _handle_program_run(self, env: CommandEnvelope) -> tuple[int, dict]:
        found = self._get_program(env)
        if found is None:
            return 404, {"error": "unknown_program", "message": f"no program {env.params['program_id']}"}
        program_id, program = found
        trace = wollyscript.execute(program, self.maze, self.config.step_limit)
        pose = self.maze.start
        for step in trace.steps:
            if step.pose is not None:
                pose = step.pose
            self._append_all(self._program_step_events(program_id, step, pose))
        self.grid_pose = trace.final_pose
        self.pose = self._snap_to_grid(self.grid_pose)
        self.steppers.pop(program_id, None)
        return 200, {"outcome": trace.outcome.value, "steps": len(trace.steps)}

    def _handle_program_step(self, env: CommandEnvelope) -> tuple[int, dict]:
        found = self._get_program(env)
        if found is None:
            return 404, {"error": "unknown_program", "message": f"no program {env.params['program_id']}"}
        program_id, program = found
        stepper = self.steppers.get(program_id)
        if stepper is None:
            stepper = _Stepper(wollyscript.execute(program, self.maze, self.config.step_limit))
            self.steppers[program_id] = stepper
            self.grid_pose = self.maze.start
            self.pose = self._snap_to_grid(self.grid_pose)
        if stepper.done:
            return 200, {"step": None, "done": True, "outcome": stepper.trace.outcome.value}
        step = stepper.trace.steps[stepper.next_index]
        stepper.next_index += 1
        if step.pose is not None:
            self.grid_pose = step.pose
            self.pose = self._snap_to_grid(self.grid_pose)
        self._append_all(self._program_step_events(program_id, step, self.grid_pose))
        done = stepper.done
        body: dict[str, Any] = {
            "step": {
                "index": step.index,
                "statement": wollyscript.statement_name(step.statement),
                "grid_pose": grid_pose_to_wire(self.grid_pose),
            },
            "done": done,
        }
        body["outcome"] = stepper.trace.outcome.value if done else None
        return 200, body

    # -- taboo

    def _handle_taboo_start(self, env: CommandEnvelope) -> tuple[int, dict]:
        seed = env.body.get("seed", self.config.seed)
        state, events = taboo.start_game(
            self.deck, seed, self.clock.now_ms(), self.config.think_window_ms
        )
        self.taboo_state = state
        self._append_all(events)
        return 200, taboo.state_to_wire(state)

    def _handle_taboo_guess(self, env: CommandEnvelope) -> tuple[int, dict]:
        if self.taboo_state is None:
            raise InvalidPhase("no game in progress; start one first")
        now = self.clock.now_ms()
        state, tick_events = taboo.tick(self.taboo_state, now)
        self.taboo_state = state
        self._append_all(tick_events)
        state, events = taboo.submit_guess(state, env.body["word"], now)
        self.taboo_state = state
        self._append_all(events)
        return 200, taboo.state_to_wire(state)

    def _handle_taboo_replay(self, env: CommandEnvelope) -> tuple[int, dict]:
        if self.taboo_state is None:
            raise InvalidPhase("no game in progress; start one first")
        state, events = taboo.answer_replay(self.taboo_state, env.body["answer"], self.clock.now_ms())
        self.taboo_state = state
        self._append_all(events)
        return 200, taboo.state_to_wire(state)

    def _handle_taboo_state(self, env: CommandEnvelope) -> tuple[int, dict]:
        if self.taboo_state is None:
            return 404, {"error": "no_game", "message": "start a game first"}
        return 200, taboo.state_to_wire(self.taboo_state)

    # -- feedback (five-smiley scale, 1..5)

    def _handle_feedback(self, env: CommandEnvelope) -> tuple[int, dict]:
        rating = env.body["rating"]
        self.feedback_counts[rating - 1] += 1
        self._append(EventBody("feedback_received", {"rating": rating}))
        return 201, {"rating": rating}

    def _handle_feedback_summary(self, env: CommandEnvelope) -> tuple[int, dict]:
        return 200, {"counts": list(self.feedback_counts), "total": sum(self.feedback_counts)}

    # -- events and clock

    def _handle_events(self, env: CommandEnvelope) -> tuple[int, dict]:
        since = env.body.get("since", 0)
        events = protocol.events_since(self.event_log, since)
        return 200, {"events": [protocol.event_to_obj(e) for e in events]}

    def _handle_clock_advance(self, env: CommandEnvelope) -> tuple[int, dict]:
        if not isinstance(self.clock, LogicalClock):
            raise UnknownEndpoint("/clock/advance is only available with --logical-clock")
        now = self.clock.advance(env.body["ms"])
        if self.taboo_state is not None:
            state, events = taboo.tick(self.taboo_state, now)
            self.taboo_state = state
            self._append_all(events)
        return 200, {"now_ms": now}


def error_body(exc: WollyError) -> dict:
    body: dict[str, Any] = {"error": exc.code, "message": str(exc)}
    if isinstance(exc, ProgramSyntaxError):
        body["line"] = exc.line
        body["col"] = exc.col
    if isinstance(exc, SchemaError):
        body["field"] = exc.field
        body["reason"] = exc.reason
    if isinstance(exc, WallCollision):
        body["col"] = exc.col
        body["row"] = exc.row
    return body


def handle_request(
    session: RobotSession,
    method: str,
    path: str,
    body: bytes | None,
    query: dict[str, str] | None = None,
) -> tuple[int, dict]:
    """Full request handling minus the socket: decode, dispatch, map
    errors to statuses. Every input gets a response; nothing propagates."""
    try:
        env = protocol.decode_command(method, path, body, query)
        return session.handle(env)
    except WollyError as exc:
        status = _STATUS_OF.get(type(exc), 400)
        return status, error_body(exc)
    except Exception:  # noqa: BLE001 - totality at the boundary
        log.exception("unhandled error for %s %s", method, path)
        return 500, {"error": "internal", "message": "internal server error"}


# --- HTTP layer -------------------------------------------------------------

class _RequestHandler(BaseHTTPRequestHandler):
    server_version = "Wolly/0.1"
    protocol_version = "HTTP/1.1"

    def _respond(self, status: int, payload: bytes, content_type: str = "application/json"):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def _dispatch(self, method: str):
        url = urlsplit(self.path)
        if method == "GET" and not url.path.startswith(protocol.API_PREFIX):
            self._serve_static(url.path)
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}
        status, obj = handle_request(self.server.session, method, url.path, body, query)
        self._respond(status, protocol.dumps_canonical(obj).encode("utf-8"))

    def _serve_static(self, path: str):
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            self._respond(404, protocol.dumps_canonical({"error": "unknown_endpoint", "message": "no ui configured"}).encode("utf-8"))
            return
        rel = path.lstrip("/") or "index.html"
        target = (ui_dir / rel).resolve()
        if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
            self._respond(404, protocol.dumps_canonical({"error": "unknown_endpoint", "message": "not found"}).encode("utf-8"))
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._respond(200, target.read_bytes(), content_type)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")

    def do_DELETE(self):
        self._dispatch("DELETE")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        log.debug("%s - %s", self.address_string(), format % args)


class WollyServer:
    """Composes the session, the HTTP server, and the wall-mode ticker."""

    def __init__(self, config: ServerConfig, ui_dir: str | os.PathLike | None = None):
        maze, deck = load_content(config)
        self.config = config
        self.clock = LogicalClock() if config.logical_clock else WallClock()
        self.session = RobotSession(config, maze, deck, self.clock)
        self.httpd = ThreadingHTTPServer(("", config.port), _RequestHandler)
        self.httpd.daemon_threads = True
        self.httpd.session = self.session
        self.httpd.ui_dir = Path(ui_dir) if ui_dir else None
        self._ticker: threading.Thread | None = None
        self._stop = threading.Event()

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start(self):
        if not self.config.logical_clock:
            self._ticker = threading.Thread(target=self._tick_loop, daemon=True)
            self._ticker.start()
        threading.Thread(target=self.httpd.serve_forever, daemon=True).start()

    def serve_forever(self):
        self.start()
        try:
            self._stop.wait()
        except KeyboardInterrupt:
            pass
        finally:
            self.shutdown()

    def _tick_loop(self):
        while not self._stop.wait(TICK_INTERVAL_S):
            self.session.tick_taboo()

    def shutdown(self):
        self._stop.set()
        self.httpd.shutdown()
        self.httpd.server_close()
