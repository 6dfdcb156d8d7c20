"""Wire representation: commands in, an append-only event stream out.

Every observable thing the robot does becomes an Event with a dense,
strictly increasing ``seq`` and a session-relative millisecond timestamp.
Encoding is canonical - fixed key order, no insignificant whitespace - so
identical sessions serialize to identical bytes and transcripts can be
compared byte-for-byte.

Request bodies are validated against closed schemas: unknown fields,
wrong types, and out-of-range values are rejected loudly rather than
ignored.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from .errors import SchemaError, UnknownEndpoint

API_PREFIX = "/api/v1"

EVENT_KINDS = (
    "rule_explanation",
    "clue",
    "beep",
    "speech",
    "emotion_changed",
    "pose_changed",
    "program_step",
    "game_over",
    "feedback_received",
)

# Canonical payload key order per kind. Encoding emits exactly these keys.
PAYLOAD_FIELDS: dict[str, tuple[str, ...]] = {
    "rule_explanation": ("key", "text"),
    "clue": ("index", "text"),
    "beep": (),
    "speech": ("key", "text"),
    "emotion_changed": ("emotion",),
    "pose_changed": ("pose", "grid_pose"),
    "program_step": ("program_id", "index", "statement", "grid_pose"),
    "game_over": ("won", "word"),
    "feedback_received": ("rating",),
}


@dataclass(frozen=True)
class EventBody:
    """An event before it is stamped into the log: kind plus payload."""

    kind: str
    payload: Mapping[str, Any]

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise SchemaError("kind", f"unknown event kind {self.kind!r}")
        expected = PAYLOAD_FIELDS[self.kind]
        got = tuple(self.payload.keys())
        if sorted(got) != sorted(expected):
            raise SchemaError("payload", f"{self.kind} payload must have fields {expected}, got {got}")


@dataclass(frozen=True)
class Event:
    seq: int
    ts: int
    kind: str
    payload: Mapping[str, Any]

    def body(self) -> EventBody:
        return EventBody(self.kind, self.payload)


def dumps_canonical(obj: Any) -> str:
    """JSON with no insignificant whitespace, preserving key order."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def event_to_obj(event: Event) -> dict:
    """Plain dict with keys in the canonical order."""
    payload = {name: event.payload[name] for name in PAYLOAD_FIELDS[event.kind]}
    return {"seq": event.seq, "ts": event.ts, "kind": event.kind, "payload": payload}


def encode_event(event: Event) -> bytes:
    return dumps_canonical(event_to_obj(event)).encode("utf-8")


def decode_event(data: bytes | str) -> Event:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except ValueError as exc:
        raise SchemaError("event", f"invalid json: {exc}")
    return event_from_obj(obj)


def event_from_obj(obj: Any) -> Event:
    if not isinstance(obj, dict):
        raise SchemaError("event", "must be an object")
    for name in ("seq", "ts", "kind", "payload"):
        if name not in obj:
            raise SchemaError(name, "required")
    extras = set(obj) - {"seq", "ts", "kind", "payload"}
    if extras:
        raise SchemaError(sorted(extras)[0], "unknown field")
    seq, ts, kind, payload = obj["seq"], obj["ts"], obj["kind"], obj["payload"]
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 1:
        raise SchemaError("seq", "must be an integer >= 1")
    if not isinstance(ts, int) or isinstance(ts, bool) or ts < 0:
        raise SchemaError("ts", "must be an integer >= 0")
    if kind not in EVENT_KINDS:
        raise SchemaError("kind", f"unknown event kind {kind!r}")
    if not isinstance(payload, dict):
        raise SchemaError("payload", "must be an object")
    body = EventBody(kind, payload)  # checks the field set
    return Event(seq=seq, ts=ts, kind=body.kind, payload=dict(payload))


class EventLog:
    """Append-only session log: one writer at a time, any number of
    readers, dense seq starting at 1, monotone non-decreasing ts."""

    def __init__(self):
        self._events: list[Event] = []
        self._lock = threading.Lock()

    def append(self, body: EventBody, ts: int) -> Event:
        with self._lock:
            if self._events and ts < self._events[-1].ts:
                ts = self._events[-1].ts
            event = Event(seq=len(self._events) + 1, ts=ts, kind=body.kind, payload=dict(body.payload))
            self._events.append(event)
            return event

    def append_all(self, bodies: Iterable[EventBody], ts: int) -> list[Event]:
        return [self.append(body, ts) for body in bodies]

    def events_since(self, since: int) -> list[Event]:
        if since < 0:
            raise SchemaError("since", "must be >= 0")
        with self._lock:
            snapshot = self._events[since:] if since <= len(self._events) else []
        return list(snapshot)

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)


# --- Command schemas -------------------------------------------------------

@dataclass(frozen=True)
class CommandEnvelope:
    """A validated request: which endpoint, with what body and path params."""

    endpoint: str  # schema key, e.g. "move" or "program_run"
    method: str
    body: Mapping[str, Any]
    params: Mapping[str, Any] = field(default_factory=dict)


def _string(max_len: int | None = None, non_empty: bool = False) -> Callable[[str, Any], Any]:
    def check(field_name: str, value: Any) -> str:
        if not isinstance(value, str):
            raise SchemaError(field_name, "must be a string")
        if non_empty and not value.strip():
            raise SchemaError(field_name, "must not be empty")
        if max_len is not None and len(value) > max_len:
            raise SchemaError(field_name, f"longer than {max_len} characters")
        return value

    return check


def _integer(lo: int | None = None, hi: int | None = None) -> Callable[[str, Any], Any]:
    def check(field_name: str, value: Any) -> int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError(field_name, "must be an integer")
        if lo is not None and value < lo:
            raise SchemaError(field_name, f"must be >= {lo}")
        if hi is not None and value > hi:
            raise SchemaError(field_name, f"must be <= {hi}")
        return value

    return check


def _number(field_name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(field_name, "must be a number")
    value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise SchemaError(field_name, "must be finite")
    return value


def _enum(*allowed: str) -> Callable[[str, Any], Any]:
    def check(field_name: str, value: Any) -> str:
        if value not in allowed:
            raise SchemaError(field_name, f"must be one of {', '.join(allowed)}")
        return value

    return check


# endpoint key -> (method, path regex, {field: (required, validator)})
_ROUTES: dict[str, tuple[str, re.Pattern, dict[str, tuple[bool, Callable[[str, Any], Any]]]]] = {
    "move": ("POST", re.compile(r"^/move$"), {"cmd": (True, _enum("forward", "left", "right"))}),
    "drive": (
        "POST",
        re.compile(r"^/drive$"),
        {
            "left": (True, _number),
            "right": (True, _number),
            "duration_ms": (True, _integer(1, 60_000)),
        },
    ),
    "state": ("GET", re.compile(r"^/state$"), {}),
    "program": ("POST", re.compile(r"^/program$"), {"source": (True, _string(max_len=65_536))}),
    "program_run": ("POST", re.compile(r"^/program/(?P<program_id>\d+)/run$"), {}),
    "program_step": ("POST", re.compile(r"^/program/(?P<program_id>\d+)/step$"), {}),
    "taboo_start": ("POST", re.compile(r"^/taboo/start$"), {"seed": (False, _integer())}),
    "taboo_guess": ("POST", re.compile(r"^/taboo/guess$"), {"word": (True, _string(max_len=200, non_empty=True))}),
    "taboo_replay": ("POST", re.compile(r"^/taboo/replay$"), {"answer": (True, _enum("yes", "no"))}),
    "taboo_state": ("GET", re.compile(r"^/taboo/state$"), {}),
    "feedback": ("POST", re.compile(r"^/feedback$"), {"rating": (True, _integer(1, 5))}),
    "feedback_summary": ("GET", re.compile(r"^/feedback/summary$"), {}),
    "events": ("GET", re.compile(r"^/events$"), {"since": (False, _integer(0))}),
    "clock_advance": ("POST", re.compile(r"^/clock/advance$"), {"ms": (True, _integer(0, 10**9))}),
}


def decode_command(
    method: str,
    path: str,
    body: bytes | str | None,
    query: Mapping[str, Any] | None = None,
) -> CommandEnvelope:
    """Match path + method against the route table and validate the body.

    GET endpoints take their fields from ``query`` instead of the body.
    Raises UnknownEndpoint for unroutable paths and SchemaError for any
    body problem, including unknown fields.
    """
    if not path.startswith(API_PREFIX):
        raise UnknownEndpoint(f"no such endpoint: {path}")
    rel = path[len(API_PREFIX):] or "/"

    matched = None
    for endpoint, (want_method, pattern, fields) in _ROUTES.items():
        m = pattern.match(rel)
        if m:
            matched = (endpoint, want_method, fields, m)
            break
    if matched is None:
        raise UnknownEndpoint(f"no such endpoint: {path}")
    endpoint, want_method, fields, m = matched
    if method.upper() != want_method:
        raise UnknownEndpoint(f"{path} does not accept {method.upper()}")

    if want_method == "GET":
        raw = dict(query or {})
        # query values arrive as strings; coerce digits for integer checks
        for key, value in list(raw.items()):
            if isinstance(value, str) and re.fullmatch(r"-?\d+", value):
                raw[key] = int(value)
    else:
        if body is None or (isinstance(body, (bytes, str)) and not body):
            raw = {}
        else:
            if isinstance(body, bytes):
                try:
                    body = body.decode("utf-8")
                except UnicodeDecodeError:
                    raise SchemaError("body", "must be UTF-8")
            try:
                raw = json.loads(body)
            except ValueError as exc:
                raise SchemaError("body", f"invalid json: {exc}")
            if not isinstance(raw, dict):
                raise SchemaError("body", "must be a json object")

    for name in raw:
        if name not in fields:
            raise SchemaError(name, "unknown field")
    validated: dict[str, Any] = {}
    for name, (required, validator) in fields.items():
        if name not in raw:
            if required:
                raise SchemaError(name, "required")
            continue
        validated[name] = validator(name, raw[name])

    params = {key: int(value) for key, value in m.groupdict().items()}
    return CommandEnvelope(endpoint=endpoint, method=want_method, body=validated, params=params)


def events_since(log: EventLog, since: int) -> list[Event]:
    """All events with seq > since, oldest first. Same arguments always
    return the same list: the log is append-only."""
    return log.events_since(since)
