"""Exception hierarchy shared by all robot modules.

Every error that can cross the HTTP boundary carries a stable snake_case
``code`` so the server can map it to a status and a wire body without
string-matching messages.
"""

from __future__ import annotations


class WollyError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class InvalidAngle(WollyError):
    code = "invalid_angle"


class InvalidParameter(WollyError):
    code = "invalid_parameter"


class MazeSyntaxError(WollyError):
    """Malformed maze text. ``line`` and ``col`` are 1-based."""

    code = "maze_syntax_error"

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class MazeSemanticError(WollyError):
    """Well-formed maze text that violates a board constraint."""

    code = "maze_semantic_error"


class WallCollision(WollyError):
    """A forward move into a blocked or out-of-bounds cell. The pose the
    move was attempted from is left untouched by the caller contract."""

    code = "wall_collision"

    def __init__(self, col: int, row: int):
        super().__init__(f"blocked at cell ({col},{row})")
        self.col = col
        self.row = row


class ProgramSyntaxError(WollyError):
    """Parse failure in program text. ``line`` and ``col`` are 1-based."""

    code = "syntax_error"

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class LimitError(WollyError):
    """A structural limit was exceeded (repeat count, nesting depth,
    expansion size, say-text length)."""

    code = "limit_exceeded"


class FormatError(WollyError):
    """Deck file is not the documented JSON shape."""

    code = "format_error"


class CardError(WollyError):
    """A single card violates the deck constraints."""

    code = "card_error"

    def __init__(self, word: str, reason: str):
        super().__init__(f"card {word!r}: {reason}")
        self.word = word
        self.reason = reason


class NotListening(WollyError):
    """A guess arrived while the robot is not accepting guesses
    (before the beep, or outside a round)."""

    code = "not_listening"


class InvalidPhase(WollyError):
    code = "invalid_phase"


class InvalidAnswer(WollyError):
    code = "invalid_answer"


class SchemaError(WollyError):
    """Request body failed validation against a command schema."""

    code = "schema_error"

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class UnknownEndpoint(WollyError):
    code = "unknown_endpoint"
