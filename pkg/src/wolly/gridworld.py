"""Discrete maze world the movement programs run in.

Turns are robot-relative: LEFT/RIGHT rotate the robot's own heading, not
the viewer's, which is exactly the orientation skill the puzzles train.
Row 0 is the top text row, so North decreases the row index.

Maze text format (UTF-8, LF or CRLF, trailing whitespace ignored)::

    3x1 E
    S.G

Header is ``<width>x<height> <heading letter N|E|S|W>``, then ``height``
rows of ``width`` cells: ``.`` free, ``#`` wall, ``S`` start (exactly one),
``G`` goal (exactly one).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import MazeSemanticError, MazeSyntaxError, WallCollision


class GridHeading(Enum):
    NORTH = "north"
    EAST = "east"
    SOUTH = "south"
    WEST = "west"

    @property
    def delta(self) -> tuple[int, int]:
        """(dcol, drow) of one forward cell; row 0 is the top row."""
        return _DELTAS[self]

    @property
    def letter(self) -> str:
        return self.name[0]

    def turned_left(self) -> "GridHeading":
        return _LEFT_OF[self]

    def turned_right(self) -> "GridHeading":
        return _RIGHT_OF[self]


_DELTAS = {
    GridHeading.NORTH: (0, -1),
    GridHeading.EAST: (1, 0),
    GridHeading.SOUTH: (0, 1),
    GridHeading.WEST: (-1, 0),
}
# Counter-clockwise on screen: E -> N -> W -> S -> E
_LEFT_OF = {
    GridHeading.EAST: GridHeading.NORTH,
    GridHeading.NORTH: GridHeading.WEST,
    GridHeading.WEST: GridHeading.SOUTH,
    GridHeading.SOUTH: GridHeading.EAST,
}
_RIGHT_OF = {left: heading for heading, left in _LEFT_OF.items()}

_HEADING_LETTERS = {h.letter: h for h in GridHeading}


class Action(Enum):
    MOVE_FORWARD = "move_forward"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"


@dataclass(frozen=True)
class GridPose:
    col: int
    row: int
    heading: GridHeading


@dataclass(frozen=True)
class Maze:
    width: int
    height: int
    blocked: frozenset[tuple[int, int]]
    start: GridPose
    goal: tuple[int, int]

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise MazeSemanticError("maze must be at least 1x1")
        for label, (col, row) in (("start", (self.start.col, self.start.row)), ("goal", self.goal)):
            if not self.in_bounds(col, row):
                raise MazeSemanticError(f"{label} cell ({col},{row}) out of bounds")
            if (col, row) in self.blocked:
                raise MazeSemanticError(f"{label} cell ({col},{row}) is a wall")

    def in_bounds(self, col: int, row: int) -> bool:
        return 0 <= col < self.width and 0 <= row < self.height

    def is_free(self, col: int, row: int) -> bool:
        return self.in_bounds(col, row) and (col, row) not in self.blocked


def parse_maze(text: str) -> Maze:
    if not text.strip():
        raise MazeSyntaxError(1, 1, "empty maze text")
    lines = text.replace("\r\n", "\n").split("\n")
    header = lines[0].rstrip()
    parts = header.split()
    if len(parts) != 2:
        raise MazeSyntaxError(1, 1, "header must be '<W>x<H> <heading letter>'")
    size, letter = parts
    if "x" not in size:
        raise MazeSyntaxError(1, 1, f"bad size {size!r}, expected '<W>x<H>'")
    w_text, _, h_text = size.partition("x")
    if not (w_text.isdigit() and h_text.isdigit()):
        raise MazeSyntaxError(1, 1, f"bad size {size!r}, expected '<W>x<H>'")
    width, height = int(w_text), int(h_text)
    if width < 1 or height < 1:
        raise MazeSyntaxError(1, 1, "width and height must be >= 1")
    if letter.upper() not in _HEADING_LETTERS:
        raise MazeSyntaxError(1, len(size) + 2, f"bad heading letter {letter!r}")
    heading = _HEADING_LETTERS[letter.upper()]

    rows = [line.rstrip() for line in lines[1:]]
    while rows and rows[-1] == "":
        rows.pop()
    if len(rows) != height:
        raise MazeSyntaxError(len(rows) + 2, 1, f"expected {height} rows, got {len(rows)}")

    blocked: set[tuple[int, int]] = set()
    start_cell: tuple[int, int] | None = None
    goal_cell: tuple[int, int] | None = None
    for row, line in enumerate(rows):
        if len(line) != width:
            raise MazeSyntaxError(row + 2, len(line) + 1, f"row must be {width} cells, got {len(line)}")
        for col, ch in enumerate(line):
            if ch == "#":
                blocked.add((col, row))
            elif ch == "S":
                if start_cell is not None:
                    raise MazeSemanticError(f"duplicate start at ({col},{row})")
                start_cell = (col, row)
            elif ch == "G":
                if goal_cell is not None:
                    raise MazeSemanticError(f"duplicate goal at ({col},{row})")
                goal_cell = (col, row)
            elif ch != ".":
                raise MazeSyntaxError(row + 2, col + 1, f"unknown cell character {ch!r}")
    if start_cell is None:
        raise MazeSemanticError("missing start cell 'S'")
    if goal_cell is None:
        raise MazeSemanticError("missing goal cell 'G'")

    return Maze(
        width=width,
        height=height,
        blocked=frozenset(blocked),
        start=GridPose(start_cell[0], start_cell[1], heading),
        goal=goal_cell,
    )


def apply_action(pose: GridPose, action: Action, maze: Maze) -> GridPose:
    """One robot-relative action. Raises WallCollision (pose untouched)
    when a forward move targets a wall or leaves the board."""
    if action is Action.TURN_LEFT:
        return GridPose(pose.col, pose.row, pose.heading.turned_left())
    if action is Action.TURN_RIGHT:
        return GridPose(pose.col, pose.row, pose.heading.turned_right())
    dcol, drow = pose.heading.delta
    col, row = pose.col + dcol, pose.row + drow
    if not maze.is_free(col, row):
        raise WallCollision(col, row)
    return GridPose(col, row, pose.heading)


def at_goal(pose: GridPose, maze: Maze) -> bool:
    return (pose.col, pose.row) == maze.goal
