"""Maze world, wall-following reference FSM and closed-loop driver.

Maze text format: one character per cell, ``#`` wall, ``.`` open, ``S``
start, ``E`` exit.  Everything outside the grid counts as wall.  Rows run
top to bottom, so UP decreases the row index.  Sensors are fixed to the
absolute sides of the robot: SENSOR_LEFT looks west, SENSOR_FRONT north,
SENSOR_RIGHT east and SENSOR_BACK south.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from pathlib import Path

from mdlc.runtime.device import from_bits, to_bits

DIRECTIONS = ("LEFT", "UP", "RIGHT", "DOWN")
DEFAULT_CODES = {"LEFT": 0, "UP": 1, "RIGHT": 2, "DOWN": 3}
STEP = {"LEFT": (-1, 0), "UP": (0, -1), "RIGHT": (1, 0), "DOWN": (0, 1)}
SENSOR_OF = {"LEFT": "SENSOR_LEFT", "UP": "SENSOR_FRONT", "RIGHT": "SENSOR_RIGHT", "DOWN": "SENSOR_BACK"}
ACTUATOR = "MOTION_DIRECTION"

# candidate directions in priority order for each current direction
PRIORITY = {
    "LEFT": ("DOWN", "LEFT", "UP", "RIGHT"),
    "UP": ("LEFT", "UP", "RIGHT", "DOWN"),
    "RIGHT": ("UP", "RIGHT", "DOWN", "LEFT"),
    "DOWN": ("RIGHT", "DOWN", "LEFT", "UP"),
}


class MazeError(ValueError):
    pass


@dataclass
class MazeWorld:
    cells: list[list[bool]]  # True where a wall is
    robot: tuple[int, int]
    exit: tuple[int, int]
    log: list[str] = field(default_factory=list)

    @property
    def width(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    @property
    def height(self) -> int:
        return len(self.cells)

    @classmethod
    def parse(cls, text: str) -> MazeWorld:
        rows = [r.rstrip("\r") for r in text.splitlines() if r.strip()]
        if not rows:
            raise MazeError("empty maze")
        if len({len(r) for r in rows}) != 1:
            raise MazeError("maze rows differ in length")
        start = exit_ = None
        cells = []
        for y, row in enumerate(rows):
            line = []
            for x, ch in enumerate(row):
                if ch not in "#.SE":
                    raise MazeError(f"bad maze character {ch!r} at row {y}, column {x}")
                if ch == "S":
                    if start is not None:
                        raise MazeError("more than one start cell")
                    start = (x, y)
                if ch == "E":
                    if exit_ is not None:
                        raise MazeError("more than one exit cell")
                    exit_ = (x, y)
                line.append(ch == "#")
            cells.append(line)
        if start is None:
            raise MazeError("maze has no start cell")
        return cls(cells, start, exit_ if exit_ is not None else (-1, -1))

    def format(self) -> str:
        out = []
        for y, row in enumerate(self.cells):
            chars = []
            for x, wall in enumerate(row):
                if (x, y) == self.robot:
                    chars.append("S")
                elif (x, y) == self.exit:
                    chars.append("E")
                else:
                    chars.append("#" if wall else ".")
            out.append("".join(chars))
        return "\n".join(out) + "\n"

    def is_wall(self, x: int, y: int) -> bool:
        if not (0 <= x < self.width and 0 <= y < self.height):
            return True
        return self.cells[y][x]

    def walls(self) -> dict[str, int]:
        """Wall bit on each absolute side of the robot."""
        x, y = self.robot
        return {d: int(self.is_wall(x + dx, y + dy)) for d, (dx, dy) in STEP.items()}

    def move(self, direction: str) -> bool:
        """Move one cell; returns False (and stays put) if a wall blocks."""
        dx, dy = STEP[direction]
        x, y = self.robot[0] + dx, self.robot[1] + dy
        if self.is_wall(x, y):
            self.log.append(f"blocked move {direction} at {self.robot}")
            return False
        self.robot = (x, y)
        return True

    @property
    def solved(self) -> bool:
        return self.robot == self.exit


def generate_maze(width: int, height: int, seed: int = 0) -> MazeWorld:
    """Loop-free maze of ``width`` x ``height`` rooms, drawn one character per cell.

    Start in the top-left room, exit through the east border next to the
    bottom-right room.
    """
    if width < 1 or height < 1:
        raise MazeError("maze needs at least one room")
    rng = random.Random(seed)
    W, H = 2 * width + 1, 2 * height + 1
    cells = [[True] * W for _ in range(H)]
    seen = {(0, 0)}
    stack = [(0, 0)]
    cells[1][1] = False
    while stack:
        cx, cy = stack[-1]
        options = [
            (cx + dx, cy + dy)
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
            if 0 <= cx + dx < width and 0 <= cy + dy < height and (cx + dx, cy + dy) not in seen
        ]
        if not options:
            stack.pop()
            continue
        nx, ny = rng.choice(options)
        cells[cy + ny + 1][cx + nx + 1] = False
        cells[2 * ny + 1][2 * nx + 1] = False
        seen.add((nx, ny))
        stack.append((nx, ny))
    exit_ = (W - 1, H - 2)
    cells[exit_[1]][exit_[0]] = False
    return MazeWorld(cells, (1, 1), exit_)


def reference_next(direction: str, walls: dict[str, int]) -> str:
    """Software FSM: first open direction in priority order, else the last one."""
    order = PRIORITY[direction]
    for d in order[:-1]:
        if not walls[d]:
            return d
    return order[-1]


def run_reference(world: MazeWorld, max_steps: int, direction: str = "LEFT") -> list[tuple[int, int]]:
    """Trajectory of cells visited by the reference FSM (start included)."""
    path = [world.robot]
    for _ in range(max_steps):
        if world.solved:
            break
        direction = reference_next(direction, world.walls())
        world.move(direction)
        path.append(world.robot)
    return path


# -- closed loop ----------------------------------------------------------------


def direction_codes(value_map: dict[str, str] | None) -> dict[int, str]:
    """Code -> direction label from an actuator value map (``"0b01": "UP"``)."""
    if not value_map:
        return {c: d for d, c in DEFAULT_CODES.items()}
    out = {}
    for code, label in value_map.items():
        if label.upper() not in STEP:
            raise MazeError(f"actuator label {label!r} is not a direction")
        out[int(code, 0)] = label.upper()
    return out


@dataclass
class MazeStep:
    tick: int
    position: tuple[int, int]  # after the move
    direction: str
    expected: str
    sensors: dict[str, int]
    blocked: bool


@dataclass
class MazeRun:
    steps: list[MazeStep]
    solved: bool
    start: tuple[int, int]

    @property
    def trajectory(self) -> list[tuple[int, int]]:
        return [self.start] + [s.position for s in self.steps]

    @property
    def mismatches(self) -> list[int]:
        return [s.tick for s in self.steps if s.direction != s.expected]

    @property
    def blocked(self) -> list[int]:
        return [s.tick for s in self.steps if s.blocked]

    @property
    def ok(self) -> bool:
        return self.solved and not self.mismatches and not self.blocked

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tick", "x", "y", "direction", "sensors"])
            w.writerow([0, self.start[0], self.start[1], "", ""])
            for s in self.steps:
                bits = "".join(str(s.sensors[d]) for d in ("LEFT", "UP", "RIGHT", "DOWN"))
                w.writerow([s.tick, s.position[0], s.position[1], s.direction, bits])


def sensor_inputs(walls: dict[str, int]) -> dict[tuple[str, int], int]:
    return {(SENSOR_OF[d], 0): bit for d, bit in walls.items()}


def step_closed_loop(device, world: MazeWorld, codes: dict[int, str], expected_from: str) -> MazeStep:
    """One FSM tick: sense, run the device window, read the direction, move."""
    walls = world.walls()
    result = device.tick(sensor_inputs(walls))
    code = from_bits(result.outputs, ACTUATOR)
    direction = codes.get(code)
    if direction is None:
        raise MazeError(f"actuator produced unmapped code {code:02b}")
    expected = reference_next(expected_from, walls)
    blocked = not world.move(direction)
    return MazeStep(device.ticks, world.robot, direction, expected, walls, blocked)


def run_maze(device, world: MazeWorld, max_steps: int, codes: dict[int, str] | None = None) -> MazeRun:
    """Drive ``device`` through ``world`` in lockstep with the reference FSM.

    The reference is advanced on the same sensor readings the device saw,
    starting from LEFT (all registers reset to 0).
    """
    codes = codes or direction_codes(None)
    start = world.robot
    steps: list[MazeStep] = []
    expected = "LEFT"
    while len(steps) < max_steps and not world.solved:
        step = step_closed_loop(device, world, codes, expected)
        steps.append(step)
        expected = step.expected
    return MazeRun(steps, world.solved, start)


def direction_bits(direction: str, codes: dict[int, str] | None = None) -> dict[tuple[str, int], int]:
    inverse = {d: c for c, d in (codes or direction_codes(None)).items()}
    return to_bits(ACTUATOR, inverse[direction], 2)
