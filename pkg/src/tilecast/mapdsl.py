"""ASCII map parser and canonical renderer.

Symbol table:

    #        default wall                 .  or space   floor
    1-9      colored wall (palette 1-9)   S             spawn candidate
    G        goal entity                  r  b  y       key (red/blue/yellow)
    R B Y    locked door (red/blue/yellow)
    "        unlocked blue door           \\             unlocked yellow door
    A C D... other uppercase letters: generated walls, palette 10-15 (cycled)

Lines shorter than the longest line are right-padded with wall, so ragged
sources stay sealed. Parsing never raises on bad input; it reports 1-based
(line, column) diagnostics pointing into the original text.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import (
    CellTag,
    ContractError,
    Door,
    EntityInit,
    EntityKind,
    KeyColor,
    TileMap,
)
from .pathing import reachable_tiles

_KEYS = {"r": KeyColor.RED, "b": KeyColor.BLUE, "y": KeyColor.YELLOW}
_LOCKED = {"R": KeyColor.RED, "B": KeyColor.BLUE, "Y": KeyColor.YELLOW}
_UNLOCKED = {'"': KeyColor.BLUE, "\\": KeyColor.YELLOW}
_KEY_CHAR = {v: k for k, v in _KEYS.items()}
_LOCKED_CHAR = {v: k for k, v in _LOCKED.items()}
_UNLOCKED_CHAR = {v: k for k, v in _UNLOCKED.items()}

# Uppercase letters free for generated walls (reserved: S G R B Y).
GENERATED_WALL_LETTERS = "ACDEFHIJKLMNOPQTUVWXZ"
_GENERATED_BASE = 10
_GENERATED_SPAN = 6  # palette entries 10..15


def generated_wall_color(letter: str) -> int:
    return _GENERATED_BASE + GENERATED_WALL_LETTERS.index(letter) % _GENERATED_SPAN


@dataclass(frozen=True)
class MapSource:
    text: str
    name: str = "<map>"


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int       # 1-based into the original source text
    column: int     # 1-based
    message: str
    severity: Severity

    def __str__(self) -> str:
        return f"{self.severity.value}: line {self.line}, column {self.column}: {self.message}"


@dataclass(frozen=True)
class ParseResult:
    tilemap: TileMap | None
    diagnostics: tuple[ParseDiagnostic, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.tilemap is not None

    def errors(self) -> tuple[ParseDiagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == Severity.ERROR)

    def unwrap(self) -> TileMap:
        if self.tilemap is None:
            raise MapParseError(self.diagnostics)
        return self.tilemap


class MapParseError(ValueError):
    def __init__(self, diagnostics: tuple[ParseDiagnostic, ...]):
        self.diagnostics = diagnostics
        lines = "\n".join(str(d) for d in diagnostics if d.severity == Severity.ERROR)
        super().__init__(f"map has errors:\n{lines}")


def load_map_file(path: str | Path) -> MapSource:
    p = Path(path)
    return MapSource(p.read_text(encoding="utf-8"), name=p.name)


def parse_map(src: MapSource | str) -> ParseResult:
    """Parse ASCII text into a TileMap, collecting diagnostics.

    Returns a ParseResult whose tilemap is None when any Error was found;
    Warnings (e.g. a goal unreachable even with every door open) do not
    prevent parsing.
    """
    if isinstance(src, str):
        src = MapSource(src)
    diags: list[ParseDiagnostic] = []

    raw = [ln.rstrip("\r") for ln in src.text.split("\n")]
    first = 0
    last = len(raw)
    while first < last and not raw[first].strip():
        first += 1
    while last > first and not raw[last - 1].strip():
        last -= 1
    lines = raw[first:last]
    if sum(1 for ln in lines if ln.strip()) < 3:
        diags.append(ParseDiagnostic(1, 1, "map needs at least 3 non-empty lines",
                                     Severity.ERROR))
        return ParseResult(None, tuple(diags))

    height = len(lines)
    width = max(len(ln) for ln in lines)
    if width < 3:
        diags.append(ParseDiagnostic(first + 1, 1, "map must be at least 3 tiles wide",
                                     Severity.ERROR))
        return ParseResult(None, tuple(diags))

    # Padding default: wall. Short lines therefore stay sealed on the right.
    kind = np.full((height, width), CellTag.WALL, dtype=np.uint8)
    color = np.zeros((height, width), dtype=np.uint8)
    doors: list[Door] = []
    entities: list[EntityInit] = []
    spawns: list[tuple[int, int]] = []

    def pos(row: int, col: int) -> tuple[int, int]:
        return first + row + 1, col + 1

    for row, line in enumerate(lines):
        for col, ch in enumerate(line):
            tile = (col, row)
            if ch == "#":
                pass
            elif "1" <= ch <= "9":
                color[row, col] = int(ch)
            elif ch in (".", " "):
                kind[row, col] = CellTag.FLOOR
            elif ch == "S":
                kind[row, col] = CellTag.FLOOR
                spawns.append(tile)
            elif ch == "G":
                kind[row, col] = CellTag.FLOOR
                entities.append(EntityInit(EntityKind.GOAL, tile))
            elif ch in _KEYS:
                kind[row, col] = CellTag.FLOOR
                entities.append(EntityInit(EntityKind.KEY, tile, color=_KEYS[ch]))
            elif ch in _LOCKED:
                kind[row, col] = CellTag.DOOR
                doors.append(Door(tile, _LOCKED[ch], locked=True))
            elif ch in _UNLOCKED:
                kind[row, col] = CellTag.DOOR
                doors.append(Door(tile, _UNLOCKED[ch], locked=False))
            elif ch in GENERATED_WALL_LETTERS:
                color[row, col] = generated_wall_color(ch)
            else:
                shown = ch if ch.isprintable() else repr(ch)
                diags.append(ParseDiagnostic(
                    *pos(row, col), f"unknown map symbol {shown!r}", Severity.ERROR))

    # Border must be sealed; any offender is a real source character because
    # padded cells are already wall.
    for row in range(height):
        for col in (list(range(width)) if row in (0, height - 1) else [0, width - 1]):
            if kind[row, col] != CellTag.WALL:
                diags.append(ParseDiagnostic(
                    *pos(row, col), "map border must be wall (map is unsealed)",
                    Severity.ERROR))

    if not spawns:
        diags.append(ParseDiagnostic(1, 1, "map has no spawn candidate (no 'S')",
                                     Severity.ERROR))

    if any(d.severity == Severity.ERROR for d in diags):
        return ParseResult(None, tuple(diags))

    tmap = TileMap(kind, color, doors, entities, spawns)

    # Goals that cannot be reached even with every door open are suspicious
    # but not fatal.
    reachable: set[tuple[int, int]] = set()
    for s in tmap.spawn_candidates:
        reachable |= reachable_tiles(tmap, s, open_doors="all")
    for e in tmap.entities:
        if e.kind == EntityKind.GOAL and e.tile not in reachable:
            col, row = e.tile
            diags.append(ParseDiagnostic(
                *pos(row, col),
                "goal unreachable from every spawn even with all doors open",
                Severity.WARNING))

    return ParseResult(tmap, tuple(diags))


def render_map_ascii(tmap: TileMap) -> str:
    """Canonical ASCII for a parsed map; parse(render(m)) reproduces m.

    Maps holding things the DSL cannot express (medkits, unlocked red
    doors) are rejected: they did not come from parse_map.
    """
    grid = [["."] * tmap.width for _ in range(tmap.height)]
    for row in range(tmap.height):
        for col in range(tmap.width):
            tag = tmap.kind[row, col]
            if tag == CellTag.WALL:
                c = int(tmap.wall_color[row, col])
                if c == 0:
                    grid[row][col] = "#"
                elif 1 <= c <= 9:
                    grid[row][col] = str(c)
                elif _GENERATED_BASE <= c < _GENERATED_BASE + _GENERATED_SPAN:
                    grid[row][col] = GENERATED_WALL_LETTERS[c - _GENERATED_BASE]
                else:
                    raise ContractError(f"wall color {c} has no map symbol")
    for d in tmap.doors:
        col, row = d.tile
        if d.locked:
            grid[row][col] = _LOCKED_CHAR[d.color]
        elif d.color in _UNLOCKED_CHAR:
            grid[row][col] = _UNLOCKED_CHAR[d.color]
        else:
            raise ContractError(f"unlocked {d.color.name.lower()} door has no map symbol")
    for e in tmap.entities:
        col, row = e.tile
        if e.kind == EntityKind.GOAL:
            grid[row][col] = "G"
        elif e.kind == EntityKind.KEY:
            grid[row][col] = _KEY_CHAR[e.color]
        else:
            raise ContractError(f"{e.kind.name.lower()} entities have no map symbol")
    for col, row in tmap.spawn_candidates:
        grid[row][col] = "S"
    return "\n".join("".join(row) for row in grid)
