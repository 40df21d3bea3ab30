"""Foundational value types: vectors, poses, tile maps, collision queries.

Coordinate convention: tile (tx, ty) occupies [tx, tx+1) x [ty, ty+1) in
world units, +x east, +y south; grids are stored row-major with y as the
row, matching the visual layout of ASCII map text line by line.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Camera plane half-width; |camera_plane| == this. 0.66 gives the classic
# ~66 degree horizontal FOV.
PLANE_HALF_WIDTH = 0.66


class ContractError(ValueError):
    """A caller violated a documented precondition."""


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ContractError(f"Vec2 components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)


def plane_for(direction: Vec2) -> Vec2:
    """Camera plane for a view direction: the direction rotated 90 degrees
    (y-down convention) and scaled to PLANE_HALF_WIDTH."""
    return Vec2(-direction.y * PLANE_HALF_WIDTH, direction.x * PLANE_HALF_WIDTH)


@dataclass(frozen=True)
class Pose:
    position: Vec2
    direction: Vec2
    camera_plane: Vec2

    def __post_init__(self) -> None:
        if abs(self.direction.norm() - 1.0) > 1e-9:
            raise ContractError(f"direction must be unit length, |d| = {self.direction.norm()!r}")
        if abs(self.direction.dot(self.camera_plane)) > 1e-9:
            raise ContractError("camera_plane must be perpendicular to direction")
        if abs(self.camera_plane.norm() - PLANE_HALF_WIDTH) > 1e-9:
            raise ContractError(f"|camera_plane| must be {PLANE_HALF_WIDTH}")

    @staticmethod
    def looking(position: Vec2, direction: Vec2) -> Pose:
        """Pose at `position` facing `direction` (unit), plane derived."""
        return Pose(position, direction, plane_for(direction))


class CellTag(enum.IntEnum):
    FLOOR = 0
    WALL = 1
    DOOR = 2


class KeyColor(enum.IntEnum):
    RED = 0
    BLUE = 1
    YELLOW = 2


class EntityKind(enum.IntEnum):
    KEY = 0
    GOAL = 1
    MEDKIT = 2


@dataclass(frozen=True)
class CellKind:
    """One grid cell: Floor, Wall(color_id), or Door(color, locked)."""

    tag: CellTag
    color_id: int = 0          # wall palette index; 0 unless tag is WALL
    door_color: KeyColor | None = None
    door_locked: bool = False
    door_index: int = -1       # index into TileMap.doors; -1 unless DOOR

    @staticmethod
    def floor() -> CellKind:
        return _FLOOR

    @staticmethod
    def wall(color_id: int = 0) -> CellKind:
        return CellKind(CellTag.WALL, color_id=color_id)


_FLOOR = CellKind(CellTag.FLOOR)


@dataclass(frozen=True)
class Door:
    tile: tuple[int, int]
    color: KeyColor
    locked: bool


@dataclass(frozen=True)
class EntityInit:
    kind: EntityKind
    tile: tuple[int, int]
    color: KeyColor | None = None  # keys only


class TileMap:
    """Immutable sealed tile grid plus spawn/goal/entity metadata.

    Internally cells live in small numpy arrays (the renderer and dynamics
    kernels read them directly); the CellKind view is assembled on demand.
    """

    def __init__(
        self,
        kind: np.ndarray,
        wall_color: np.ndarray,
        doors: Sequence[Door],
        entities: Sequence[EntityInit],
        spawn_candidates: Sequence[tuple[int, int]],
    ):
        kind = np.ascontiguousarray(kind, dtype=np.uint8)
        wall_color = np.ascontiguousarray(wall_color, dtype=np.uint8)
        if kind.ndim != 2 or kind.shape != wall_color.shape:
            raise ContractError("kind and wall_color must be equal-shape 2D arrays")
        h, w = kind.shape
        if w < 3 or h < 3:
            raise ContractError(f"map must be at least 3x3 tiles, got {w}x{h}")
        border = np.concatenate([kind[0, :], kind[-1, :], kind[:, 0], kind[:, -1]])
        if not np.all(border == CellTag.WALL):
            raise ContractError("map border must be sealed with walls")

        door_index = np.full((h, w), -1, dtype=np.int16)
        for i, d in enumerate(doors):
            tx, ty = d.tile
            if kind[ty, tx] != CellTag.DOOR:
                raise ContractError(f"door record at {d.tile} does not sit on a door cell")
            door_index[ty, tx] = i
        if int((kind == CellTag.DOOR).sum()) != len(doors):
            raise ContractError("every door cell needs exactly one door record")

        for e in entities:
            tx, ty = e.tile
            if not (0 < tx < w - 1 and 0 < ty < h - 1):
                raise ContractError(f"entity at {e.tile} is outside the map interior")
            if kind[ty, tx] != CellTag.FLOOR:
                raise ContractError(f"entity at {e.tile} must sit on a floor cell")
            if (e.kind == EntityKind.KEY) != (e.color is not None):
                raise ContractError("keys (and only keys) carry a color")
        for s in spawn_candidates:
            if kind[s[1], s[0]] != CellTag.FLOOR:
                raise ContractError(f"spawn candidate {s} must be a floor cell")

        kind.setflags(write=False)
        wall_color.setflags(write=False)
        door_index.setflags(write=False)
        self.width = w
        self.height = h
        self.kind = kind
        self.wall_color = wall_color
        self.door_index = door_index
        self.doors = tuple(doors)
        self.entities = tuple(entities)
        self.spawn_candidates = tuple(tuple(s) for s in spawn_candidates)
        # Goal candidates in row-major discovery order (entity indices).
        self.goal_candidates = tuple(
            i for i, e in enumerate(self.entities) if e.kind == EntityKind.GOAL
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TileMap):
            return NotImplemented
        return (
            np.array_equal(self.kind, other.kind)
            and np.array_equal(self.wall_color, other.wall_color)
            and self.doors == other.doors
            and self.entities == other.entities
            and self.spawn_candidates == other.spawn_candidates
        )

    def __hash__(self) -> int:
        return hash((self.kind.tobytes(), self.wall_color.tobytes(),
                     self.doors, self.entities, self.spawn_candidates))

    def __repr__(self) -> str:
        return (f"TileMap({self.width}x{self.height}, {len(self.doors)} doors, "
                f"{len(self.entities)} entities, {len(self.spawn_candidates)} spawns)")

    def goal_tiles(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.entities[i].tile for i in self.goal_candidates)


def cell_at(tmap: TileMap, tx: int, ty: int) -> CellKind:
    """The cell at tile (tx, ty); out-of-range coordinates are a caller error."""
    if not (0 <= tx < tmap.width and 0 <= ty < tmap.height):
        raise ContractError(
            f"cell_at({tx}, {ty}) outside {tmap.width}x{tmap.height} map")
    tag = CellTag(tmap.kind[ty, tx])
    if tag == CellTag.WALL:
        return CellKind.wall(int(tmap.wall_color[ty, tx]))
    if tag == CellTag.DOOR:
        d = tmap.doors[int(tmap.door_index[ty, tx])]
        return CellKind(CellTag.DOOR, door_color=d.color, door_locked=d.locked,
                        door_index=int(tmap.door_index[ty, tx]))
    return CellKind.floor()


def circle_blocked(
    tmap: TileMap,
    center: Vec2,
    radius: float,
    door_open: Iterable[bool] | None = None,
) -> bool:
    """True iff a disc overlaps any wall cell or closed door cell.

    Overlap is strict (touching a boundary exactly does not block); the
    test is disc vs axis-aligned unit square via closest-point distance.
    """
    if not (0.0 < radius < 0.5):
        raise ContractError(f"radius must be in (0, 0.5), got {radius}")
    open_flags = tuple(door_open) if door_open is not None else ()
    tx0 = math.floor(center.x - radius)
    tx1 = math.floor(center.x + radius)
    ty0 = math.floor(center.y - radius)
    ty1 = math.floor(center.y + radius)
    r2 = radius * radius
    for ty in range(ty0, ty1 + 1):
        for tx in range(tx0, tx1 + 1):
            if not (0 <= tx < tmap.width and 0 <= ty < tmap.height):
                return True  # off-map counts as solid
            tag = tmap.kind[ty, tx]
            if tag == CellTag.FLOOR:
                continue
            if tag == CellTag.DOOR:
                di = int(tmap.door_index[ty, tx])
                if di < len(open_flags) and open_flags[di]:
                    continue
            # closest point of [tx,tx+1]x[ty,ty+1] to the center
            cx = min(max(center.x, tx), tx + 1.0)
            cy = min(max(center.y, ty), ty + 1.0)
            dx = center.x - cx
            dy = center.y - cy
            if dx * dx + dy * dy < r2:
                return True
    return False
