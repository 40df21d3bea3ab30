"""Public ray-casting API: single-ray DDA queries and full-frame rendering."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import backend
from .backend import layout as L
from .geometry import CellTag, ContractError, Pose, TileMap, Vec2
from .tables import Tables, build_tables


class Side(enum.IntEnum):
    XFACE = 0   # the ray crossed an x boundary (vertical wall face)
    YFACE = 1


@dataclass(frozen=True)
class RayHit:
    perp_distance: float
    side: Side
    cell: tuple[int, int]
    color_id: int            # wall palette id, or the door's KeyColor for doors
    wall_u: float            # fractional hit position along the face, [0, 1)
    steps: int               # boundary crossings the march performed


class EngineInvariantError(RuntimeError):
    """An internal invariant failed (e.g. a ray escaped an unsealed map)."""


def _door_flags(tmap: TileMap, door_open: Iterable[bool] | None) -> np.ndarray:
    if door_open is None:
        return np.zeros(len(tmap.doors), dtype=np.uint8)
    flags = np.fromiter((1 if f else 0 for f in door_open), dtype=np.uint8)
    if flags.shape[0] != len(tmap.doors):
        raise ContractError(
            f"door_open has {flags.shape[0]} flags, map has {len(tmap.doors)} doors")
    return flags


def cast_ray_dda(
    tmap: TileMap,
    origin: Vec2,
    ray_dir: Vec2,
    door_open: Iterable[bool] | None = None,
) -> RayHit:
    """Cast one ray, marching along tile boundaries until a wall or closed
    door is entered. The origin must lie inside a non-wall cell."""
    if ray_dir.x == 0.0 and ray_dir.y == 0.0:
        raise ContractError("ray_dir must be non-zero")
    otx = math.floor(origin.x)
    oty = math.floor(origin.y)
    if not (0 <= otx < tmap.width and 0 <= oty < tmap.height):
        raise ContractError(f"origin {origin} is outside the map")
    if tmap.kind[oty, otx] == CellTag.WALL:
        raise ContractError(f"origin {origin} is inside a wall cell")

    flags = _door_flags(tmap, door_open)
    status, mapx, mapy, side, perp, wall_u, steps = backend.active().cast_ray(
        tmap.kind, tmap.door_index, flags, origin.x, origin.y, ray_dir.x, ray_dir.y)
    if status == L.ST_ESCAPED:
        raise EngineInvariantError("ray escaped the map: map is not sealed")
    if status == L.ST_STEP_BUDGET:
        raise EngineInvariantError("ray exceeded its boundary-step budget")

    if tmap.kind[mapy, mapx] == CellTag.DOOR:
        color_id = int(tmap.doors[int(tmap.door_index[mapy, mapx])].color)
    else:
        color_id = int(tmap.wall_color[mapy, mapx])
    return RayHit(perp_distance=float(perp), side=Side(side), cell=(mapx, mapy),
                  color_id=color_id, wall_u=float(wall_u), steps=int(steps))


@lru_cache(maxsize=64)
def _render_tables(tmap: TileMap, width: int, height: int) -> Tables:
    return build_tables(tmap, obs_width=width, obs_height=height)


def render_frame(
    tmap: TileMap,
    pose: Pose,
    width: int = 64,
    height: int = 64,
    *,
    door_open: Iterable[bool] | None = None,
    entity_alive: Iterable[bool] | None = None,
    active_goal: int | None = None,
) -> np.ndarray:
    """Render the agent's view as an (height, width, 3) uint8 array.

    World state defaults: all doors closed, all map entities alive, and the
    first goal candidate active (-1 for none). Inactive goal candidates are
    not drawn.
    """
    if width < 8 or height < 8:
        raise ContractError(f"frame must be at least 8x8, got {width}x{height}")
    t = _render_tables(tmap, width, height)
    flags = _door_flags(tmap, door_open)
    if entity_alive is None:
        alive = np.ones(len(t.entities), dtype=np.uint8)
    else:
        alive = np.fromiter((1 if f else 0 for f in entity_alive), dtype=np.uint8)
        if alive.shape[0] != len(t.entities):
            raise ContractError(
                f"entity_alive has {alive.shape[0]} flags, map has {len(t.entities)} entities")
    if active_goal is None:
        goal = int(t.goal_ent[0]) if t.goal_ent.shape[0] else -1
    else:
        goal = int(active_goal)

    frame = np.zeros((height, width, 3), dtype=np.uint8)
    zbuf = np.zeros(width)
    status = backend.active().render_into(
        t.kind, t.wcol, t.didx, t.dcol, t.ekind, t.ecol, t.epx, t.epy,
        t.pal, t.door_rgb, t.key_rgb, t.goal_rgb, t.med_box, t.med_cross,
        t.ceil_rgb, t.floor_rgb, t.coef, t.fc,
        pose.position.x, pose.position.y, pose.direction.x, pose.direction.y,
        flags, alive, goal, frame, zbuf)
    if status != L.ST_OK:
        raise EngineInvariantError(
            "render failed: " + ("ray escaped the map (unsealed?)"
                                 if status == L.ST_ESCAPED
                                 else "ray exceeded its boundary-step budget"))
    return frame
