"""Packs a TileMap plus environment config into flat kernel arrays.

Internal module. The kernels take ~40 positional array/scalar arguments;
run_kernel() is the single place that spells out that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import palette
from .backend import layout as L
from .geometry import EntityInit, EntityKind, PLANE_HALF_WIDTH, ContractError, TileMap

# Engine movement constants (fixed, not per-spec):
MOVE_SPEED = 0.15        # tiles per Forward/Backward/Strafe step
TURN_DEGREES = 15.0      # per Turn step; 24 steps = full revolution
AGENT_RADIUS = 0.2       # collision disc radius, tiles
SPRITE_HALF_WIDTH = 0.35  # sprite billboard half-width, tiles
MIN_SPRITE_DEPTH = 0.05

# Computed once here so both backends consume identical doubles.
TURN_COS = math.cos(math.radians(TURN_DEGREES))
TURN_SIN = math.sin(math.radians(TURN_DEGREES))

_HEADINGS = np.array([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)],
                     dtype=np.float64)  # E, S, W, N


def column_coefficients(width: int) -> np.ndarray:
    """Camera-plane coefficient per column, in [-1, 1].

    Written as (2c - (W-1)) / (W-1): the numerator is an exact integer, so
    mirrored columns get exactly negated coefficients.
    """
    w1 = width - 1
    return np.array([float(2 * c - w1) / float(w1) for c in range(width)],
                    dtype=np.float64)


@dataclass
class Tables:
    """Flat, read-only kernel inputs for one (map, config) pair."""

    # map group
    kind: np.ndarray
    wcol: np.ndarray
    didx: np.ndarray
    eat: np.ndarray
    dcol: np.ndarray
    dlock: np.ndarray
    ekind: np.ndarray
    ecol: np.ndarray
    epx: np.ndarray
    epy: np.ndarray
    spx: np.ndarray
    spy: np.ndarray
    goal_ent: np.ndarray
    dirs: np.ndarray
    # render group
    pal: np.ndarray
    door_rgb: np.ndarray
    key_rgb: np.ndarray
    goal_rgb: np.ndarray
    med_box: np.ndarray
    med_cross: np.ndarray
    ceil_rgb: np.ndarray
    floor_rgb: np.ndarray
    coef: np.ndarray
    # constants
    fc: np.ndarray
    ic: np.ndarray
    legal: np.ndarray
    # bookkeeping
    entities: tuple[EntityInit, ...]   # merged map + extra entities
    obs_width: int
    obs_height: int

    @property
    def n_doors(self) -> int:
        return self.dcol.shape[0]

    @property
    def n_entities(self) -> int:
        return self.ekind.shape[0]


def build_tables(
    tmap: TileMap,
    *,
    obs_width: int = 64,
    obs_height: int = 64,
    extra_entities: Sequence[EntityInit] = (),
    action_tags: Sequence[int] = tuple(range(L.A_COUNT)),
    goal_mode: int = 0,
    max_steps: int = 10**9,
    goal_reward: float = 1.0,
    living_reward: float = 0.0,
    health_decay: float = 0.0,
    health_restore: float = 0.0,
) -> Tables:
    if obs_width < 8 or obs_height < 8:
        raise ContractError(f"observation must be at least 8x8, got {obs_width}x{obs_height}")

    entities = tuple(tmap.entities) + tuple(extra_entities)
    if len(entities) > L.MAX_ENTITIES:
        raise ContractError(f"too many entities: {len(entities)} > {L.MAX_ENTITIES}")
    if len(tmap.doors) > L.MAX_DOORS:
        raise ContractError(f"too many doors: {len(tmap.doors)} > {L.MAX_DOORS}")

    h, w = tmap.height, tmap.width
    eat = np.full((h, w), -1, dtype=np.int16)
    ekind = np.zeros(len(entities), dtype=np.uint8)
    ecol = np.zeros(len(entities), dtype=np.uint8)
    epx = np.zeros(len(entities), dtype=np.float64)
    epy = np.zeros(len(entities), dtype=np.float64)
    for i, e in enumerate(entities):
        tx, ty = e.tile
        if not (0 < tx < w - 1 and 0 < ty < h - 1):
            raise ContractError(f"entity at {e.tile} is outside the map interior")
        if tmap.kind[ty, tx] != 0:
            raise ContractError(f"entity at {e.tile} must sit on a floor tile")
        if eat[ty, tx] != -1:
            raise ContractError(f"two entities share tile {e.tile}")
        eat[ty, tx] = i
        ekind[i] = int(e.kind)
        ecol[i] = 0 if e.color is None else int(e.color)
        epx[i] = tx + 0.5
        epy[i] = ty + 0.5

    goal_ent = np.array(
        [i for i, e in enumerate(entities) if e.kind == EntityKind.GOAL],
        dtype=np.int32)

    spx = np.array([s[0] + 0.5 for s in tmap.spawn_candidates], dtype=np.float64)
    spy = np.array([s[1] + 0.5 for s in tmap.spawn_candidates], dtype=np.float64)
    if spx.shape[0] == 0:
        raise ContractError("map has no spawn candidates")

    dcol = np.array([int(d.color) for d in tmap.doors], dtype=np.uint8)
    dlock = np.array([1 if d.locked else 0 for d in tmap.doors], dtype=np.uint8)

    fc = np.zeros(L.FC_COUNT, dtype=np.float64)
    fc[L.FC_MOVE_SPEED] = MOVE_SPEED
    fc[L.FC_RADIUS] = AGENT_RADIUS
    fc[L.FC_TURN_COS] = TURN_COS
    fc[L.FC_TURN_SIN] = TURN_SIN
    fc[L.FC_ATTEN] = palette.ATTENUATION
    fc[L.FC_GOAL_REWARD] = goal_reward
    fc[L.FC_LIVING_REWARD] = living_reward
    fc[L.FC_HEALTH_DECAY] = health_decay
    fc[L.FC_HEALTH_RESTORE] = health_restore
    fc[L.FC_SPRITE_K] = SPRITE_HALF_WIDTH / PLANE_HALF_WIDTH
    fc[L.FC_MIN_SPRITE_DEPTH] = MIN_SPRITE_DEPTH

    ic = np.zeros(L.IC_COUNT, dtype=np.int64)
    ic[L.IC_MAX_STEPS] = max_steps
    ic[L.IC_GOAL_MODE] = goal_mode
    ic[L.IC_USE_HEALTH] = 1 if health_decay > 0.0 else 0

    legal = np.zeros(L.A_COUNT, dtype=np.uint8)
    for a in action_tags:
        legal[int(a)] = 1

    arrays = dict(
        kind=tmap.kind, wcol=tmap.wall_color, didx=tmap.door_index, eat=eat,
        dcol=dcol, dlock=dlock, ekind=ekind, ecol=ecol, epx=epx, epy=epy,
        spx=spx, spy=spy, goal_ent=goal_ent, dirs=_HEADINGS,
        pal=palette.WALL_PALETTE, door_rgb=palette.DOOR_RGB,
        key_rgb=palette.KEY_RGB, goal_rgb=palette.GOAL_RGB,
        med_box=palette.MEDKIT_BOX_RGB, med_cross=palette.MEDKIT_CROSS_RGB,
        ceil_rgb=palette.CEILING_RGB, floor_rgb=palette.FLOOR_RGB,
        coef=column_coefficients(obs_width), fc=fc, ic=ic, legal=legal,
    )
    for name, a in arrays.items():
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        arrays[name] = a
    return Tables(entities=entities, obs_width=obs_width, obs_height=obs_height,
                  **arrays)


@dataclass
class StateBlock:
    """Mutable per-environment state arrays (env index is the first axis)."""

    px: np.ndarray
    py: np.ndarray
    dx: np.ndarray
    dy: np.ndarray
    health: np.ndarray
    inv: np.ndarray
    t: np.ndarray
    rkey: np.ndarray
    rctr: np.ndarray
    done: np.ndarray
    agoal: np.ndarray
    dopen: np.ndarray
    ealive: np.ndarray

    @staticmethod
    def alloc(n: int, n_doors: int, n_entities: int) -> StateBlock:
        return StateBlock(
            px=np.zeros(n), py=np.zeros(n), dx=np.zeros(n), dy=np.zeros(n),
            health=np.zeros(n), inv=np.zeros(n, dtype=np.uint8),
            t=np.zeros(n, dtype=np.int64),
            rkey=np.zeros(n, dtype=np.uint64), rctr=np.zeros(n, dtype=np.uint64),
            done=np.zeros(n, dtype=np.uint8), agoal=np.zeros(n, dtype=np.int32),
            dopen=np.zeros((n, n_doors), dtype=np.uint8),
            ealive=np.zeros((n, n_entities), dtype=np.uint8),
        )

    def copy_from(self, other: StateBlock) -> None:
        for name in ("px", "py", "dx", "dy", "health", "inv", "t",
                     "rkey", "rctr", "done", "agoal", "dopen", "ealive"):
            np.copyto(getattr(self, name), getattr(other, name))


@dataclass
class OutBlock:
    """Per-call kernel outputs."""

    frames: np.ndarray
    zbuf: np.ndarray
    rewards: np.ndarray
    dones: np.ndarray
    truncs: np.ndarray
    events: np.ndarray
    statuses: np.ndarray

    @staticmethod
    def alloc(n: int, obs_height: int, obs_width: int) -> OutBlock:
        return OutBlock(
            frames=np.zeros((n, obs_height, obs_width, 3), dtype=np.uint8),
            zbuf=np.zeros((n, obs_width)),
            rewards=np.zeros(n),
            dones=np.zeros(n, dtype=np.uint8),
            truncs=np.zeros(n, dtype=np.uint8),
            events=np.zeros(n, dtype=np.uint32),
            statuses=np.zeros(n, dtype=np.int32),
        )


_NO_ACTIONS = np.zeros(0, dtype=np.int64)


def run_kernel(backend, t: Tables, sb: StateBlock, ob: OutBlock,
               actions: np.ndarray | None, mode: int,
               auto_reset: bool = False, validate: bool = False,
               n_threads: int = 1) -> int:
    """Invoke a backend's batch kernel; the one spelling of the ABI order."""
    acts = _NO_ACTIONS if actions is None else actions
    violations = backend.batch_kernel(
        t.kind, t.wcol, t.didx, t.eat, t.dcol, t.dlock,
        t.ekind, t.ecol, t.epx, t.epy, t.spx, t.spy, t.goal_ent, t.dirs,
        t.pal, t.door_rgb, t.key_rgb, t.goal_rgb, t.med_box, t.med_cross,
        t.ceil_rgb, t.floor_rgb, t.coef, t.fc, t.ic,
        sb.px, sb.py, sb.dx, sb.dy, sb.health, sb.inv, sb.t,
        sb.rkey, sb.rctr, sb.done, sb.agoal, sb.dopen, sb.ealive,
        acts, ob.frames, ob.zbuf, ob.rewards, ob.dones, ob.truncs,
        ob.events, ob.statuses,
        mode, 1 if auto_reset else 0, 1 if validate else 0, n_threads)
    if np.any(ob.statuses != L.ST_OK):
        bad = int(ob.statuses[ob.statuses != L.ST_OK][0])
        raise RuntimeError(
            "render invariant violated: "
            + ("ray escaped the map (unsealed?)" if bad == L.ST_ESCAPED
               else "ray exceeded its boundary-step budget"))
    return int(violations)
