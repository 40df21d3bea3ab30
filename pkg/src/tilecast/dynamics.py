"""Scalar environment dynamics: reset and the per-step transition."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from . import backend
from .backend import layout as L
from .geometry import ContractError, KeyColor, Pose, Vec2
from .rng import RngState
from .tables import (  # noqa: F401  (re-exported engine constants)
    AGENT_RADIUS,
    MOVE_SPEED,
    OutBlock,
    StateBlock,
    TURN_DEGREES,
    run_kernel,
)

if TYPE_CHECKING:
    from .suite import EnvSpec


class Action(enum.IntEnum):
    FORWARD = L.A_FORWARD
    BACKWARD = L.A_BACKWARD
    TURN_LEFT = L.A_TURN_LEFT
    TURN_RIGHT = L.A_TURN_RIGHT
    STRAFE_LEFT = L.A_STRAFE_LEFT
    STRAFE_RIGHT = L.A_STRAFE_RIGHT
    NOOP = L.A_NOOP


ACTION_NAMES = {a: a.name.lower() for a in Action}
ACTIONS_BY_NAME = {name: a for a, name in ACTION_NAMES.items()}

_EVENT_TAGS = (
    "picked_key_red", "picked_key_blue", "picked_key_yellow",
    "opened_door_red", "opened_door_blue", "opened_door_yellow",
    "picked_medkit", "reached_goal", "died", "truncated",
)


def event_tags(events: int) -> tuple[str, ...]:
    """Decode a kernel event bitmask into stable string tags."""
    return tuple(tag for bit, tag in enumerate(_EVENT_TAGS) if events >> bit & 1)


@dataclass(frozen=True)
class EnvState:
    """Complete simulation state of one environment; a pure value."""

    pose: Pose
    inventory: frozenset[KeyColor]
    door_open: tuple[bool, ...]
    entity_alive: tuple[bool, ...]
    active_goal: int
    health: float
    t: int
    rng: RngState
    done: bool


@dataclass(frozen=True)
class StepResult:
    state: EnvState
    observation: np.ndarray
    reward: float
    done: bool
    info: dict[str, Any]


def _state_from_block(sb: StateBlock, i: int) -> EnvState:
    direction = Vec2(float(sb.dx[i]), float(sb.dy[i]))
    inv = int(sb.inv[i])
    return EnvState(
        pose=Pose.looking(Vec2(float(sb.px[i]), float(sb.py[i])), direction),
        inventory=frozenset(c for c in KeyColor if inv >> c & 1),
        door_open=tuple(bool(v) for v in sb.dopen[i]),
        entity_alive=tuple(bool(v) for v in sb.ealive[i]),
        active_goal=int(sb.agoal[i]),
        health=float(sb.health[i]),
        t=int(sb.t[i]),
        rng=RngState(int(sb.rkey[i]), int(sb.rctr[i])),
        done=bool(sb.done[i]),
    )


def _state_to_block(state: EnvState, sb: StateBlock, i: int) -> None:
    sb.px[i] = state.pose.position.x
    sb.py[i] = state.pose.position.y
    sb.dx[i] = state.pose.direction.x
    sb.dy[i] = state.pose.direction.y
    sb.health[i] = state.health
    inv = 0
    for c in state.inventory:
        inv |= 1 << int(c)
    sb.inv[i] = inv
    sb.t[i] = state.t
    sb.rkey[i] = state.rng.key
    sb.rctr[i] = state.rng.counter
    sb.done[i] = 1 if state.done else 0
    sb.agoal[i] = state.active_goal
    sb.dopen[i, :] = [1 if v else 0 for v in state.door_open]
    sb.ealive[i, :] = [1 if v else 0 for v in state.entity_alive]


def reset(spec: EnvSpec, rng: RngState) -> tuple[EnvState, np.ndarray]:
    """Start an episode: spawn and heading drawn from rng (spawn, heading,
    then active goal in random-goal mode), everything alive, doors shut."""
    t = spec.tables
    sb = StateBlock.alloc(1, t.n_doors, t.n_entities)
    ob = OutBlock.alloc(1, t.obs_height, t.obs_width)
    sb.rkey[0] = rng.key
    sb.rctr[0] = rng.counter
    run_kernel(backend.active(), t, sb, ob, None, L.MODE_RESET)
    return _state_from_block(sb, 0), ob.frames[0]


def step(spec: EnvSpec, state: EnvState, action: Action | int) -> StepResult:
    """Advance one step: move/turn, resolve doors and pickups, emit reward,
    re-render. Pure function of (spec, state, action)."""
    if state.done:
        raise ContractError("cannot step a finished episode; reset first")
    act = Action(action)
    if act not in spec.action_set:
        legal = ", ".join(ACTION_NAMES[a] for a in spec.action_set)
        raise ContractError(
            f"action {ACTION_NAMES[act]!r} is not in {spec.id!r}'s action set ({legal})")

    t = spec.tables
    sb = StateBlock.alloc(1, t.n_doors, t.n_entities)
    ob = OutBlock.alloc(1, t.obs_height, t.obs_width)
    _state_to_block(state, sb, 0)
    actions = np.array([int(act)], dtype=np.int64)
    run_kernel(backend.active(), t, sb, ob, actions, L.MODE_STEP)

    new_state = _state_from_block(sb, 0)
    ev = int(ob.events[0])
    info: dict[str, Any] = {
        "t": new_state.t,
        "events": event_tags(ev),
        "terminated": bool(ob.dones[0]) and not bool(ob.truncs[0]),
        "truncated": bool(ob.truncs[0]),
    }
    return StepResult(state=new_state, observation=ob.frames[0],
                      reward=float(ob.rewards[0]), done=bool(ob.dones[0]),
                      info=info)
