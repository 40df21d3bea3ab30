"""Environment registry: IDs bound to shipped maps and frozen EnvSpecs.

Shipped environments:

    simple                  one spawn, one goal, tiny maze
    key-door                red key opens a red-locked door to the goal room
    key-corridor            corridor of rooms; the goal room's key sits
                            behind another door
    health-gathering        open acid room; medkits fight a constant drain
    my-way-home             multi-room maze, many spawns, one goal
    dmlab-static-01/02/03   generated mazes (small/medium/large), fixed goal
    dmlab-random-goal-01/02/03  same mazes, goal drawn per episode

Static-goal specs with several goal candidates use the first in row-major
order; the random variants sample one per episode.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources

from .dynamics import Action
from .geometry import ContractError, EntityInit, EntityKind, TileMap
from .mapdsl import MapSource, parse_map
from .tables import Tables, build_tables


class GoalMode(enum.IntEnum):
    STATIC = 0
    RANDOM_PER_EPISODE = 1


NAV_ACTIONS = (Action.FORWARD, Action.BACKWARD,
               Action.TURN_LEFT, Action.TURN_RIGHT, Action.NOOP)
STRAFE_ACTIONS = NAV_ACTIONS + (Action.STRAFE_LEFT, Action.STRAFE_RIGHT)

# Fields make_env() may override.
OVERRIDABLE = ("obs_width", "obs_height", "max_steps", "goal_reward",
               "living_reward", "health_decay", "health_restore")


@dataclass(frozen=True)
class EnvSpec:
    """Immutable environment definition; hashable and shareable."""

    id: str
    map: TileMap
    action_set: tuple[Action, ...]
    goal_mode: GoalMode
    max_steps: int
    obs_width: int = 64
    obs_height: int = 64
    goal_reward: float = 1.0
    living_reward: float = 0.0
    health_decay: float = 0.0
    health_restore: float = 0.0
    extra_entities: tuple[EntityInit, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.action_set:
            raise ContractError("action_set must not be empty")
        if len(set(self.action_set)) != len(self.action_set):
            raise ContractError("action_set has duplicates")
        if self.max_steps < 1:
            raise ContractError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.obs_width < 8 or self.obs_height < 8:
            raise ContractError("observation must be at least 8x8")
        # build eagerly so invalid specs fail at construction, not first use
        self.tables

    @cached_property
    def tables(self) -> Tables:
        return build_tables(
            self.map,
            obs_width=self.obs_width,
            obs_height=self.obs_height,
            extra_entities=self.extra_entities,
            action_tags=tuple(int(a) for a in self.action_set),
            goal_mode=int(self.goal_mode),
            max_steps=self.max_steps,
            goal_reward=self.goal_reward,
            living_reward=self.living_reward,
            health_decay=self.health_decay,
            health_restore=self.health_restore,
        )


_registry: dict[str, EnvSpec] = {}
_registry_lock = threading.Lock()
_builtin_loaded = False


def _load_builtin_map(name: str) -> TileMap:
    text = (resources.files("tilecast") / "maps" / f"{name}.map").read_text("utf-8")
    result = parse_map(MapSource(text, name=f"{name}.map"))
    return result.unwrap()


# Medkit placements for health-gathering; the map DSL has no medkit symbol,
# so they ride on the spec instead of the map file.
_HEALTH_MEDKIT_TILES = (
    (2, 2), (9, 2), (5, 4), (12, 4), (2, 7), (7, 7), (12, 9),
    (4, 10), (9, 11), (2, 12), (12, 12), (7, 13),
)


def _builtin_specs() -> list[EnvSpec]:
    dmlab_steps = {"01": 1350, "02": 2700, "03": 4050}
    specs = [
        EnvSpec(id="simple", map=_load_builtin_map("simple"),
                action_set=NAV_ACTIONS, goal_mode=GoalMode.STATIC, max_steps=500),
        EnvSpec(id="key-door", map=_load_builtin_map("key-door"),
                action_set=NAV_ACTIONS, goal_mode=GoalMode.STATIC, max_steps=500),
        EnvSpec(id="key-corridor", map=_load_builtin_map("key-corridor"),
                action_set=NAV_ACTIONS, goal_mode=GoalMode.STATIC, max_steps=500),
        EnvSpec(id="health-gathering", map=_load_builtin_map("health-gathering"),
                action_set=STRAFE_ACTIONS, goal_mode=GoalMode.STATIC,
                max_steps=2100, living_reward=0.01, health_decay=0.5,
                health_restore=25.0,
                extra_entities=tuple(EntityInit(EntityKind.MEDKIT, tile)
                                     for tile in _HEALTH_MEDKIT_TILES)),
        EnvSpec(id="my-way-home", map=_load_builtin_map("my-way-home"),
                action_set=NAV_ACTIONS, goal_mode=GoalMode.STATIC, max_steps=2100),
    ]
    for size in ("01", "02", "03"):
        tmap = _load_builtin_map(f"dmlab-{size}")
        specs.append(EnvSpec(id=f"dmlab-static-{size}", map=tmap,
                             action_set=NAV_ACTIONS, goal_mode=GoalMode.STATIC,
                             max_steps=dmlab_steps[size]))
        specs.append(EnvSpec(id=f"dmlab-random-goal-{size}", map=tmap,
                             action_set=NAV_ACTIONS,
                             goal_mode=GoalMode.RANDOM_PER_EPISODE,
                             max_steps=dmlab_steps[size]))
    return specs


def _ensure_builtin() -> None:
    global _builtin_loaded
    with _registry_lock:
        if _builtin_loaded:
            return
        for spec in _builtin_specs():
            _registry[spec.id] = spec
        _builtin_loaded = True


def registered_ids() -> tuple[str, ...]:
    _ensure_builtin()
    return tuple(sorted(_registry))


def make_env(id: str, **overrides) -> EnvSpec:
    """Fetch a registered spec, optionally overriding observation size,
    max_steps, or reward constants."""
    _ensure_builtin()
    spec = _registry.get(id)
    if spec is None:
        raise ContractError(
            f"unknown environment id {id!r}; registered: {', '.join(registered_ids())}")
    for k in overrides:
        if k not in OVERRIDABLE:
            raise ContractError(
                f"field {k!r} is not overridable; allowed: {', '.join(OVERRIDABLE)}")
    return replace(spec, **overrides) if overrides else spec


def register_env(
    id: str,
    source: MapSource | str,
    *,
    action_set: tuple[Action, ...] = NAV_ACTIONS,
    goal_mode: GoalMode = GoalMode.STATIC,
    max_steps: int = 1000,
    extra_entities: tuple[EntityInit, ...] = (),
    **config,
) -> EnvSpec:
    """Parse and register a user environment under a new id."""
    _ensure_builtin()
    result = parse_map(source if isinstance(source, MapSource) else MapSource(source))
    tmap = result.unwrap()  # raises MapParseError with diagnostics on errors
    with _registry_lock:
        if id in _registry:
            raise ContractError(f"environment id {id!r} is already registered")
        spec = EnvSpec(id=id, map=tmap, action_set=tuple(action_set),
                       goal_mode=goal_mode, max_steps=max_steps,
                       extra_entities=tuple(extra_entities), **config)
        _registry[id] = spec
    return spec
