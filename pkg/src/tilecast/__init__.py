"""tilecast: headless, deterministic, batch-steppable tile-grid ray-casting
environments with a Wolfenstein-style software renderer."""

from .backend import backend_name, set_backend
from .batch import (BatchState, batch_reset, batch_step, default_threads,
                    policy_actions, throughput_probe)
from .dynamics import (
    ACTION_NAMES,
    ACTIONS_BY_NAME,
    AGENT_RADIUS,
    MOVE_SPEED,
    TURN_DEGREES,
    Action,
    EnvState,
    StepResult,
    event_tags,
    reset,
    step,
)
from .geometry import (
    PLANE_HALF_WIDTH,
    CellKind,
    CellTag,
    ContractError,
    Door,
    EntityInit,
    EntityKind,
    KeyColor,
    Pose,
    TileMap,
    Vec2,
    cell_at,
    circle_blocked,
    plane_for,
)
from .mapdsl import (
    MapParseError,
    MapSource,
    ParseDiagnostic,
    ParseResult,
    Severity,
    load_map_file,
    parse_map,
    render_map_ascii,
)
from .render import EngineInvariantError, RayHit, Side, cast_ray_dda, render_frame
from .rng import RngState, from_seed, next_below, next_u64, split
from .suite import EnvSpec, GoalMode, make_env, register_env, registered_ids

__version__ = "0.1.0"

__all__ = [
    "ACTION_NAMES", "ACTIONS_BY_NAME", "AGENT_RADIUS", "Action", "BatchState",
    "CellKind", "CellTag", "ContractError", "Door", "EngineInvariantError",
    "EntityInit", "EntityKind", "EnvSpec", "EnvState", "GoalMode", "KeyColor",
    "MOVE_SPEED", "MapParseError", "MapSource", "PLANE_HALF_WIDTH",
    "ParseDiagnostic", "ParseResult", "Pose", "RayHit", "RngState", "Severity",
    "Side", "StepResult", "TURN_DEGREES", "TileMap", "Vec2", "backend_name",
    "batch_reset", "batch_step", "cast_ray_dda", "cell_at", "circle_blocked",
    "default_threads", "event_tags", "from_seed", "load_map_file", "make_env",
    "next_below", "next_u64", "parse_map", "plane_for", "register_env",
    "registered_ids", "render_frame", "render_map_ascii", "reset", "set_backend",
    "policy_actions", "split", "step", "throughput_probe",
]
