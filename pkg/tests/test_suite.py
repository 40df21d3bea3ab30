"""Environment registry: ids, overrides, structure, and BFS progression."""

from __future__ import annotations

import pytest

from tilecast.dynamics import Action
from tilecast.geometry import ContractError, EntityKind, KeyColor
from tilecast.mapdsl import MapParseError
from tilecast.pathing import bfs_path, progression_region, reachable_tiles
from tilecast.suite import (EnvSpec, GoalMode, NAV_ACTIONS, STRAFE_ACTIONS,
                            make_env, register_env, registered_ids)

EXPECTED_IDS = (
    "dmlab-random-goal-01", "dmlab-random-goal-02", "dmlab-random-goal-03",
    "dmlab-static-01", "dmlab-static-02", "dmlab-static-03",
    "health-gathering", "key-corridor", "key-door", "my-way-home", "simple",
)


def test_registered_ids():
    assert registered_ids() == EXPECTED_IDS


def test_unknown_id_lists_registry():
    with pytest.raises(ContractError, match="simple"):
        make_env("no-such-env")


def test_make_env_returns_registered_spec():
    a = make_env("simple")
    b = make_env("simple")
    assert a is b


def test_overrides_apply():
    spec = make_env("simple", obs_width=32, obs_height=24, max_steps=77)
    assert (spec.obs_width, spec.obs_height, spec.max_steps) == (32, 24, 77)
    assert spec.tables.obs_width == 32
    # the registered spec is untouched
    assert make_env("simple").obs_width == 64


def test_non_overridable_field_rejected():
    with pytest.raises(ContractError, match="not overridable"):
        make_env("simple", action_set=(Action.NOOP,))


def test_action_sets():
    assert make_env("simple").action_set == NAV_ACTIONS
    assert make_env("health-gathering").action_set == STRAFE_ACTIONS
    assert Action.STRAFE_LEFT not in make_env("my-way-home").action_set


def test_goal_modes():
    assert make_env("dmlab-static-02").goal_mode == GoalMode.STATIC
    assert make_env("dmlab-random-goal-02").goal_mode == GoalMode.RANDOM_PER_EPISODE


@pytest.mark.parametrize("env,n_goals", [
    ("simple", 1), ("key-door", 1), ("key-corridor", 1), ("my-way-home", 1),
    ("dmlab-static-01", 3), ("dmlab-static-02", 4), ("dmlab-static-03", 5),
])
def test_goal_candidate_counts(env, n_goals):
    spec = make_env(env)
    assert len(spec.map.goal_candidates) == n_goals
    assert spec.tables.goal_ent.shape[0] == n_goals


def test_health_gathering_medkits_ride_on_spec():
    spec = make_env("health-gathering")
    assert len(spec.extra_entities) == 12
    assert all(e.kind == EntityKind.MEDKIT for e in spec.extra_entities)
    # the map itself carries none; the tables carry all of them
    assert not any(e.kind == EntityKind.MEDKIT for e in spec.map.entities)
    assert sum(1 for e in spec.tables.entities
               if e.kind == EntityKind.MEDKIT) == 12


def test_spawn_counts():
    assert len(make_env("simple").map.spawn_candidates) == 1
    assert len(make_env("my-way-home").map.spawn_candidates) == 8
    assert len(make_env("dmlab-static-01").map.spawn_candidates) == 2
    assert len(make_env("dmlab-static-03").map.spawn_candidates) == 4


# --- structural reachability ---

def test_key_door_gating():
    m = make_env("key-door").map
    spawn = m.spawn_candidates[0]
    goal = m.goal_tiles()[0]
    assert bfs_path(m, spawn, [goal], open_doors="none") is None
    assert bfs_path(m, spawn, [goal], open_doors="all") is not None
    region, held = progression_region(m, spawn)
    assert goal in region
    assert held == {KeyColor.RED}


def test_key_corridor_progression():
    m = make_env("key-corridor").map
    spawn = m.spawn_candidates[0]
    goal = m.goal_tiles()[0]
    # the goal room is sealed behind the locked red door
    unlocked = {i for i, d in enumerate(m.doors) if not d.locked}
    assert bfs_path(m, spawn, [goal], open_doors=unlocked) is None
    # fetching the red key first unlocks the run to the goal
    region, held = progression_region(m, spawn)
    assert goal in region
    assert KeyColor.RED in held
    key_tile = next(e.tile for e in m.entities if e.kind == EntityKind.KEY
                    and e.color == KeyColor.RED)
    assert key_tile in reachable_tiles(m, spawn, open_doors=unlocked)


@pytest.mark.parametrize("env", [
    "simple", "my-way-home",
    "dmlab-static-01", "dmlab-static-02", "dmlab-static-03",
])
def test_goals_reachable_without_doors(env):
    m = make_env(env).map
    for spawn in m.spawn_candidates:
        region = reachable_tiles(m, spawn, open_doors="none")
        for goal in m.goal_tiles():
            assert goal in region


# --- registration ---

def test_register_env_round_trip():
    spec = register_env("custom-test-arena",
                        "######\n#S..G#\n######", max_steps=40)
    assert spec.id == "custom-test-arena"
    assert make_env("custom-test-arena") is spec
    assert "custom-test-arena" in registered_ids()


def test_register_duplicate_id_rejected():
    register_env("custom-dupe", "#####\n#S.G#\n#####")
    with pytest.raises(ContractError, match="already registered"):
        register_env("custom-dupe", "#####\n#S.G#\n#####")


def test_register_invalid_map_raises_with_diagnostics():
    with pytest.raises(MapParseError, match="line 2"):
        register_env("custom-bad", "#####\n#S?G#\n#####")


# --- spec validation ---

def test_spec_rejects_bad_config():
    m = make_env("simple").map
    with pytest.raises(ContractError, match="action_set"):
        EnvSpec(id="x", map=m, action_set=(), goal_mode=GoalMode.STATIC,
                max_steps=10)
    with pytest.raises(ContractError, match="duplicates"):
        EnvSpec(id="x", map=m, action_set=(Action.NOOP, Action.NOOP),
                goal_mode=GoalMode.STATIC, max_steps=10)
    with pytest.raises(ContractError, match="max_steps"):
        EnvSpec(id="x", map=m, action_set=NAV_ACTIONS,
                goal_mode=GoalMode.STATIC, max_steps=0)
    with pytest.raises(ContractError, match="8x8"):
        EnvSpec(id="x", map=m, action_set=NAV_ACTIONS,
                goal_mode=GoalMode.STATIC, max_steps=10, obs_width=4)


def test_spec_hashable_value_semantics():
    a = make_env("simple", max_steps=99)
    b = make_env("simple", max_steps=99)
    assert a == b
    assert hash(a) == hash(b)
