"""Gym-style handles over the tilecast engine.

Thin, in-process plumbing only: every simulation decision is the core's.
Actions are indices into the environment's own action set (a dense discrete
space), observations are the engine's uint8 frame arrays passed through
without copying, and rollouts are bit-identical to core-native ones for the
same (id, seed, actions). Handles are not thread-safe; use one per thread.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from tilecast import (
    ACTION_NAMES,
    EnvSpec,
    EnvState,
    batch_reset,
    batch_step,
    from_seed,
    make_env,
    reset,
    split,
    step,
)

__version__ = "0.1.0"

__all__ = ["Env", "VecEnv", "make", "make_vec"]


class Env:
    """One environment with the five-tuple (obs, reward, terminated,
    truncated, info) step API."""

    def __init__(self, spec: EnvSpec):
        self.spec = spec
        self._tags = np.array([int(a) for a in spec.action_set],
                              dtype=np.int64)
        self._state: EnvState | None = None

    @property
    def id(self) -> str:
        return self.spec.id

    @property
    def num_actions(self) -> int:
        return len(self.spec.action_set)

    @property
    def action_names(self) -> tuple[str, ...]:
        return tuple(ACTION_NAMES[a] for a in self.spec.action_set)

    @property
    def observation_shape(self) -> tuple[int, int, int]:
        return (self.spec.obs_height, self.spec.obs_width, 3)

    def reset(self, seed: int = 0) -> tuple[np.ndarray, dict[str, Any]]:
        """Start a fresh episode; the trajectory equals environment 0 of a
        core batch seeded the same way."""
        self._state, obs = reset(self.spec, split(from_seed(seed), 0))
        return obs, {"events": ()}

    def step(self, action: int) -> tuple[np.ndarray, float, bool, bool,
                                         dict[str, Any]]:
        if self._state is None:
            raise RuntimeError("call reset() before stepping")
        idx = int(action)
        if not (0 <= idx < self._tags.shape[0]):
            raise ValueError(
                f"action index {idx} out of range [0, {self._tags.shape[0]}) "
                f"for {self.id!r} ({', '.join(self.action_names)})")
        res = step(self.spec, self._state, int(self._tags[idx]))
        self._state = res.state
        return (res.observation, res.reward, res.info["terminated"],
                res.info["truncated"], res.info)


class VecEnv:
    """n environments stepped in lockstep with auto-reset; observation
    blocks are zero-copy views of the engine's output buffers."""

    def __init__(self, spec: EnvSpec, n: int, seed: int = 0):
        self.spec = spec
        self.n = n
        self._tags = np.array([int(a) for a in spec.action_set],
                              dtype=np.int64)
        self._seed = seed
        self._bs = batch_reset(spec, n, seed)

    @property
    def id(self) -> str:
        return self.spec.id

    @property
    def num_actions(self) -> int:
        return len(self.spec.action_set)

    @property
    def action_names(self) -> tuple[str, ...]:
        return tuple(ACTION_NAMES[a] for a in self.spec.action_set)

    @property
    def observations(self) -> np.ndarray:
        """(n, H, W, 3) uint8 frames from the latest reset/step."""
        return self._bs.frames

    def reset(self, seed: int | None = None) -> tuple[np.ndarray,
                                                      dict[str, Any]]:
        if seed is not None:
            self._seed = seed
        self._bs = batch_reset(self.spec, self.n, self._seed)
        return self._bs.frames, {}

    def step(self, actions) -> tuple[np.ndarray, np.ndarray, np.ndarray,
                                     dict[str, Any]]:
        """Step every environment once; finished episodes auto-reset (their
        final reward and done flag are still reported)."""
        acts = np.asarray(actions, dtype=np.int64)
        if acts.shape != (self.n,):
            raise ValueError(
                f"actions must have shape ({self.n},), got {acts.shape}")
        if acts.size and (acts.min() < 0 or acts.max() >= self._tags.shape[0]):
            raise ValueError(
                f"action indices must be in [0, {self._tags.shape[0]}) "
                f"for {self.id!r}")
        self._bs, rewards, dones = batch_step(self._bs, self._tags[acts])
        infos = {
            "terminated": self._bs.last_terminated,
            "truncated": self._bs.last_truncated,
            "events": self._bs.last_events,
        }
        return self._bs.frames, rewards, dones, infos


def make(env_id: str, **overrides) -> Env:
    """An Env handle for a registered environment id; overrides mirror the
    core's make_env."""
    return Env(make_env(env_id, **overrides))


def make_vec(env_id: str, n: int, seed: int = 0, **overrides) -> VecEnv:
    """A VecEnv handle over n already-reset environments."""
    return VecEnv(make_env(env_id, **overrides), n, seed)
