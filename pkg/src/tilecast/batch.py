"""Vectorized reset/step over N same-spec environments with auto-reset."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import backend, rng
from .backend import layout as L
from .dynamics import ACTION_NAMES, Action, EnvState, _state_from_block
from .geometry import ContractError
from .suite import EnvSpec
from .tables import OutBlock, StateBlock, run_kernel


def default_threads() -> int:
    env = os.environ.get("TILECAST_NUM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class BatchState:
    """N environments' state plus their rendered observation block.

    Results are a pure function of (BatchState, actions). With reuse=True
    stepping recycles the predecessor's buffers: a state is then valid only
    until its successor is stepped (the throughput path uses this).
    """

    spec: EnvSpec
    n: int
    _sb: StateBlock
    _ob: OutBlock
    _retired: tuple = field(default=(), repr=False)

    @property
    def frames(self) -> np.ndarray:
        """(n, obs_height, obs_width, 3) uint8 observation block."""
        return self._ob.frames

    def state(self, i: int) -> EnvState:
        if not (0 <= i < self.n):
            raise ContractError(f"environment index {i} out of range [0, {self.n})")
        return _state_from_block(self._sb, i)

    @property
    def states(self) -> tuple[EnvState, ...]:
        return tuple(self.state(i) for i in range(self.n))

    @property
    def last_terminated(self) -> np.ndarray:
        """Episode-ended-by-termination flags from the latest batch_step."""
        return (self._ob.dones != 0) & (self._ob.truncs == 0)

    @property
    def last_truncated(self) -> np.ndarray:
        return self._ob.truncs != 0

    @property
    def last_events(self) -> np.ndarray:
        """Per-env event bitmasks from the latest batch_step."""
        return self._ob.events


def batch_reset(spec: EnvSpec, n: int, seed: int, *,
                n_threads: int | None = None) -> BatchState:
    """Reset n independent environments; env i draws from stream
    split(from_seed(seed), i), so env 0 of a batch equals the scalar
    reset(spec, split(from_seed(seed), 0))."""
    if n < 1:
        raise ContractError(f"batch size must be >= 1, got {n}")
    t = spec.tables
    sb = StateBlock.alloc(n, t.n_doors, t.n_entities)
    ob = OutBlock.alloc(n, t.obs_height, t.obs_width)
    root = rng.from_seed(seed)
    for i in range(n):
        stream = rng.split(root, i)
        sb.rkey[i] = stream.key
        sb.rctr[i] = stream.counter
    threads = default_threads() if n_threads is None else max(1, n_threads)
    run_kernel(backend.active(), t, sb, ob, None, L.MODE_RESET,
               n_threads=threads)
    return BatchState(spec=spec, n=n, _sb=sb, _ob=ob)


def _coerce_actions(spec: EnvSpec, n: int,
                    actions: Sequence[Action | int] | np.ndarray) -> np.ndarray:
    acts = np.asarray(actions, dtype=np.int64)
    if acts.shape != (n,):
        raise ContractError(f"actions must have shape ({n},), got {acts.shape}")
    if acts.min(initial=0) < 0 or acts.max(initial=0) >= L.A_COUNT:
        raise ContractError(f"action tags must be in [0, {L.A_COUNT})")
    legal = spec.tables.legal
    if not np.all(legal[acts] != 0):
        bad = int(acts[legal[acts] == 0][0])
        names = ", ".join(ACTION_NAMES[a] for a in spec.action_set)
        raise ContractError(
            f"action {ACTION_NAMES[Action(bad)]!r} is not in {spec.id!r}'s "
            f"action set ({names})")
    return acts


def batch_step(
    bs: BatchState,
    actions: Sequence[Action | int] | np.ndarray,
    *,
    n_threads: int | None = None,
    validate: bool = False,
    reuse: bool = False,
) -> tuple[BatchState, np.ndarray, np.ndarray]:
    """Step every environment once; finished episodes auto-reset in the same
    call (their frame shows the new episode; the final reward and done flag
    are still reported). Returns (next_state, rewards, dones)."""
    spec = bs.spec
    t = spec.tables
    acts = _coerce_actions(spec, bs.n, actions)
    if reuse and bs._retired:
        sb, ob = bs._retired
    else:
        sb = StateBlock.alloc(bs.n, t.n_doors, t.n_entities)
        ob = OutBlock.alloc(bs.n, t.obs_height, t.obs_width)
    sb.copy_from(bs._sb)
    threads = default_threads() if n_threads is None else max(1, n_threads)
    violations = run_kernel(backend.active(), t, sb, ob, acts, L.MODE_STEP,
                            auto_reset=True, validate=validate,
                            n_threads=threads)
    if validate and violations:
        raise RuntimeError(
            f"collision invariant violated in {violations} environment step(s)")
    new = BatchState(spec=spec, n=bs.n, _sb=sb, _ob=ob,
                     _retired=(bs._sb, bs._ob) if reuse else ())
    return new, ob.rewards.copy(), ob.dones != 0


def policy_actions(spec: EnvSpec, n: int, steps: int,
                   seed: int = 0) -> np.ndarray:
    """The (steps, n) uniform-random action table for a seeded rollout.

    Drawn from a dedicated policy stream (split index 2**64-1, disjoint from
    the per-env reset streams), so a rollout is fully determined by
    (spec, n, steps, seed); bench and any external binding can reproduce the
    exact same trajectory."""
    action_tags = np.array([int(a) for a in spec.action_set], dtype=np.int64)
    policy = rng.split(rng.from_seed(seed), 0xFFFF_FFFF_FFFF_FFFF)
    counters = np.arange(steps * n, dtype=np.uint64).reshape(steps, n)
    draws = rng.policy_uniform(policy.key, counters, action_tags.shape[0])
    return action_tags[draws]


def throughput_probe(
    spec: EnvSpec,
    n: int,
    steps: int,
    seed: int = 0,
    *,
    n_threads: int | None = None,
) -> float:
    """Aggregate environment steps per second under a uniform-random policy,
    wall-clock timed including rendering."""
    if n < 1 or steps < 1:
        raise ContractError("n and steps must both be >= 1")
    bs = batch_reset(spec, n, seed, n_threads=n_threads)
    # pre-drawn actions so the timed loop measures stepping, not sampling
    all_actions = policy_actions(spec, n, steps, seed)

    warmup = min(3, steps)
    for s in range(warmup):
        bs, _, _ = batch_step(bs, all_actions[s], n_threads=n_threads, reuse=True)
    start = time.perf_counter()
    for s in range(steps):
        bs, _, _ = batch_step(bs, all_actions[s], n_threads=n_threads, reuse=True)
    elapsed = time.perf_counter() - start
    return (n * steps) / elapsed
