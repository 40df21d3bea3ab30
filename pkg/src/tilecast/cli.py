"""Command-line interface: bench, dump-episode, validate-maps."""

from __future__ import annotations

import json
import os
import platform
import sys
from pathlib import Path

import click
import numpy as np
from PIL import Image

from . import __version__
from .backend import backend_name
from .batch import (batch_reset, batch_step, default_threads,
                    policy_actions, throughput_probe)
from .dynamics import ACTIONS_BY_NAME, ACTION_NAMES, reset, step
from .mapdsl import MapSource, Severity, parse_map
from .rng import from_seed, next_below, split
from .suite import make_env, registered_ids

SCHEMA_VERSION = 1

_POLICY_STREAM = 0xFFFF_FFFF_FFFF_FFFF  # reserved split index for action draws


def _host_fingerprint() -> dict:
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "python": platform.python_version(),
        "cpu_count": os.cpu_count(),
        "backend": backend_name(),
        "tilecast": __version__,
    }


def _resolve_env(env_id: str):
    try:
        return make_env(env_id)
    except Exception:
        ids = ", ".join(registered_ids())
        click.echo(f"error: unknown environment {env_id!r}; valid ids: {ids}",
                   err=True)
        sys.exit(2)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Headless ray-casting environment engine."""


@main.command()
@click.option("--env", "env_id", required=True, help="Environment id.")
@click.option("--n", "n_envs", default=1, show_default=True, help="Batch size.")
@click.option("--steps", default=1000, show_default=True,
              help="Batched steps to time (per env).")
@click.option("--seed", default=0, show_default=True)
@click.option("--width", default=64, show_default=True)
@click.option("--height", default=64, show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False),
              default=None, help="Also write the report to this file.")
def bench(env_id: str, n_envs: int, steps: int, seed: int,
          width: int, height: int, json_path: str | None) -> None:
    """Measure batched steps/sec under a uniform-random policy."""
    if n_envs < 1 or steps < 1:
        raise click.UsageError("--n and --steps must be >= 1")
    _resolve_env(env_id)
    spec = make_env(env_id, obs_width=width, obs_height=height)
    rate = throughput_probe(spec, n_envs, steps, seed=seed)
    # separate untimed pass for the reward accounting: the timing probe's
    # warmup steps would make its trajectory ill-defined as a rollout
    bs = batch_reset(spec, n_envs, seed)
    acts = policy_actions(spec, n_envs, steps, seed)
    reward_sum = 0.0
    for s in range(steps):
        bs, rewards, _ = batch_step(bs, acts[s], reuse=True)
        reward_sum += float(rewards.sum())
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "bench",
        "config": {
            "env": env_id, "n": n_envs, "steps": steps, "seed": seed,
            "width": width, "height": height, "threads": default_threads(),
        },
        "results": {
            "steps_per_second": rate,
            "frames_per_second": rate,  # one rendered frame per env step
            "us_per_frame": 1e6 / rate,
            "reward_sum": reward_sum,
        },
        "host": _host_fingerprint(),
    }
    text = json.dumps(report, indent=2)
    click.echo(text)
    if json_path:
        Path(json_path).write_text(text + "\n")


def _read_action_script(path: Path, spec) -> list[int]:
    """One action name per line; blank lines and `#` comments ignored."""
    names = {ACTION_NAMES[a]: a for a in spec.action_set}
    actions = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        act = ACTIONS_BY_NAME.get(line.lower())
        if act is None:
            raise click.ClickException(
                f"{path}:{lineno}: unknown action {line!r} "
                f"(valid: {', '.join(sorted(ACTIONS_BY_NAME))})")
        if act not in spec.action_set:
            raise click.ClickException(
                f"{path}:{lineno}: action {line!r} is not in {spec.id!r}'s "
                f"action set ({', '.join(sorted(names))})")
        actions.append(int(act))
    return actions


@main.command("dump-episode")
@click.option("--env", "env_id", required=True, help="Environment id.")
@click.option("--seed", default=0, show_default=True)
@click.option("--steps", default=None, type=int,
              help="Cap the rollout length (default: run to episode end).")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False), help="Output directory.")
@click.option("--policy", default="random", show_default=True,
              help="'random' or the path of an action-script file.")
@click.option("--format", "fmt", default="png-sequence", show_default=True,
              type=click.Choice(["png-sequence", "strip"]))
@click.option("--width", default=64, show_default=True)
@click.option("--height", default=64, show_default=True)
def dump_episode(env_id: str, seed: int, steps: int | None, out_dir: str,
                 policy: str, fmt: str, width: int, height: int) -> None:
    """Roll one episode and write its frames as PNG files."""
    _resolve_env(env_id)
    spec = make_env(env_id, obs_width=width, obs_height=height)

    script: list[int] | None = None
    if policy != "random":
        script = _read_action_script(Path(policy), spec)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    state, obs = reset(spec, split(from_seed(seed), 0))
    frames = [obs]
    actions_taken: list[str] = []
    rewards: list[float] = []
    events: list[list[str]] = []
    rng = split(from_seed(seed), _POLICY_STREAM)
    terminated = truncated = False
    k = 0
    while not state.done:
        if steps is not None and k >= steps:
            break
        if script is not None:
            if k >= len(script):
                break
            act = script[k]
        else:
            u, rng = next_below(rng, len(spec.action_set))
            act = int(spec.action_set[u])
        res = step(spec, state, act)
        state = res.state
        frames.append(res.observation)
        actions_taken.append(ACTION_NAMES[act])
        rewards.append(res.reward)
        events.append(list(res.info["events"]))
        terminated = res.info["terminated"]
        truncated = res.info["truncated"]
        k += 1

    if fmt == "strip":
        strip = np.concatenate(frames, axis=1)
        Image.fromarray(strip).save(out / "strip.png")
        written = ["strip.png"]
    else:
        written = []
        for idx, f in enumerate(frames):
            name = f"frame_{idx:05d}.png"
            Image.fromarray(f).save(out / name)
            written.append(name)

    meta = {
        "schema_version": SCHEMA_VERSION,
        "kind": "episode",
        "config": {"env": env_id, "seed": seed, "policy": policy,
                   "format": fmt, "width": width, "height": height},
        "steps": k,
        "actions": actions_taken,
        "rewards": rewards,
        "events": events,
        "terminated": terminated,
        "truncated": truncated,
        "frames": written,
        "host": _host_fingerprint(),
    }
    (out / "episode.json").write_text(json.dumps(meta, indent=2) + "\n")
    click.echo(f"wrote {len(written)} file(s) + episode.json to {out}")


@main.command("validate-maps")
@click.argument("paths", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "json_path", type=click.Path(dir_okay=False),
              default=None, help="Also write diagnostics to this file.")
def validate_maps(paths: tuple[str, ...], json_path: str | None) -> None:
    """Parse and validate map files; exit 0 iff no Errors."""
    all_diags = []
    failed = False
    for p in paths:
        text = Path(p).read_text()
        result = parse_map(MapSource(text, name=p))
        for d in result.diagnostics:
            sev = "error" if d.severity == Severity.ERROR else "warning"
            click.echo(f"{p}:{d.line}:{d.column}: {sev}: {d.message}")
            all_diags.append({"file": p, "line": d.line, "column": d.column,
                              "severity": sev, "message": d.message})
        if not result.ok:
            failed = True
        else:
            click.echo(f"{p}: ok")
    if json_path:
        doc = {"schema_version": SCHEMA_VERSION, "kind": "map-diagnostics",
               "diagnostics": all_diags, "ok": not failed}
        Path(json_path).write_text(json.dumps(doc, indent=2) + "\n")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
