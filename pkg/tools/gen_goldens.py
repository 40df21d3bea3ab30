"""Regenerate tests/data/golden_frames.npz from pinned poses."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from tilecast.mapdsl import load_map_file, parse_map
from tilecast.geometry import Pose, Vec2
from tilecast.render import render_frame

ROOT = Path(__file__).resolve().parents[1]
MAPS = ROOT / "src" / "tilecast" / "maps"
OUT = ROOT / "tests" / "data" / "golden_frames.npz"

D = 0.7071067811865476  # cos(pi/4) to double precision

POSES = [
    ("simple", 1.5, 1.5, 1.0, 0.0),
    ("simple", 1.5, 1.5, 0.0, 1.0),
    ("key-door", 1.5, 1.5, D, D),
    ("key-corridor", 1.5, 3.5, 1.0, 0.0),
    ("my-way-home", 4.5, 2.5, 0.0, 1.0),
    ("my-way-home", 20.5, 12.5, -D, D),
    ("health-gathering", 7.5, 8.5, -1.0, 0.0),
    ("dmlab-02", 1.5, 1.5, 0.0, 1.0),
]


def main() -> None:
    frames = {}
    for env, sx, sy, dx, dy in POSES:
        tmap = parse_map(load_map_file(MAPS / f"{env}.map")).unwrap()
        pose = Pose.looking(Vec2(sx, sy), Vec2(dx, dy))
        key = f"{env}|{sx}|{sy}|{dx}|{dy}"
        frames[key] = render_frame(tmap, pose)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(OUT, **frames)
    print(f"wrote {OUT} ({len(frames)} frames)")


if __name__ == "__main__":
    main()
