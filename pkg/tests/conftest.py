"""Shared fixtures: backend selection and random sealed-map generation."""

from __future__ import annotations

import random

import numpy as np
import pytest

from tilecast import backend as backend_mod
from tilecast.geometry import (CellTag, Door, EntityInit, EntityKind, KeyColor,
                               TileMap)


def _compiled_available() -> bool:
    try:
        from tilecast.backend import _core  # noqa: F401
        return True
    except ImportError:
        return False


HAVE_COMPILED = _compiled_available()

needs_compiled = pytest.mark.skipif(
    not HAVE_COMPILED, reason="compiled backend not built")


@pytest.fixture(params=["python", "compiled"])
def any_backend(request):
    """Run a test under each kernel backend."""
    if request.param == "compiled" and not HAVE_COMPILED:
        pytest.skip("compiled backend not built")
    old = backend_mod.backend_name()
    backend_mod.set_backend(request.param)
    yield request.param
    backend_mod.set_backend(old)


def random_tilemap(rng: random.Random, *, doors: bool = True,
                   entities: bool = True) -> TileMap:
    """A random sealed map built directly from arrays (no DSL)."""
    w = rng.randrange(6, 15)
    h = rng.randrange(6, 15)
    kind = np.zeros((h, w), dtype=np.uint8)
    wall_color = np.zeros((h, w), dtype=np.uint8)
    kind[0, :] = kind[-1, :] = CellTag.WALL
    kind[:, 0] = kind[:, -1] = CellTag.WALL
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            if rng.random() < 0.22:
                kind[y, x] = CellTag.WALL
                wall_color[y, x] = rng.randrange(0, 16)
    for y in range(h):
        for x in range(w):
            if kind[y, x] == CellTag.WALL and rng.random() < 0.5:
                wall_color[y, x] = rng.randrange(0, 16)

    floor_tiles = [(x, y) for y in range(1, h - 1) for x in range(1, w - 1)
                   if kind[y, x] == CellTag.FLOOR]
    if len(floor_tiles) < 6:  # rare dense roll; carve a guaranteed pocket
        for y in range(1, h - 1):
            for x in range(1, w - 1):
                kind[y, x] = CellTag.FLOOR
        floor_tiles = [(x, y) for y in range(1, h - 1)
                       for x in range(1, w - 1)]
    rng.shuffle(floor_tiles)

    door_list: list[Door] = []
    if doors:
        for tile in floor_tiles[: rng.randrange(0, 3)]:
            x, y = tile
            kind[y, x] = CellTag.DOOR
            door_list.append(Door(tile=tile, color=KeyColor(rng.randrange(3)),
                                  locked=bool(rng.random() < 0.5)))
        floor_tiles = [t for t in floor_tiles
                       if kind[t[1], t[0]] == CellTag.FLOOR]

    ents: list[EntityInit] = []
    if entities:
        n_ent = rng.randrange(0, min(5, len(floor_tiles) - 1))
        for tile in floor_tiles[:n_ent]:
            kd = rng.choice([EntityKind.KEY, EntityKind.GOAL,
                             EntityKind.MEDKIT])
            color = KeyColor(rng.randrange(3)) if kd == EntityKind.KEY else None
            ents.append(EntityInit(kind=kd, tile=tile, color=color))
        floor_tiles = floor_tiles[n_ent:]

    spawn = floor_tiles[-1]
    return TileMap(kind=kind, wall_color=wall_color,
                   doors=tuple(door_list), entities=tuple(ents),
                   spawn_candidates=(spawn,))


def mirror_tilemap(tmap: TileMap) -> TileMap:
    """Horizontal flip; door and entity indices keep their order."""
    w = tmap.width
    flip = lambda t: (w - 1 - t[0], t[1])  # noqa: E731
    return TileMap(
        kind=np.ascontiguousarray(np.fliplr(tmap.kind)),
        wall_color=np.ascontiguousarray(np.fliplr(tmap.wall_color)),
        doors=tuple(Door(tile=flip(d.tile), color=d.color, locked=d.locked)
                    for d in tmap.doors),
        entities=tuple(EntityInit(kind=e.kind, tile=flip(e.tile),
                                  color=e.color) for e in tmap.entities),
        spawn_candidates=tuple(flip(s) for s in tmap.spawn_candidates),
    )


def rotate_tilemap(tmap: TileMap) -> TileMap:
    """Rotate the world by the map (x, y) -> (H-1-y, x); indices keep order."""
    h = tmap.height
    rot = lambda t: (h - 1 - t[1], t[0])  # noqa: E731
    return TileMap(
        kind=np.ascontiguousarray(np.rot90(tmap.kind, k=-1)),
        wall_color=np.ascontiguousarray(np.rot90(tmap.wall_color, k=-1)),
        doors=tuple(Door(tile=rot(d.tile), color=d.color, locked=d.locked)
                    for d in tmap.doors),
        entities=tuple(EntityInit(kind=e.kind, tile=rot(e.tile),
                                  color=e.color) for e in tmap.entities),
        spawn_candidates=tuple(rot(s) for s in tmap.spawn_candidates),
    )
