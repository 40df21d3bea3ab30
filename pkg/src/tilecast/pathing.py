"""Grid BFS helpers: reachability, shortest tile paths, key progression.

Used by the map parser (unreachable-goal warnings), the registry's
structural checks, and test planners. Pure functions over TileMap.
"""

from __future__ import annotations

from collections import deque
from typing import Collection, Literal

from .geometry import CellTag, EntityKind, KeyColor, TileMap

DoorPolicy = Literal["none", "all"] | Collection[int]


def _passable(tmap: TileMap, tx: int, ty: int, open_doors: DoorPolicy) -> bool:
    tag = tmap.kind[ty, tx]
    if tag == CellTag.FLOOR:
        return True
    if tag == CellTag.WALL:
        return False
    if open_doors == "all":
        return True
    if open_doors == "none":
        return False
    return int(tmap.door_index[ty, tx]) in open_doors


def bfs_path(
    tmap: TileMap,
    start: tuple[int, int],
    targets: Collection[tuple[int, int]],
    open_doors: DoorPolicy = "none",
) -> list[tuple[int, int]] | None:
    """Shortest 4-connected tile path from start to any target, or None.

    `open_doors` selects which doors count as passable: "none", "all", or a
    collection of door indices.
    """
    target_set = set(targets)
    if start in target_set:
        return [start]
    parents: dict[tuple[int, int], tuple[int, int]] = {start: start}
    queue = deque([start])
    while queue:
        tx, ty = queue.popleft()
        for nx, ny in ((tx + 1, ty), (tx - 1, ty), (tx, ty + 1), (tx, ty - 1)):
            if (nx, ny) in parents or not _passable(tmap, nx, ny, open_doors):
                continue
            parents[(nx, ny)] = (tx, ty)
            if (nx, ny) in target_set:
                path = [(nx, ny)]
                while path[-1] != start:
                    path.append(parents[path[-1]])
                path.reverse()
                return path
            queue.append((nx, ny))
    return None


def reachable_tiles(
    tmap: TileMap,
    start: tuple[int, int],
    open_doors: DoorPolicy = "none",
) -> set[tuple[int, int]]:
    """All tiles BFS-reachable from start under the door policy."""
    seen = {start}
    queue = deque([start])
    while queue:
        tx, ty = queue.popleft()
        for nx, ny in ((tx + 1, ty), (tx - 1, ty), (tx, ty + 1), (tx, ty - 1)):
            if (nx, ny) not in seen and _passable(tmap, nx, ny, open_doors):
                seen.add((nx, ny))
                queue.append((nx, ny))
    return seen


def progression_region(
    tmap: TileMap, start: tuple[int, int]
) -> tuple[set[tuple[int, int]], set[KeyColor]]:
    """Fixed point of collect-keys / open-doors starting with no keys.

    Unlocked doors are always openable; a locked door becomes passable once
    a key of its color is collectable. Returns (reachable tiles, held keys).
    """
    held: set[KeyColor] = set()
    key_tiles = {e.tile: e.color for e in tmap.entities if e.kind == EntityKind.KEY}
    while True:
        openable = {
            i for i, d in enumerate(tmap.doors)
            if not d.locked or d.color in held
        }
        region = reachable_tiles(tmap, start, open_doors=openable)
        gained = {key_tiles[t] for t in region if t in key_tiles} - held
        if not gained:
            return region, held
        held |= gained
