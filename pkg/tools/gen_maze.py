#!/usr/bin/env python3
"""One-shot generator for the shipped maze maps.

Outputs are frozen under src/tilecast/maps/ and committed; the engine never
generates mazes at runtime. Rerunning this script reproduces the same files
byte for byte (fixed seeds).
"""

from __future__ import annotations

import random
from pathlib import Path

MAPS = Path(__file__).resolve().parents[1] / "src" / "tilecast" / "maps"


def gen_my_way_home() -> str:
    """3x3 grid of rooms, each wall painted with its room's digit, eight
    spawn rooms and one goal room."""
    w, h = 25, 16
    grid = [["#"] * w for _ in range(h)]
    rooms = {}  # (i, j) -> (x0, x1, y0, y1) interior bounds inclusive
    for j in range(3):
        for i in range(3):
            x0, x1 = 1 + 8 * i, 7 + 8 * i
            y0, y1 = 1 + 5 * j, 4 + 5 * j
            rooms[(i, j)] = (x0, x1, y0, y1)
            for y in range(y0, y1 + 1):
                for x in range(x0, x1 + 1):
                    grid[y][x] = "."

    openings = [
        # (x range, y range) carved to floor
        (range(8, 9), range(2, 4)), (range(16, 17), range(2, 4)),
        (range(8, 9), range(7, 9)), (range(16, 17), range(7, 9)),
        (range(8, 9), range(12, 14)), (range(16, 17), range(12, 14)),
        (range(3, 5), range(5, 6)), (range(3, 5), range(10, 11)),
        (range(19, 21), range(10, 11)),
    ]
    for xs, ys in openings:
        for y in ys:
            for x in xs:
                grid[y][x] = "."

    # paint each wall cell with the digit of the first adjacent room
    def room_of(x: int, y: int) -> int | None:
        for (i, j), (x0, x1, y0, y1) in rooms.items():
            if x0 <= x <= x1 and y0 <= y <= y1:
                return 1 + i + 3 * j
        return None

    for y in range(h):
        for x in range(w):
            if grid[y][x] != "#":
                continue
            for nx, ny in ((x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y)):
                if 0 <= nx < w and 0 <= ny < h:
                    r = room_of(nx, ny)
                    if r is not None:
                        grid[y][x] = str(r)
                        break

    for (i, j), (x0, x1, y0, y1) in rooms.items():
        cx, cy = (x0 + x1) // 2, (y0 + y1) // 2
        grid[cy][cx] = "G" if (i, j) == (2, 2) else "S"
    return "\n".join("".join(row) for row in grid) + "\n"


def gen_dmlab(size: int, n_spawns: int, n_goals: int, seed: int) -> str:
    """Recursive-backtracker maze with mixed wall symbols; spawns and goal
    candidates sit on dead ends, goals picked far from the first spawn."""
    rng = random.Random(seed)
    cells_w = (size - 1) // 2
    cells_h = (size - 1) // 2
    grid = [["#"] * size for _ in range(size)]

    def cell(cx: int, cy: int) -> tuple[int, int]:
        return 2 * cx + 1, 2 * cy + 1

    visited = [[False] * cells_w for _ in range(cells_h)]
    stack = [(0, 0)]
    visited[0][0] = True
    x, y = cell(0, 0)
    grid[y][x] = "."
    while stack:
        cx, cy = stack[-1]
        nbrs = [(nx, ny) for nx, ny in ((cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1))
                if 0 <= nx < cells_w and 0 <= ny < cells_h and not visited[ny][nx]]
        if not nbrs:
            stack.pop()
            continue
        nx, ny = rng.choice(nbrs)
        visited[ny][nx] = True
        ax, ay = cell(cx, cy)
        bx, by = cell(nx, ny)
        grid[(ay + by) // 2][(ax + bx) // 2] = "."
        grid[by][bx] = "."
        stack.append((nx, ny))

    # vary the walls: mostly plain, some colored digits and generated letters
    pool = "####13579ACE"
    for yy in range(size):
        for xx in range(size):
            if grid[yy][xx] == "#":
                grid[yy][xx] = pool[(xx * 7 + yy * 13 + seed) % len(pool)]

    # dead ends: open cells with exactly one open neighbor
    def open_at(xx: int, yy: int) -> bool:
        return 0 <= xx < size and 0 <= yy < size and grid[yy][xx] == "."

    dead_ends = []
    for cy in range(cells_h):
        for cx in range(cells_w):
            xx, yy = cell(cx, cy)
            n_open = sum(open_at(xx + dx, yy + dy)
                         for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)))
            if n_open == 1:
                dead_ends.append((xx, yy))

    # BFS distance from the maze origin
    from collections import deque
    dist = {cell(0, 0): 0}
    q = deque([cell(0, 0)])
    while q:
        xx, yy = q.popleft()
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nxt = (xx + dx, yy + dy)
            if nxt not in dist and open_at(*nxt):
                dist[nxt] = dist[(xx, yy)] + 1
                q.append(nxt)

    dead_ends.sort(key=lambda p: -dist[p])
    goals = []
    for p in dead_ends:
        if len(goals) >= n_goals:
            break
        if all(abs(p[0] - g[0]) + abs(p[1] - g[1]) >= size // 3 for g in goals):
            goals.append(p)
    for p in dead_ends:  # relax spacing if the maze was too tight
        if len(goals) >= n_goals:
            break
        if p not in goals:
            goals.append(p)
    spawn_pool = [p for p in reversed(dead_ends) if p not in goals]
    if len(spawn_pool) < n_spawns:  # tiny mazes: fall back to corridor cells
        extra = sorted((p for p in dist if p not in goals and p not in spawn_pool),
                       key=lambda p: dist[p])
        spawn_pool.extend(extra)
    spawns = spawn_pool[:n_spawns]

    for x, y in goals:
        grid[y][x] = "G"
    for x, y in spawns:
        grid[y][x] = "S"
    return "\n".join("".join(row) for row in grid) + "\n"


def main() -> None:
    MAPS.mkdir(parents=True, exist_ok=True)
    (MAPS / "my-way-home.map").write_text(gen_my_way_home())
    (MAPS / "dmlab-01.map").write_text(gen_dmlab(9, n_spawns=2, n_goals=3, seed=11))
    (MAPS / "dmlab-02.map").write_text(gen_dmlab(15, n_spawns=3, n_goals=4, seed=22))
    (MAPS / "dmlab-03.map").write_text(gen_dmlab(21, n_spawns=4, n_goals=5, seed=33))
    for f in sorted(MAPS.glob("*.map")):
        print(f"== {f.name}")
        print(f.read_text())


if __name__ == "__main__":
    main()
