"""Map DSL: symbol table, diagnostics, and the parse/render round trip."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from tilecast.geometry import (CellTag, ContractError, Door, EntityInit,
                               EntityKind, KeyColor, TileMap)
from tilecast.mapdsl import (GENERATED_WALL_LETTERS, MapParseError, MapSource,
                             Severity, generated_wall_color, load_map_file,
                             parse_map, render_map_ascii)

MAPS_DIR = Path(__file__).resolve().parents[1] / "src" / "tilecast" / "maps"


def _parse(text: str) -> TileMap:
    return parse_map(text).unwrap()


def _frame(middle: str) -> str:
    """Wrap interior rows in a sealed #-border."""
    rows = middle.split("\n")
    w = max(len(r) for r in rows)
    top = "#" * (w + 2)
    return "\n".join([top] + [f"#{r.ljust(w, '.')}#" for r in rows] + [top])


# --- symbol goldens ---

def test_symbol_default_wall():
    t = _parse(_frame("S.#"))
    assert t.kind[1, 3] == CellTag.WALL
    assert t.wall_color[1, 3] == 0


@pytest.mark.parametrize("digit", "123456789")
def test_symbol_colored_wall(digit):
    t = _parse(_frame(f"S.{digit}"))
    assert t.kind[1, 3] == CellTag.WALL
    assert t.wall_color[1, 3] == int(digit)


@pytest.mark.parametrize("ch", [".", " "])
def test_symbol_floor(ch):
    t = _parse(_frame(f"S{ch}."))
    assert t.kind[1, 2] == CellTag.FLOOR


def test_symbol_spawn():
    t = _parse(_frame("S.S"))
    assert t.spawn_candidates == ((1, 1), (3, 1))
    assert t.kind[1, 1] == CellTag.FLOOR


def test_symbol_goal():
    t = _parse(_frame("S.G"))
    assert t.entities == (EntityInit(EntityKind.GOAL, (3, 1)),)
    assert t.goal_candidates == (0,)


@pytest.mark.parametrize("ch,color", [("r", KeyColor.RED), ("b", KeyColor.BLUE),
                                      ("y", KeyColor.YELLOW)])
def test_symbol_key(ch, color):
    t = _parse(_frame(f"S.{ch}"))
    assert t.entities == (EntityInit(EntityKind.KEY, (3, 1), color=color),)


@pytest.mark.parametrize("ch,color", [("R", KeyColor.RED), ("B", KeyColor.BLUE),
                                      ("Y", KeyColor.YELLOW)])
def test_symbol_locked_door(ch, color):
    t = _parse(_frame(f"S.{ch}.."))
    assert t.kind[1, 3] == CellTag.DOOR
    assert t.doors == (Door((3, 1), color, locked=True),)


@pytest.mark.parametrize("ch,color", [('"', KeyColor.BLUE), ("\\", KeyColor.YELLOW)])
def test_symbol_unlocked_door(ch, color):
    t = _parse(_frame(f"S.{ch}.."))
    assert t.doors == (Door((3, 1), color, locked=False),)


@pytest.mark.parametrize("ch", GENERATED_WALL_LETTERS)
def test_symbol_generated_wall(ch):
    t = _parse(_frame(f"S.{ch}"))
    assert t.kind[1, 3] == CellTag.WALL
    assert t.wall_color[1, 3] == generated_wall_color(ch)
    assert 10 <= t.wall_color[1, 3] <= 15


def test_generated_wall_palette_cycles():
    colors = [generated_wall_color(ch) for ch in GENERATED_WALL_LETTERS]
    assert colors[:6] == [10, 11, 12, 13, 14, 15]
    assert colors[6] == 10  # wraps


# --- diagnostics ---

def test_unknown_symbol_position_is_1_based():
    res = parse_map("####\n#S?#\n####")
    assert not res.ok
    (d,) = res.errors()
    assert (d.line, d.column) == (2, 3)
    assert "?" in d.message


def test_unsealed_border_reported():
    res = parse_map("####\n#S.#\n##.#")
    assert not res.ok
    assert any("unsealed" in d.message for d in res.errors())
    (d,) = res.errors()
    assert (d.line, d.column) == (3, 3)


def test_missing_spawn_is_error():
    res = parse_map("####\n#..#\n####")
    assert not res.ok
    assert any("spawn" in d.message for d in res.errors())


def test_too_few_lines():
    res = parse_map("####\n#S.#")
    assert not res.ok
    assert any("3 non-empty lines" in d.message for d in res.errors())


def test_unwrap_raises_with_rendered_diagnostics():
    res = parse_map("####\n#S?#\n####")
    with pytest.raises(MapParseError, match="line 2, column 3"):
        res.unwrap()


def test_diagnostics_point_into_original_text():
    # leading blank lines shift 1-based line numbers but are not part of grid
    res = parse_map("\n\n####\n#S?#\n####\n")
    (d,) = res.errors()
    assert (d.line, d.column) == (4, 3)


def test_unreachable_goal_is_warning_not_error():
    res = parse_map("#####\n#S#G#\n#####")
    assert res.ok
    warnings = [d for d in res.diagnostics if d.severity == Severity.WARNING]
    (w,) = warnings
    assert "unreachable" in w.message
    assert (w.line, w.column) == (2, 4)


def test_goal_behind_door_is_reachable_enough():
    # doors count as passable for the reachability warning
    res = parse_map("#####\n#SRG#\n#####")
    assert res.ok
    assert not any(d.severity == Severity.WARNING for d in res.diagnostics)


# --- padding and normalization ---

def test_ragged_lines_padded_with_wall():
    t = _parse("#####\n#S.\n#####")
    assert t.width == 5
    assert t.kind[1, 3] == CellTag.WALL
    assert t.kind[1, 4] == CellTag.WALL


def test_blank_surrounding_lines_stripped():
    a = _parse("####\n#S.#\n####")
    b = _parse("\n\n####\n#S.#\n####\n\n")
    assert a == b


# --- round trip ---

@pytest.mark.parametrize("path", sorted(MAPS_DIR.glob("*.map")),
                         ids=lambda p: p.stem)
def test_shipped_maps_round_trip(path):
    first = parse_map(load_map_file(path))
    assert first.ok, [str(d) for d in first.diagnostics]
    text = render_map_ascii(first.tilemap)
    second = parse_map(text)
    assert second.ok
    assert second.tilemap == first.tilemap
    assert render_map_ascii(second.tilemap) == text


def test_round_trip_preserves_symbols():
    src = ('#########\n'
           '#S.r"..1#\n'
           '#..2..Y.#\n'
           '#.b..G.A#\n'
           '#y.R....#\n'
           '#########')
    t = _parse(src)
    assert _parse(render_map_ascii(t)) == t


def test_render_rejects_inexpressible_maps():
    kind = np.zeros((3, 5), dtype=np.uint8)
    kind[0, :] = kind[-1, :] = CellTag.WALL
    kind[:, 0] = kind[:, -1] = CellTag.WALL
    t = TileMap(kind=kind, wall_color=np.zeros((3, 5), np.uint8), doors=(),
                entities=(EntityInit(EntityKind.MEDKIT, (2, 1)),),
                spawn_candidates=((1, 1),))
    with pytest.raises(ContractError, match="medkit"):
        render_map_ascii(t)

    kind2 = kind.copy()
    kind2[1, 2] = CellTag.DOOR
    t2 = TileMap(kind=kind2, wall_color=np.zeros((3, 5), np.uint8),
                 doors=(Door((2, 1), KeyColor.RED, locked=False),),
                 entities=(), spawn_candidates=((1, 1),))
    with pytest.raises(ContractError, match="red door"):
        render_map_ascii(t2)
