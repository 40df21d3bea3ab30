"""Fixed color tables shared by the renderer backends.

Everything here is frozen at import: tests pin golden frames against these
values, so editing them is a breaking change.
"""

from __future__ import annotations

import numpy as np

# Wall palette, indexed by the color id stored per wall tile. Index 0 is the
# plain `#` wall; 1-9 are the digit walls; 10-15 are extra hues cycled through
# by generated (uppercase-letter) wall symbols.
WALL_PALETTE = np.array([
    (158, 158, 158),   # 0  gray
    (196, 64, 64),     # 1  red
    (64, 150, 64),     # 2  green
    (70, 90, 200),     # 3  blue
    (200, 180, 60),    # 4  yellow
    (170, 80, 190),    # 5  purple
    (60, 170, 170),    # 6  teal
    (210, 120, 50),    # 7  orange
    (120, 120, 70),    # 8  olive
    (190, 100, 140),   # 9  rose
    (90, 140, 210),    # 10 sky
    (150, 190, 90),    # 11 lime
    (180, 140, 100),   # 12 tan
    (100, 180, 140),   # 13 mint
    (140, 100, 180),   # 14 violet
    (200, 150, 150),   # 15 salmon
], dtype=np.uint8)

# Key colors double as door colors; order is the KeyColor enum order.
KEY_RGB = np.array([
    (220, 60, 50),     # red
    (70, 110, 230),    # blue
    (230, 200, 40),    # yellow
], dtype=np.uint8)

# Doors render slightly darker than their key so the two read differently.
DOOR_RGB = np.array([
    (170, 40, 35),
    (50, 80, 180),
    (180, 155, 25),
], dtype=np.uint8)

GOAL_RGB = np.array((60, 220, 90), dtype=np.uint8)
MEDKIT_BOX_RGB = np.array((235, 235, 235), dtype=np.uint8)
MEDKIT_CROSS_RGB = np.array((200, 40, 40), dtype=np.uint8)

CEILING_RGB = np.array((56, 56, 72), dtype=np.uint8)
FLOOR_RGB = np.array((70, 66, 60), dtype=np.uint8)

# Distance attenuation: shade = 1 / (1 + ATTENUATION * perp_distance).
ATTENUATION = 0.15
