"""Shared constants for the kernel ABI.

Both kernel backends (_pycore and _core) index the packed constant vectors
with these names; the compiled module copies them into C globals at import,
so this file is the single definition.
"""

# float constant vector (f8[FC_COUNT])
FC_MOVE_SPEED = 0
FC_RADIUS = 1
FC_TURN_COS = 2
FC_TURN_SIN = 3
FC_ATTEN = 4
FC_GOAL_REWARD = 5
FC_LIVING_REWARD = 6
FC_HEALTH_DECAY = 7
FC_HEALTH_RESTORE = 8
FC_SPRITE_K = 9          # sprite half-width in camera-plane units * depth
FC_MIN_SPRITE_DEPTH = 10
FC_COUNT = 11

# int constant vector (i8[IC_COUNT] as int64)
IC_MAX_STEPS = 0
IC_GOAL_MODE = 1         # 0 static, 1 random per episode
IC_USE_HEALTH = 2
IC_COUNT = 3

# global action tags
A_FORWARD = 0
A_BACKWARD = 1
A_TURN_LEFT = 2
A_TURN_RIGHT = 3
A_STRAFE_LEFT = 4
A_STRAFE_RIGHT = 5
A_NOOP = 6
A_COUNT = 7

# cell tags (mirror geometry.CellTag)
C_FLOOR = 0
C_WALL = 1
C_DOOR = 2

# entity kinds (mirror geometry.EntityKind)
K_KEY = 0
K_GOAL = 1
K_MEDKIT = 2

# kernel status codes
ST_OK = 0
ST_ESCAPED = 1           # ray left the grid: map was not sealed
ST_STEP_BUDGET = 2       # ray exceeded 2*(w+h) boundary steps

# event bits (u32 per step)
EV_KEY_BASE_BIT = 0      # +KeyColor: picked key
EV_DOOR_BASE_BIT = 3     # +KeyColor: opened door
EV_MEDKIT_BIT = 6
EV_GOAL_BIT = 7
EV_DIED_BIT = 8
EV_TRUNCATED_BIT = 9

# batch kernel modes
MODE_RESET = 0
MODE_STEP = 1

# fixed capacity of the compiled kernels' stack buffers
MAX_ENTITIES = 64
MAX_DOORS = 32
