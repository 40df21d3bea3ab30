# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled kernels: a statement-by-statement transcription of _pycore.

Every floating-point expression, branch, and evaluation order matches the
pure-Python file; outputs are bit-identical (the build disables FMA
contraction to keep it that way). Edit _pycore.py first, then mirror here.
"""

from cython.parallel cimport prange
from libc.math cimport floor, sqrt, INFINITY
from libc.stdint cimport (int16_t, int32_t, int64_t, uint8_t, uint32_t,
                          uint64_t)

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

BACKEND_NAME = "compiled"

cdef enum:
    A_FORWARD = 0
    A_BACKWARD = 1
    A_TURN_LEFT = 2
    A_TURN_RIGHT = 3
    A_STRAFE_LEFT = 4
    A_STRAFE_RIGHT = 5
    A_NOOP = 6
    C_FLOOR = 0
    C_WALL = 1
    C_DOOR = 2
    K_KEY = 0
    K_GOAL = 1
    K_MEDKIT = 2
    ST_OK = 0
    ST_ESCAPED = 1
    ST_STEP_BUDGET = 2
    EV_KEY_BASE_BIT = 0
    EV_DOOR_BASE_BIT = 3
    EV_MEDKIT_BIT = 6
    EV_GOAL_BIT = 7
    EV_DIED_BIT = 8
    EV_TRUNCATED_BIT = 9
    MODE_RESET = 0
    MODE_STEP = 1
    MAX_ENTITIES = 64

cdef enum:
    FC_MOVE_SPEED = 0
    FC_RADIUS = 1
    FC_TURN_COS = 2
    FC_TURN_SIN = 3
    FC_ATTEN = 4
    FC_GOAL_REWARD = 5
    FC_LIVING_REWARD = 6
    FC_HEALTH_DECAY = 7
    FC_HEALTH_RESTORE = 8
    FC_SPRITE_K = 9
    FC_MIN_SPRITE_DEPTH = 10
    IC_MAX_STEPS = 0
    IC_GOAL_MODE = 1
    IC_USE_HEALTH = 2

cdef double PLANE_HALF_WIDTH = 0.66

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t _MIX2 = 0x94D049BB133111EBULL


def _check_layout():
    """Fail the import loudly if layout.py ever drifts from the enums above."""
    from . import layout as L
    from .. import geometry
    pairs = (
        ("A_FORWARD", A_FORWARD), ("A_BACKWARD", A_BACKWARD),
        ("A_TURN_LEFT", A_TURN_LEFT), ("A_TURN_RIGHT", A_TURN_RIGHT),
        ("A_STRAFE_LEFT", A_STRAFE_LEFT), ("A_STRAFE_RIGHT", A_STRAFE_RIGHT),
        ("A_NOOP", A_NOOP), ("C_FLOOR", C_FLOOR), ("C_WALL", C_WALL),
        ("C_DOOR", C_DOOR), ("K_KEY", K_KEY), ("K_GOAL", K_GOAL),
        ("K_MEDKIT", K_MEDKIT), ("ST_OK", ST_OK), ("ST_ESCAPED", ST_ESCAPED),
        ("ST_STEP_BUDGET", ST_STEP_BUDGET),
        ("EV_KEY_BASE_BIT", EV_KEY_BASE_BIT),
        ("EV_DOOR_BASE_BIT", EV_DOOR_BASE_BIT),
        ("EV_MEDKIT_BIT", EV_MEDKIT_BIT), ("EV_GOAL_BIT", EV_GOAL_BIT),
        ("EV_DIED_BIT", EV_DIED_BIT), ("EV_TRUNCATED_BIT", EV_TRUNCATED_BIT),
        ("MODE_RESET", MODE_RESET), ("MODE_STEP", MODE_STEP),
        ("MAX_ENTITIES", MAX_ENTITIES),
        ("FC_MOVE_SPEED", FC_MOVE_SPEED), ("FC_RADIUS", FC_RADIUS),
        ("FC_TURN_COS", FC_TURN_COS), ("FC_TURN_SIN", FC_TURN_SIN),
        ("FC_ATTEN", FC_ATTEN), ("FC_GOAL_REWARD", FC_GOAL_REWARD),
        ("FC_LIVING_REWARD", FC_LIVING_REWARD),
        ("FC_HEALTH_DECAY", FC_HEALTH_DECAY),
        ("FC_HEALTH_RESTORE", FC_HEALTH_RESTORE),
        ("FC_SPRITE_K", FC_SPRITE_K),
        ("FC_MIN_SPRITE_DEPTH", FC_MIN_SPRITE_DEPTH),
        ("IC_MAX_STEPS", IC_MAX_STEPS), ("IC_GOAL_MODE", IC_GOAL_MODE),
        ("IC_USE_HEALTH", IC_USE_HEALTH),
    )
    for name, val in pairs:
        if getattr(L, name) != val:
            raise ImportError(
                f"compiled backend is stale: layout.{name} != {val}; rebuild")
    if geometry.PLANE_HALF_WIDTH != PLANE_HALF_WIDTH:
        raise ImportError("compiled backend is stale: PLANE_HALF_WIDTH differs")


_check_layout()


cdef inline uint64_t _draw_below(uint64_t key, uint64_t* ctr, uint64_t n) noexcept nogil:
    # splitmix-style finalizer over key + ctr*GOLDEN, then multiply-high
    cdef uint64_t x = key + ctr[0] * _GOLDEN
    x ^= x >> 30
    x = x * _MIX1
    x ^= x >> 27
    x = x * _MIX2
    x ^= x >> 31
    ctr[0] = ctr[0] + 1
    return <uint64_t>((<u128>x * <u128>n) >> 64)


cdef int _cast_ray(const uint8_t[:, ::1] kind, const int16_t[:, ::1] didx,
                   const uint8_t[::1] dopen, double ox, double oy,
                   double rx, double ry,
                   int* mapx_out, int* mapy_out, int* side_out,
                   double* perp_out, double* wu_out, int* steps_out) noexcept nogil:
    cdef int h = <int>kind.shape[0]
    cdef int w = <int>kind.shape[1]
    cdef int mapx = <int>floor(ox)
    cdef int mapy = <int>floor(oy)
    cdef double ddx, ddy, sdx, sdy, perp, wu
    cdef int stepx, stepy, side, steps, limit, tag

    if rx != 0.0:
        ddx = abs(1.0 / rx)
        stepx = 1 if rx > 0.0 else -1
        sdx = ((mapx + 1.0) - ox) * ddx if rx > 0.0 else (ox - mapx) * ddx
    else:
        ddx = INFINITY
        stepx = 0
        sdx = INFINITY
    if ry != 0.0:
        ddy = abs(1.0 / ry)
        stepy = 1 if ry > 0.0 else -1
        sdy = ((mapy + 1.0) - oy) * ddy if ry > 0.0 else (oy - mapy) * ddy
    else:
        ddy = INFINITY
        stepy = 0
        sdy = INFINITY

    limit = 2 * (w + h)
    side = 0
    steps = 0
    while True:
        if sdx < sdy:
            sdx += ddx
            mapx += stepx
            side = 0
        else:
            sdy += ddy
            mapy += stepy
            side = 1
        steps += 1
        if steps > limit:
            mapx_out[0] = mapx; mapy_out[0] = mapy; side_out[0] = side
            perp_out[0] = 0.0; wu_out[0] = 0.0; steps_out[0] = steps
            return ST_STEP_BUDGET
        if mapx < 0 or mapx >= w or mapy < 0 or mapy >= h:
            mapx_out[0] = mapx; mapy_out[0] = mapy; side_out[0] = side
            perp_out[0] = 0.0; wu_out[0] = 0.0; steps_out[0] = steps
            return ST_ESCAPED
        tag = kind[mapy, mapx]
        if tag == C_WALL:
            break
        if tag == C_DOOR and dopen[didx[mapy, mapx]] == 0:
            break

    if side == 0:
        perp = sdx - ddx
        wu = oy + perp * ry
    else:
        perp = sdy - ddy
        wu = ox + perp * rx
    wu -= floor(wu)
    mapx_out[0] = mapx; mapy_out[0] = mapy; side_out[0] = side
    perp_out[0] = perp; wu_out[0] = wu; steps_out[0] = steps
    return ST_OK


cdef inline int _sprite_mask(int kd, double aa, double v) noexcept nogil:
    cdef double dv, ea, ev, e
    if kd == K_GOAL:
        dv = v - 0.5
        if dv < 0.0:
            dv = -dv
        if aa + dv * 2.0 <= 0.8:
            return 1
        return 0
    if kd == K_KEY:
        ea = aa / 0.30
        ev = (v - 0.30) / 0.18
        e = ea * ea + ev * ev
        if 0.30 <= e <= 1.0:
            return 1
        if aa <= 0.07 and 0.30 <= v <= 0.85:
            return 1
        if aa <= 0.24 and 0.62 <= v <= 0.70:
            return 1
        if aa <= 0.24 and 0.76 <= v <= 0.84:
            return 1
        return 0
    # medkit
    if aa <= 0.10 and 0.32 <= v <= 0.73:
        return 1
    if aa <= 0.38 and 0.47 <= v <= 0.60:
        return 1
    if aa <= 0.60 and 0.25 <= v <= 0.80:
        return 2
    return 0


cdef int _render_into(const uint8_t[:, ::1] kind, const uint8_t[:, ::1] wcol,
                      const int16_t[:, ::1] didx, const uint8_t[::1] dcol,
                      const uint8_t[::1] ekind, const uint8_t[::1] ecol,
                      const double[::1] epx, const double[::1] epy,
                      const uint8_t[:, ::1] pal, const uint8_t[:, ::1] door_rgb,
                      const uint8_t[:, ::1] key_rgb, const uint8_t[::1] goal_rgb,
                      const uint8_t[::1] med_box, const uint8_t[::1] med_cross,
                      const uint8_t[::1] ceil_rgb, const uint8_t[::1] floor_rgb,
                      const double[::1] coef, const double[::1] fc,
                      double px, double py, double dx, double dy,
                      const uint8_t[::1] dopen_row, const uint8_t[::1] ealive_row,
                      int agoal,
                      uint8_t[:, :, ::1] frame, double[::1] zbuf) noexcept nogil:
    cdef int obs_h = <int>frame.shape[0]
    cdef int obs_w = <int>frame.shape[1]
    cdef int h2 = obs_h // 2
    cdef double atten = fc[FC_ATTEN]
    cdef double planex = -dy * PLANE_HALF_WIDTH
    cdef double planey = dx * PLANE_HALF_WIDTH

    cdef uint8_t cr = ceil_rgb[0]
    cdef uint8_t cg = ceil_rgb[1]
    cdef uint8_t cb = ceil_rgb[2]
    cdef uint8_t fr = floor_rgb[0]
    cdef uint8_t fg = floor_rgb[1]
    cdef uint8_t fb = floor_rgb[2]

    cdef int c, row, status, mapx, mapy, side, steps, tag, di
    cdef double k, rx, ry, perp, wu, shade, lh_f
    cdef double b0r, b0g, b0b
    cdef int wr, wg, wb, half, top, bot, t0, b0

    for c in range(obs_w):
        k = coef[c]
        rx = dx + planex * k
        ry = dy + planey * k
        status = _cast_ray(kind, didx, dopen_row, px, py, rx, ry,
                           &mapx, &mapy, &side, &perp, &wu, &steps)
        if status != ST_OK:
            return status
        zbuf[c] = perp
        shade = 1.0 / (1.0 + atten * perp)
        tag = kind[mapy, mapx]
        if tag == C_DOOR:
            di = dcol[didx[mapy, mapx]]
            b0r = door_rgb[di, 0]
            b0g = door_rgb[di, 1]
            b0b = door_rgb[di, 2]
        else:
            di = wcol[mapy, mapx]
            b0r = pal[di, 0]
            b0g = pal[di, 1]
            b0b = pal[di, 2]
        wr = <int>(b0r * shade)
        wg = <int>(b0g * shade)
        wb = <int>(b0b * shade)
        lh_f = obs_h / perp
        if lh_f > 1e9:
            lh_f = 1e9
        half = <int>lh_f // 2
        top = h2 - half
        bot = h2 + half
        t0 = top if top > 0 else 0
        b0 = bot if bot < obs_h else obs_h
        for row in range(0, t0):
            frame[row, c, 0] = cr
            frame[row, c, 1] = cg
            frame[row, c, 2] = cb
        for row in range(t0, b0):
            frame[row, c, 0] = <uint8_t>wr
            frame[row, c, 1] = <uint8_t>wg
            frame[row, c, 2] = <uint8_t>wb
        for row in range(b0, obs_h):
            frame[row, c, 0] = fr
            frame[row, c, 1] = fg
            frame[row, c, 2] = fb

    # sprite pass
    cdef int n_ent = <int>ekind.shape[0]
    cdef double deps[MAX_ENTITIES]
    cdef double lats[MAX_ENTITIES]
    cdef int ents[MAX_ENTITIES]
    cdef int m = 0
    cdef double det = planex * dy - dx * planey
    cdef double invdet, relx, rely, lat, dep
    cdef int e, i, j
    cdef double d_item, l_item
    cdef int e_item
    if det != 0.0:
        invdet = 1.0 / det
        for e in range(n_ent):
            if ealive_row[e] == 0:
                continue
            if ekind[e] == K_GOAL and e != agoal:
                continue
            relx = epx[e] - px
            rely = epy[e] - py
            lat = invdet * (dy * relx - dx * rely)
            dep = invdet * (-planey * relx + planex * rely)
            if dep < fc[FC_MIN_SPRITE_DEPTH]:
                continue
            deps[m] = dep
            lats[m] = lat
            ents[m] = e
            m += 1
    # insertion sort, far to near; stable for equal depths
    for i in range(1, m):
        d_item = deps[i]
        l_item = lats[i]
        e_item = ents[i]
        j = i
        while j > 0 and deps[j - 1] < d_item:
            deps[j] = deps[j - 1]
            lats[j] = lats[j - 1]
            ents[j] = ents[j - 1]
            j -= 1
        deps[j] = d_item
        lats[j] = l_item
        ents[j] = e_item

    cdef int oi, kd, vhalf, vtop, vbot, denom, r0, r1, mk
    cdef double ks, halfk, sh_f, a, aa, v
    cdef double m1r, m1g, m1b
    cdef int s1r, s1g, s1b, s2r, s2g, s2b
    for oi in range(m):
        dep = deps[oi]
        lat = lats[oi]
        e = ents[oi]
        ks = lat / dep
        halfk = fc[FC_SPRITE_K] / dep
        shade = 1.0 / (1.0 + atten * dep)
        sh_f = obs_h / dep
        if sh_f > 1e9:
            sh_f = 1e9
        vhalf = <int>sh_f // 2
        vtop = h2 - vhalf
        vbot = h2 + vhalf
        denom = vbot - vtop
        if denom <= 0:
            continue
        r0 = vtop if vtop > 0 else 0
        r1 = vbot if vbot < obs_h else obs_h
        kd = ekind[e]
        if kd == K_KEY:
            m1r = key_rgb[ecol[e], 0]
            m1g = key_rgb[ecol[e], 1]
            m1b = key_rgb[ecol[e], 2]
        elif kd == K_GOAL:
            m1r = goal_rgb[0]
            m1g = goal_rgb[1]
            m1b = goal_rgb[2]
        else:
            m1r = med_cross[0]
            m1g = med_cross[1]
            m1b = med_cross[2]
        s1r = <int>(m1r * shade)
        s1g = <int>(m1g * shade)
        s1b = <int>(m1b * shade)
        s2r = <int>(med_box[0] * shade)
        s2g = <int>(med_box[1] * shade)
        s2b = <int>(med_box[2] * shade)
        for c in range(obs_w):
            if zbuf[c] <= dep:
                continue
            a = (coef[c] - ks) / halfk
            if a <= -1.0 or a >= 1.0:
                continue
            aa = a if a >= 0.0 else -a
            for row in range(r0, r1):
                v = ((row - vtop) + 0.5) / denom
                mk = _sprite_mask(kd, aa, v)
                if mk == 1:
                    frame[row, c, 0] = <uint8_t>s1r
                    frame[row, c, 1] = <uint8_t>s1g
                    frame[row, c, 2] = <uint8_t>s1b
                elif mk == 2:
                    frame[row, c, 0] = <uint8_t>s2r
                    frame[row, c, 1] = <uint8_t>s2g
                    frame[row, c, 2] = <uint8_t>s2b
    return ST_OK


cdef int _blocked(const uint8_t[:, ::1] kind, const int16_t[:, ::1] didx,
                  const uint8_t[::1] dopen_row, int w, int h,
                  double cx, double cy, double radius) noexcept nogil:
    cdef int tx0 = <int>floor(cx - radius)
    cdef int tx1 = <int>floor(cx + radius)
    cdef int ty0 = <int>floor(cy - radius)
    cdef int ty1 = <int>floor(cy + radius)
    cdef double r2 = radius * radius
    cdef int tx, ty, tag
    cdef double nx, ny, ddx, ddy
    for ty in range(ty0, ty1 + 1):
        for tx in range(tx0, tx1 + 1):
            if tx < 0 or tx >= w or ty < 0 or ty >= h:
                return 1
            tag = kind[ty, tx]
            if tag == C_FLOOR:
                continue
            if tag == C_DOOR and dopen_row[didx[ty, tx]] != 0:
                continue
            nx = cx
            if nx < tx:
                nx = tx
            elif nx > tx + 1.0:
                nx = tx + 1.0
            ny = cy
            if ny < ty:
                ny = ty
            elif ny > ty + 1.0:
                ny = ty + 1.0
            ddx = cx - nx
            ddy = cy - ny
            if ddx * ddx + ddy * ddy < r2:
                return 1
    return 0


cdef uint32_t _touch_doors(const uint8_t[:, ::1] kind, const int16_t[:, ::1] didx,
                           const uint8_t[::1] dcol, const uint8_t[::1] dlock,
                           uint8_t[::1] dopen_row, int w, int h,
                           double cx, double cy, double radius,
                           uint8_t inv) noexcept nogil:
    cdef uint32_t events = 0
    cdef int tx0 = <int>floor(cx - radius)
    cdef int tx1 = <int>floor(cx + radius)
    cdef int ty0 = <int>floor(cy - radius)
    cdef int ty1 = <int>floor(cy + radius)
    cdef double r2 = radius * radius
    cdef int tx, ty, di
    cdef double nx, ny, ddx, ddy
    for ty in range(ty0, ty1 + 1):
        for tx in range(tx0, tx1 + 1):
            if tx < 0 or tx >= w or ty < 0 or ty >= h:
                continue
            if kind[ty, tx] != C_DOOR:
                continue
            di = didx[ty, tx]
            if dopen_row[di] != 0:
                continue
            nx = cx
            if nx < tx:
                nx = tx
            elif nx > tx + 1.0:
                nx = tx + 1.0
            ny = cy
            if ny < ty:
                ny = ty
            elif ny > ty + 1.0:
                ny = ty + 1.0
            ddx = cx - nx
            ddy = cy - ny
            if ddx * ddx + ddy * ddy >= r2:
                continue
            if dlock[di] != 0 and (inv >> dcol[di]) & 1 == 0:
                continue  # locked and no matching key
            dopen_row[di] = 1
            events |= (<uint32_t>1) << (EV_DOOR_BASE_BIT + dcol[di])
    return events


cdef void _reset_env(Py_ssize_t i,
                     const uint8_t[:, ::1] kind, const uint8_t[:, ::1] wcol,
                     const int16_t[:, ::1] didx, const uint8_t[::1] dcol,
                     const uint8_t[::1] ekind, const uint8_t[::1] ecol,
                     const double[::1] epx, const double[::1] epy,
                     const double[::1] spx, const double[::1] spy,
                     const int32_t[::1] goal_ent, const double[:, ::1] dirs,
                     const uint8_t[:, ::1] pal, const uint8_t[:, ::1] door_rgb,
                     const uint8_t[:, ::1] key_rgb, const uint8_t[::1] goal_rgb,
                     const uint8_t[::1] med_box, const uint8_t[::1] med_cross,
                     const uint8_t[::1] ceil_rgb, const uint8_t[::1] floor_rgb,
                     const double[::1] coef, const double[::1] fc,
                     const int64_t[::1] ic,
                     double[::1] px, double[::1] py,
                     double[::1] dx, double[::1] dy,
                     double[::1] health, uint8_t[::1] inv, int64_t[::1] t,
                     uint64_t[::1] rkey, uint64_t[::1] rctr,
                     uint8_t[::1] done, int32_t[::1] agoal,
                     uint8_t[:, ::1] dopen, uint8_t[:, ::1] ealive,
                     uint8_t[:, :, :, ::1] frames, double[:, ::1] zbuf,
                     int32_t[::1] statuses) noexcept nogil:
    cdef uint64_t key = rkey[i]
    cdef uint64_t ctr = rctr[i]
    cdef uint64_t n_spawns = <uint64_t>spx.shape[0]
    cdef uint64_t n_goals = <uint64_t>goal_ent.shape[0]
    cdef uint64_t v
    cdef Py_ssize_t d, e
    # draw order is part of the engine contract: spawn, heading, then the
    # active goal only in random-goal mode
    v = _draw_below(key, &ctr, n_spawns)
    px[i] = spx[v]
    py[i] = spy[v]
    v = _draw_below(key, &ctr, 4)
    dx[i] = dirs[v, 0]
    dy[i] = dirs[v, 1]
    if ic[IC_GOAL_MODE] == 1 and n_goals > 0:
        v = _draw_below(key, &ctr, n_goals)
        agoal[i] = goal_ent[v]
    elif n_goals > 0:
        agoal[i] = goal_ent[0]
    else:
        agoal[i] = -1
    rctr[i] = ctr
    health[i] = 100.0
    inv[i] = 0
    t[i] = 0
    done[i] = 0
    for d in range(dopen.shape[1]):
        dopen[i, d] = 0
    for e in range(ealive.shape[1]):
        ealive[i, e] = 1
    statuses[i] = _render_into(
        kind, wcol, didx, dcol, ekind, ecol, epx, epy,
        pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
        ceil_rgb, floor_rgb, coef, fc,
        px[i], py[i], dx[i], dy[i], dopen[i], ealive[i], agoal[i],
        frames[i], zbuf[i])


cdef int _step_env(Py_ssize_t i,
                   const uint8_t[:, ::1] kind, const uint8_t[:, ::1] wcol,
                   const int16_t[:, ::1] didx, const int16_t[:, ::1] eat,
                   const uint8_t[::1] dcol, const uint8_t[::1] dlock,
                   const uint8_t[::1] ekind, const uint8_t[::1] ecol,
                   const double[::1] epx, const double[::1] epy,
                   const double[::1] spx, const double[::1] spy,
                   const int32_t[::1] goal_ent, const double[:, ::1] dirs,
                   const uint8_t[:, ::1] pal, const uint8_t[:, ::1] door_rgb,
                   const uint8_t[:, ::1] key_rgb, const uint8_t[::1] goal_rgb,
                   const uint8_t[::1] med_box, const uint8_t[::1] med_cross,
                   const uint8_t[::1] ceil_rgb, const uint8_t[::1] floor_rgb,
                   const double[::1] coef, const double[::1] fc,
                   const int64_t[::1] ic,
                   double[::1] px, double[::1] py,
                   double[::1] dx, double[::1] dy,
                   double[::1] health, uint8_t[::1] inv, int64_t[::1] t,
                   uint64_t[::1] rkey, uint64_t[::1] rctr,
                   uint8_t[::1] done, int32_t[::1] agoal,
                   uint8_t[:, ::1] dopen, uint8_t[:, ::1] ealive,
                   const int64_t[::1] actions,
                   uint8_t[:, :, :, ::1] frames, double[:, ::1] zbuf,
                   double[::1] rewards, uint8_t[::1] dones,
                   uint8_t[::1] truncs, uint32_t[::1] events,
                   int32_t[::1] statuses,
                   int auto_reset, int validate) noexcept nogil:
    cdef int h = <int>kind.shape[0]
    cdef int w = <int>kind.shape[1]
    cdef double x = px[i]
    cdef double y = py[i]
    cdef double dxx = dx[i]
    cdef double dyy = dy[i]
    cdef int64_t act = actions[i]
    cdef uint32_t ev = 0
    cdef double reward = 0.0
    cdef int terminated = 0
    cdef int truncated = 0
    cdef int violations = 0

    cdef double ms = fc[FC_MOVE_SPEED]
    cdef double radius = fc[FC_RADIUS]
    cdef double s, cs, ndx, ndy, nrm, mvx, mvy, nx, ny, hv
    cdef int ctx, cty, e, kd

    if act == A_TURN_LEFT or act == A_TURN_RIGHT:
        s = fc[FC_TURN_SIN] if act == A_TURN_RIGHT else -fc[FC_TURN_SIN]
        cs = fc[FC_TURN_COS]
        ndx = dxx * cs - dyy * s
        ndy = dxx * s + dyy * cs
        nrm = sqrt(ndx * ndx + ndy * ndy)
        dxx = ndx / nrm
        dyy = ndy / nrm
    elif act != A_NOOP:
        mvx = 0.0
        mvy = 0.0
        if act == A_FORWARD:
            mvx = ms * dxx
            mvy = ms * dyy
        elif act == A_BACKWARD:
            mvx = -ms * dxx
            mvy = -ms * dyy
        elif act == A_STRAFE_LEFT:
            mvx = ms * dyy
            mvy = -ms * dxx
        elif act == A_STRAFE_RIGHT:
            mvx = -ms * dyy
            mvy = ms * dxx
        # slide: resolve x then y independently; contact opens doors first
        nx = x + mvx
        ev |= _touch_doors(kind, didx, dcol, dlock, dopen[i], w, h,
                           nx, y, radius, inv[i])
        if _blocked(kind, didx, dopen[i], w, h, nx, y, radius) == 0:
            x = nx
        ny = y + mvy
        ev |= _touch_doors(kind, didx, dcol, dlock, dopen[i], w, h,
                           x, ny, radius, inv[i])
        if _blocked(kind, didx, dopen[i], w, h, x, ny, radius) == 0:
            y = ny
        if validate and _blocked(kind, didx, dopen[i], w, h, x, y, radius):
            violations = 1

    ctx = <int>floor(x)
    cty = <int>floor(y)
    e = eat[cty, ctx]
    if e >= 0 and ealive[i, e] != 0:
        kd = ekind[e]
        if kd == K_KEY:
            inv[i] |= <uint8_t>(1 << ecol[e])
            ealive[i, e] = 0
            ev |= (<uint32_t>1) << (EV_KEY_BASE_BIT + ecol[e])
        elif kd == K_MEDKIT:
            ealive[i, e] = 0
            hv = health[i] + fc[FC_HEALTH_RESTORE]
            health[i] = 100.0 if hv > 100.0 else hv
            ev |= (<uint32_t>1) << EV_MEDKIT_BIT
        elif kd == K_GOAL and e == agoal[i]:
            reward = reward + fc[FC_GOAL_REWARD]
            terminated = 1
            ev |= (<uint32_t>1) << EV_GOAL_BIT

    if ic[IC_USE_HEALTH] != 0 and terminated == 0:
        reward = reward + fc[FC_LIVING_REWARD]
        health[i] = health[i] - fc[FC_HEALTH_DECAY]
        if health[i] <= 0.0:
            health[i] = 0.0
            terminated = 1
            reward = 0.0
            ev |= (<uint32_t>1) << EV_DIED_BIT

    t[i] = t[i] + 1
    if terminated == 0 and t[i] >= ic[IC_MAX_STEPS]:
        truncated = 1
        ev |= (<uint32_t>1) << EV_TRUNCATED_BIT

    px[i] = x
    py[i] = y
    dx[i] = dxx
    dy[i] = dyy
    done[i] = 1 if (terminated != 0 or truncated != 0) else 0
    rewards[i] = reward
    dones[i] = done[i]
    truncs[i] = truncated
    events[i] = ev

    if done[i] != 0 and auto_reset != 0:
        _reset_env(i, kind, wcol, didx, dcol, ekind, ecol, epx, epy,
                   spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb,
                   goal_rgb, med_box, med_cross, ceil_rgb, floor_rgb,
                   coef, fc, ic, px, py, dx, dy, health, inv, t,
                   rkey, rctr, done, agoal, dopen, ealive,
                   frames, zbuf, statuses)
    else:
        statuses[i] = _render_into(
            kind, wcol, didx, dcol, ekind, ecol, epx, epy,
            pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
            ceil_rgb, floor_rgb, coef, fc,
            px[i], py[i], dx[i], dy[i], dopen[i], ealive[i], agoal[i],
            frames[i], zbuf[i])
    return violations


def cast_ray(const uint8_t[:, ::1] kind, const int16_t[:, ::1] didx,
             const uint8_t[::1] dopen, double ox, double oy,
             double rx, double ry):
    """March one ray along tile boundaries (DDA); see _pycore.cast_ray."""
    cdef int mapx = 0, mapy = 0, side = 0, steps = 0
    cdef double perp = 0.0, wu = 0.0
    cdef int status = _cast_ray(kind, didx, dopen, ox, oy, rx, ry,
                                &mapx, &mapy, &side, &perp, &wu, &steps)
    return status, mapx, mapy, side, perp, wu, steps


def render_into(const uint8_t[:, ::1] kind, const uint8_t[:, ::1] wcol,
                const int16_t[:, ::1] didx, const uint8_t[::1] dcol,
                const uint8_t[::1] ekind, const uint8_t[::1] ecol,
                const double[::1] epx, const double[::1] epy,
                const uint8_t[:, ::1] pal, const uint8_t[:, ::1] door_rgb,
                const uint8_t[:, ::1] key_rgb, const uint8_t[::1] goal_rgb,
                const uint8_t[::1] med_box, const uint8_t[::1] med_cross,
                const uint8_t[::1] ceil_rgb, const uint8_t[::1] floor_rgb,
                const double[::1] coef, const double[::1] fc,
                double px, double py, double dx, double dy,
                const uint8_t[::1] dopen_row, const uint8_t[::1] ealive_row,
                int agoal,
                uint8_t[:, :, ::1] frame, double[::1] zbuf):
    """Render one frame; see _pycore.render_into."""
    return _render_into(kind, wcol, didx, dcol, ekind, ecol, epx, epy,
                        pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
                        ceil_rgb, floor_rgb, coef, fc,
                        px, py, dx, dy, dopen_row, ealive_row, agoal,
                        frame, zbuf)


def batch_kernel(
    const uint8_t[:, ::1] kind, const uint8_t[:, ::1] wcol,
    const int16_t[:, ::1] didx, const int16_t[:, ::1] eat,
    const uint8_t[::1] dcol, const uint8_t[::1] dlock,
    const uint8_t[::1] ekind, const uint8_t[::1] ecol,
    const double[::1] epx, const double[::1] epy,
    const double[::1] spx, const double[::1] spy,
    const int32_t[::1] goal_ent, const double[:, ::1] dirs,
    const uint8_t[:, ::1] pal, const uint8_t[:, ::1] door_rgb,
    const uint8_t[:, ::1] key_rgb, const uint8_t[::1] goal_rgb,
    const uint8_t[::1] med_box, const uint8_t[::1] med_cross,
    const uint8_t[::1] ceil_rgb, const uint8_t[::1] floor_rgb,
    const double[::1] coef, const double[::1] fc, const int64_t[::1] ic,
    double[::1] px, double[::1] py, double[::1] dx, double[::1] dy,
    double[::1] health, uint8_t[::1] inv, int64_t[::1] t,
    uint64_t[::1] rkey, uint64_t[::1] rctr,
    uint8_t[::1] done, int32_t[::1] agoal,
    uint8_t[:, ::1] dopen, uint8_t[:, ::1] ealive,
    const int64_t[::1] actions,
    uint8_t[:, :, :, ::1] frames, double[:, ::1] zbuf,
    double[::1] rewards, uint8_t[::1] dones, uint8_t[::1] truncs,
    uint32_t[::1] events, int32_t[::1] statuses,
    int mode, int auto_reset, int validate, int n_threads,
):
    """Reset (mode 0) or step (mode 1) environments 0..n-1 in place;
    see _pycore.batch_kernel. Results never depend on n_threads."""
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t i
    cdef long long violations = 0
    cdef int nt = n_threads if n_threads > 0 else 1
    if mode == MODE_RESET:
        for i in prange(n, nogil=True, num_threads=nt, schedule='static'):
            _reset_env(i, kind, wcol, didx, dcol, ekind, ecol, epx, epy,
                       spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb,
                       goal_rgb, med_box, med_cross, ceil_rgb, floor_rgb,
                       coef, fc, ic, px, py, dx, dy, health, inv, t,
                       rkey, rctr, done, agoal, dopen, ealive,
                       frames, zbuf, statuses)
    else:
        for i in prange(n, nogil=True, num_threads=nt, schedule='static'):
            violations += _step_env(
                i, kind, wcol, didx, eat, dcol, dlock, ekind, ecol, epx, epy,
                spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb, goal_rgb,
                med_box, med_cross, ceil_rgb, floor_rgb, coef, fc, ic,
                px, py, dx, dy, health, inv, t, rkey, rctr, done, agoal,
                dopen, ealive, actions, frames, zbuf,
                rewards, dones, truncs, events, statuses,
                auto_reset, validate)
    return violations
