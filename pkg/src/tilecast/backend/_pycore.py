"""Pure-Python reference kernels.

This file defines the engine's exact semantics. The compiled backend
(_core.pyx) is a statement-by-statement transcription and must produce
bit-identical output; when editing either file, keep every floating-point
operation, branch, and evaluation order in sync. Only IEEE sign-symmetric
operations (+ - * / sqrt abs) touch geometry so that mirrored and rotated
inputs produce exactly mirrored and rotated results.
"""

from __future__ import annotations

import math

from ..geometry import PLANE_HALF_WIDTH
from . import layout as L

BACKEND_NAME = "python"

_INF = float("inf")
_MASK = 0xFFFF_FFFF_FFFF_FFFF
_GOLDEN = 0x9E37_79B9_7F4A_7C15
_MIX1 = 0xBF58_476D_1CE4_E5B9
_MIX2 = 0x94D0_49BB_1331_11EB


def _draw_below(key: int, ctr: int, n: int) -> tuple[int, int]:
    # splitmix-style finalizer over key + ctr*GOLDEN, then multiply-high
    x = (key + ctr * _GOLDEN) & _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    x ^= x >> 31
    return (x * n) >> 64, (ctr + 1) & _MASK


def cast_ray(kind, didx, dopen, ox, oy, rx, ry):
    """March one ray along tile boundaries (DDA).

    Returns (status, mapx, mapy, side, perp, wall_u, steps); perp is the
    ray parameter t at the hit, i.e. the distance projected on the camera
    axis when |ray| is a column ray (the fisheye-corrected distance).
    """
    h = kind.shape[0]
    w = kind.shape[1]
    mapx = int(math.floor(ox))
    mapy = int(math.floor(oy))
    if rx != 0.0:
        ddx = abs(1.0 / rx)
        stepx = 1 if rx > 0.0 else -1
        sdx = ((mapx + 1.0) - ox) * ddx if rx > 0.0 else (ox - mapx) * ddx
    else:
        ddx = _INF
        stepx = 0
        sdx = _INF
    if ry != 0.0:
        ddy = abs(1.0 / ry)
        stepy = 1 if ry > 0.0 else -1
        sdy = ((mapy + 1.0) - oy) * ddy if ry > 0.0 else (oy - mapy) * ddy
    else:
        ddy = _INF
        stepy = 0
        sdy = _INF

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
            return L.ST_STEP_BUDGET, mapx, mapy, side, 0.0, 0.0, steps
        if mapx < 0 or mapx >= w or mapy < 0 or mapy >= h:
            return L.ST_ESCAPED, mapx, mapy, side, 0.0, 0.0, steps
        tag = kind[mapy, mapx]
        if tag == L.C_WALL:
            break
        if tag == L.C_DOOR and dopen[didx[mapy, mapx]] == 0:
            break

    if side == 0:
        perp = sdx - ddx
        wu = oy + perp * ry
    else:
        perp = sdy - ddy
        wu = ox + perp * rx
    wu -= math.floor(wu)
    return L.ST_OK, mapx, mapy, side, perp, wu, steps


def _sprite_mask(kd, aa, v):
    """Procedural silhouette sample; 0 = transparent, 1 = main color,
    2 = secondary (medkit box). aa is |lateral| in [0,1), v vertical in [0,1)."""
    if kd == L.K_GOAL:
        dv = v - 0.5
        if dv < 0.0:
            dv = -dv
        if aa + dv * 2.0 <= 0.8:
            return 1
        return 0
    if kd == L.K_KEY:
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


def render_into(kind, wcol, didx, dcol, ekind, ecol, epx, epy,
                pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
                ceil_rgb, floor_rgb, coef, fc,
                px, py, dx, dy, dopen_row, ealive_row, agoal,
                frame, zbuf):
    """Render one frame: per-column DDA walls, then sprites far-to-near
    with z-buffer occlusion. Returns a status code."""
    obs_h = frame.shape[0]
    obs_w = frame.shape[1]
    h2 = obs_h // 2
    atten = fc[L.FC_ATTEN]
    planex = -dy * PLANE_HALF_WIDTH
    planey = dx * PLANE_HALF_WIDTH

    cr = ceil_rgb[0]
    cg = ceil_rgb[1]
    cb = ceil_rgb[2]
    fr = floor_rgb[0]
    fg = floor_rgb[1]
    fb = floor_rgb[2]

    for c in range(obs_w):
        k = coef[c]
        rx = dx + planex * k
        ry = dy + planey * k
        status, mapx, mapy, side, perp, wu, steps = cast_ray(
            kind, didx, dopen_row, px, py, rx, ry)
        if status != L.ST_OK:
            return status
        zbuf[c] = perp
        shade = 1.0 / (1.0 + atten * perp)
        tag = kind[mapy, mapx]
        if tag == L.C_DOOR:
            base = door_rgb[dcol[didx[mapy, mapx]]]
        else:
            base = pal[wcol[mapy, mapx]]
        wr = int(base[0] * shade)
        wg = int(base[1] * shade)
        wb = int(base[2] * shade)
        lh_f = obs_h / perp
        if lh_f > 1e9:
            lh_f = 1e9
        half = int(lh_f) // 2
        top = h2 - half
        bot = h2 + half
        t0 = top if top > 0 else 0
        b0 = bot if bot < obs_h else obs_h
        for row in range(0, t0):
            frame[row, c, 0] = cr
            frame[row, c, 1] = cg
            frame[row, c, 2] = cb
        for row in range(t0, b0):
            frame[row, c, 0] = wr
            frame[row, c, 1] = wg
            frame[row, c, 2] = wb
        for row in range(b0, obs_h):
            frame[row, c, 0] = fr
            frame[row, c, 1] = fg
            frame[row, c, 2] = fb

    # sprite pass
    n_ent = ekind.shape[0]
    order = []   # (depth, lateral, entity) — gathered in entity order
    det = planex * dy - dx * planey
    if det != 0.0:
        invdet = 1.0 / det
        for e in range(n_ent):
            if ealive_row[e] == 0:
                continue
            if ekind[e] == L.K_GOAL and e != agoal:
                continue
            relx = epx[e] - px
            rely = epy[e] - py
            lat = invdet * (dy * relx - dx * rely)
            dep = invdet * (-planey * relx + planex * rely)
            if dep < fc[L.FC_MIN_SPRITE_DEPTH]:
                continue
            order.append((dep, lat, e))
    # insertion sort, far to near; stable for equal depths
    for i in range(1, len(order)):
        item = order[i]
        j = i
        while j > 0 and order[j - 1][0] < item[0]:
            order[j] = order[j - 1]
            j -= 1
        order[j] = item

    for dep, lat, e in order:
        ks = lat / dep
        halfk = fc[L.FC_SPRITE_K] / dep
        shade = 1.0 / (1.0 + atten * dep)
        sh_f = obs_h / dep
        if sh_f > 1e9:
            sh_f = 1e9
        vhalf = int(sh_f) // 2
        vtop = h2 - vhalf
        vbot = h2 + vhalf
        denom = vbot - vtop
        if denom <= 0:
            continue
        r0 = vtop if vtop > 0 else 0
        r1 = vbot if vbot < obs_h else obs_h
        kd = ekind[e]
        if kd == L.K_KEY:
            m1r = key_rgb[ecol[e], 0]
            m1g = key_rgb[ecol[e], 1]
            m1b = key_rgb[ecol[e], 2]
        elif kd == L.K_GOAL:
            m1r = goal_rgb[0]
            m1g = goal_rgb[1]
            m1b = goal_rgb[2]
        else:
            m1r = med_cross[0]
            m1g = med_cross[1]
            m1b = med_cross[2]
        s1r = int(m1r * shade)
        s1g = int(m1g * shade)
        s1b = int(m1b * shade)
        s2r = int(med_box[0] * shade)
        s2g = int(med_box[1] * shade)
        s2b = int(med_box[2] * shade)
        for c in range(obs_w):
            if zbuf[c] <= dep:
                continue
            a = (coef[c] - ks) / halfk
            if a <= -1.0 or a >= 1.0:
                continue
            aa = a if a >= 0.0 else -a
            for row in range(r0, r1):
                v = ((row - vtop) + 0.5) / denom
                m = _sprite_mask(kd, aa, v)
                if m == 1:
                    frame[row, c, 0] = s1r
                    frame[row, c, 1] = s1g
                    frame[row, c, 2] = s1b
                elif m == 2:
                    frame[row, c, 0] = s2r
                    frame[row, c, 1] = s2g
                    frame[row, c, 2] = s2b
    return L.ST_OK


def _blocked(kind, didx, dopen_row, w, h, cx, cy, radius):
    """Disc vs grid: strict overlap with any wall or closed door cell."""
    tx0 = int(math.floor(cx - radius))
    tx1 = int(math.floor(cx + radius))
    ty0 = int(math.floor(cy - radius))
    ty1 = int(math.floor(cy + radius))
    r2 = radius * radius
    for ty in range(ty0, ty1 + 1):
        for tx in range(tx0, tx1 + 1):
            if tx < 0 or tx >= w or ty < 0 or ty >= h:
                return 1
            tag = kind[ty, tx]
            if tag == L.C_FLOOR:
                continue
            if tag == L.C_DOOR and dopen_row[didx[ty, tx]] != 0:
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


def _touch_doors(kind, didx, dcol, dlock, dopen_row, w, h, cx, cy, radius, inv):
    """Open every closed door the disc at (cx, cy) would overlap, when
    allowed (unlocked, or locked with matching key held). Returns event bits."""
    events = 0
    tx0 = int(math.floor(cx - radius))
    tx1 = int(math.floor(cx + radius))
    ty0 = int(math.floor(cy - radius))
    ty1 = int(math.floor(cy + radius))
    r2 = radius * radius
    for ty in range(ty0, ty1 + 1):
        for tx in range(tx0, tx1 + 1):
            if tx < 0 or tx >= w or ty < 0 or ty >= h:
                continue
            if kind[ty, tx] != L.C_DOOR:
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
            events |= 1 << (L.EV_DOOR_BASE_BIT + dcol[di])
    return events


def batch_kernel(
    # map
    kind, wcol, didx, eat, dcol, dlock, ekind, ecol, epx, epy,
    spx, spy, goal_ent, dirs,
    # colors / projection
    pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
    ceil_rgb, floor_rgb, coef,
    # constants
    fc, ic,
    # per-env state (mutated in place)
    px, py, dx, dy, health, inv, t, rkey, rctr, done, agoal, dopen, ealive,
    # per-call io
    actions, frames, zbuf, rewards, dones, truncs, events, statuses,
    # flags
    mode, auto_reset, validate, n_threads,
):
    """Reset (mode 0) or step (mode 1) environments 0..n-1 in place.

    Returns the count of collision-invariant violations observed when
    `validate` is set (always 0 unless the engine is broken). n_threads is
    honored only by the compiled backend; results never depend on it.
    """
    n = px.shape[0]
    violations = 0
    for i in range(n):
        if mode == L.MODE_RESET:
            _reset_env(i, kind, wcol, didx, dcol, ekind, ecol, epx, epy,
                       spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb,
                       goal_rgb, med_box, med_cross, ceil_rgb, floor_rgb,
                       coef, fc, ic, px, py, dx, dy, health, inv, t,
                       rkey, rctr, done, agoal, dopen, ealive,
                       frames, zbuf, statuses)
        else:
            violations += _step_env(
                i, kind, wcol, didx, eat, dcol, dlock, ekind, ecol, epx, epy,
                spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb, goal_rgb,
                med_box, med_cross, ceil_rgb, floor_rgb, coef, fc, ic,
                px, py, dx, dy, health, inv, t, rkey, rctr, done, agoal,
                dopen, ealive, actions, frames, zbuf,
                rewards, dones, truncs, events, statuses,
                auto_reset, validate)
    return violations


def _reset_env(i, kind, wcol, didx, dcol, ekind, ecol, epx, epy,
               spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb, goal_rgb,
               med_box, med_cross, ceil_rgb, floor_rgb, coef, fc, ic,
               px, py, dx, dy, health, inv, t, rkey, rctr, done, agoal,
               dopen, ealive, frames, zbuf, statuses):
    key = int(rkey[i])
    ctr = int(rctr[i])
    n_spawns = spx.shape[0]
    n_goals = goal_ent.shape[0]
    # draw order is part of the engine contract: spawn, heading, then the
    # active goal only in random-goal mode
    v, ctr = _draw_below(key, ctr, n_spawns)
    px[i] = spx[v]
    py[i] = spy[v]
    v, ctr = _draw_below(key, ctr, 4)
    dx[i] = dirs[v, 0]
    dy[i] = dirs[v, 1]
    if ic[L.IC_GOAL_MODE] == 1 and n_goals > 0:
        v, ctr = _draw_below(key, ctr, n_goals)
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
    statuses[i] = render_into(
        kind, wcol, didx, dcol, ekind, ecol, epx, epy,
        pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
        ceil_rgb, floor_rgb, coef, fc,
        px[i], py[i], dx[i], dy[i], dopen[i], ealive[i], agoal[i],
        frames[i], zbuf[i])


def _step_env(i, kind, wcol, didx, eat, dcol, dlock, ekind, ecol, epx, epy,
              spx, spy, goal_ent, dirs, pal, door_rgb, key_rgb, goal_rgb,
              med_box, med_cross, ceil_rgb, floor_rgb, coef, fc, ic,
              px, py, dx, dy, health, inv, t, rkey, rctr, done, agoal,
              dopen, ealive, actions, frames, zbuf,
              rewards, dones, truncs, events, statuses, auto_reset, validate):
    h = kind.shape[0]
    w = kind.shape[1]
    x = float(px[i])
    y = float(py[i])
    dxx = float(dx[i])
    dyy = float(dy[i])
    act = actions[i]
    ev = 0
    reward = 0.0
    terminated = 0
    truncated = 0
    violations = 0

    ms = fc[L.FC_MOVE_SPEED]
    radius = fc[L.FC_RADIUS]

    if act == L.A_TURN_LEFT or act == L.A_TURN_RIGHT:
        s = fc[L.FC_TURN_SIN] if act == L.A_TURN_RIGHT else -fc[L.FC_TURN_SIN]
        cs = fc[L.FC_TURN_COS]
        ndx = dxx * cs - dyy * s
        ndy = dxx * s + dyy * cs
        nrm = math.sqrt(ndx * ndx + ndy * ndy)
        dxx = ndx / nrm
        dyy = ndy / nrm
    elif act != L.A_NOOP:
        mvx = 0.0
        mvy = 0.0
        if act == L.A_FORWARD:
            mvx = ms * dxx
            mvy = ms * dyy
        elif act == L.A_BACKWARD:
            mvx = -ms * dxx
            mvy = -ms * dyy
        elif act == L.A_STRAFE_LEFT:
            mvx = ms * dyy
            mvy = -ms * dxx
        elif act == L.A_STRAFE_RIGHT:
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

    ctx = int(math.floor(x))
    cty = int(math.floor(y))
    e = eat[cty, ctx]
    if e >= 0 and ealive[i, e] != 0:
        kd = ekind[e]
        if kd == L.K_KEY:
            inv[i] |= 1 << ecol[e]
            ealive[i, e] = 0
            ev |= 1 << (L.EV_KEY_BASE_BIT + ecol[e])
        elif kd == L.K_MEDKIT:
            ealive[i, e] = 0
            hv = health[i] + fc[L.FC_HEALTH_RESTORE]
            health[i] = 100.0 if hv > 100.0 else hv
            ev |= 1 << L.EV_MEDKIT_BIT
        elif kd == L.K_GOAL and e == agoal[i]:
            reward = reward + fc[L.FC_GOAL_REWARD]
            terminated = 1
            ev |= 1 << L.EV_GOAL_BIT

    if ic[L.IC_USE_HEALTH] != 0 and terminated == 0:
        reward = reward + fc[L.FC_LIVING_REWARD]
        health[i] = health[i] - fc[L.FC_HEALTH_DECAY]
        if health[i] <= 0.0:
            health[i] = 0.0
            terminated = 1
            reward = 0.0
            ev |= 1 << L.EV_DIED_BIT

    t[i] = t[i] + 1
    if terminated == 0 and t[i] >= ic[L.IC_MAX_STEPS]:
        truncated = 1
        ev |= 1 << L.EV_TRUNCATED_BIT

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
        statuses[i] = render_into(
            kind, wcol, didx, dcol, ekind, ecol, epx, epy,
            pal, door_rgb, key_rgb, goal_rgb, med_box, med_cross,
            ceil_rgb, floor_rgb, coef, fc,
            px[i], py[i], dx[i], dy[i], dopen[i], ealive[i], agoal[i],
            frames[i], zbuf[i])
    return violations
