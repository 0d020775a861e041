"""Pure-Python unsigned-distance kernels.

Fallback backend mirroring ``_udf_cy`` operation-for-operation: both run the
same IEEE-754 double sequence (add/sub/mul/div/sqrt only, trig is precomputed
by the caller), so results are bit-identical across backends.

Conventions shared by every kernel:
  * queries are answered in the shape's local frame; the caller supplies the
    world->local transform as (tx, ty, cosr, sinr),
  * returned gradient is the unit outward normal at the closest boundary
    point (exterior points: equals (q - closest)/distance),
  * degenerate queries (shape center / medial axis, where the closest
    boundary point is not unique) return gradient (1, 0) in the local frame
    and a raised flag.

Shape kind codes: 0 = disk(radius), 1 = box(hx, hy), 2 = capsule(half_len,
radius). Params are already scaled by the caller.
"""

from math import sqrt

BACKEND_NAME = "python"

KIND_DISK = 0
KIND_BOX = 1
KIND_CAPSULE = 2


def _eval_disk(r, qx, qy):
    d0 = sqrt(qx * qx + qy * qy)
    if d0 == 0.0:
        # center: every boundary point is closest; +x by convention
        return r, 1.0, 0.0, r, 0.0, 1
    nx = qx / d0
    ny = qy / d0
    return abs(d0 - r), nx, ny, r * nx, r * ny, 0


def _eval_box(hx, hy, qx, qy):
    ax = qx if qx >= 0.0 else -qx
    ay = qy if qy >= 0.0 else -qy
    sx = 1.0 if qx >= 0.0 else -1.0
    sy = 1.0 if qy >= 0.0 else -1.0
    ex = ax - hx
    ey = ay - hy
    if ex > 0.0 or ey > 0.0:
        px = ex if ex > 0.0 else 0.0
        py = ey if ey > 0.0 else 0.0
        d = sqrt(px * px + py * py)
        cx = ax if ax < hx else hx
        cy = ay if ay < hy else hy
        return d, sx * (px / d), sy * (py / d), sx * cx, sy * cy, 0
    # interior or exactly on the boundary
    dxf = hx - ax
    dyf = hy - ay
    if dxf <= dyf:
        # x-face wins ties (lexicographic axis priority)
        flag = 1 if (dxf == dyf or qx == 0.0) else 0
        gx, gy = sx, 0.0
        cx, cy = sx * hx, qy
        d = dxf
    else:
        flag = 1 if qy == 0.0 else 0
        gx, gy = 0.0, sy
        cx, cy = qx, sy * hy
        d = dyf
    if flag:
        gx, gy = 1.0, 0.0
    return d, gx, gy, cx, cy, flag


def _eval_capsule(hl, r, qx, qy):
    ax = qx
    if ax < -hl:
        ax = -hl
    elif ax > hl:
        ax = hl
    dx = qx - ax
    dy = qy
    s = sqrt(dx * dx + dy * dy)
    if s == 0.0:
        # on the axis segment: closest boundary is non-unique; +y point kept
        return r, 1.0, 0.0, ax, r, 1
    nx = dx / s
    ny = dy / s
    return abs(s - r), nx, ny, ax + r * nx, r * ny, 0


def udf_point(kind, pa, pb, tx, ty, cosr, sinr, qx, qy):
    """Distance, world-frame gradient, and closest point for one shape.

    Returns (distance, gx, gy, cx, cy, degenerate_flag).
    """
    dx = qx - tx
    dy = qy - ty
    lx = cosr * dx + sinr * dy
    ly = -sinr * dx + cosr * dy
    if kind == KIND_DISK:
        d, gx, gy, cx, cy, fl = _eval_disk(pa, lx, ly)
    elif kind == KIND_BOX:
        d, gx, gy, cx, cy, fl = _eval_box(pa, pb, lx, ly)
    else:
        d, gx, gy, cx, cy, fl = _eval_capsule(pa, pb, lx, ly)
    wgx = cosr * gx - sinr * gy
    wgy = sinr * gx + cosr * gy
    wcx = cosr * cx - sinr * cy + tx
    wcy = sinr * cx + cosr * cy + ty
    return d, wgx, wgy, wcx, wcy, fl


def udf_scene(table, n, qx, qy):
    """Minimum-distance sample over ``n`` shapes; ties keep the lowest index.

    ``table`` is a flat row-major (n, 7) float buffer with rows
    (kind, pa, pb, tx, ty, cosr, sinr). Returns (distance, gx, gy, cx, cy,
    flag, source_index).
    """
    best_d = 0.0
    best = (0.0, 1.0, 0.0, 0.0, 0.0, 0)
    src = -1
    for i in range(n):
        o = 7 * i
        res = udf_point(
            int(table[o]), table[o + 1], table[o + 2], table[o + 3],
            table[o + 4], table[o + 5], table[o + 6], qx, qy,
        )
        if src < 0 or res[0] < best_d:
            best_d = res[0]
            best = res
            src = i
    return best[0], best[1], best[2], best[3], best[4], best[5], src


def scene_distance(table, n, qx, qy):
    """Distance-only scene query (cheaper inner loop for ray marching)."""
    best = -1.0
    for i in range(n):
        o = 7 * i
        kind = int(table[o])
        pa = table[o + 1]
        pb = table[o + 2]
        dx = qx - table[o + 3]
        dy = qy - table[o + 4]
        cosr = table[o + 5]
        sinr = table[o + 6]
        lx = cosr * dx + sinr * dy
        ly = -sinr * dx + cosr * dy
        if kind == KIND_DISK:
            d = _eval_disk(pa, lx, ly)[0]
        elif kind == KIND_BOX:
            d = _eval_box(pa, pb, lx, ly)[0]
        else:
            d = _eval_capsule(pa, pb, lx, ly)[0]
        if best < 0.0 or d < best:
            best = d
    return best


def ray_march(table, n, ox, oy, dirx, diry, max_range, tol, max_iters=256):
    """Sphere-trace one ray against the scene; returns hit range or max_range."""
    if n == 0:
        return max_range
    t = 0.0
    for _ in range(max_iters):
        d = scene_distance(table, n, ox + t * dirx, oy + t * diry)
        if d < tol:
            return t
        t += d
        if t >= max_range:
            return max_range
    return max_range


def depth_scan(table, n, ox, oy, dirs_x, dirs_y, max_range, tol, out):
    """March every ray direction; writes hit ranges into ``out``."""
    for i in range(len(out)):
        out[i] = ray_march(table, n, ox, oy, dirs_x[i], dirs_y[i], max_range, tol)
