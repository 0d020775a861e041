# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled unsigned-distance kernels.

Mirror of ``_udf_py`` operation-for-operation; built with -ffp-contract=off
so both backends produce bit-identical doubles. See the Python module for
the conventions (local-frame evaluation, degenerate flagging, kind codes).
"""

from libc.math cimport sqrt, fabs

BACKEND_NAME = "cython"

KIND_DISK = 0
KIND_BOX = 1
KIND_CAPSULE = 2


cdef struct Sample:
    double d
    double gx
    double gy
    double cx
    double cy
    int flag


cdef inline Sample _eval_disk(double r, double qx, double qy) nogil:
    cdef Sample s
    cdef double d0 = sqrt(qx * qx + qy * qy)
    cdef double nx, ny
    if d0 == 0.0:
        s.d = r; s.gx = 1.0; s.gy = 0.0; s.cx = r; s.cy = 0.0; s.flag = 1
        return s
    nx = qx / d0
    ny = qy / d0
    s.d = fabs(d0 - r); s.gx = nx; s.gy = ny; s.cx = r * nx; s.cy = r * ny
    s.flag = 0
    return s


cdef inline Sample _eval_box(double hx, double hy, double qx, double qy) nogil:
    cdef Sample s
    cdef double ax = qx if qx >= 0.0 else -qx
    cdef double ay = qy if qy >= 0.0 else -qy
    cdef double sx = 1.0 if qx >= 0.0 else -1.0
    cdef double sy = 1.0 if qy >= 0.0 else -1.0
    cdef double ex = ax - hx
    cdef double ey = ay - hy
    cdef double px, py, d, cx, cy, dxf, dyf
    if ex > 0.0 or ey > 0.0:
        px = ex if ex > 0.0 else 0.0
        py = ey if ey > 0.0 else 0.0
        d = sqrt(px * px + py * py)
        cx = ax if ax < hx else hx
        cy = ay if ay < hy else hy
        s.d = d; s.gx = sx * (px / d); s.gy = sy * (py / d)
        s.cx = sx * cx; s.cy = sy * cy; s.flag = 0
        return s
    dxf = hx - ax
    dyf = hy - ay
    if dxf <= dyf:
        s.flag = 1 if (dxf == dyf or qx == 0.0) else 0
        s.gx = sx; s.gy = 0.0
        s.cx = sx * hx; s.cy = qy
        s.d = dxf
    else:
        s.flag = 1 if qy == 0.0 else 0
        s.gx = 0.0; s.gy = sy
        s.cx = qx; s.cy = sy * hy
        s.d = dyf
    if s.flag:
        s.gx = 1.0; s.gy = 0.0
    return s


cdef inline Sample _eval_capsule(double hl, double r, double qx, double qy) nogil:
    cdef Sample s
    cdef double ax = qx
    cdef double dx, dy, sd, nx, ny
    if ax < -hl:
        ax = -hl
    elif ax > hl:
        ax = hl
    dx = qx - ax
    dy = qy
    sd = sqrt(dx * dx + dy * dy)
    if sd == 0.0:
        s.d = r; s.gx = 1.0; s.gy = 0.0; s.cx = ax; s.cy = r; s.flag = 1
        return s
    nx = dx / sd
    ny = dy / sd
    s.d = fabs(sd - r); s.gx = nx; s.gy = ny
    s.cx = ax + r * nx; s.cy = r * ny; s.flag = 0
    return s


cdef inline Sample _point(int kind, double pa, double pb, double tx, double ty,
                          double cosr, double sinr, double qx, double qy) nogil:
    cdef double dx = qx - tx
    cdef double dy = qy - ty
    cdef double lx = cosr * dx + sinr * dy
    cdef double ly = -sinr * dx + cosr * dy
    cdef Sample s
    cdef double gx, gy, cx, cy
    if kind == 0:
        s = _eval_disk(pa, lx, ly)
    elif kind == 1:
        s = _eval_box(pa, pb, lx, ly)
    else:
        s = _eval_capsule(pa, pb, lx, ly)
    gx = cosr * s.gx - sinr * s.gy
    gy = sinr * s.gx + cosr * s.gy
    cx = cosr * s.cx - sinr * s.cy + tx
    cy = sinr * s.cx + cosr * s.cy + ty
    s.gx = gx; s.gy = gy; s.cx = cx; s.cy = cy
    return s


cdef inline double _scene_distance(const double[::1] table, int n,
                                   double qx, double qy) nogil:
    cdef double best = -1.0
    cdef int i, o, kind
    cdef double pa, pb, dx, dy, cosr, sinr, lx, ly, d
    for i in range(n):
        o = 7 * i
        kind = <int>table[o]
        pa = table[o + 1]
        pb = table[o + 2]
        dx = qx - table[o + 3]
        dy = qy - table[o + 4]
        cosr = table[o + 5]
        sinr = table[o + 6]
        lx = cosr * dx + sinr * dy
        ly = -sinr * dx + cosr * dy
        if kind == 0:
            d = _eval_disk(pa, lx, ly).d
        elif kind == 1:
            d = _eval_box(pa, pb, lx, ly).d
        else:
            d = _eval_capsule(pa, pb, lx, ly).d
        if best < 0.0 or d < best:
            best = d
    return best


def udf_point(int kind, double pa, double pb, double tx, double ty,
              double cosr, double sinr, double qx, double qy):
    """Distance, world-frame gradient, closest point for one shape."""
    cdef Sample s = _point(kind, pa, pb, tx, ty, cosr, sinr, qx, qy)
    return s.d, s.gx, s.gy, s.cx, s.cy, s.flag


def udf_scene(const double[::1] table, int n, double qx, double qy):
    """Minimum-distance sample over ``n`` table rows; lowest index wins ties."""
    cdef Sample best, cur
    cdef int i, o, src = -1
    for i in range(n):
        o = 7 * i
        cur = _point(<int>table[o], table[o + 1], table[o + 2], table[o + 3],
                     table[o + 4], table[o + 5], table[o + 6], qx, qy)
        if src < 0 or cur.d < best.d:
            best = cur
            src = i
    return best.d, best.gx, best.gy, best.cx, best.cy, best.flag, src


def scene_distance(const double[::1] table, int n, double qx, double qy):
    """Distance-only scene query."""
    return _scene_distance(table, n, qx, qy)


cdef inline double _ray_march(const double[::1] table, int n, double ox, double oy,
                              double dirx, double diry, double max_range,
                              double tol, int max_iters) nogil:
    cdef double t = 0.0
    cdef double d
    cdef int i
    if n == 0:
        return max_range
    for i in range(max_iters):
        d = _scene_distance(table, n, ox + t * dirx, oy + t * diry)
        if d < tol:
            return t
        t += d
        if t >= max_range:
            return max_range
    return max_range


def ray_march(const double[::1] table, int n, double ox, double oy,
              double dirx, double diry, double max_range, double tol,
              int max_iters=256):
    """Sphere-trace one ray; returns hit range or max_range."""
    return _ray_march(table, n, ox, oy, dirx, diry, max_range, tol, max_iters)


def depth_scan(const double[::1] table, int n, double ox, double oy,
               const double[::1] dirs_x, const double[::1] dirs_y,
               double max_range, double tol, double[::1] out):
    """March every ray direction; writes hit ranges into ``out``."""
    cdef int i
    for i in range(out.shape[0]):
        out[i] = _ray_march(table, n, ox, oy, dirs_x[i], dirs_y[i],
                            max_range, tol, 256)
