# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled iteration kernels. Must stay operation-for-operation identical to _pykernels."""

import numpy as np

cdef double INF = float("inf")


cdef inline void _step(double a, double alpha, double c, double d, double e,
                       double x1, double x2, double x3,
                       double* y1, double* y2, double* y3) nogil:
    cdef double u1 = alpha * x2 * x2 + c * x3 * x3 + 2.0 * x2 * x3
    cdef double u2 = a * x1 * x1 + d * x3 * x3 + 2.0 * x1 * x3
    cdef double u3 = (1.0 - a) * x1 * x1 + (1.0 - alpha) * x2 * x2 + e * x3 * x3 + 2.0 * x1 * x2
    cdef double s = u1 + u2 + u3
    y1[0] = u1 / s
    y2[0] = u2 / s
    y3[0] = u3 / s


cdef inline double _sup3(double a1, double a2, double a3, double b1, double b2, double b3) nogil:
    cdef double m = a1 - b1 if a1 >= b1 else b1 - a1
    cdef double t = a2 - b2 if a2 >= b2 else b2 - a2
    if t > m:
        m = t
    t = a3 - b3 if a3 >= b3 else b3 - a3
    if t > m:
        m = t
    return m


def step(double a, double alpha, double c, double d, double e, x):
    cdef double y1, y2, y3
    _step(a, alpha, c, d, e, x[0], x[1], x[2], &y1, &y2, &y3)
    return (y1, y2, y3)


def trajectory(double a, double alpha, double c, double d, double e, x0, long n):
    out = np.empty((n + 1, 3), dtype=np.float64)
    cdef double[:, ::1] buf = out
    cdef double x1 = x0[0], x2 = x0[1], x3 = x0[2]
    cdef double y1, y2, y3
    cdef long i
    buf[0, 0] = x1
    buf[0, 1] = x2
    buf[0, 2] = x3
    with nogil:
        for i in range(1, n + 1):
            _step(a, alpha, c, d, e, x1, x2, x3, &y1, &y2, &y3)
            x1 = y1
            x2 = y2
            x3 = y3
            buf[i, 0] = x1
            buf[i, 1] = x2
            buf[i, 2] = x3
    return out


def advance(double a, double alpha, double c, double d, double e,
            prev, cur, long max_steps, double tol, long window,
            long count1, long count2, long cycle_after):
    cdef bint has_prev = prev is not None
    cdef double p1 = 0.0, p2 = 0.0, p3 = 0.0
    if has_prev:
        p1 = prev[0]
        p2 = prev[1]
        p3 = prev[2]
    cdef double x1 = cur[0], x2 = cur[1], x3 = cur[2]
    cdef double y1, y2, y3, g1 = INF, g2 = INF
    cdef long steps = 0
    cdef int event = 0
    with nogil:
        while steps < max_steps:
            _step(a, alpha, c, d, e, x1, x2, x3, &y1, &y2, &y3)
            g1 = _sup3(y1, y2, y3, x1, x2, x3)
            if has_prev:
                g2 = _sup3(y1, y2, y3, p1, p2, p3)
            else:
                g2 = INF
            count1 = count1 + 1 if g1 < tol else 0
            count2 = count2 + 1 if g2 < tol else 0
            p1 = x1
            p2 = x2
            p3 = x3
            x1 = y1
            x2 = y2
            x3 = y3
            has_prev = True
            steps += 1
            if count1 >= window:
                event = 1
                break
            if count2 >= window and steps >= cycle_after:
                event = 2
                break
    return event, steps, (p1, p2, p3), (x1, x2, x3), count1, count2, g1, g2
