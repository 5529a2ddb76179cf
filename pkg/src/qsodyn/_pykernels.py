"""Pure-Python iteration kernels, used when the compiled module is unavailable.

Every arithmetic operation happens in the same order as in ``_ckernels.pyx``
so the two backends produce bit-identical iterates.
"""

import numpy as np

INF = float("inf")


def _step(a, alpha, c, d, e, x1, x2, x3):
    u1 = alpha * x2 * x2 + c * x3 * x3 + 2.0 * x2 * x3
    u2 = a * x1 * x1 + d * x3 * x3 + 2.0 * x1 * x3
    u3 = (1.0 - a) * x1 * x1 + (1.0 - alpha) * x2 * x2 + e * x3 * x3 + 2.0 * x1 * x2
    s = u1 + u2 + u3
    return u1 / s, u2 / s, u3 / s


def step(a, alpha, c, d, e, x):
    return _step(a, alpha, c, d, e, float(x[0]), float(x[1]), float(x[2]))


def trajectory(a, alpha, c, d, e, x0, n):
    out = np.empty((n + 1, 3), dtype=np.float64)
    x1, x2, x3 = float(x0[0]), float(x0[1]), float(x0[2])
    rows = [(x1, x2, x3)]
    for _ in range(n):
        x1, x2, x3 = _step(a, alpha, c, d, e, x1, x2, x3)
        rows.append((x1, x2, x3))
    out[:] = rows
    return out


def advance(a, alpha, c, d, e, prev, cur, max_steps, tol, window, count1, count2, cycle_after):
    has_prev = prev is not None
    p1, p2, p3 = prev if has_prev else (0.0, 0.0, 0.0)
    x1, x2, x3 = cur
    g1 = g2 = INF
    steps = 0
    event = 0
    while steps < max_steps:
        y1, y2, y3 = _step(a, alpha, c, d, e, x1, x2, x3)
        g1 = max(abs(y1 - x1), abs(y2 - x2), abs(y3 - x3))
        g2 = max(abs(y1 - p1), abs(y2 - p2), abs(y3 - p3)) if has_prev else INF
        count1 = count1 + 1 if g1 < tol else 0
        count2 = count2 + 1 if g2 < tol else 0
        p1, p2, p3 = x1, x2, x3
        x1, x2, x3 = y1, y2, y3
        has_prev = True
        steps += 1
        if count1 >= window:
            event = 1
            break
        if count2 >= window and steps >= cycle_after:
            event = 2
            break
    return event, steps, (p1, p2, p3), (x1, x2, x3), count1, count2, g1, g2
