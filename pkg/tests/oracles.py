"""Independent reference implementations used only to check the package.

Everything here is deliberately written in plain scalar Python (no numpy
linear algebra) so a defect in the production code cannot hide in a
shared code path.
"""

from __future__ import annotations

import math


def reference_cusum(xs, threshold, drift=0.0):
    """Batch scalar CuSum over a full series.

    Returns a list of (t_change, t_start, direction, excess) tuples,
    with t equal to the sample index within ``xs``.
    """
    alarms = []
    g_pos = 0.0
    g_neg = 0.0
    t_pos = 0
    t_neg = 0
    for i in range(1, len(xs)):
        s = xs[i] - xs[i - 1]
        g_pos = g_pos + s - drift
        g_neg = g_neg - s - drift
        if g_pos < 0:
            g_pos = 0.0
            t_pos = i
        if g_neg < 0:
            g_neg = 0.0
            t_neg = i
        if g_pos > threshold or g_neg > threshold:
            if g_pos > threshold:
                alarms.append((i, t_pos, "increasing", g_pos - threshold))
            else:
                alarms.append((i, t_neg, "decreasing", g_neg - threshold))
            g_pos = 0.0
            g_neg = 0.0
    return alarms


def _line_fit(us, ys):
    """Ordinary least squares y = a*u + b via scalar normal equations."""
    n = len(us)
    su = sum(us)
    sy = sum(ys)
    suu = sum(u * u for u in us)
    suy = sum(u * y for u, y in zip(us, ys))
    denom = n * suu - su * su
    if denom == 0:
        a = 0.0
        b = sy / n
    else:
        a = (n * suy - su * sy) / denom
        b = (sy - a * su) / n
    return a, b


def reference_piecewise(ts, ys):
    """Exhaustive breakpoint search with scalar arithmetic.

    Returns (c, a, b, sse) for the best integer breakpoint strictly
    inside [ts[0], ts[-1]], smallest c on ties.
    """
    best = None
    for c in range(int(ts[0]) + 1, int(ts[-1])):
        us = [min(t, c) for t in ts]
        a, b = _line_fit(us, ys)
        sse = sum((y - (a * u + b)) ** 2 for u, y in zip(us, ys))
        if best is None or sse < best[3]:
            best = (c, a, b, sse)
    return best


def reference_unwrap(seq):
    """Cumulative-difference unwrap with differences in (-pi, pi]."""
    out = [seq[0]]
    for v in seq[1:]:
        d = v - out[-1]
        while d > math.pi:
            d -= 2 * math.pi
        while d <= -math.pi:
            d += 2 * math.pi
        out.append(out[-1] + d)
    return out


def rms_distance_from_mean(points):
    mx = sum(p[0] for p in points) / len(points)
    my = sum(p[1] for p in points) / len(points)
    return math.sqrt(
        sum((p[0] - mx) ** 2 + (p[1] - my) ** 2 for p in points) / len(points)
    )
