"""Online CuSum change detection and piecewise-linear end-time estimation.

The detector tracks cumulative sums of positive and negative first
differences against a threshold, the reset-and-record recursion used by
common sequential implementations (detecta's ``detect_cusum`` among
them): a sum that dips below zero is clamped to zero and its reset time
recorded, and that time becomes the start of the change once the other
end of the recursion crosses the threshold.

An alarm gives the start and detection times of a change but not its
end. The end is recovered by fitting a line-then-plateau model over a
short window after the detection point; the breakpoint of that model is
the end time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import WindowTooShort


@dataclass(frozen=True)
class ChangeAlarm:
    """A detected mean shift in one monitored signal."""

    signal_id: str
    t_start: int
    t_change: int
    direction: str  # "increasing" | "decreasing"
    excess: float

    def __post_init__(self):
        if self.t_start > self.t_change:
            raise ValueError("t_start must not exceed t_change")


class CusumDetector:
    """Sequential CuSum on first differences of one signal.

    ``threshold`` is in signal units (> 0); ``drift`` is subtracted from
    both sums every step (>= 0) and keeps the recorded start times fresh
    on noisy signals. The first update only seeds the previous sample.
    """

    def __init__(self, signal_id: str, threshold: float, drift: float = 0.0):
        if threshold <= 0:
            raise ValueError("threshold must be positive")
        if drift < 0:
            raise ValueError("drift must be non-negative")
        self.signal_id = signal_id
        self.threshold = threshold
        self.drift = drift
        self.g_pos = 0.0
        self.g_neg = 0.0
        self.t_pos = 0
        self.t_neg = 0
        self.prev_x: Optional[float] = None

    def reset(self) -> None:
        """Forget all state; the next update seeds again."""
        self.g_pos = 0.0
        self.g_neg = 0.0
        self.t_pos = 0
        self.t_neg = 0
        self.prev_x = None

    def update(self, t: int, x: float) -> Optional[ChangeAlarm]:
        """Advance one sample; return an alarm if a sum crossed the threshold."""
        if self.prev_x is None:
            self.prev_x = x
            self.t_pos = t
            self.t_neg = t
            return None
        s = x - self.prev_x
        self.prev_x = x
        self.g_pos = self.g_pos + s - self.drift
        self.g_neg = self.g_neg - s - self.drift
        if self.g_pos < 0:
            self.g_pos = 0.0
            self.t_pos = t
        if self.g_neg < 0:
            self.g_neg = 0.0
            self.t_neg = t
        if self.g_pos > self.threshold or self.g_neg > self.threshold:
            if self.g_pos > self.threshold:
                alarm = ChangeAlarm(
                    signal_id=self.signal_id,
                    t_start=self.t_pos,
                    t_change=t,
                    direction="increasing",
                    excess=self.g_pos - self.threshold,
                )
            else:
                alarm = ChangeAlarm(
                    signal_id=self.signal_id,
                    t_start=self.t_neg,
                    t_change=t,
                    direction="decreasing",
                    excess=self.g_neg - self.threshold,
                )
            self.g_pos = 0.0
            self.g_neg = 0.0
            return alarm
        return None


@dataclass(frozen=True)
class PiecewiseFit:
    """Line y = a*t + b for t < c, plateau d = a*c + b for t >= c."""

    a: float
    b: float
    c: int
    d: float
    sse: float


def fit_piecewise_linear(window: Sequence[tuple[int, float]]) -> PiecewiseFit:
    """Fit the line-then-plateau model over ``window`` ((t, y) pairs).

    Every integer breakpoint candidate strictly inside the window is
    tried; for each, the slope and intercept minimizing the whole-window
    SSE are solved in closed form. The minimal-SSE candidate wins, ties
    going to the smallest breakpoint.
    """
    if len(window) < 4:
        raise WindowTooShort(f"need >= 4 samples, got {len(window)}")
    t = np.array([p[0] for p in window], dtype=float)
    y = np.array([p[1] for p in window], dtype=float)
    lo = int(t[0])
    hi = int(t[-1])

    best: Optional[PiecewiseFit] = None
    for c in range(lo + 1, hi):
        u = np.minimum(t, float(c))
        um = u.mean()
        ym = y.mean()
        sxx = float(np.dot(u - um, u - um))
        if sxx > 0:
            a = float(np.dot(u - um, y - ym)) / sxx
        else:
            a = 0.0
        b = ym - a * um
        resid = y - (a * u + b)
        sse = float(np.dot(resid, resid))
        if best is None or sse < best.sse:
            best = PiecewiseFit(a=a, b=b, c=c, d=a * c + b, sse=sse)
    assert best is not None
    return best


def estimate_end_time(
    series: Sequence[tuple[int, float]], alarm: ChangeAlarm, w_min: int
) -> int:
    """Breakpoint of the piecewise fit over the post-detection window.

    ``series`` must hold the triggering signal from ``t_change`` up to
    ``t_change + W`` (W = max(t_change - t_start, w_min)), or less when
    the stream ended first. Raises WindowTooShort when fewer than 4
    samples are available; callers then fall back to the window end.
    """
    w = max(alarm.t_change - alarm.t_start, w_min)
    window = [(t, v) for t, v in series if alarm.t_change <= t <= alarm.t_change + w]
    fit = fit_piecewise_linear(window)
    return fit.c
