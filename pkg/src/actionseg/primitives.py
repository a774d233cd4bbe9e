"""Symbolic motion primitives fit to keypoint trajectories.

A segment trajectory becomes one of three symbols: a stationary point, a
straight line, or a circular arc. The geometric shape is fit by least
squares; time enters through a quadratic parameterization of the shape's
1-D coordinate (arc length along the line, angle around the circle) over
normalized time tau in [0, 1], so evaluating a primitive always lands on
the declared shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DegenerateInput, SingularFit

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Quadratic:
    """value(tau) = a2*tau^2 + a1*tau + a0."""

    a2: float
    a1: float
    a0: float

    def __call__(self, tau: float) -> float:
        return (self.a2 * tau + self.a1) * tau + self.a0


@dataclass(frozen=True)
class StationaryPrimitive:
    kind = "stationary"
    point: tuple[float, float]

    def point_at(self, tau: float) -> np.ndarray:
        return np.array(self.point)


@dataclass(frozen=True)
class LinePrimitive:
    kind = "line"
    base: tuple[float, float]
    direction: tuple[float, float]  # unit vector
    arc_length: Quadratic

    def point_at(self, tau: float) -> np.ndarray:
        s = self.arc_length(tau)
        return np.array(self.base) + s * np.array(self.direction)


@dataclass(frozen=True)
class CirclePrimitive:
    kind = "circle"
    center: tuple[float, float]
    radius: float
    angle: Quadratic  # radians, unwrapped

    def point_at(self, tau: float) -> np.ndarray:
        th = self.angle(tau)
        return np.array(self.center) + self.radius * np.array(
            [math.cos(th), math.sin(th)]
        )


Primitive = Union[StationaryPrimitive, LinePrimitive, CirclePrimitive]


@dataclass(frozen=True)
class FitResult:
    primitive: Primitive
    rms_residual: float


@dataclass(frozen=True)
class FitConfig:
    """Absolute-unit thresholds for primitive selection."""

    stationary_eps: float
    max_radius: float
    model_margin: float = 0.05


def eval_primitive(prim: Primitive, tau: float) -> np.ndarray:
    """Point on the primitive at normalized time tau in [0, 1]."""
    return prim.point_at(tau)


def unwrap_angles(seq: Sequence[float]) -> list[float]:
    """Shift each angle by multiples of 2*pi so consecutive differences
    lie in (-pi, pi]; the first value is returned unchanged."""
    if len(seq) == 0:
        raise ValueError("empty angle sequence")
    out = [float(seq[0])]
    for value in seq[1:]:
        d = float(value) - out[-1]
        r = d % TWO_PI
        if r > math.pi:
            r -= TWO_PI
        out.append(out[-1] + r)
    return out


def fit_quadratic(taus: Sequence[float], values: Sequence[float]) -> Quadratic:
    """Least-squares quadratic in tau; exact for exactly quadratic data."""
    taus = np.asarray(taus, dtype=float)
    values = np.asarray(values, dtype=float)
    if taus.size < 3 or np.unique(taus).size < 3:
        raise SingularFit("quadratic fit needs >= 3 distinct taus")
    design = np.column_stack([taus**2, taus, np.ones_like(taus)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    return Quadratic(a2=float(coef[0]), a1=float(coef[1]), a0=float(coef[2]))


def _normalized_times(times: Sequence[float]) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.size >= 2 and np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    span = times[-1] - times[0]
    if span <= 0:
        raise ValueError("times must span a positive duration")
    return (times - times[0]) / span


def fit_stationary(
    points: Sequence[Sequence[float]], eps: float
) -> Optional[FitResult]:
    """Mean-point fit, accepted only when the RMS spread is below eps."""
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    rms = float(np.sqrt(np.mean(np.sum((pts - centroid) ** 2, axis=1))))
    if rms >= eps:
        return None
    prim = StationaryPrimitive(point=(float(centroid[0]), float(centroid[1])))
    return FitResult(primitive=prim, rms_residual=rms)


def fit_line(points: Sequence[Sequence[float]], times: Sequence[float]) -> FitResult:
    """Orthogonal-regression line with a quadratic arc-length schedule.

    The direction is the principal axis through the centroid, so
    near-vertical trajectories carry no singularity. The residual is the
    RMS perpendicular distance. Direction is oriented so the point's
    signed arc length does not decrease from first to last sample.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 3:
        raise ValueError("line fit needs >= 3 points")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    if not np.any(np.abs(centered) > 0):
        raise DegenerateInput("all points coincide")
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    direction = vt[0]
    normal = vt[1]
    s = centered @ direction
    if s[-1] < s[0]:
        direction = -direction
        s = -s
    elif s[-1] == s[0]:
        # No net displacement; pin a deterministic sign convention.
        if direction[0] < 0 or (direction[0] == 0 and direction[1] < 0):
            direction = -direction
            s = -s
    perp = centered @ normal
    rms = float(np.sqrt(np.mean(perp**2)))
    taus = _normalized_times(times)
    schedule = fit_quadratic(taus, s)
    prim = LinePrimitive(
        base=(float(centroid[0]), float(centroid[1])),
        direction=(float(direction[0]), float(direction[1])),
        arc_length=schedule,
    )
    return FitResult(primitive=prim, rms_residual=rms)


def fit_circle(points: Sequence[Sequence[float]], times: Sequence[float]) -> FitResult:
    """Algebraic least-squares circle with a quadratic angle schedule.

    Solves the single linear system that minimizes the squared algebraic
    distance sum((|p - c|^2 - r^2)^2). Collinear inputs make the system
    rank deficient and raise SingularFit. Per-sample angles around the
    fitted center are unwrapped onto a continuous branch before the
    quadratic is fit.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 4:
        raise ValueError("circle fit needs >= 4 points")
    centered = pts - pts.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[1] <= 1e-9 * max(svals[0], 1e-30):
        raise SingularFit("points are (near-)collinear")

    design = np.column_stack([pts[:, 0], pts[:, 1], np.ones(pts.shape[0])])
    target = pts[:, 0] ** 2 + pts[:, 1] ** 2
    coef, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < 3:
        raise SingularFit("circle system is rank deficient")
    cx, cy = coef[0] / 2.0, coef[1] / 2.0
    r_sq = coef[2] + cx * cx + cy * cy
    if r_sq <= 0:
        raise SingularFit("non-positive squared radius")
    radius = float(np.sqrt(r_sq))

    rel = pts - np.array([cx, cy])
    dists = np.sqrt(np.sum(rel**2, axis=1))
    rms = float(np.sqrt(np.mean((dists - radius) ** 2)))
    thetas = unwrap_angles(np.arctan2(rel[:, 1], rel[:, 0]))
    taus = _normalized_times(times)
    schedule = fit_quadratic(taus, thetas)
    prim = CirclePrimitive(
        center=(float(cx), float(cy)), radius=radius, angle=schedule
    )
    return FitResult(primitive=prim, rms_residual=rms)


def select_primitive(
    points: Sequence[Sequence[float]],
    times: Sequence[float],
    config: FitConfig,
) -> FitResult:
    """Fit all applicable primitives and keep the lowest-residual one.

    The stationary gate short-circuits everything else. The circle is
    skipped when its system is singular or its radius exceeds
    ``max_radius``; and when line and circle residuals are within
    ``model_margin`` of each other (relative), the simpler line wins.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 4:
        raise ValueError("primitive selection needs >= 4 points")
    stationary = fit_stationary(pts, config.stationary_eps)
    if stationary is not None:
        return stationary
    line = fit_line(pts, times)
    try:
        circle = fit_circle(pts, times)
    except SingularFit:
        return line
    if circle.primitive.radius > config.max_radius:
        return line
    denom = max(line.rms_residual, circle.rms_residual)
    if denom <= 0:
        return line
    if (line.rms_residual - circle.rms_residual) / denom > config.model_margin:
        return circle
    return line
