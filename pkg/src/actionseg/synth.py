"""Scripted keypoint streams with known segment boundaries and counts.

A motion script gives each keypoint a per-cycle timeline of phases (hold
at a point, line between two points, arc around a center), repeated a
fixed number of cycles with optional Gaussian coordinate noise. Because
the phases are generative, the script itself is the ground truth: every
non-hold phase is a true motion segment and the cycle count is the true
repetition count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidScript
from .features import KeypointFrame


@dataclass(frozen=True)
class HoldPhase:
    point: tuple[float, float]
    frames: int

    kind = "hold"

    def at(self, u: float) -> tuple[float, float]:
        return self.point


@dataclass(frozen=True)
class LinePhase:
    start: tuple[float, float]
    end: tuple[float, float]
    frames: int

    kind = "line"

    def at(self, u: float) -> tuple[float, float]:
        return (
            self.start[0] + u * (self.end[0] - self.start[0]),
            self.start[1] + u * (self.end[1] - self.start[1]),
        )


@dataclass(frozen=True)
class ArcPhase:
    center: tuple[float, float]
    radius: float
    theta0: float  # radians
    theta1: float
    frames: int

    kind = "arc"

    def at(self, u: float) -> tuple[float, float]:
        th = self.theta0 + u * (self.theta1 - self.theta0)
        return (
            self.center[0] + self.radius * math.cos(th),
            self.center[1] + self.radius * math.sin(th),
        )


Phase = Union[HoldPhase, LinePhase, ArcPhase]


@dataclass(frozen=True)
class GroundTruth:
    """True motion windows (frame spans) and the true repetition count."""

    segments: tuple[tuple[int, int], ...]
    count: int

    def to_dict(self) -> dict:
        return {"segments": [list(s) for s in self.segments], "count": self.count}

    @classmethod
    def from_dict(cls, data: dict) -> "GroundTruth":
        return cls(
            segments=tuple((int(a), int(b)) for a, b in data["segments"]),
            count=int(data["count"]),
        )


@dataclass(frozen=True)
class MotionScript:
    """One timeline of phases per keypoint, repeated ``repeat`` cycles."""

    timelines: tuple[tuple[Phase, ...], ...]
    noise_sigma: float = 0.0
    repeat: int = 1

    def __post_init__(self):
        object.__setattr__(
            self, "timelines", tuple(tuple(tl) for tl in self.timelines)
        )
        if not self.timelines:
            raise InvalidScript("script needs at least one keypoint timeline")
        if self.repeat < 1:
            raise InvalidScript("repeat must be >= 1")
        if self.noise_sigma < 0:
            raise InvalidScript("noise_sigma must be >= 0")
        durations = set()
        for tl in self.timelines:
            if not tl:
                raise InvalidScript("empty keypoint timeline")
            for phase in tl:
                if phase.frames < 1:
                    raise InvalidScript("phase durations must be >= 1")
            durations.add(sum(p.frames for p in tl))
        if len(durations) != 1:
            raise InvalidScript(
                f"keypoint timelines disagree on cycle length: {sorted(durations)}"
            )

    @property
    def keypoint_count(self) -> int:
        return len(self.timelines)

    @property
    def cycle_frames(self) -> int:
        return sum(p.frames for p in self.timelines[0])

    @property
    def total_frames(self) -> int:
        return self.cycle_frames * self.repeat

    def to_dict(self) -> dict:
        def phase_dict(p: Phase) -> dict:
            if isinstance(p, HoldPhase):
                return {"kind": "hold", "point": list(p.point), "frames": p.frames}
            if isinstance(p, LinePhase):
                return {
                    "kind": "line",
                    "start": list(p.start),
                    "end": list(p.end),
                    "frames": p.frames,
                }
            return {
                "kind": "arc",
                "center": list(p.center),
                "radius": p.radius,
                "theta0": p.theta0,
                "theta1": p.theta1,
                "frames": p.frames,
            }

        return {
            "keypoints": self.keypoint_count,
            "noise_sigma": self.noise_sigma,
            "repeat": self.repeat,
            "timelines": [[phase_dict(p) for p in tl] for tl in self.timelines],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MotionScript":
        def parse_phase(p: dict) -> Phase:
            kind = p.get("kind")
            frames = int(p.get("frames", 0))
            if kind == "hold":
                return HoldPhase(point=tuple(p["point"]), frames=frames)
            if kind == "line":
                return LinePhase(
                    start=tuple(p["start"]), end=tuple(p["end"]), frames=frames
                )
            if kind == "arc":
                return ArcPhase(
                    center=tuple(p["center"]),
                    radius=float(p["radius"]),
                    theta0=float(p["theta0"]),
                    theta1=float(p["theta1"]),
                    frames=frames,
                )
            raise InvalidScript(f"unknown phase kind {kind!r}")

        try:
            timelines = tuple(
                tuple(parse_phase(p) for p in tl) for tl in data["timelines"]
            )
            script = cls(
                timelines=timelines,
                noise_sigma=float(data.get("noise_sigma", 0.0)),
                repeat=int(data.get("repeat", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidScript(f"malformed script: {exc}") from exc
        declared = data.get("keypoints")
        if declared is not None and int(declared) != script.keypoint_count:
            raise InvalidScript(
                f"script declares {declared} keypoints "
                f"but has {script.keypoint_count} timelines"
            )
        return script


def load_script(path) -> MotionScript:
    with open(path, "r", encoding="utf-8") as fp:
        return MotionScript.from_dict(json.load(fp))


def _position(timeline: Sequence[Phase], local: int) -> tuple[float, float]:
    offset = 0
    for phase in timeline:
        if local < offset + phase.frames:
            return phase.at((local - offset) / phase.frames)
        offset += phase.frames
    raise AssertionError("local frame beyond cycle length")


def generate_stream(
    script: MotionScript, seed: int = 0
) -> tuple[list[KeypointFrame], GroundTruth]:
    """Evaluate the script at integer frames and add seeded noise.

    Noise uses numpy's counter-based Philox generator so fixtures are
    reproducible across runs. Each non-hold phase contributes the ground
    truth span [first frame, arrival frame], where the arrival frame is
    the first frame resting at the phase's endpoint.
    """
    cycle = script.cycle_frames
    total = script.total_frames
    k = script.keypoint_count
    coords = np.empty((total, k, 2))
    for f in range(total):
        local = f % cycle
        for i, tl in enumerate(script.timelines):
            coords[f, i] = _position(tl, local)
    if script.noise_sigma > 0:
        rng = np.random.Generator(np.random.Philox(seed))
        coords = coords + rng.normal(0.0, script.noise_sigma, size=coords.shape)

    spans = set()
    for tl in script.timelines:
        offset = 0
        for phase in tl:
            if phase.kind != "hold":
                for r in range(script.repeat):
                    start = r * cycle + offset
                    end = min(start + phase.frames, total - 1)
                    spans.add((start, end))
            offset += phase.frames
    truth = GroundTruth(segments=tuple(sorted(spans)), count=script.repeat)

    frames = [KeypointFrame(t=f, keypoints=coords[f]) for f in range(total)]
    return frames, truth
