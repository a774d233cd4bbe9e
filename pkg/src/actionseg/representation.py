"""Per-segment symbolic summaries and the metric used to compare them.

A segment is summarized keypoint by keypoint as the fitted primitive
kind plus its start/mid/end anchor points, together with start/mid/end
triples of every joint-angle and bone-length signal. Two summaries are
compared by summing, over keypoints, the Euclidean distances between
corresponding anchors; the primitive kinds do not enter the metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ShapeMismatch, WindowMismatch
from .features import FeatureSample
from .primitives import FitResult, eval_primitive


@dataclass(frozen=True)
class SegmentRepresentation:
    t_start: int
    t_end: int
    t_change: int
    signal: str  # id of the series whose alarm produced this segment
    kinds: tuple[str, ...]
    anchors: np.ndarray  # (K, 3, 2): start/mid/end point per keypoint
    angle_triples: np.ndarray  # (J, 3)
    bone_triples: np.ndarray  # (B, 3)
    scale: float = 1.0  # torso length at t_start, 1.0 if unavailable

    def __post_init__(self):
        if self.t_start >= self.t_end:
            raise ValueError("t_start must precede t_end")
        anchors = np.asarray(self.anchors, dtype=float)
        if anchors.ndim != 3 or anchors.shape[1:] != (3, 2):
            raise ValueError("anchors must have shape (K, 3, 2)")
        if anchors.shape[0] != len(self.kinds):
            raise ValueError("one anchor triple per keypoint kind")
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(
            self, "angle_triples", np.asarray(self.angle_triples, dtype=float)
        )
        object.__setattr__(
            self, "bone_triples", np.asarray(self.bone_triples, dtype=float)
        )

    @property
    def keypoint_count(self) -> int:
        return self.anchors.shape[0]

    def to_event(self) -> dict:
        return {
            "type": "segment",
            "t_start": self.t_start,
            "t_end": self.t_end,
            "t_change": self.t_change,
            "signal": self.signal,
            "prims": [
                {
                    "kind": self.kinds[k],
                    "S": list(self.anchors[k, 0]),
                    "M": list(self.anchors[k, 1]),
                    "E": list(self.anchors[k, 2]),
                }
                for k in range(self.keypoint_count)
            ],
            "angles": self.angle_triples.tolist(),
            "bones": self.bone_triples.tolist(),
        }


def summarize_segment(
    t_start: int,
    t_end: int,
    t_change: int,
    signal: str,
    fits: Sequence[FitResult],
    feature_window: Sequence[FeatureSample],
    torso_bone: Optional[int] = None,
) -> SegmentRepresentation:
    """Build the symbolic summary of one segment.

    ``feature_window`` must cover [t_start, t_end] exactly, one sample
    per frame. Anchors come from evaluating each fitted primitive at
    tau = 0, 0.5 and 1; signal triples are read at the window's first,
    middle (floor) and last frames.
    """
    n = t_end - t_start + 1
    if (
        len(feature_window) != n
        or feature_window[0].t != t_start
        or feature_window[-1].t != t_end
    ):
        raise WindowMismatch(
            f"features cover [{feature_window[0].t if feature_window else '?'}, "
            f"{feature_window[-1].t if feature_window else '?'}], "
            f"segment is [{t_start}, {t_end}]"
        )
    anchors = np.empty((len(fits), 3, 2))
    kinds = []
    for k, fit in enumerate(fits):
        kinds.append(fit.primitive.kind)
        for j, tau in enumerate((0.0, 0.5, 1.0)):
            anchors[k, j] = eval_primitive(fit.primitive, tau)

    mid = (t_start + t_end) // 2 - t_start
    picks = (feature_window[0], feature_window[mid], feature_window[-1])
    angle_triples = np.stack([s.angles for s in picks], axis=1)
    bone_triples = np.stack([s.lengths for s in picks], axis=1)

    scale = 1.0
    if torso_bone is not None:
        scale = float(feature_window[0].lengths[torso_bone])

    return SegmentRepresentation(
        t_start=t_start,
        t_end=t_end,
        t_change=t_change,
        signal=signal,
        kinds=tuple(kinds),
        anchors=anchors,
        angle_triples=angle_triples,
        bone_triples=bone_triples,
        scale=scale,
    )


def match_error(r1: SegmentRepresentation, r2: SegmentRepresentation) -> float:
    """Sum over keypoints of the three Euclidean anchor distances."""
    if r1.keypoint_count != r2.keypoint_count:
        raise ShapeMismatch(
            f"keypoint counts differ: {r1.keypoint_count} vs {r2.keypoint_count}"
        )
    diff = r1.anchors - r2.anchors
    return float(np.sum(np.sqrt(np.sum(diff**2, axis=2))))


def is_match(
    r1: SegmentRepresentation,
    r2: SegmentRepresentation,
    tau: float,
    strict_kinds: bool = False,
) -> bool:
    """Threshold test on the scale-normalized match error.

    The error is divided by 3*K times the mean torso scale of the two
    summaries, so one threshold serves streams of different image
    scales. With ``strict_kinds`` the primitive kinds must also agree.
    """
    if strict_kinds and r1.kinds != r2.kinds:
        return False
    k = r1.keypoint_count
    scale = max(0.5 * (r1.scale + r2.scale), 1e-9)
    return match_error(r1, r2) / (3.0 * k * scale) < tau
