"""Online segmentation: frames in, symbolic segment summaries out.

Every joint-angle and bone-length series gets its own CuSum detector.
When one fires, the stream enters a pending state: frames are buffered
until the end-time window is complete, the triggering series is fit with
the line-then-plateau model to locate the end of the change, the
keypoint trajectories are clipped to [t_start, t_end], and one primitive
per keypoint is fit and summarized. Nothing ever reads past the frame
being pushed, so emission latency is bounded by the declared wait.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

import numpy as np

from .changepoint import ChangeAlarm, CusumDetector, estimate_end_time
from .config import RunConfig
from .errors import (
    BufferCapacityError,
    NonConsecutiveFrame,
    ShapeMismatch,
    WindowTooShort,
)
from .features import FeatureExtractor, FeatureSample, KeypointFrame, SkeletonTopology
from .primitives import select_primitive
from .representation import SegmentRepresentation, summarize_segment


class OnlineSegmenter:
    """Single-writer per-stream state machine.

    At most one alarm is pending at a time. After a segment is emitted
    (or discarded for being too short) every detector is reset and, with
    the refractory policy enabled, detection stays quiet through the
    emitted window so correlated signals cannot re-trigger on the same
    physical motion. Disabling the refractory keeps detector state
    across emissions, which reproduces the cascade-prone behavior of a
    bare per-signal detector bank.
    """

    def __init__(self, topology: SkeletonTopology, config: RunConfig):
        self.topology = topology
        self.config = config
        self.extractor = FeatureExtractor(
            topology,
            confidence_floor=config["features.confidence_floor"],
            normalize=config["features.normalize"],
        )
        self.fit_config = config.fit_config()
        self.signal_names = topology.signal_names
        self._torso_bone = topology.bone_index("torso")
        self.detectors: Optional[list[CusumDetector]] = None
        self.frames: deque[KeypointFrame] = deque()
        self.samples: deque[FeatureSample] = deque()
        self.pending: Optional[tuple[ChangeAlarm, int]] = None  # (alarm, W)
        self.t_refractory: Optional[int] = None
        self._prev_t: Optional[int] = None
        self._n_keypoints: Optional[int] = None
        self._smooth: Optional[list[deque]] = None

    # -- detector plumbing -------------------------------------------------

    def _build_detectors(self, first: FeatureSample) -> list[CusumDetector]:
        h_angle = self.config["cusum.threshold_angle"]
        h_bone = self.config["cusum.threshold_bone"]
        drift = self.config["cusum.drift"]
        if self._torso_bone is not None:
            torso = float(first.lengths[self._torso_bone])
            if torso > 0:
                h_bone = h_bone * torso
        detectors = []
        for i, name in enumerate(self.signal_names):
            h = h_angle if i < len(self.topology.joints) else h_bone
            detectors.append(CusumDetector(name, threshold=h, drift=drift))
        return detectors

    def _smoothed(self, values: np.ndarray) -> np.ndarray:
        width = self.config["cusum.smoothing_window"]
        if width <= 1:
            return values
        if self._smooth is None:
            self._smooth = [deque(maxlen=width) for _ in values]
        out = np.empty_like(values)
        for i, v in enumerate(values):
            self._smooth[i].append(float(v))
            out[i] = sum(self._smooth[i]) / len(self._smooth[i])
        return out

    def _detector_values(self, sample: FeatureSample) -> np.ndarray:
        return self._smoothed(sample.signal_values())

    # -- ring buffer -------------------------------------------------------

    def _append(self, frame: KeypointFrame, sample: FeatureSample) -> None:
        capacity = self.config["segmenter.buffer_capacity"]
        self.frames.append(frame)
        self.samples.append(sample)
        while len(self.frames) > capacity:
            evicted = self.frames.popleft()
            self.samples.popleft()
            if self.pending is not None and evicted.t >= self.pending[0].t_start:
                raise BufferCapacityError(
                    f"pending segment needs frame {evicted.t} "
                    f"but buffer capacity is {capacity}"
                )

    def _slice_samples(self, t_from: int, t_to: int) -> list[FeatureSample]:
        return [s for s in self.samples if t_from <= s.t <= t_to]

    # -- main entry points ---------------------------------------------------

    def push_frame(self, frame: KeypointFrame) -> list[SegmentRepresentation]:
        """Consume one frame, returning any segment finalized by it."""
        if self._prev_t is not None and frame.t != self._prev_t + 1:
            raise NonConsecutiveFrame(
                f"expected frame {self._prev_t + 1}, got {frame.t}"
            )
        self._prev_t = frame.t
        if self._n_keypoints is None:
            self._n_keypoints = frame.keypoints.shape[0]
        elif frame.keypoints.shape[0] != self._n_keypoints:
            raise ShapeMismatch(
                f"keypoint count changed from {self._n_keypoints} "
                f"to {frame.keypoints.shape[0]}"
            )
        frame, sample = self.extractor.push(frame)
        self._append(frame, sample)

        events: list[SegmentRepresentation] = []
        if self.pending is not None:
            alarm, w = self.pending
            if frame.t >= alarm.t_change + w:
                events.extend(self._finalize(alarm, w))

        if self.pending is None:
            if self.t_refractory is None or frame.t > self.t_refractory:
                self._update_detectors(frame.t, sample)
        return events

    def finish(self) -> list[SegmentRepresentation]:
        """Flush a pending alarm at end of stream with a truncated window."""
        if self.pending is None:
            return []
        alarm, w = self.pending
        return self._finalize(alarm, w, truncated=True)

    def _update_detectors(self, t: int, sample: FeatureSample) -> None:
        if self.detectors is None:
            self.detectors = self._build_detectors(sample)
        values = self._detector_values(sample)
        fired: list[ChangeAlarm] = []
        for detector, value in zip(self.detectors, values):
            alarm = detector.update(t, float(value))
            if alarm is not None:
                fired.append(alarm)
        if not fired:
            return
        # Highest excess wins; earlier signal index on ties.
        best = max(enumerate(fired), key=lambda iv: (iv[1].excess, -iv[0]))[1]
        w = max(best.t_change - best.t_start, self.config["cusum.w_min"])
        span = best.t_change + w - best.t_start + 1
        if span > self.config["segmenter.buffer_capacity"]:
            raise BufferCapacityError(
                f"segment window of {span} frames exceeds buffer capacity "
                f"{self.config['segmenter.buffer_capacity']}"
            )
        if self.frames[0].t > best.t_start:
            raise BufferCapacityError(
                f"alarm start {best.t_start} predates oldest buffered frame "
                f"{self.frames[0].t}"
            )
        self.pending = (best, w)

    # -- segment finalization ------------------------------------------------

    def _signal_series(self, signal_id: str, t_from: int, t_to: int):
        # End-time fitting and summaries read the raw series; optional
        # pre-smoothing only shapes what the detectors see.
        idx = self.signal_names.index(signal_id)
        series = []
        for s in self.samples:
            if t_from <= s.t <= t_to:
                series.append((s.t, float(self._raw_signal(s, idx))))
        return series

    @staticmethod
    def _raw_signal(sample: FeatureSample, idx: int) -> float:
        if idx < sample.angles.size:
            return sample.angles[idx]
        return sample.lengths[idx - sample.angles.size]

    def _finalize(
        self, alarm: ChangeAlarm, w: int, truncated: bool = False
    ) -> list[SegmentRepresentation]:
        t_limit = alarm.t_change + w
        series = self._signal_series(alarm.signal_id, alarm.t_change, t_limit)
        try:
            t_end = estimate_end_time(series, alarm, self.config["cusum.w_min"])
        except WindowTooShort:
            t_end = min(t_limit, self.samples[-1].t)
        self.pending = None
        if self.config["segmenter.refractory"]:
            for detector in self.detectors or []:
                detector.reset()
            self.t_refractory = t_end

        if t_end - alarm.t_start + 1 < self.config["segmenter.min_segment_len"]:
            return []
        rep = self._summarize(alarm, t_end)
        return [rep]

    def _summarize(self, alarm: ChangeAlarm, t_end: int) -> SegmentRepresentation:
        t_start = alarm.t_start
        window_frames = [f for f in self.frames if t_start <= f.t <= t_end]
        window_samples = self._slice_samples(t_start, t_end)
        times = [f.t for f in window_frames]
        fits = []
        n_kp = window_frames[0].keypoints.shape[0]
        for k in range(n_kp):
            pts = np.array([f.keypoints[k] for f in window_frames])
            fits.append(select_primitive(pts, times, self.fit_config))
        return summarize_segment(
            t_start=t_start,
            t_end=t_end,
            t_change=alarm.t_change,
            signal=alarm.signal_id,
            fits=fits,
            feature_window=window_samples,
            torso_bone=self._torso_bone,
        )
