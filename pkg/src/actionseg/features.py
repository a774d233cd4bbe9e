"""Joint-angle and bone-length signals derived from 2D keypoint frames.

Angles are interior angles at a vertex keypoint, in degrees within
[0, 180]. Bone lengths are Euclidean distances in the stream's
coordinate units. Both are computed frame by frame so they form online
time series, one per topology entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateVector, NoPriorValue, TopologyMismatch

_RAY_EPS = 1e-12


@dataclass(frozen=True)
class KeypointFrame:
    """One time-stamped set of 2D keypoints.

    ``keypoints`` is an (K, 2) float array; ``confidence`` an optional
    (K,) array of per-keypoint scores in [0, 1].
    """

    t: int
    keypoints: np.ndarray
    confidence: Optional[np.ndarray] = None

    def __post_init__(self):
        kp = np.asarray(self.keypoints, dtype=float)
        if kp.ndim != 2 or kp.shape[1] != 2:
            raise ValueError("keypoints must be an (K, 2) array")
        object.__setattr__(self, "keypoints", kp)
        if self.confidence is not None:
            conf = np.asarray(self.confidence, dtype=float)
            if conf.shape != (kp.shape[0],):
                raise ValueError("confidence must have one score per keypoint")
            object.__setattr__(self, "confidence", conf)


@dataclass(frozen=True)
class JointSpec:
    """Angle subtended at keypoint ``b`` by the rays b->a and b->c."""

    name: str
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class BoneSpec:
    """Distance between keypoints ``a`` and ``b``."""

    name: str
    a: int
    b: int


@dataclass(frozen=True)
class SkeletonTopology:
    joints: tuple[JointSpec, ...]
    bones: tuple[BoneSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))
        object.__setattr__(self, "bones", tuple(self.bones))
        for names, entries in (("joint", self.joints), ("bone", self.bones)):
            seen = set()
            for e in entries:
                if e.name in seen:
                    raise ValueError(f"duplicate {names} name {e.name!r}")
                seen.add(e.name)
        for j in self.joints:
            if len({j.a, j.b, j.c}) != 3:
                raise ValueError(f"joint {j.name!r} indices must be distinct")
        for b in self.bones:
            if b.a == b.b:
                raise ValueError(f"bone {b.name!r} endpoints must differ")

    @property
    def signal_names(self) -> list[str]:
        """Stable ids for every monitored series: angles first, then bones."""
        return [f"angle:{j.name}" for j in self.joints] + [
            f"bone:{b.name}" for b in self.bones
        ]

    def max_index(self) -> int:
        idx = [i for j in self.joints for i in (j.a, j.b, j.c)]
        idx += [i for b in self.bones for i in (b.a, b.b)]
        return max(idx) if idx else -1

    def bone_index(self, name: str) -> Optional[int]:
        for i, b in enumerate(self.bones):
            if b.name == name:
                return i
        return None

    @classmethod
    def from_dict(cls, data: dict) -> "SkeletonTopology":
        try:
            joints = tuple(
                JointSpec(j["name"], int(j["a"]), int(j["b"]), int(j["c"]))
                for j in data.get("joints", [])
            )
            bones = tuple(
                BoneSpec(b["name"], int(b["a"]), int(b["b"]))
                for b in data.get("bones", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed topology: {exc}") from exc
        return cls(joints, bones)

    def to_dict(self) -> dict:
        return {
            "joints": [
                {"name": j.name, "a": j.a, "b": j.b, "c": j.c} for j in self.joints
            ],
            "bones": [{"name": b.name, "a": b.a, "b": b.b} for b in self.bones],
        }


def load_topology(path) -> SkeletonTopology:
    with open(path, "r", encoding="utf-8") as fp:
        return SkeletonTopology.from_dict(json.load(fp))


# Keypoint order expected by the default topology.
DEFAULT_KEYPOINT_NAMES = (
    "l_shoulder",
    "r_shoulder",
    "l_elbow",
    "r_elbow",
    "l_wrist",
    "r_wrist",
    "l_hip",
    "r_hip",
    "l_knee",
    "r_knee",
    "l_ankle",
    "r_ankle",
)


def default_topology() -> SkeletonTopology:
    """Upper/lower-limb topology: 8 joints, 8 limb bones plus the torso."""
    j = DEFAULT_KEYPOINT_NAMES.index
    joints = (
        JointSpec("l_shoulder", j("l_elbow"), j("l_shoulder"), j("l_hip")),
        JointSpec("r_shoulder", j("r_elbow"), j("r_shoulder"), j("r_hip")),
        JointSpec("l_elbow", j("l_shoulder"), j("l_elbow"), j("l_wrist")),
        JointSpec("r_elbow", j("r_shoulder"), j("r_elbow"), j("r_wrist")),
        JointSpec("l_hip", j("l_shoulder"), j("l_hip"), j("l_knee")),
        JointSpec("r_hip", j("r_shoulder"), j("r_hip"), j("r_knee")),
        JointSpec("l_knee", j("l_hip"), j("l_knee"), j("l_ankle")),
        JointSpec("r_knee", j("r_hip"), j("r_knee"), j("r_ankle")),
    )
    bones = (
        BoneSpec("l_upper_arm", j("l_shoulder"), j("l_elbow")),
        BoneSpec("r_upper_arm", j("r_shoulder"), j("r_elbow")),
        BoneSpec("l_forearm", j("l_elbow"), j("l_wrist")),
        BoneSpec("r_forearm", j("r_elbow"), j("r_wrist")),
        BoneSpec("l_thigh", j("l_hip"), j("l_knee")),
        BoneSpec("r_thigh", j("r_hip"), j("r_knee")),
        BoneSpec("l_calf", j("l_knee"), j("l_ankle")),
        BoneSpec("r_calf", j("r_knee"), j("r_ankle")),
        BoneSpec("torso", j("l_shoulder"), j("l_hip")),
    )
    return SkeletonTopology(joints, bones)


@dataclass(frozen=True)
class FeatureSample:
    """Per-frame angle and length values, in topology order."""

    t: int
    angles: np.ndarray
    lengths: np.ndarray

    def signal_values(self) -> np.ndarray:
        return np.concatenate([self.angles, self.lengths])


def joint_angle(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> float:
    """Interior angle at ``b`` between rays b->a and b->c, in degrees."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    v1 = a - b
    v2 = c - b
    n1 = float(np.hypot(v1[0], v1[1]))
    n2 = float(np.hypot(v2[0], v2[1]))
    if n1 <= _RAY_EPS or n2 <= _RAY_EPS:
        raise DegenerateVector("joint angle needs two non-zero rays")
    cos = float(np.clip(np.dot(v1, v2) / (n1 * n2), -1.0, 1.0))
    return float(np.degrees(np.arccos(cos)))


def bone_length(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two keypoints."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


def _valid_mask(frame: KeypointFrame, confidence_floor: float) -> np.ndarray:
    ok = np.isfinite(frame.keypoints).all(axis=1)
    if frame.confidence is not None:
        ok &= frame.confidence >= confidence_floor
    return ok


def compute_features(
    frame: KeypointFrame,
    topo: SkeletonTopology,
    prev: Optional[FeatureSample] = None,
    confidence_floor: float = 0.5,
) -> FeatureSample:
    """Compute one FeatureSample, carrying forward entries whose keypoints
    are invalid on this frame.

    A keypoint is invalid when any coordinate is non-finite or its
    confidence is below ``confidence_floor``. Entries whose rays are
    geometrically degenerate are treated the same way: the previous
    value is reused so downstream detectors see no artificial jump.
    """
    n_kp = frame.keypoints.shape[0]
    if topo.max_index() >= n_kp:
        raise TopologyMismatch(
            f"topology references keypoint {topo.max_index()} "
            f"but frame has only {n_kp}"
        )
    valid = _valid_mask(frame, confidence_floor)
    kp = frame.keypoints

    angles = np.empty(len(topo.joints))
    for i, j in enumerate(topo.joints):
        value = None
        if valid[j.a] and valid[j.b] and valid[j.c]:
            try:
                value = joint_angle(kp[j.a], kp[j.b], kp[j.c])
            except DegenerateVector:
                value = None
        if value is None:
            if prev is None:
                raise NoPriorValue(f"joint {j.name!r} invalid on first frame")
            value = float(prev.angles[i])
        angles[i] = value

    lengths = np.empty(len(topo.bones))
    for i, b in enumerate(topo.bones):
        if valid[b.a] and valid[b.b]:
            lengths[i] = bone_length(kp[b.a], kp[b.b])
        else:
            if prev is None:
                raise NoPriorValue(f"bone {b.name!r} invalid on first frame")
            lengths[i] = float(prev.lengths[i])

    return FeatureSample(t=frame.t, angles=angles, lengths=lengths)


@dataclass
class FeatureExtractor:
    """Stateful per-stream wrapper around :func:`compute_features`.

    Keeps the last valid sample for carry-forward and optionally rescales
    every frame by its torso bone length before any feature is computed.
    State is single-writer; distinct streams need distinct extractors.
    """

    topology: SkeletonTopology
    confidence_floor: float = 0.5
    normalize: bool = False
    _prev: Optional[FeatureSample] = field(default=None, repr=False)
    _prev_scale: float = field(default=1.0, repr=False)

    def push(self, frame: KeypointFrame) -> tuple[KeypointFrame, FeatureSample]:
        """Return the (possibly rescaled) frame and its feature sample."""
        if self.normalize:
            frame = self._rescale(frame)
        sample = compute_features(
            frame, self.topology, self._prev, self.confidence_floor
        )
        self._prev = sample
        return frame, sample

    def _rescale(self, frame: KeypointFrame) -> KeypointFrame:
        idx = self.topology.bone_index("torso")
        scale = self._prev_scale
        if idx is not None:
            b = self.topology.bones[idx]
            length = bone_length(frame.keypoints[b.a], frame.keypoints[b.b])
            if np.isfinite(length) and length > 1e-12:
                scale = length
        self._prev_scale = scale
        return KeypointFrame(
            t=frame.t, keypoints=frame.keypoints / scale, confidence=frame.confidence
        )
