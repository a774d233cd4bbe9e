"""Frame-stream JSONL parsing, event serialization, and validation.

One frame per line: {"t": <int>, "kp": [[x, y], ...], "conf": [c, ...]}
with "conf" optional. Events are emitted one JSON object per line as
they are produced.
"""

from __future__ import annotations

import json
from typing import IO, Iterable, Iterator, Optional

import numpy as np

from .errors import ParseError
from .features import KeypointFrame


def parse_frame_line(line: str, lineno: int) -> KeypointFrame:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(lineno, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise ParseError(lineno, "frame must be a JSON object")
    try:
        t = data["t"]
        kp = data["kp"]
    except KeyError as exc:
        raise ParseError(lineno, f"missing frame key {exc.args[0]!r}") from exc
    if not isinstance(t, int) or t < 0:
        raise ParseError(lineno, f"'t' must be a non-negative integer, got {t!r}")
    try:
        keypoints = np.asarray(kp, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(lineno, "'kp' must be a list of [x, y] pairs") from None
    if keypoints.ndim != 2 or keypoints.shape[1] != 2 or keypoints.shape[0] == 0:
        raise ParseError(lineno, "'kp' must be a non-empty list of [x, y] pairs")
    confidence = None
    if "conf" in data and data["conf"] is not None:
        try:
            confidence = np.asarray(data["conf"], dtype=float)
        except (TypeError, ValueError):
            raise ParseError(lineno, "'conf' must be a list of numbers") from None
        if confidence.shape != (keypoints.shape[0],):
            raise ParseError(lineno, "'conf' must have one score per keypoint")
        finite = confidence[np.isfinite(confidence)]
        if finite.size and (finite.min() < 0 or finite.max() > 1):
            raise ParseError(lineno, "'conf' scores must lie in [0, 1]")
    return KeypointFrame(t=t, keypoints=keypoints, confidence=confidence)


def read_frames(fp: IO[str]) -> Iterator[KeypointFrame]:
    """Parse a frame per non-empty line, raising ParseError with line numbers."""
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        yield parse_frame_line(line, lineno)


def frame_to_dict(frame: KeypointFrame) -> dict:
    data: dict = {"t": frame.t, "kp": frame.keypoints.tolist()}
    if frame.confidence is not None:
        data["conf"] = frame.confidence.tolist()
    return data


def write_jsonl(fp: IO[str], record: dict) -> None:
    fp.write(json.dumps(record) + "\n")
    fp.flush()


def validate_stream(frames: Iterable[KeypointFrame]) -> int:
    """Check monotone frame indices and a constant keypoint count.

    Returns the number of frames seen; raises ParseError on violations.
    """
    count = 0
    expected_t: Optional[int] = None
    n_kp: Optional[int] = None
    for frame in frames:
        count += 1
        if expected_t is not None and frame.t != expected_t:
            raise ParseError(
                count, f"frame index must be {expected_t}, got {frame.t}"
            )
        expected_t = frame.t + 1
        if n_kp is None:
            n_kp = frame.keypoints.shape[0]
        elif frame.keypoints.shape[0] != n_kp:
            raise ParseError(
                count,
                f"keypoint count changed from {n_kp} to {frame.keypoints.shape[0]}",
            )
    return count
