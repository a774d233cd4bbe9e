"""Frame stream -> event stream wiring of segmenter and counter."""

from __future__ import annotations

from typing import Iterable, Iterator

from .config import RunConfig
from .counter import RepetitionCounter
from .features import KeypointFrame, SkeletonTopology
from .segmenter import OnlineSegmenter


class ActionPipeline:
    """Push frames, collect segment (and optionally count) event dicts."""

    def __init__(
        self, topology: SkeletonTopology, config: RunConfig, count: bool = True
    ):
        self.segmenter = OnlineSegmenter(topology, config)
        self.counter = None
        if count:
            self.counter = RepetitionCounter(
                tau=config["match.tau"],
                strict_kinds=config["match.strict"],
                capacity=config["counter.capacity"],
            )

    def _events_for(self, reps) -> list[dict]:
        events = []
        for rep in reps:
            events.append(rep.to_event())
            if self.counter is not None:
                events.extend(ce.to_event() for ce in self.counter.push(rep))
        return events

    def push(self, frame: KeypointFrame) -> list[dict]:
        return self._events_for(self.segmenter.push_frame(frame))

    def finish(self) -> list[dict]:
        return self._events_for(self.segmenter.finish())


def run_pipeline(
    topology: SkeletonTopology,
    config: RunConfig,
    frames: Iterable[KeypointFrame],
    count: bool = True,
) -> Iterator[dict]:
    """Generator form: yields event dicts as soon as frames allow them."""
    pipeline = ActionPipeline(topology, config, count=count)
    for frame in frames:
        yield from pipeline.push(frame)
    yield from pipeline.finish()
