"""Online class-agnostic repetition counting over segment summaries.

A buffer of recent summaries is searched whenever a new one arrives. The
first buffered entry that matches opens a loop hypothesis whose period
is the segment distance between the match and the newcomer; the matched
stretch becomes the cycle template. Later arrivals are checked against
the template in period order, the count stepping up each time a full
period completes. A mismatch closes the loop, drops its segments from
the buffer, and immediately retries the newcomer against what remains,
so back-to-back loops of different motions never merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .representation import SegmentRepresentation, is_match


@dataclass(frozen=True)
class CountEvent:
    t: int  # t_end of the segment that confirmed the count
    reps: int
    period: int

    def to_event(self) -> dict:
        return {"type": "count", "t": self.t, "reps": self.reps, "period": self.period}


@dataclass
class LoopHypothesis:
    period: int
    template: list[SegmentRepresentation]
    matched: int = 1

    @property
    def reps(self) -> int:
        return 1 + self.matched // self.period


@dataclass
class RepetitionCounter:
    """Single-writer counting state for one stream of summaries."""

    tau: float = 0.2
    strict_kinds: bool = False
    capacity: int = 64
    buffer: list[SegmentRepresentation] = field(default_factory=list)
    hypothesis: Optional[LoopHypothesis] = None

    def _matches(self, a: SegmentRepresentation, b: SegmentRepresentation) -> bool:
        return is_match(a, b, tau=self.tau, strict_kinds=self.strict_kinds)

    def _try_open(self, rep: SegmentRepresentation) -> Optional[CountEvent]:
        """Scan newest-first; the nearest match fixes the smallest period."""
        for i in range(len(self.buffer) - 1, -1, -1):
            if self._matches(self.buffer[i], rep):
                period = len(self.buffer) - i
                self.hypothesis = LoopHypothesis(
                    period=period, template=list(self.buffer[i:]), matched=1
                )
                if period == 1:
                    return CountEvent(t=rep.t_end, reps=2, period=1)
                return None
        return None

    def push(self, rep: SegmentRepresentation) -> list[CountEvent]:
        """Consume one summary in temporal order; return any count updates."""
        events: list[CountEvent] = []
        hyp = self.hypothesis
        if hyp is None:
            event = self._try_open(rep)
            if event is not None:
                events.append(event)
        else:
            expected = hyp.template[hyp.matched % hyp.period]
            if self._matches(expected, rep):
                hyp.matched += 1
                if hyp.matched % hyp.period == 0:
                    events.append(
                        CountEvent(t=rep.t_end, reps=hyp.reps, period=hyp.period)
                    )
            else:
                # Close the loop: its template entries plus every matched
                # follower sit at the buffer tail; drop them all.
                drop = min(hyp.period + hyp.matched, len(self.buffer))
                if drop:
                    del self.buffer[-drop:]
                self.hypothesis = None
                event = self._try_open(rep)
                if event is not None:
                    events.append(event)
        self.buffer.append(rep)
        if len(self.buffer) > self.capacity:
            del self.buffer[0]
        return events
