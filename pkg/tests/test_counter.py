import numpy as np

from actionseg.counter import RepetitionCounter
from actionseg.representation import SegmentRepresentation


def rep_at(anchor_value, t_start=0, t_end=10, k=2):
    anchors = np.full((k, 3, 2), float(anchor_value))
    return SegmentRepresentation(
        t_start=t_start,
        t_end=t_end,
        t_change=t_start + 1,
        signal="angle:test",
        kinds=("line",) * k,
        anchors=anchors,
        angle_triples=np.zeros((1, 3)),
        bone_triples=np.zeros((1, 3)),
        scale=1.0,
    )


def push_sequence(counter, values):
    events = []
    for i, value in enumerate(values):
        t0 = i * 20
        events.extend(counter.push(rep_at(value, t_start=t0, t_end=t0 + 10)))
    return events


class TestCounterAutomaton:
    def test_five_identical_reps(self):
        counter = RepetitionCounter(tau=0.2)
        events = push_sequence(counter, [0.0] * 5)
        assert [e.reps for e in events] == [2, 3, 4, 5]
        assert all(e.period == 1 for e in events)

    def test_alternating_period_two(self):
        counter = RepetitionCounter(tau=0.2)
        # err(A, B) far above threshold; err(A, A) == 0.
        events = push_sequence(counter, [0.0, 9.0, 0.0, 9.0, 0.0, 9.0])
        assert [(e.reps, e.period) for e in events] == [(2, 2), (3, 2)]

    def test_all_distinct_no_events(self):
        counter = RepetitionCounter(tau=0.2, capacity=4)
        events = push_sequence(counter, [0.0, 9.0, 18.0, 27.0, 36.0, 45.0])
        assert events == []
        # FIFO eviction at capacity
        assert len(counter.buffer) == 4
        assert counter.buffer[0].anchors[0, 0, 0] == 18.0

    def test_identical_stream_counts_every_instance(self):
        for k in range(2, 9):
            counter = RepetitionCounter(tau=0.2)
            events = push_sequence(counter, [1.0] * k)
            assert len(events) == k - 1
            assert events[-1].reps == k

    def test_periodic_streams(self):
        for period in (1, 2, 3):
            for cycles in range(2, 11):
                counter = RepetitionCounter(tau=0.2)
                values = [float(9 * i) for i in range(period)] * cycles
                events = push_sequence(counter, values)
                assert events, (period, cycles)
                assert events[-1].reps == cycles
                assert events[-1].period == period

    def test_interruption_splits_loops(self):
        counter = RepetitionCounter(tau=0.2)
        events = push_sequence(counter, [0.0, 0.0, 0.0, 50.0, 0.0, 0.0])
        # First run counts to 3; the interloper closes it; the tail run
        # restarts from scratch and reaches 2.
        assert [e.reps for e in events] == [2, 3, 2]

    def test_mismatch_retries_against_remaining_buffer(self):
        counter = RepetitionCounter(tau=0.2)
        # A A | B B: the B loop must open immediately after the A loop closes.
        events = push_sequence(counter, [0.0, 0.0, 9.0, 9.0])
        assert [e.reps for e in events] == [2, 2]

    def test_count_event_carries_segment_end(self):
        counter = RepetitionCounter(tau=0.2)
        r1 = rep_at(0.0, t_start=0, t_end=10)
        r2 = rep_at(0.0, t_start=20, t_end=31)
        counter.push(r1)
        events = counter.push(r2)
        assert events[0].t == 31

    def test_deterministic_prefix_property(self):
        rng = np.random.default_rng(21)
        values = list(rng.choice([0.0, 9.0, 18.0], size=30))
        full = RepetitionCounter(tau=0.2)
        seen = []
        for i, v in enumerate(values):
            seen.extend(full.push(rep_at(v, t_start=i * 20, t_end=i * 20 + 10)))
        replay = RepetitionCounter(tau=0.2)
        seen2 = []
        for i, v in enumerate(values):
            seen2.extend(replay.push(rep_at(v, t_start=i * 20, t_end=i * 20 + 10)))
        assert seen == seen2
