import json

import numpy as np
import pytest

from actionseg.cli import main, percentage_accuracy
from actionseg.errors import InvalidTruth
from actionseg.io import frame_to_dict
from actionseg.synth import generate_stream

from streams import (
    jumping_jack_script,
    jumping_jack_topology,
    knee_raise_topology,
)


def write_topology(tmp_path, topo, name="topo.json"):
    path = tmp_path / name
    path.write_text(json.dumps(topo.to_dict()))
    return str(path)


def write_script(tmp_path, script, name="script.json"):
    path = tmp_path / name
    path.write_text(json.dumps(script.to_dict()))
    return str(path)


def write_frames(tmp_path, frames, name="frames.jsonl"):
    path = tmp_path / name
    with open(path, "w") as fp:
        for frame in frames:
            fp.write(json.dumps(frame_to_dict(frame)) + "\n")
    return str(path)


def read_events(path):
    with open(path) as fp:
        return [json.loads(line) for line in fp if line.strip()]


class TestPercentageAccuracy:
    def test_exact(self):
        assert percentage_accuracy(10, 10) == 100.0

    def test_off_by_one(self):
        assert percentage_accuracy(9, 10) == pytest.approx(90.0)

    def test_clamped_at_zero(self):
        assert percentage_accuracy(25, 10) == 0.0

    def test_invalid_truth(self):
        with pytest.raises(InvalidTruth):
            percentage_accuracy(5, 0)

    def test_identity_for_all_counts(self):
        for t in range(1, 30):
            assert percentage_accuracy(t, t) == 100.0


class TestSynthAndCount:
    def test_jumping_jack_round_trip(self, tmp_path):
        script_path = write_script(tmp_path, jumping_jack_script(sigma=0.0, repeat=5))
        frames_path = str(tmp_path / "frames.jsonl")
        truth_path = str(tmp_path / "truth.json")
        assert main([
            "synth",
            "--script", script_path,
            "--output", frames_path,
            "--truth", truth_path,
        ]) == 0
        truth = json.loads(open(truth_path).read())
        assert truth["count"] == 5
        assert len(truth["segments"]) == 10

        topo_path = write_topology(tmp_path, jumping_jack_topology())
        events_path = str(tmp_path / "events.jsonl")
        assert main([
            "count",
            "--input", frames_path,
            "--output", events_path,
            "--topology", topo_path,
        ]) == 0
        events = read_events(events_path)
        counts = [e for e in events if e["type"] == "count"]
        assert counts[-1]["reps"] == 5
        assert sum(1 for e in events if e["type"] == "segment") == 10

        result_path = str(tmp_path / "eval.jsonl")
        assert main([
            "eval",
            "--events", events_path,
            "--truth", truth_path,
            "--output", result_path,
        ]) == 0
        result = read_events(result_path)[0]
        assert result["predicted"] == 5
        assert result["accuracy"] == 100.0

    def test_static_scene_no_events(self, tmp_path):
        from actionseg import KeypointFrame

        frames = [
            KeypointFrame(t=t, keypoints=[(0.0, 1.0), (0.0, 0.0), (0.0, -1.0)])
            for t in range(120)
        ]
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, knee_raise_topology())
        events_path = str(tmp_path / "events.jsonl")
        assert main([
            "segment",
            "--input", frames_path,
            "--output", events_path,
            "--topology", topo_path,
        ]) == 0
        assert read_events(events_path) == []

    def test_segment_omits_count_events(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(sigma=0.0, repeat=3))
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        events_path = str(tmp_path / "events.jsonl")
        assert main([
            "segment",
            "--input", frames_path,
            "--output", events_path,
            "--topology", topo_path,
        ]) == 0
        events = read_events(events_path)
        assert events
        assert all(e["type"] == "segment" for e in events)

    def test_byte_identical_reruns(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(sigma=0.004, repeat=3), seed=9)
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        out1 = tmp_path / "events1.jsonl"
        out2 = tmp_path / "events2.jsonl"
        for out in (out1, out2):
            assert main([
                "count",
                "--input", frames_path,
                "--output", str(out),
                "--topology", topo_path,
            ]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestErrorHandling:
    def test_malformed_line_reports_line_number(self, tmp_path, capsys):
        frames, _ = generate_stream(jumping_jack_script(sigma=0.0, repeat=1))
        lines = [json.dumps(frame_to_dict(f)) for f in frames[:16]]
        lines.append("{not json")
        frames_path = tmp_path / "frames.jsonl"
        frames_path.write_text("\n".join(lines) + "\n")
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        code = main([
            "segment",
            "--input", str(frames_path),
            "--output", str(tmp_path / "out.jsonl"),
            "--topology", topo_path,
        ])
        assert code == 1
        assert "line 17" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        frames_path = write_frames(
            tmp_path, generate_stream(jumping_jack_script(repeat=1))[0]
        )
        code = main([
            "segment",
            "--input", frames_path,
            "--output", str(tmp_path / "out.jsonl"),
            "--topology", topo_path,
            "--set", "cusum.bogus=1",
        ])
        assert code == 1
        assert "unknown config key" in capsys.readouterr().err

    def test_invalid_threshold_rejected(self, tmp_path):
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        frames_path = write_frames(
            tmp_path, generate_stream(jumping_jack_script(repeat=1))[0]
        )
        assert main([
            "segment",
            "--input", frames_path,
            "--output", str(tmp_path / "out.jsonl"),
            "--topology", topo_path,
            "--set", "cusum.threshold_angle=0",
        ]) == 1

    def test_capacity_error_exit_code(self, tmp_path):
        from actionseg import KeypointFrame

        frames = []
        for t in range(60):
            theta = 0.0 if t < 30 else min((t - 30) * 0.2, 1.5)
            ankle = (np.sin(theta), -np.cos(theta))
            frames.append(
                KeypointFrame(t=t, keypoints=[(0.0, 1.0), (0.0, 0.0), ankle])
            )
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, knee_raise_topology())
        code = main([
            "segment",
            "--input", frames_path,
            "--output", str(tmp_path / "out.jsonl"),
            "--topology", topo_path,
            "--set", "segmenter.buffer_capacity=8",
            "--set", "cusum.threshold_angle=20",
        ])
        assert code == 2

    def test_config_file_plus_set_override(self, tmp_path):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"cusum": {"threshold_angle": 45.0}}))
        frames, _ = generate_stream(jumping_jack_script(sigma=0.0, repeat=2))
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        assert main([
            "count",
            "--input", frames_path,
            "--output", str(tmp_path / "out.jsonl"),
            "--topology", topo_path,
            "--config", str(config_path),
            "--set", "match.tau=0.3",
        ]) == 0


class TestValidate:
    def test_valid_stream(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(repeat=1))
        frames_path = write_frames(tmp_path, frames)
        assert main(["validate", "--input", frames_path]) == 0

    def test_non_monotone_t_rejected(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(repeat=1))
        records = [frame_to_dict(f) for f in frames[:10]]
        records[5]["t"] = 99
        frames_path = tmp_path / "frames.jsonl"
        frames_path.write_text("\n".join(json.dumps(r) for r in records))
        assert main(["validate", "--input", str(frames_path)]) == 1

    def test_changed_keypoint_count_rejected(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(repeat=1))
        records = [frame_to_dict(f) for f in frames[:10]]
        records[5]["kp"] = records[5]["kp"][:2]
        frames_path = tmp_path / "frames.jsonl"
        frames_path.write_text("\n".join(json.dumps(r) for r in records))
        assert main(["validate", "--input", str(frames_path)]) == 1

    def test_conf_out_of_range_rejected(self, tmp_path):
        frames_path = tmp_path / "frames.jsonl"
        frames_path.write_text(
            json.dumps({"t": 0, "kp": [[0, 0], [1, 1]], "conf": [0.5, 1.5]})
        )
        assert main(["validate", "--input", str(frames_path)]) == 1


class TestPlot:
    def test_svg_written(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(sigma=0.0, repeat=2))
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        events_path = str(tmp_path / "events.jsonl")
        assert main([
            "segment",
            "--input", frames_path,
            "--output", events_path,
            "--topology", topo_path,
        ]) == 0
        svg_path = tmp_path / "signal.svg"
        assert main([
            "plot",
            "--input", frames_path,
            "--events", events_path,
            "--topology", topo_path,
            "--plot-signal", "angle:l_shoulder",
            "--out", str(svg_path),
        ]) == 0
        content = svg_path.read_text()
        assert "<svg" in content

    def test_unknown_signal_rejected(self, tmp_path):
        frames, _ = generate_stream(jumping_jack_script(repeat=1))
        frames_path = write_frames(tmp_path, frames)
        topo_path = write_topology(tmp_path, jumping_jack_topology())
        events_path = tmp_path / "events.jsonl"
        events_path.write_text("")
        assert main([
            "plot",
            "--input", frames_path,
            "--events", str(events_path),
            "--topology", topo_path,
            "--plot-signal", "angle:nope",
            "--out", str(tmp_path / "x.svg"),
        ]) == 1
