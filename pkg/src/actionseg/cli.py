"""Command-line surface.

Subcommands:
    segment   frames JSONL -> segment events JSONL
    count     frames JSONL -> segment + count events JSONL
    synth     motion script JSON -> frames JSONL + ground-truth JSON
    eval      events JSONL + ground-truth JSON -> accuracy JSON
    plot      frames + events -> SVG of one signal with segment markers
    validate  check a frame stream (schema, monotone t, keypoint count)

Exit codes: 0 ok, 1 parse/config error, 2 buffer capacity exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import IO, Iterator, Optional

from .config import RunConfig, parse_set_overrides
from .errors import (
    ActionsegError,
    BufferCapacityError,
    ConfigError,
    InvalidTruth,
    ParseError,
)
from .features import SkeletonTopology, default_topology, load_topology
from .io import frame_to_dict, read_frames, validate_stream, write_jsonl
from .pipeline import run_pipeline
from .synth import GroundTruth, generate_stream, load_script


def percentage_accuracy(predicted: int, true: int) -> float:
    """(1 - |predicted - true| / true) * 100, clamped at 0."""
    if true < 1:
        raise InvalidTruth(f"true count must be >= 1, got {true}")
    return max(0.0, 1.0 - abs(predicted - true) / true) * 100.0


@contextlib.contextmanager
def _open_stream(path: str, mode: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8") as fp:
            yield fp


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    overrides = parse_set_overrides(args.set or [])
    if args.config:
        return RunConfig.from_file(args.config, overrides=overrides)
    return RunConfig.build(overrides=overrides)


def _load_topology(args: argparse.Namespace) -> SkeletonTopology:
    if args.topology:
        try:
            return load_topology(args.topology)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise ConfigError(f"topology {args.topology}: {exc}") from exc
    return default_topology()


def _cmd_run(args: argparse.Namespace, count: bool) -> int:
    config = _load_run_config(args)
    topology = _load_topology(args)
    with _open_stream(args.input, "r") as inp, _open_stream(args.output, "w") as out:
        for event in run_pipeline(topology, config, read_frames(inp), count=count):
            write_jsonl(out, event)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    script = load_script(args.script)
    frames, truth = generate_stream(script, seed=args.seed)
    with _open_stream(args.output, "w") as out:
        for frame in frames:
            write_jsonl(out, frame_to_dict(frame))
    if args.truth:
        with open(args.truth, "w", encoding="utf-8") as fp:
            json.dump(truth.to_dict(), fp, indent=2)
            fp.write("\n")
    return 0


def _predicted_count(events: list[dict]) -> int:
    reps = [e["reps"] for e in events if e.get("type") == "count"]
    if reps:
        return reps[-1]
    return 1 if any(e.get("type") == "segment" for e in events) else 0


def _cmd_eval(args: argparse.Namespace) -> int:
    with open(args.truth, "r", encoding="utf-8") as fp:
        truth = GroundTruth.from_dict(json.load(fp))
    events = []
    with _open_stream(args.events, "r") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ParseError(lineno, f"invalid event JSON ({exc.msg})") from exc
    predicted = _predicted_count(events)
    result = {
        "predicted": predicted,
        "true": truth.count,
        "accuracy": percentage_accuracy(predicted, truth.count),
        "segments": sum(1 for e in events if e.get("type") == "segment"),
        "true_segments": len(truth.segments),
    }
    with _open_stream(args.output, "w") as out:
        write_jsonl(out, result)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    with _open_stream(args.input, "r") as fp:
        count = validate_stream(read_frames(fp))
    print(f"ok: {count} frames", file=sys.stderr)
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .features import FeatureExtractor

    config = _load_run_config(args)
    topology = _load_topology(args)
    names = topology.signal_names
    if args.plot_signal not in names:
        raise ConfigError(
            f"unknown signal {args.plot_signal!r}; available: {', '.join(names)}"
        )
    idx = names.index(args.plot_signal)
    extractor = FeatureExtractor(
        topology,
        confidence_floor=config["features.confidence_floor"],
        normalize=config["features.normalize"],
    )
    ts: list[int] = []
    values: list[float] = []
    with _open_stream(args.input, "r") as fp:
        for frame in read_frames(fp):
            _, sample = extractor.push(frame)
            ts.append(sample.t)
            values.append(float(sample.signal_values()[idx]))
    segments = []
    with _open_stream(args.events, "r") as fp:
        for line in fp:
            line = line.strip()
            if not line:
                continue
            event = json.loads(line)
            if event.get("type") == "segment":
                segments.append(event)

    by_t = dict(zip(ts, values))
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(ts, values, color="tab:blue", lw=1.2, label=args.plot_signal)
    for seg in segments:
        ax.axvline(seg["t_start"], color="tab:green", ls="--", lw=1.0)
        ax.axvline(seg["t_end"], color="tab:green", ls="--", lw=1.0)
        t_change = seg.get("t_change")
        if t_change is not None and t_change in by_t:
            ax.plot([t_change], [by_t[t_change]], "o", color="tab:red", ms=5)
    ax.set_xlabel("frame")
    ax.set_ylabel(args.plot_signal)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(args.out, format="svg")
    plt.close(fig)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actionseg",
        description="Online sub-action segmentation and repetition counting "
        "on 2D pose keypoint streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, io: bool = True) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--topology", help="JSON topology file (default: built-in)")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )
        if io:
            p.add_argument("--input", default="-", help="frames JSONL ('-' = stdin)")
            p.add_argument("--output", default="-", help="events JSONL ('-' = stdout)")

    p_seg = sub.add_parser("segment", help="emit segment events")
    add_common(p_seg)
    p_cnt = sub.add_parser("count", help="emit segment and count events")
    add_common(p_cnt)

    p_synth = sub.add_parser("synth", help="generate a synthetic frame stream")
    p_synth.add_argument("--script", required=True, help="motion script JSON")
    p_synth.add_argument("--output", default="-", help="frames JSONL out")
    p_synth.add_argument("--truth", help="ground-truth JSON out")
    p_synth.add_argument("--seed", type=int, default=0)

    p_eval = sub.add_parser("eval", help="score events against ground truth")
    p_eval.add_argument("--events", required=True, help="events JSONL ('-' = stdin)")
    p_eval.add_argument("--truth", required=True, help="ground-truth JSON")
    p_eval.add_argument("--output", default="-")

    p_plot = sub.add_parser("plot", help="SVG of one signal with segment markers")
    add_common(p_plot, io=False)
    p_plot.add_argument("--input", default="-", help="frames JSONL")
    p_plot.add_argument("--events", required=True, help="events JSONL")
    p_plot.add_argument("--plot-signal", required=True, metavar="NAME")
    p_plot.add_argument("--out", required=True, help="SVG path")

    p_val = sub.add_parser("validate", help="check a frame stream")
    p_val.add_argument("--input", default="-", help="frames JSONL")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "segment":
            return _cmd_run(args, count=False)
        if args.command == "count":
            return _cmd_run(args, count=True)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "plot":
            return _cmd_plot(args)
        if args.command == "validate":
            return _cmd_validate(args)
        parser.error(f"unknown command {args.command!r}")
    except BufferCapacityError as exc:
        print(f"actionseg: {exc}", file=sys.stderr)
        return 2
    except (ActionsegError, OSError) as exc:
        print(f"actionseg: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
