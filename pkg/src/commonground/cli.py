"""Command-line front end.

Subcommands::

    check <file>...          parse-only validation
    trace <file>             replay one dialogue and print the belief trace
    classify <file>...       table of redundant utterances and their classes
    stats <directory>        distributional statistics over a corpus of .dlg files

Exit codes: 0 ok, 2 input error (unreadable/malformed transcripts, empty
corpus), 3 semantic error during replay.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import replay_transcript
from .errors import CommonGroundError, TranscriptError
from .stats import StatsConfig, aggregate, collect_observations, render_classification, \
    render_stats
from .trace import write_trace
from .transcript import parse

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SEMANTIC = 3


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TranscriptError([]) from exc


def _load(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return None
    try:
        return parse(text)
    except TranscriptError as exc:
        for issue in exc.issues:
            print(f"{path}:{issue.line}: {issue.message} [{issue.code}]", file=sys.stderr)
        return None


def cmd_check(args) -> int:
    status = EXIT_OK
    for name in args.files:
        transcript = _load(Path(name))
        if transcript is None:
            status = EXIT_INPUT
        else:
            print(f"ok: {name} ({len(transcript.events)} events)")
    return status


def cmd_trace(args) -> int:
    transcript = _load(Path(args.file))
    if transcript is None:
        return EXIT_INPUT
    try:
        _, traces = replay_transcript(transcript)
    except CommonGroundError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    sys.stdout.write(write_trace(traces))
    return EXIT_OK


def cmd_classify(args) -> int:
    observations = []
    for name in args.files:
        transcript = _load(Path(name))
        if transcript is None:
            return EXIT_INPUT
        try:
            _, traces = replay_transcript(transcript)
        except CommonGroundError as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            return EXIT_SEMANTIC
        observations.extend(collect_observations(transcript, traces))
    sys.stdout.write(render_classification(observations, args.format))
    return EXIT_OK


def cmd_stats(args) -> int:
    directory = Path(args.directory)
    paths = sorted(directory.glob("*.dlg"))
    if not paths:
        print(f"{directory}: no .dlg transcripts found", file=sys.stderr)
        return EXIT_INPUT
    observations = []
    dialogues = 0
    turns = 0
    for path in paths:
        transcript = _load(path)
        if transcript is None:
            return EXIT_INPUT
        try:
            _, traces = replay_transcript(transcript)
        except CommonGroundError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            return EXIT_SEMANTIC
        observations.extend(collect_observations(transcript, traces))
        dialogues += 1
        turns += len(transcript.events)
    config = StatsConfig(remote_gap=args.remote_gap)
    stats = aggregate(observations, dialogues, turns, config)
    sys.stdout.write(render_stats(stats, args.format, config))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commonground",
        description="Replay annotated two-party dialogues and track graded mutual beliefs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse-only validation")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="replay one dialogue and print its trace")
    p.add_argument("file")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("classify", help="per-utterance redundancy classification table")
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=("text", "tabular"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("stats", help="corpus statistics over a directory of .dlg files")
    p.add_argument("directory")
    p.add_argument("--format", choices=("text", "tabular"), default="text")
    p.add_argument("--remote-gap", type=int, default=1,
                   help="turns within which an antecedent counts as adjacent (default 1)")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
