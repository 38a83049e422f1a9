"""Command-line entry point: one-shot check, live watch mode, and the
local check server.

Exit codes: 0 when the checked systems are clean, 1 when diagnostics were
reported, 2 on lexer/parser/static errors or I/O failures.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from datetime import datetime
from typing import IO

from .diagnostics import render_json, render_text
from .pipeline import DEFAULT_CONFIG_CAP, UnknownFocus, run_pipeline

EXIT_CLEAN = 0
EXIT_DIAGNOSTICS = 1
EXIT_ERROR = 2

WATCH_POLL_INTERVAL = 0.2


def _default_bound() -> int:
    raw = os.environ.get("LIVECHECK_BOUND")
    if raw is not None:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        print(f"ignoring invalid LIVECHECK_BOUND={raw!r}", file=sys.stderr)
    return 4


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="livecheck",
        description="compatibility and compliance checking for systems of"
        " communicating objects",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_files: bool = True) -> None:
        if with_files:
            p.add_argument("files", nargs="+", help="source files (one namespace)")
            p.add_argument("--focus", metavar="SYSTEM", help="check only this system")
        p.add_argument(
            "--bound",
            type=int,
            default=_default_bound(),
            metavar="K",
            help="per-queue capacity (default 4; env LIVECHECK_BOUND overrides)",
        )
        p.add_argument(
            "--config-cap",
            type=int,
            default=DEFAULT_CONFIG_CAP,
            metavar="N",
            help="abort exploration past N configurations",
        )

    check = sub.add_parser("check", help="check once and exit")
    common(check)
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--color", choices=("auto", "always", "never"), default="auto")

    watch = sub.add_parser("watch", help="re-check whenever a file changes")
    common(watch)
    watch.add_argument("--format", choices=("text", "json"), default="text")
    watch.add_argument("--color", choices=("auto", "always", "never"), default="auto")

    serve = sub.add_parser("serve", help="serve the check API and web UI")
    common(serve, with_files=False)
    serve.add_argument("--port", type=int, default=8095)
    return parser


def _use_color(mode: str, out: IO[str]) -> bool:
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(out, "isatty") and out.isatty()


def _read_sources(paths: list[str]) -> list[tuple[str, str]]:
    sources = []
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            sources.append((path, handle.read()))
    return sources


def _check_once(args: argparse.Namespace, out: IO[str]) -> int:
    try:
        sources = _read_sources(args.files)
    except OSError as err:
        print(f"livecheck: {err}", file=sys.stderr)
        return EXIT_ERROR
    try:
        result = run_pipeline(
            sources, focus=args.focus, bound=args.bound, config_cap=args.config_cap
        )
    except UnknownFocus as err:
        print(f"livecheck: {err}", file=sys.stderr)
        return EXIT_ERROR

    if args.format == "json":
        payload = render_json(result.diagnostics, result.stats)
        out.write(payload.decode("utf-8"))
        out.write("\n")
    else:
        out.write(
            render_text(
                result.diagnostics,
                dict(sources),
                result.stats,
                color=_use_color(args.color, out),
            )
        )
    if result.static_failure:
        return EXIT_ERROR
    return EXIT_DIAGNOSTICS if result.diagnostics else EXIT_CLEAN


def run_check(args: argparse.Namespace) -> int:
    return _check_once(args, sys.stdout)


def _snapshot(paths: list[str]) -> dict[str, bytes | None]:
    snap: dict[str, bytes | None] = {}
    for path in paths:
        try:
            with open(path, "rb") as handle:
                snap[path] = hashlib.sha256(handle.read()).digest()
        except OSError:
            snap[path] = None
    return snap


def run_watch(
    args: argparse.Namespace,
    out: IO[str] | None = None,
    max_runs: int | None = None,
    poll_interval: float = WATCH_POLL_INTERVAL,
) -> int:
    """Check, then re-check on every modification of a watched file until
    interrupted. Runs are serialized; edits landing during a run are picked
    up by the immediately following poll, so the latest content wins."""
    stream = out if out is not None else sys.stdout
    runs = 0
    snapshot: dict[str, bytes | None] | None = None
    try:
        while True:
            current = _snapshot(args.files)
            if snapshot is None or current != snapshot:
                snapshot = current
                runs += 1
                stamp = datetime.now().strftime("%H:%M:%S")
                stream.write(f"--- run {runs} at {stamp} ---\n")
                missing = [p for p, digest in current.items() if digest is None]
                if missing:
                    for path in missing:
                        stream.write(f"livecheck: cannot read {path}\n")
                else:
                    _check_once(args, stream)
                stream.flush()
                if max_runs is not None and runs >= max_runs:
                    return EXIT_CLEAN
            time.sleep(poll_interval)
    except KeyboardInterrupt:
        return 130


def run_serve(args: argparse.Namespace) -> int:
    from .server import serve_forever

    try:
        serve_forever(args.port, bound=args.bound, config_cap=args.config_cap)
    except OSError as err:
        print(f"livecheck: cannot listen on port {args.port}: {err}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        return 130
    return EXIT_CLEAN


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.command == "check":
        code = run_check(args)
    elif args.command == "watch":
        code = run_watch(args)
    else:
        code = run_serve(args)
    return code


if __name__ == "__main__":
    sys.exit(main())
