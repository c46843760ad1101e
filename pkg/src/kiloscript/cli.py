"""Command-line front end: check, compile, simulate, render, report.

Exit codes are stable: 0 success, 1 diagnostics reported, 2 usage
error, 3 internal error.  Diagnostics print to stderr as
`file:line:col: severity[code]: message`; KILOSCRIPT_COLOR=never|auto
controls whether the severity tag is colored on a terminal.
"""

from __future__ import annotations

import argparse
import enum
import os
import sys
from pathlib import Path

from . import __version__
from .automaton import LoweringError, lower
from .codegen import CodegenOptions, UnsupportedAutomaton, emit_c
from .parser import Diagnostic, Severity, parse_screenplay
from .render import RenderError, render_frames
from .scene import SceneError, load_scene
from .sim import run_world
from .trace import parse_trace


class ExitStatus(enum.IntEnum):
    OK = 0
    DIAGNOSTICS = 1
    USAGE = 2
    INTERNAL = 3


_COLORS = {Severity.ERROR: "\x1b[31m", Severity.WARNING: "\x1b[33m"}


def _use_color() -> bool:
    mode = os.environ.get("KILOSCRIPT_COLOR", "auto")
    if mode == "never":
        return False
    return sys.stderr.isatty()


def _print_diagnostics(path: str, diags: list[Diagnostic]) -> None:
    color = _use_color()
    for d in diags:
        line = d.render(path)
        if color:
            tag = f"{d.severity.value}[{d.code}]"
            line = line.replace(
                tag, f"{_COLORS[d.severity]}{tag}\x1b[0m", 1)
        print(line, file=sys.stderr)


def _read_source(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_check(args: argparse.Namespace) -> ExitStatus:
    try:
        source = _read_source(args.path)
    except OSError as exc:
        print(f"kiloscript: cannot read {args.path}: {exc}", file=sys.stderr)
        return ExitStatus.USAGE
    result = parse_screenplay(source)
    _print_diagnostics(args.path, result.diagnostics)
    has_errors = any(d.severity is Severity.ERROR for d in result.diagnostics)
    return ExitStatus.DIAGNOSTICS if has_errors else ExitStatus.OK


def cmd_compile(args: argparse.Namespace) -> ExitStatus:
    try:
        source = _read_source(args.path)
    except OSError as exc:
        print(f"kiloscript: cannot read {args.path}: {exc}", file=sys.stderr)
        return ExitStatus.USAGE
    result = parse_screenplay(source)
    if result.screenplay is None:
        _print_diagnostics(args.path, result.diagnostics)
        return ExitStatus.DIAGNOSTICS
    sp = result.screenplay
    role = args.role
    if role is None:
        if len(sp.programs) == 1:
            role = next(iter(sp.programs))
        else:
            print(f"kiloscript: {args.path} defines "
                  f"{sorted(sp.programs)}; pick one with --role",
                  file=sys.stderr)
            return ExitStatus.DIAGNOSTICS
    if role not in sp.programs:
        print(f"{args.path}:1:1: error[E020]: unknown role {role!r}",
              file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    try:
        automaton = lower(sp.programs[role])
        text = emit_c(automaton, CodegenOptions(
            ticks_per_second=args.ticks_per_second))
    except (LoweringError, UnsupportedAutomaton) as exc:
        print(f"kiloscript: {exc}", file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return ExitStatus.OK


def cmd_simulate(args: argparse.Namespace) -> ExitStatus:
    try:
        cfg = load_scene(args.scene)
    except SceneError as exc:
        print(f"kiloscript: {exc}", file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    if args.seed is not None:
        from dataclasses import replace
        cfg = replace(cfg, seed=args.seed)
    world = run_world(cfg)
    for note in world.warnings:
        print(f"kiloscript: warning: {note}", file=sys.stderr)
    if args.trace:
        Path(args.trace).write_text(world.trace.to_text(), encoding="utf-8")
    print(f"robots={len(cfg.robots)} duration_ms={cfg.duration_ms} "
          f"events={len(world.trace.events)}")
    return ExitStatus.OK


def cmd_render(args: argparse.Namespace) -> ExitStatus:
    try:
        cfg = load_scene(args.scene)
        trace = parse_trace(Path(args.trace).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"kiloscript: cannot read input: {exc}", file=sys.stderr)
        return ExitStatus.USAGE
    except (SceneError, ValueError) as exc:
        print(f"kiloscript: {exc}", file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    try:
        frames = render_frames(cfg, trace, args.out, args.fps)
    except RenderError as exc:
        print(f"kiloscript: {exc}", file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    print(f"frames={len(frames)} out={args.out}")
    return ExitStatus.OK


def cmd_report(args: argparse.Namespace) -> ExitStatus:
    try:
        cfg = load_scene(args.scene)
        trace = parse_trace(Path(args.trace).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"kiloscript: cannot read input: {exc}", file=sys.stderr)
        return ExitStatus.USAGE
    except (SceneError, ValueError) as exc:
        print(f"kiloscript: {exc}", file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    from .report import write_report
    try:
        outputs = write_report(cfg, trace, args.out)
    except RenderError as exc:
        print(f"kiloscript: {exc}", file=sys.stderr)
        return ExitStatus.DIAGNOSTICS
    for path in outputs:
        print(path)
    return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kiloscript",
        description="screenplay compiler and swarm simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a screenplay")
    p.add_argument("path")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("compile", help="emit C for one role")
    p.add_argument("path")
    p.add_argument("--role", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--ticks-per-second", type=int, default=32)
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("simulate", help="run a scene to a trace")
    p.add_argument("scene")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trace", default=None)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("render", help="draw trace frames as P6 pixmaps")
    p.add_argument("--trace", required=True)
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fps", type=int, default=10)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("report", help="summary figures and event table")
    p.add_argument("--trace", required=True)
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    try:
        return int(args.fn(args))
    except BrokenPipeError:
        return int(ExitStatus.OK)
    except Exception as exc:  # pragma: no cover - safety net
        print(f"kiloscript: internal error: {exc}", file=sys.stderr)
        return int(ExitStatus.INTERNAL)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
