"""Reference tree-walking interpreter for action programs.

Executes the AST directly, without lowering, and serves as the
independent oracle for the automaton semantics: driven with the same
tick size and event observations, both must produce identical actuator
timelines.  The per-tick contract mirrors `step_cursor`: a fired loop
event aborts the in-flight action at the start of the interval
(innermost block first), the current action drives the whole interval,
and a used-up duration crosses to the next action at the interval end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .model import (
    Act,
    Action,
    ActionProgram,
    Event,
    Repeat,
    TERMINAL_ACTION,
)

# Frames are plain tuples so cursors stay cheap immutable values:
#   ("L", steps, idx)   position in a step list
#   ("R", node, k)      k completed passes of a repeat
#   ("U", node)         an active until block


@dataclass(frozen=True)
class InterpCursor:
    frames: tuple[tuple, ...]
    elapsed_ms: int = 0
    done: bool = False


def _descend(frames: list[tuple]) -> tuple[tuple, ...] | None:
    """Walk control structure until the top list frame points at an
    action; returns None when the program has run out."""
    while True:
        if not frames:
            return None
        kind = frames[-1][0]
        if kind == "L":
            _, steps, idx = frames[-1]
            if idx >= len(steps):
                frames.pop()
                if not frames:
                    return None
                parent = frames[-1]
                if parent[0] == "R":
                    _, node, k = parent
                    if k + 1 < node.count:
                        frames[-1] = ("R", node, k + 1)
                        frames.append(("L", node.body, 0))
                    else:
                        frames.pop()
                        _bump(frames)
                elif parent[0] == "U":
                    node = parent[1]
                    frames.append(("L", node.body, 0))
                continue
            step = steps[idx]
            if isinstance(step, Act):
                return tuple(frames)
            if isinstance(step, Repeat):
                frames.append(("R", step, 0))
                frames.append(("L", step.body, 0))
            else:
                frames.append(("U", step))
                frames.append(("L", step.body, 0))
        else:  # pragma: no cover - descend is only entered on a list frame
            raise AssertionError(f"unexpected frame {kind}")


def _bump(frames: list[tuple]) -> None:
    """Advance past the step the top list frame points at."""
    kind, steps, idx = frames[-1]
    assert kind == "L"
    frames[-1] = ("L", steps, idx + 1)


def start_cursor(program: ActionProgram) -> InterpCursor:
    frames = _descend([("L", program.steps, 0)])
    if frames is None:
        return InterpCursor((), 0, True)
    return InterpCursor(frames, 0, False)


def current_action(cursor: InterpCursor) -> Action:
    if cursor.done:
        return TERMINAL_ACTION
    _, steps, idx = cursor.frames[-1]
    return steps[idx].action


def interp_step(program: ActionProgram, cursor: InterpCursor, dt_ms: int,
                observed: Iterable[Event] = ()) -> tuple[InterpCursor, Action,
                                                          Optional[Event]]:
    """One tick; returns (cursor', action driving the tick, fired event)."""
    if dt_ms < 1:
        raise ValueError("dt_ms must be >= 1")
    if cursor.done:
        return cursor, TERMINAL_ACTION, None
    observed = set(observed)
    frames = list(cursor.frames)
    elapsed = cursor.elapsed_ms
    fired: Optional[Event] = None

    if observed:
        for i in range(len(frames) - 1, -1, -1):
            frame = frames[i]
            if frame[0] == "U" and frame[1].event in observed:
                fired = frame[1].event
                del frames[i:]
                _bump(frames)
                resolved = _descend(frames)
                if resolved is None:
                    return InterpCursor((), 0, True), TERMINAL_ACTION, fired
                frames = list(resolved)
                elapsed = 0
                break

    _, steps, idx = frames[-1]
    out = steps[idx].action
    elapsed += dt_ms
    if elapsed >= out.duration_ms:
        _bump(frames)
        resolved = _descend(frames)
        if resolved is None:
            return InterpCursor((), 0, True), out, fired
        frames = list(resolved)
        elapsed = 0

    return InterpCursor(tuple(frames), elapsed, False), out, fired
