"""Domain types for the screenplay action model.

A screenplay assigns each role a timed program built from three step
kinds: a single timed action, a counted repeat, and an event-terminated
loop.  Everything here is an immutable value; construction enforces the
local invariants (channel ranges, payload budget, positive durations).
Whole-tree invariants such as the nesting-depth cap are checked by
`validate` in the parser module and by lowering.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

MAX_PAYLOAD_BYTES = 9
MAX_NESTING_DEPTH = 16
MAX_INT_LITERAL = 10**9


class MotorCommand(enum.Enum):
    """Drive mode of the two vibration motors."""

    STOP = "stop"
    STRAIGHT = "straight"
    TURN_LEFT = "left"
    TURN_RIGHT = "right"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ColorState:
    """RGB LED intensities, two bits per channel; (0, 0, 0) is off."""

    r: int
    g: int
    b: int

    def __post_init__(self) -> None:
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 0 <= v <= 3:
                raise ValueError(f"LED channel {name}={v!r} outside 0..3")

    @property
    def is_off(self) -> bool:
        return self.r == 0 and self.g == 0 and self.b == 0

    def __str__(self) -> str:
        return f"{self.r} {self.g} {self.b}"


LED_OFF = ColorState(0, 0, 0)


@dataclass(frozen=True)
class MessagePayload:
    """An IR broadcast payload, at most nine octets."""

    data: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.data, bytes):
            raise ValueError("payload must be bytes")
        if len(self.data) > MAX_PAYLOAD_BYTES:
            raise ValueError(
                f"payload is {len(self.data)} bytes, limit is {MAX_PAYLOAD_BYTES}")

    @property
    def first(self) -> Optional[int]:
        return self.data[0] if self.data else None

    def hex_text(self) -> str:
        """Space-separated hex bytes as written in screenplay source."""
        return " ".join(f"0x{b:02x}" for b in self.data)


@dataclass(frozen=True)
class Action:
    """A full actuator configuration held for a fixed duration.

    An armed broadcast carries at least one byte, matching the text
    format's `send BYTE+`; "no broadcast" is tx=None.
    """

    motor: MotorCommand = MotorCommand.STOP
    led: ColorState = LED_OFF
    tx: Optional[MessagePayload] = None
    duration_ms: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.duration_ms, int) or self.duration_ms < 1:
            raise ValueError(f"duration_ms must be >= 1, got {self.duration_ms!r}")
        if self.tx is not None and not self.tx.data:
            raise ValueError("an armed broadcast needs a non-empty payload")


#: Actuator state of a finished program: motors off, LED off, no broadcast.
TERMINAL_ACTION = Action(MotorCommand.STOP, LED_OFF, None, 1)


@dataclass(frozen=True)
class MessageHeard:
    """Fires on any IR reception, or any whose first byte matches `first`."""

    first: Optional[int] = None

    def __post_init__(self) -> None:
        if self.first is not None and not 0 <= self.first <= 255:
            raise ValueError(f"message filter byte {self.first!r} outside 0..255")

    def text(self) -> str:
        if self.first is None:
            return "message"
        return f"message first 0x{self.first:02x}"


@dataclass(frozen=True)
class Silence:
    """Fires once no message has been received for `window_ms`."""

    window_ms: int

    def __post_init__(self) -> None:
        if not isinstance(self.window_ms, int) or self.window_ms < 1:
            raise ValueError(f"silence window must be >= 1 ms, got {self.window_ms!r}")

    def text(self) -> str:
        return f"silence {self.window_ms}ms"


Event = Union[MessageHeard, Silence]


@dataclass(frozen=True)
class Act:
    action: Action


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple["Step", ...]

    def __post_init__(self) -> None:
        if not isinstance(self.count, int) or self.count < 1:
            raise ValueError(f"repeat count must be >= 1, got {self.count!r}")
        if not self.body:
            raise ValueError("repeat body must not be empty")


@dataclass(frozen=True)
class Until:
    """Loops its body from the top until `event` is observed.

    The event is live for the whole block: an in-flight action is
    aborted at the tick the event fires, not just at action boundaries.
    """

    event: Event
    body: tuple["Step", ...]

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError("until body must not be empty")


Step = Union[Act, Repeat, Until]


@dataclass(frozen=True)
class ActionProgram:
    """The timed program one role follows."""

    role: str
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        if not self.role:
            raise ValueError("role name must not be empty")


@dataclass(frozen=True)
class Screenplay:
    """All role programs plus the robot-to-role cast.

    `programs` must be keyed by each program's own role name.  The cast
    may reference roles that do not exist; `validate` reports that as a
    diagnostic rather than construction failing, so broken casts can be
    surfaced with positions.
    """

    programs: dict[str, ActionProgram] = field(default_factory=dict)
    cast: dict[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key, prog in self.programs.items():
            if key != prog.role:
                raise ValueError(f"program keyed {key!r} has role {prog.role!r}")


def step_depth(step: Step) -> int:
    """Nesting depth of control blocks; a bare action is depth zero."""
    if isinstance(step, Act):
        return 0
    return 1 + max(step_depth(s) for s in step.body)


def program_depth(program: ActionProgram) -> int:
    if not program.steps:
        return 0
    return max(step_depth(s) for s in program.steps)


def count_actions(steps: tuple[Step, ...]) -> int:
    """Number of action nodes in the tree (repeat bodies counted once)."""
    total = 0
    for s in steps:
        if isinstance(s, Act):
            total += 1
        else:
            total += count_actions(s.body)
    return total


def event_alphabet(program: ActionProgram) -> tuple[Event, ...]:
    """Distinct events the program can react to, in a stable order."""
    seen: list[Event] = []

    def walk(steps: tuple[Step, ...]) -> None:
        for s in steps:
            if isinstance(s, Until):
                if s.event not in seen:
                    seen.append(s.event)
                walk(s.body)
            elif isinstance(s, Repeat):
                walk(s.body)

    walk(program.steps)
    return tuple(sorted(seen, key=lambda e: e.text()))
