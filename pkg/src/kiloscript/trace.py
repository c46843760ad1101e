"""Simulation trace: the ordered, timestamped event log.

One event per line, tab separated: t_ms, robot_id, kind, payload.
UTF-8 with LF endings, bit-exact for golden comparisons.  Events are
ordered by time, then robot id, then kind (in the order KINDS lists
them); the payload column is never empty, "-" stands for none.
"""

from __future__ import annotations

from dataclasses import dataclass, field

KINDS = ("MOTOR_SET", "LED_SET", "TX", "RX", "EVENT_FIRED", "STATE_ENTER",
         "BUZZ_ON", "BUZZ_OFF")
_KIND_ORDER = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class TraceEvent:
    t_ms: int
    robot_id: int
    kind: str
    payload: str = "-"

    def __post_init__(self) -> None:
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown trace kind {self.kind!r}")

    def line(self) -> str:
        return f"{self.t_ms}\t{self.robot_id}\t{self.kind}\t{self.payload}"


def kind_order(kind: str) -> int:
    return _KIND_ORDER[kind]


@dataclass
class Trace:
    events: list[TraceEvent] = field(default_factory=list)

    def to_text(self) -> str:
        return "".join(e.line() + "\n" for e in self.events)

    def by_kind(self, kind: str) -> list[TraceEvent]:
        return [e for e in self.events if e.kind == kind]

    def for_robot(self, robot_id: int) -> list[TraceEvent]:
        return [e for e in self.events if e.robot_id == robot_id]

    def check_order(self) -> None:
        """Assert the ordering invariant over the whole log."""
        keys = [(e.t_ms, e.robot_id, kind_order(e.kind)) for e in self.events]
        assert keys == sorted(keys), "trace ordering invariant violated"


def parse_trace(text: str) -> Trace:
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"trace line {lineno} has {len(parts)} fields")
        t_ms, robot_id, kind, payload = parts
        events.append(TraceEvent(int(t_ms), int(robot_id), kind, payload))
    return Trace(events)
