"""Timed finite-state automata lowered from action programs.

The automaton is the shared intermediate form: the simulator steps it
directly and the C generator emits it.  Each state holds one action;
leaving a state happens either because its duration elapsed or because
a live loop event fired.  Counted repeats are unrolled while the total
state count fits the budget, otherwise each repeat keeps its body once
and closes the loop with a pass counter carried on the back edge.

Counter bookkeeping rides on transitions so that both encodings produce
the exact same actuator timeline:

* `chain` is a sequence of counter decisions walked when the edge is
  taken.  Each entry bumps one counter and either jumps back to its
  loop head or falls through to the next entry; falling off the end
  lands on `to_state`.  Nested repeats that end at the same boundary
  simply stack their decisions on one edge.
* `resets` zeroes the counters of repeats that an event exit aborts
  mid-pass, so re-entering the loop later starts from a clean count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Union

from .model import (
    Act,
    ActionProgram,
    Action,
    Event,
    MAX_NESTING_DEPTH,
    Repeat,
    Step,
    TERMINAL_ACTION,
    Until,
    program_depth,
)

DEFAULT_STATE_BUDGET = 4096


class LoweringError(Exception):
    pass


class DepthExceeded(LoweringError):
    pass


class StateBudgetExceeded(LoweringError):
    pass


@dataclass(frozen=True)
class Elapsed:
    def __str__(self) -> str:
        return "elapsed"


ELAPSED = Elapsed()


@dataclass(frozen=True)
class EventFired:
    event: Event

    def __str__(self) -> str:
        return f"event({self.event.text()})"


Trigger = Union[Elapsed, EventFired]


@dataclass(frozen=True)
class State:
    id: int
    action: Action


@dataclass(frozen=True)
class CounterOp:
    counter: int
    count: int
    back_to: int


@dataclass(frozen=True)
class Transition:
    from_state: int
    trigger: Trigger
    to_state: int
    chain: tuple[CounterOp, ...] = ()
    resets: tuple[int, ...] = ()
    depth: int = 0  # loop nesting depth of the owning until; larger = innermost


@dataclass(frozen=True)
class Automaton:
    states: tuple[State, ...]
    transitions: tuple[Transition, ...]
    initial: int
    terminal: Optional[int]
    n_counters: int = 0

    @cached_property
    def _elapsed_edge(self) -> dict[int, Transition]:
        return {t.from_state: t for t in self.transitions
                if isinstance(t.trigger, Elapsed)}

    @cached_property
    def _event_edges(self) -> dict[int, tuple[Transition, ...]]:
        by_state: dict[int, list[Transition]] = {}
        for t in self.transitions:
            if isinstance(t.trigger, EventFired):
                by_state.setdefault(t.from_state, []).append(t)
        # innermost (largest depth) first; construction emits them this way
        return {s: tuple(sorted(ts, key=lambda t: -t.depth))
                for s, ts in by_state.items()}

    def action_of(self, state_id: int) -> Action:
        return self.states[state_id].action

    def check(self) -> None:
        """Assert the structural invariants; raises AssertionError."""
        ids = [s.id for s in self.states]
        assert ids == list(range(len(self.states))), "state ids not dense"
        seen: set[tuple[int, Trigger]] = set()
        for t in self.transitions:
            key = (t.from_state, t.trigger)
            assert key not in seen, f"duplicate trigger {key}"
            seen.add(key)
            assert 0 <= t.to_state < len(self.states)
            for op in t.chain:
                assert 0 <= op.back_to < len(self.states)
                assert 0 <= op.counter < self.n_counters
        for s in self.states:
            has_elapsed = s.id in self._elapsed_edge
            if s.id == self.terminal:
                assert not has_elapsed, "terminal state must not elapse"
            else:
                assert has_elapsed, f"state {s.id} lacks an elapsed edge"
        if self.terminal is not None:
            term = self.states[self.terminal].action
            assert term.motor.value == "stop" and term.led.is_off and term.tx is None


@dataclass(frozen=True)
class Cursor:
    """Execution position: current state, time spent in it, loop counts."""

    state: int
    elapsed_ms: int = 0
    counters: tuple[int, ...] = ()


@dataclass(frozen=True)
class StepOutcome:
    cursor: Cursor
    output: Action
    fired: Optional[Event] = None
    #: states entered at the start of the interval (event aborts)
    entered_now: tuple[int, ...] = ()
    #: states entered when the interval ended (duration boundary)
    entered_next: tuple[int, ...] = ()


@dataclass(frozen=True)
class LowerOptions:
    state_budget: int = DEFAULT_STATE_BUDGET
    max_depth: int = MAX_NESTING_DEPTH
    emit_counters: bool = True
    #: "auto" unrolls within budget and falls back to counters;
    #: "unroll" and "counters" force one encoding (used by tests).
    mode: str = "auto"


def initial_cursor(a: Automaton) -> Cursor:
    return Cursor(a.initial, 0, (0,) * a.n_counters)


def _take(t: Transition, counters: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    cs = list(counters)
    for c in t.resets:
        cs[c] = 0
    for op in t.chain:
        nxt = cs[op.counter] + 1
        if nxt < op.count:
            cs[op.counter] = nxt
            return op.back_to, tuple(cs)
        cs[op.counter] = 0
    return t.to_state, tuple(cs)


def step_cursor(a: Automaton, cursor: Cursor, dt_ms: int,
                observed: Iterable[Event] = ()) -> StepOutcome:
    """Advance one tick of `dt_ms`; returns the action driving the tick.

    Order within a tick: a fired loop event aborts the current action at
    the tick start (innermost block first); the action of the state the
    cursor now sits in drives the whole interval; if its duration is
    then used up the cursor crosses the boundary at the interval's end.
    """
    if dt_ms < 1:
        raise ValueError("dt_ms must be >= 1")
    observed = set(observed)
    state = cursor.state
    elapsed = cursor.elapsed_ms
    counters = cursor.counters
    fired: Optional[Event] = None
    entered_now: tuple[int, ...] = ()
    entered_next: tuple[int, ...] = ()

    if observed:
        for t in a._event_edges.get(state, ()):
            if t.trigger.event in observed:
                fired = t.trigger.event
                state, counters = _take(t, counters)
                elapsed = 0
                entered_now = (state,)
                break

    output = a.states[state].action
    if state != a.terminal:
        elapsed += dt_ms
        if elapsed >= output.duration_ms:
            t = a._elapsed_edge[state]
            state, counters = _take(t, counters)
            elapsed = 0
            entered_next = (state,)

    return StepOutcome(Cursor(state, elapsed, counters), output,
                       fired, entered_now, entered_next)


def automaton_step(a: Automaton, cursor: Cursor, dt_ms: int,
                   observed: Iterable[Event] = ()) -> tuple[Cursor, Action]:
    """Single-robot step semantics shared by interpreter and emitted C."""
    out = step_cursor(a, cursor, dt_ms, observed)
    return out.cursor, out.output


def _unrolled_count(steps: tuple[Step, ...]) -> int:
    total = 0
    for s in steps:
        if isinstance(s, Act):
            total += 1
        elif isinstance(s, Repeat):
            total += s.count * _unrolled_count(s.body)
        else:
            total += _unrolled_count(s.body)
    return total


def _countered_count(steps: tuple[Step, ...]) -> int:
    total = 0
    for s in steps:
        if isinstance(s, Act):
            total += 1
        else:
            total += _countered_count(s.body)
    return total


@dataclass(frozen=True)
class _Cont:
    """Where control goes after a construct: counter decisions, then a state."""

    chain: tuple[CounterOp, ...]
    final: int


@dataclass
class _UntilFrame:
    event: Event
    depth: int
    exit_cont: _Cont
    resets: tuple[int, ...]


class _Builder:
    """Builds states in reverse execution order so continuations resolve
    to already-known ids; `next_id` counts down and every first-state id
    is predictable from the subtree's state count."""

    def __init__(self, n_states: int, use_counters: bool):
        self.next_id = n_states - 1
        self.use_counters = use_counters
        self.actions: dict[int, Action] = {}
        self.transitions: list[Transition] = []
        self.counter_ids: dict[int, int] = {}  # id(Repeat node) -> counter
        self.n_counters = 0

    def count(self, steps: tuple[Step, ...]) -> int:
        return (_countered_count(steps) if self.use_counters
                else _unrolled_count(steps))

    def assign_counters(self, steps: tuple[Step, ...]) -> None:
        for s in steps:
            if isinstance(s, Repeat):
                self.counter_ids[id(s)] = self.n_counters
                self.n_counters += 1
                self.assign_counters(s.body)
            elif isinstance(s, Until):
                self.assign_counters(s.body)

    def counters_inside(self, steps: tuple[Step, ...]) -> tuple[int, ...]:
        if not self.use_counters:
            return ()
        out: list[int] = []
        for s in steps:
            if isinstance(s, Repeat):
                out.append(self.counter_ids[id(s)])
                out.extend(self.counters_inside(s.body))
            elif isinstance(s, Until):
                out.extend(self.counters_inside(s.body))
        return tuple(out)

    def wire_list(self, steps: tuple[Step, ...], cont: _Cont,
                  untils: list[_UntilFrame]) -> int:
        entry = cont.final  # only reachable for an empty top-level program
        cur = cont
        for step in reversed(steps):
            entry = self.wire_step(step, cur, untils)
            cur = _Cont((), entry)
        return entry

    def wire_step(self, step: Step, cont: _Cont,
                  untils: list[_UntilFrame]) -> int:
        if isinstance(step, Act):
            sid = self.next_id
            self.next_id -= 1
            self.actions[sid] = step.action
            self.transitions.append(Transition(
                sid, ELAPSED, cont.final, chain=cont.chain))
            seen: set[Event] = set()
            for frame in reversed(untils):
                if frame.event in seen:
                    continue
                seen.add(frame.event)
                self.transitions.append(Transition(
                    sid, EventFired(frame.event), frame.exit_cont.final,
                    chain=frame.exit_cont.chain, resets=frame.resets,
                    depth=frame.depth))
            return sid

        if isinstance(step, Repeat):
            if not self.use_counters:
                cur = cont
                entry = cont.final
                for _ in range(step.count):
                    entry = self.wire_list(step.body, cur, untils)
                    cur = _Cont((), entry)
                return entry
            cid = self.counter_ids[id(step)]
            body_entry = self.next_id - self.count(step.body) + 1
            body_cont = _Cont(
                (CounterOp(cid, step.count, body_entry),) + cont.chain,
                cont.final)
            entry = self.wire_list(step.body, body_cont, untils)
            assert entry == body_entry
            return entry

        assert isinstance(step, Until)
        body_entry = self.next_id - self.count(step.body) + 1
        frame = _UntilFrame(step.event, len(untils) + 1, cont,
                            self.counters_inside(step.body))
        entry = self.wire_list(step.body, _Cont((), body_entry),
                               untils + [frame])
        assert entry == body_entry
        return entry


def lower(program: ActionProgram,
          options: LowerOptions = LowerOptions()) -> Automaton:
    """Flatten a program into its timed automaton.

    Raises DepthExceeded past the nesting cap and StateBudgetExceeded
    when full unrolling is over budget and counters are unavailable.
    """
    depth = program_depth(program)
    if depth > options.max_depth:
        raise DepthExceeded(
            f"nesting depth {depth} exceeds cap {options.max_depth}")

    unrolled = _unrolled_count(program.steps)
    if options.mode == "unroll":
        if unrolled > options.state_budget:
            raise StateBudgetExceeded(
                f"unrolled form needs {unrolled} states, budget is "
                f"{options.state_budget}")
        use_counters = False
    elif options.mode == "counters":
        use_counters = True
    elif options.mode == "auto":
        if unrolled <= options.state_budget:
            use_counters = False
        elif options.emit_counters:
            use_counters = True
        else:
            raise StateBudgetExceeded(
                f"unrolled form needs {unrolled} states, budget is "
                f"{options.state_budget} and counters are disabled")
    else:
        raise ValueError(f"unknown lowering mode {options.mode!r}")

    builder = _Builder(0, use_counters)
    if use_counters:
        builder.assign_counters(program.steps)
    n_states = builder.count(program.steps)
    builder.next_id = n_states - 1

    terminal = n_states
    entry = builder.wire_list(program.steps, _Cont((), terminal), [])
    assert builder.next_id == -1

    states = tuple(State(i, builder.actions[i]) for i in range(n_states))
    states += (State(terminal, TERMINAL_ACTION),)
    transitions = tuple(sorted(
        builder.transitions,
        key=lambda t: (t.from_state, isinstance(t.trigger, Elapsed),
                       -t.depth)))
    return Automaton(states, transitions, entry, terminal,
                     builder.n_counters)


def automaton_text(a: Automaton) -> str:
    """Canonical plain-text dump, stable across runs; feeds the C
    generator's input digest and makes golden diffs readable."""
    lines = [f"automaton initial={a.initial} terminal={a.terminal} "
             f"counters={a.n_counters}"]
    for s in a.states:
        act = s.action
        tx = act.tx.hex_text() if act.tx else "-"
        lines.append(f"state {s.id} motor={act.motor} led={act.led} "
                     f"tx={tx} ms={act.duration_ms}")
    for t in a.transitions:
        parts = [f"edge {t.from_state} {t.trigger} -> {t.to_state}"]
        if t.resets:
            parts.append("resets=" + ",".join(map(str, t.resets)))
        for op in t.chain:
            parts.append(f"counter({op.counter} of {op.count} back {op.back_to})")
        if t.depth:
            parts.append(f"depth={t.depth}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
