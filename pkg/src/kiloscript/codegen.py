"""C emission: turn an automaton into a kilolib-style controller.

The output is one self-contained translation unit including only
`kilolib.h`.  Durations become ticks by half-up rounding of
duration_ms * ticks_per_second / 1000.  Silence events compare the tick
counter against a last-reception stamp updated in the message callback;
message events consume a reception flag the callback raises.  Equal
inputs produce byte-identical output.

Automata up to 64 states are emitted as inline switch cases; past that
the per-state data moves into static const tables walked by a small
fixed interpreter, which keeps code size flat on small targets.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .automaton import (
    Automaton,
    CounterOp,
    EventFired,
    Transition,
    automaton_text,
)
from .model import Action, MessageHeard, MotorCommand, Silence

INLINE_STATE_LIMIT = 64
TOOL_NAME = "kiloscript"


class UnsupportedAutomaton(Exception):
    pass


@dataclass(frozen=True)
class CodegenOptions:
    ticks_per_second: int = 32
    tx_period_ms: int = 500
    emit_counters: bool = True

    def __post_init__(self) -> None:
        if self.ticks_per_second < 1:
            raise ValueError("ticks_per_second must be >= 1")
        if self.tx_period_ms < 1:
            raise ValueError("tx_period_ms must be >= 1")


def ms_to_ticks(ms: int, ticks_per_second: int) -> int:
    """Half-up rounding in exact integer arithmetic."""
    return (ms * ticks_per_second + 500) // 1000


_MOTOR_CALL = {
    MotorCommand.STOP: "set_motors(0, 0);",
    MotorCommand.STRAIGHT: "set_motors(kilo_straight_left, kilo_straight_right);",
    MotorCommand.TURN_LEFT: "set_motors(kilo_turn_left, 0);",
    MotorCommand.TURN_RIGHT: "set_motors(0, kilo_turn_right);",
}

_MOTOR_CODE = {
    MotorCommand.STOP: 0,
    MotorCommand.STRAIGHT: 1,
    MotorCommand.TURN_LEFT: 2,
    MotorCommand.TURN_RIGHT: 3,
}


@dataclass
class _Features:
    any_tx: bool
    any_message: bool
    any_filter: bool
    any_silence: bool
    any_counters: bool
    any_motion: bool

    @property
    def any_rx(self) -> bool:
        return self.any_message or self.any_silence


def _scan(a: Automaton) -> _Features:
    any_tx = any(s.action.tx is not None for s in a.states)
    any_message = any_filter = any_silence = False
    for t in a.transitions:
        if isinstance(t.trigger, EventFired):
            ev = t.trigger.event
            if isinstance(ev, MessageHeard):
                any_message = True
                if ev.first is not None:
                    any_filter = True
            elif isinstance(ev, Silence):
                any_silence = True
    any_counters = a.n_counters > 0
    any_motion = any(s.action.motor is not MotorCommand.STOP for s in a.states)
    return _Features(any_tx, any_message, any_filter, any_silence,
                     any_counters, any_motion)


def _digest(a: Automaton, opts: CodegenOptions) -> str:
    payload = automaton_text(a) + (
        f"tps={opts.ticks_per_second} txp={opts.tx_period_ms} "
        f"counters={opts.emit_counters}\n")
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _payload_bytes(action: Action) -> bytes:
    return action.tx.data if action.tx is not None else b""


def _emit_chain(lines: list[str], t: Transition, indent: str,
                goto: str = "goto_state") -> None:
    """Counter resets then the decision chain, innermost first."""
    for c in t.resets:
        lines.append(f"{indent}counters[{c}] = 0;")

    def rec(ops: tuple[CounterOp, ...], indent: str) -> None:
        if not ops:
            lines.append(f"{indent}{goto}({t.to_state}u);")
            return
        op = ops[0]
        lines.append(f"{indent}if (counters[{op.counter}] + 1u < {op.count}u) {{")
        lines.append(f"{indent}    counters[{op.counter}] += 1u;")
        lines.append(f"{indent}    {goto}({op.back_to}u);")
        lines.append(f"{indent}}} else {{")
        lines.append(f"{indent}    counters[{op.counter}] = 0;")
        rec(ops[1:], indent + "    ")
        lines.append(f"{indent}}}")

    rec(t.chain, indent)


def _event_condition(ev, opts: CodegenOptions) -> str:
    if isinstance(ev, MessageHeard):
        if ev.first is None:
            return "rx_new"
        return f"rx_new && rx_first == 0x{ev.first:02x}u"
    assert isinstance(ev, Silence)
    w = ms_to_ticks(ev.window_ms, opts.ticks_per_second)
    return f"(uint32_t)(now - last_rx_tick) >= {w}u"


def _emit_inline(a: Automaton, opts: CodegenOptions, feats: _Features,
                 lines: list[str]) -> None:
    n = len(a.states)
    if n > 1:
        ticks = [ms_to_ticks(s.action.duration_ms, opts.ticks_per_second)
                 for s in a.states]
        lines.append(f"static const uint32_t STATE_TICKS[{n}] = {{"
                     + ", ".join(f"{t}u" for t in ticks) + "};")
        lines.append("")
    lines.append("static void goto_state(uint16_t s)")
    lines.append("{")
    lines.append("    cur_state = s;")
    lines.append("    state_start_tick = kilo_ticks;")
    lines.append("    switch (s) {")
    for s in a.states:
        act = s.action
        lines.append(f"    case {s.id}u:" +
                     ("  /* terminal */" if s.id == a.terminal else ""))
        if act.motor is not MotorCommand.STOP:
            lines.append("        spinup_motors();")
        lines.append(f"        {_MOTOR_CALL[act.motor]}")
        lines.append(f"        set_color(RGB({act.led.r}, {act.led.g}, "
                     f"{act.led.b}));")
        if feats.any_tx:
            data = _payload_bytes(act)
            if data:
                for i, b in enumerate(data):
                    lines.append(f"        tx_msg.data[{i}] = 0x{b:02x}u;")
                for i in range(len(data), 9):
                    lines.append(f"        tx_msg.data[{i}] = 0u;")
                lines.append("        tx_msg.type = 0u;")
                lines.append("        tx_msg.crc = message_crc(&tx_msg);")
                lines.append("        tx_enabled = 1u;")
            else:
                lines.append("        tx_enabled = 0u;")
        lines.append("        break;")
    lines.append("    default:")
    lines.append("        break;")
    lines.append("    }")
    lines.append("}")
    lines.append("")
    _emit_callbacks(opts, feats, lines)
    lines.append("static void setup(void)")
    lines.append("{")
    if feats.any_rx:
        lines.append("    last_rx_tick = kilo_ticks;")
    lines.append(f"    goto_state({a.initial}u);")
    lines.append("}")
    lines.append("")
    lines.append("static void loop(void)")
    lines.append("{")
    needs_now = feats.any_silence or n > 1
    if needs_now:
        lines.append("    uint32_t now = kilo_ticks;")
        lines.append("")
    lines.append("    switch (cur_state) {")
    for s in a.states:
        if s.id == a.terminal:
            continue
        lines.append(f"    case {s.id}u:")
        for t in a._event_edges.get(s.id, ()):
            cond = _event_condition(t.trigger.event, opts)
            lines.append(f"        if ({cond}) {{")
            _emit_chain(lines, t, "            ")
            lines.append("            break;")
            lines.append("        }")
        t = a._elapsed_edge[s.id]
        lines.append(f"        if ((uint32_t)(now - state_start_tick) >= "
                     f"STATE_TICKS[{s.id}]) {{")
        _emit_chain(lines, t, "            ")
        lines.append("        }")
        lines.append("        break;")
    lines.append("    default:")
    lines.append("        break;")
    lines.append("    }")
    if feats.any_message:
        lines.append("    rx_new = 0u;")
    lines.append("}")


def _emit_tables(a: Automaton, opts: CodegenOptions, feats: _Features,
                 lines: list[str]) -> None:
    n = len(a.states)
    payloads: list[bytes] = []
    payload_index: dict[bytes, int] = {}
    for s in a.states:
        data = _payload_bytes(s.action)
        if data and data not in payload_index:
            payload_index[data] = len(payloads)
            payloads.append(data)

    chain_ops: list[CounterOp] = []
    resets: list[int] = []

    def edge_row(t: Transition, kind: int, filt: int, window: int) -> str:
        c_off, c_len = len(chain_ops), len(t.chain)
        chain_ops.extend(t.chain)
        r_off, r_len = len(resets), len(t.resets)
        resets.extend(t.resets)
        return (f"    {{{kind}u, {filt}, {window}u, {t.to_state}u, "
                f"{c_off}u, {c_len}u, {r_off}u, {r_len}u}},")

    event_rows: list[str] = []
    event_off = [0] * (n + 1)
    elapsed_rows: list[str] = []
    for s in a.states:
        event_off[s.id] = len(event_rows)
        for t in a._event_edges.get(s.id, ()):
            ev = t.trigger.event
            if isinstance(ev, MessageHeard):
                filt = -1 if ev.first is None else ev.first
                event_rows.append(edge_row(t, 1, filt, 0))
            else:
                w = ms_to_ticks(ev.window_ms, opts.ticks_per_second)
                event_rows.append(edge_row(t, 2, -1, w))
    event_off[n] = len(event_rows)
    for s in a.states:
        if s.id == a.terminal:
            elapsed_rows.append(f"    {{0u, -1, 0u, {s.id}u, 0u, 0u, 0u, 0u}},")
        else:
            elapsed_rows.append(
                edge_row(a._elapsed_edge[s.id], 0, -1, 0))

    lines.append("typedef struct {")
    lines.append("    uint8_t kind;          /* 0 elapsed, 1 message, 2 silence */")
    lines.append("    int16_t filter_byte;   /* -1 accepts any first byte */")
    lines.append("    uint32_t window_ticks;")
    lines.append("    uint16_t to_state;")
    lines.append("    uint16_t chain_off;")
    lines.append("    uint16_t chain_len;")
    lines.append("    uint16_t reset_off;")
    lines.append("    uint16_t reset_len;")
    lines.append("} edge_t;")
    lines.append("")
    lines.append("typedef struct {")
    lines.append("    uint32_t duration_ticks;")
    lines.append("    uint8_t motor;         /* 0 stop, 1 straight, 2 left, 3 right */")
    lines.append("    uint8_t color;")
    lines.append("    int16_t tx_index;      /* -1 when silent */")
    lines.append("} state_row_t;")
    lines.append("")
    rows = []
    for s in a.states:
        act = s.action
        ticks = ms_to_ticks(act.duration_ms, opts.ticks_per_second)
        data = _payload_bytes(act)
        txi = payload_index[data] if data else -1
        rows.append(f"    {{{ticks}u, {_MOTOR_CODE[act.motor]}u, "
                    f"RGB({act.led.r}, {act.led.g}, {act.led.b}), {txi}}},")
    lines.append(f"static const state_row_t STATES[{n}] = {{")
    lines.extend(rows)
    lines.append("};")
    lines.append("")
    if payloads:
        lines.append(f"static const uint8_t TX_PAYLOADS[{len(payloads)}][9] = {{")
        for data in payloads:
            padded = data + bytes(9 - len(data))
            lines.append("    {" + ", ".join(f"0x{b:02x}u" for b in padded)
                         + "},")
        lines.append("};")
        lines.append("")
    lines.append(f"static const uint16_t EVENT_EDGE_OFF[{n + 1}] = {{"
                 + ", ".join(f"{v}u" for v in event_off) + "};")
    lines.append("")
    if event_rows:
        lines.append(f"static const edge_t EVENT_EDGES[{len(event_rows)}] = {{")
        lines.extend(event_rows)
        lines.append("};")
        lines.append("")
    lines.append(f"static const edge_t ELAPSED_EDGES[{n}] = {{")
    lines.extend(elapsed_rows)
    lines.append("};")
    lines.append("")
    if chain_ops:
        lines.append("typedef struct {")
        lines.append("    uint16_t counter;")
        lines.append("    uint32_t count;")
        lines.append("    uint16_t back_to;")
        lines.append("} chain_op_t;")
        lines.append("")
        lines.append(f"static const chain_op_t CHAIN_OPS[{len(chain_ops)}] = {{")
        for op in chain_ops:
            lines.append(f"    {{{op.counter}u, {op.count}u, {op.back_to}u}},")
        lines.append("};")
        lines.append("")
    if resets:
        lines.append(f"static const uint16_t RESETS[{len(resets)}] = {{"
                     + ", ".join(f"{v}u" for v in resets) + "};")
        lines.append("")

    lines.append("static void goto_state(uint16_t s)")
    lines.append("{")
    lines.append("    const state_row_t *row = &STATES[s];")
    lines.append("")
    lines.append("    cur_state = s;")
    lines.append("    state_start_tick = kilo_ticks;")
    lines.append("    switch (row->motor) {")
    lines.append("    case 1u:")
    lines.append("        spinup_motors();")
    lines.append("        set_motors(kilo_straight_left, kilo_straight_right);")
    lines.append("        break;")
    lines.append("    case 2u:")
    lines.append("        spinup_motors();")
    lines.append("        set_motors(kilo_turn_left, 0);")
    lines.append("        break;")
    lines.append("    case 3u:")
    lines.append("        spinup_motors();")
    lines.append("        set_motors(0, kilo_turn_right);")
    lines.append("        break;")
    lines.append("    default:")
    lines.append("        set_motors(0, 0);")
    lines.append("        break;")
    lines.append("    }")
    lines.append("    set_color(row->color);")
    if feats.any_tx:
        lines.append("    if (row->tx_index >= 0) {")
        lines.append("        uint8_t i;")
        lines.append("")
        lines.append("        for (i = 0u; i < 9u; i++) {")
        lines.append("            tx_msg.data[i] = "
                     "TX_PAYLOADS[row->tx_index][i];")
        lines.append("        }")
        lines.append("        tx_msg.type = 0u;")
        lines.append("        tx_msg.crc = message_crc(&tx_msg);")
        lines.append("        tx_enabled = 1u;")
        lines.append("    } else {")
        lines.append("        tx_enabled = 0u;")
        lines.append("    }")
    lines.append("}")
    lines.append("")
    lines.append("static void take_edge(const edge_t *e)")
    lines.append("{")
    lines.append("    uint16_t i;")
    lines.append("")
    if resets:
        lines.append("    for (i = 0u; i < e->reset_len; i++) {")
        lines.append("        counters[RESETS[e->reset_off + i]] = 0;")
        lines.append("    }")
    if chain_ops:
        lines.append("    for (i = 0u; i < e->chain_len; i++) {")
        lines.append("        const chain_op_t *op = &CHAIN_OPS[e->chain_off + i];")
        lines.append("")
        lines.append("        if (counters[op->counter] + 1u < op->count) {")
        lines.append("            counters[op->counter] += 1u;")
        lines.append("            goto_state(op->back_to);")
        lines.append("            return;")
        lines.append("        }")
        lines.append("        counters[op->counter] = 0;")
        lines.append("    }")
    if not resets and not chain_ops:
        lines.append("    (void)i;")
    lines.append("    goto_state(e->to_state);")
    lines.append("}")
    lines.append("")
    _emit_callbacks(opts, feats, lines)
    lines.append("static void setup(void)")
    lines.append("{")
    if feats.any_rx:
        lines.append("    last_rx_tick = kilo_ticks;")
    lines.append(f"    goto_state({a.initial}u);")
    lines.append("}")
    lines.append("")
    lines.append("static void loop(void)")
    lines.append("{")
    lines.append("    uint32_t now = kilo_ticks;")
    lines.append("    uint16_t i;")
    lines.append("    uint8_t moved = 0u;")
    lines.append("")
    lines.append(f"    if (cur_state != {a.terminal}u) {{")
    lines.append("        for (i = EVENT_EDGE_OFF[cur_state]; "
                 "i < EVENT_EDGE_OFF[cur_state + 1u]; i++) {")
    if event_rows:
        lines.append("            const edge_t *e = &EVENT_EDGES[i];")
        lines.append("            uint8_t hit = 0u;")
        lines.append("")
        if feats.any_message:
            lines.append("            if (e->kind == 1u) {")
            if feats.any_filter:
                lines.append("                hit = rx_new && "
                             "(e->filter_byte < 0 || "
                             "rx_first == (uint8_t)e->filter_byte);")
            else:
                lines.append("                hit = rx_new;")
            lines.append("            }")
        if feats.any_silence:
            lines.append("            if (e->kind == 2u) {")
            lines.append("                hit = (uint32_t)(now - last_rx_tick) "
                         ">= e->window_ticks;")
            lines.append("            }")
        lines.append("            if (hit) {")
        lines.append("                take_edge(e);")
        lines.append("                moved = 1u;")
        lines.append("                break;")
        lines.append("            }")
    lines.append("        }")
    lines.append("        if (!moved && (uint32_t)(now - state_start_tick) >= "
                 "STATES[cur_state].duration_ticks) {")
    lines.append("            take_edge(&ELAPSED_EDGES[cur_state]);")
    lines.append("        }")
    lines.append("    }")
    if feats.any_message:
        lines.append("    rx_new = 0u;")
    lines.append("}")


def _emit_callbacks(opts: CodegenOptions, feats: _Features,
                    lines: list[str]) -> None:
    if feats.any_rx:
        lines.append("static void message_rx(message_t *msg, "
                     "distance_measurement_t *dist)")
        lines.append("{")
        lines.append("    (void)dist;")
        if feats.any_filter:
            lines.append("    rx_first = msg->data[0];")
        else:
            lines.append("    (void)msg;")
        lines.append("    last_rx_tick = kilo_ticks;")
        if feats.any_message:
            lines.append("    rx_new = 1u;")
        lines.append("}")
        lines.append("")
    if feats.any_tx:
        tx_ticks = ms_to_ticks(opts.tx_period_ms, opts.ticks_per_second)
        lines.append("static message_t *message_tx(void)")
        lines.append("{")
        lines.append("    if (!tx_enabled) {")
        lines.append("        return 0;")
        lines.append("    }")
        lines.append(f"    if ((uint32_t)(kilo_ticks - last_tx_tick) < "
                     f"{tx_ticks}u) {{")
        lines.append("        return 0;")
        lines.append("    }")
        lines.append("    return &tx_msg;")
        lines.append("}")
        lines.append("")
        lines.append("static void message_tx_success(void)")
        lines.append("{")
        lines.append("    last_tx_tick = kilo_ticks;")
        lines.append("}")
        lines.append("")


def emit_c(a: Automaton, opts: CodegenOptions = CodegenOptions()) -> str:
    """Emit the controller source for `a`; deterministic per input."""
    if a.n_counters > 0 and not opts.emit_counters:
        raise UnsupportedAutomaton(
            "automaton needs pass counters but counter emission is disabled")

    feats = _scan(a)
    n = len(a.states)
    lines: list[str] = []
    lines.append("/*")
    lines.append(f" * {TOOL_NAME} generated Kilobot controller")
    lines.append(f" * input digest: {_digest(a, opts)}")
    lines.append(f" * states: {n} (terminal {a.terminal}), counters: "
                 f"{a.n_counters}")
    lines.append(f" * clock: {opts.ticks_per_second} ticks/s, broadcast "
                 f"period: {opts.tx_period_ms} ms")
    lines.append(" */")
    lines.append('#include "kilolib.h"')
    lines.append("")
    lines.append("static uint16_t cur_state;")
    lines.append("static uint32_t state_start_tick;")
    if feats.any_rx:
        lines.append("static volatile uint32_t last_rx_tick;")
    if feats.any_message:
        lines.append("static volatile uint8_t rx_new;")
    if feats.any_filter:
        lines.append("static volatile uint8_t rx_first;")
    if feats.any_tx:
        lines.append("static message_t tx_msg;")
        lines.append("static uint8_t tx_enabled;")
        lines.append("static uint32_t last_tx_tick;")
    if feats.any_counters:
        lines.append(f"static uint32_t counters[{a.n_counters}];")
    lines.append("")

    if n <= INLINE_STATE_LIMIT:
        _emit_inline(a, opts, feats, lines)
    else:
        _emit_tables(a, opts, feats, lines)

    lines.append("")
    lines.append("int main(void)")
    lines.append("{")
    lines.append("    kilo_init();")
    if feats.any_rx:
        lines.append("    kilo_message_rx = message_rx;")
    if feats.any_tx:
        lines.append("    kilo_message_tx = message_tx;")
        lines.append("    kilo_message_tx_success = message_tx_success;")
    lines.append("    kilo_start(setup, loop);")
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"
