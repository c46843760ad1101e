"""Screenplay text format: parse, validate, and canonical formatting.

Grammar (whitespace, comments and `;` are trivia between tokens):

    screenplay := role+
    role       := "role" IDENT "{" step+ "}"
    step       := action | repeat | until
    action     := atom+ "for" DURATION
    atom       := "move" MOVE | "led" INT INT INT | "send" BYTE+
    MOVE       := "stop" | "straight" | "left" | "right"
    repeat     := "repeat" INT "{" step+ "}"
    until      := "until" event "{" step+ "}"
    event      := "message" ("first" BYTE)? | "silence" DURATION
    DURATION   := INT ("ms" | "s")
    BYTE       := "0x" HEXDIGIT HEXDIGIT

Keywords are lowercase and case-sensitive; `#` comments to end of line.
Omitted atoms default to motor stop, LED off, no broadcast.  Durations
are normalized to milliseconds at parse time.

Diagnostics carry stable codes:

    E001 no roles defined            E012 led channel out of range
    E002 syntax error                E013 payload longer than 9 bytes
    E003 unknown keyword             E014 repeat count must be >= 1
    E004 bad byte literal            E015 nesting deeper than 16
    E005 bad number or duration      E016 duplicate role name
    E010 repeated atom kind          E017 integer literal too large
    E011 duration must be >= 1 ms    E020 cast references unknown role
    W030 unreachable step (reserved; no current construct triggers it)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .model import (
    Act,
    Action,
    ActionProgram,
    ColorState,
    Event,
    LED_OFF,
    MAX_INT_LITERAL,
    MAX_NESTING_DEPTH,
    MAX_PAYLOAD_BYTES,
    MessageHeard,
    MessagePayload,
    MotorCommand,
    Repeat,
    Screenplay,
    Silence,
    Step,
    Until,
    program_depth,
)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    line: int
    column: int
    code: str
    message: str

    def render(self, path: str = "<input>") -> str:
        return (f"{path}:{self.line}:{self.column}: "
                f"{self.severity.value}[{self.code}]: {self.message}")


@dataclass
class ParseResult:
    screenplay: Optional[Screenplay]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.screenplay is not None and not any(
            d.severity is Severity.ERROR for d in self.diagnostics)


_MOVE_WORDS = {
    "stop": MotorCommand.STOP,
    "straight": MotorCommand.STRAIGHT,
    "left": MotorCommand.TURN_LEFT,
    "right": MotorCommand.TURN_RIGHT,
}


_IDENT_START = set("abcdefghijklmnopqrstuvwxyz"
                   "ABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CHARS = _IDENT_START | set("0123456789")


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | int | byte | lbrace | rbrace | eof | error
    text: str
    line: int
    col: int
    value: int = 0
    unit: str = ""  # "", "ms" or "s" on int tokens


def _lex(source: str) -> tuple[list[_Tok], list[Diagnostic]]:
    toks: list[_Tok] = []
    diags: list[Diagnostic] = []
    line, col, i, n = 1, 1, 0, len(source)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            c = source[i] if i < n else ""
            if c == "\n" or (c == "\r" and source[i + 1:i + 2] != "\n"):
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in " \t\r\n;":
            advance()
            continue
        if c == "#":
            while i < n and source[i] != "\n":
                advance()
            continue
        if c == "{":
            toks.append(_Tok("lbrace", "{", line, col))
            advance()
            continue
        if c == "}":
            toks.append(_Tok("rbrace", "}", line, col))
            advance()
            continue
        if c in "0123456789":
            sl, sc = line, col
            start = i
            if source.startswith("0x", i) or source.startswith("0X", i):
                advance(2)
                h = 0
                while i < n and source[i] in _IDENT_CHARS:
                    advance()
                    h += 1
                text = source[start:i]
                body = text[2:]
                if h == 2 and all(ch in "0123456789abcdefABCDEF" for ch in body):
                    toks.append(_Tok("byte", text, sl, sc, value=int(body, 16)))
                else:
                    diags.append(Diagnostic(
                        Severity.ERROR, sl, sc, "E004",
                        f"byte literal {text!r} must be 0x followed by "
                        f"exactly two hex digits"))
                    toks.append(_Tok("error", text, sl, sc))
                continue
            while i < n and source[i] in "0123456789":
                advance()
            digits = source[start:i]
            suffix_start = i
            while i < n and (source[i] in _IDENT_CHARS):
                advance()
            suffix = source[suffix_start:i]
            value = int(digits)
            if suffix not in ("", "ms", "s"):
                diags.append(Diagnostic(
                    Severity.ERROR, sl, sc, "E005",
                    f"bad number suffix {suffix!r} (use ms or s)"))
                toks.append(_Tok("error", digits + suffix, sl, sc))
                continue
            if value > MAX_INT_LITERAL:
                diags.append(Diagnostic(
                    Severity.ERROR, sl, sc, "E017",
                    f"integer literal {digits} exceeds {MAX_INT_LITERAL}"))
                toks.append(_Tok("error", digits + suffix, sl, sc))
                continue
            toks.append(_Tok("int", digits + suffix, sl, sc,
                             value=value, unit=suffix))
            continue
        if c in _IDENT_START:
            sl, sc = line, col
            start = i
            while i < n and source[i] in _IDENT_CHARS:
                advance()
            toks.append(_Tok("ident", source[start:i], sl, sc))
            continue
        diags.append(Diagnostic(
            Severity.ERROR, line, col, "E002",
            f"unexpected character {c!r}"))
        toks.append(_Tok("error", c, line, col))
        advance()
    toks.append(_Tok("eof", "", line, col))
    return toks, diags


class _Parser:
    def __init__(self, toks: list[_Tok], diags: list[Diagnostic]):
        self.toks = toks
        self.pos = 0
        self.diags = diags

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, tok: _Tok, code: str, message: str) -> None:
        self.diags.append(Diagnostic(
            Severity.ERROR, tok.line, tok.col, code, message))

    def at_keyword(self, *words: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text in words

    def parse(self) -> Optional[Screenplay]:
        programs: dict[str, ActionProgram] = {}
        order: list[ActionProgram] = []
        while self.peek().kind != "eof":
            t = self.peek()
            if self.at_keyword("role"):
                prog = self.parse_role()
                if prog is not None:
                    if prog.role in programs:
                        self.error(t, "E016",
                                   f"duplicate role name {prog.role!r}")
                    else:
                        programs[prog.role] = prog
                        order.append(prog)
            else:
                self.error(t, "E002",
                           f"expected 'role', found {t.text!r}")
                self.skip_to_role()
        if not order and not self.diags:
            self.diags.append(Diagnostic(
                Severity.ERROR, 1, 1, "E001", "no roles defined"))
        if any(d.severity is Severity.ERROR for d in self.diags):
            return None
        return Screenplay({p.role: p for p in order}, {})

    def skip_to_role(self) -> None:
        depth = 0
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind == "lbrace":
                depth += 1
            elif t.kind == "rbrace":
                depth = max(0, depth - 1)
            elif depth == 0 and self.at_keyword("role"):
                return
            self.take()

    def parse_role(self) -> Optional[ActionProgram]:
        self.take()  # role
        name_tok = self.take()
        if name_tok.kind != "ident":
            self.error(name_tok, "E002",
                       f"expected role name, found {name_tok.text!r}")
            self.skip_to_role()
            return None
        lb = self.take()
        if lb.kind != "lbrace":
            self.error(lb, "E002", f"expected '{{', found {lb.text!r}")
            self.skip_to_role()
            return None
        steps = self.parse_steps(depth=1, opener=lb)
        if not steps:
            self.error(lb, "E002", f"role {name_tok.text!r} has no steps")
        return ActionProgram(name_tok.text, tuple(steps))

    def parse_steps(self, depth: int, opener: _Tok) -> list[Step]:
        steps: list[Step] = []
        while True:
            t = self.peek()
            if t.kind == "rbrace":
                self.take()
                return steps
            if t.kind == "eof":
                self.error(t, "E002",
                           "unexpected end of input, expected '}' for block "
                           f"opened at {opener.line}:{opener.col}")
                return steps
            step = self.parse_step(depth)
            if step is not None:
                steps.append(step)

    def parse_step(self, depth: int) -> Optional[Step]:
        t = self.peek()
        if self.at_keyword("move", "led", "send"):
            return self.parse_action()
        if self.at_keyword("repeat"):
            return self.parse_repeat(depth)
        if self.at_keyword("until"):
            return self.parse_until(depth)
        if t.kind == "ident":
            self.error(t, "E003", f"unknown keyword {t.text!r}")
        elif t.kind != "error":
            self.error(t, "E002",
                       f"expected a step, found {t.text!r}")
        self.take()
        return None

    def parse_block(self, depth: int, kw: _Tok) -> tuple[Step, ...]:
        if depth > MAX_NESTING_DEPTH:
            self.error(kw, "E015",
                       f"nesting depth {depth} exceeds {MAX_NESTING_DEPTH}")
        lb = self.take()
        if lb.kind != "lbrace":
            self.error(lb, "E002", f"expected '{{', found {lb.text!r}")
            return ()
        body = self.parse_steps(depth + 1, opener=lb)
        if not body:
            self.error(lb, "E002", "block must contain at least one step")
        return tuple(body)

    def parse_repeat(self, depth: int) -> Optional[Step]:
        kw = self.take()
        count_tok = self.take()
        count = 1
        if count_tok.kind != "int" or count_tok.unit:
            self.error(count_tok, "E002",
                       f"expected repeat count, found {count_tok.text!r}")
        elif count_tok.value < 1:
            self.error(count_tok, "E014", "repeat count must be >= 1")
        else:
            count = count_tok.value
        body = self.parse_block(depth, kw)
        if not body:
            return None
        return Repeat(count, body)

    def parse_until(self, depth: int) -> Optional[Step]:
        kw = self.take()
        event = self.parse_event()
        body = self.parse_block(depth, kw)
        if event is None or not body:
            return None
        return Until(event, body)

    def parse_event(self) -> Optional[Event]:
        t = self.take()
        if t.kind == "ident" and t.text == "message":
            if self.at_keyword("first"):
                self.take()
                b = self.take()
                if b.kind != "byte":
                    self.error(b, "E002",
                               f"expected a byte after 'first', found {b.text!r}")
                    return None
                return MessageHeard(b.value)
            return MessageHeard(None)
        if t.kind == "ident" and t.text == "silence":
            window = self.parse_duration()
            if window is None:
                return None
            if window < 1:
                self.error(t, "E011", "silence window must be >= 1 ms")
                return None
            return Silence(window)
        self.error(t, "E002",
                   f"expected 'message' or 'silence', found {t.text!r}")
        return None

    def parse_duration(self) -> Optional[int]:
        t = self.take()
        if t.kind != "int":
            self.error(t, "E005", f"expected a duration, found {t.text!r}")
            return None
        unit = t.unit
        if not unit:
            nxt = self.peek()
            if nxt.kind == "ident" and nxt.text in ("ms", "s"):
                unit = nxt.text
                self.take()
        if not unit:
            self.error(t, "E005",
                       f"duration {t.text!r} needs a ms or s suffix")
            return None
        value = t.value * (1000 if unit == "s" else 1)
        if value > MAX_INT_LITERAL:
            self.error(t, "E017",
                       f"duration {t.text}{unit} exceeds {MAX_INT_LITERAL} ms")
            return None
        return value

    def parse_action(self) -> Optional[Step]:
        first = self.peek()
        motor: Optional[MotorCommand] = None
        led: Optional[ColorState] = None
        tx: Optional[MessagePayload] = None
        bad = False
        while self.at_keyword("move", "led", "send"):
            kw = self.take()
            if kw.text == "move":
                mv = self.take()
                if mv.kind != "ident" or mv.text not in _MOVE_WORDS:
                    self.error(mv, "E003",
                               f"unknown move {mv.text!r} (stop, straight, "
                               f"left or right)")
                    bad = True
                    continue
                if motor is not None:
                    self.error(kw, "E010", "move given twice in one action")
                    bad = True
                    continue
                motor = _MOVE_WORDS[mv.text]
            elif kw.text == "led":
                channels = []
                for _ in range(3):
                    ch = self.take()
                    if ch.kind != "int" or ch.unit:
                        self.error(ch, "E002",
                                   f"expected LED channel, found {ch.text!r}")
                        bad = True
                        break
                    if not 0 <= ch.value <= 3:
                        self.error(ch, "E012",
                                   f"led channel {ch.value} outside 0..3")
                        bad = True
                        break
                    channels.append(ch.value)
                if len(channels) != 3:
                    continue
                if led is not None:
                    self.error(kw, "E010", "led given twice in one action")
                    bad = True
                    continue
                led = ColorState(*channels)
            else:  # send
                data = bytearray()
                while self.peek().kind == "byte":
                    data.append(self.take().value)
                if not data:
                    self.error(kw, "E002",
                               "send needs at least one byte like 0x2a")
                    bad = True
                    continue
                if len(data) > MAX_PAYLOAD_BYTES:
                    self.error(kw, "E013",
                               f"payload is {len(data)} bytes, limit is "
                               f"{MAX_PAYLOAD_BYTES}")
                    bad = True
                    continue
                if tx is not None:
                    self.error(kw, "E010", "send given twice in one action")
                    bad = True
                    continue
                tx = MessagePayload(bytes(data))
        for_tok = self.take()
        if not (for_tok.kind == "ident" and for_tok.text == "for"):
            self.error(for_tok, "E002",
                       f"expected 'for', found {for_tok.text!r}")
            return None
        duration = self.parse_duration()
        if duration is None:
            return None
        if duration < 1:
            self.error(first, "E011", "duration must be >= 1 ms")
            return None
        if bad:
            return None
        return Act(Action(motor or MotorCommand.STOP, led or LED_OFF,
                          tx, duration))


def parse_screenplay(source: str) -> ParseResult:
    """Parse screenplay text; never raises on any input."""
    toks, diags = _lex(source)
    parser = _Parser(toks, diags)
    sp = parser.parse()
    if sp is not None:
        for d in validate(sp):
            parser.diags.append(d)
        if any(d.severity is Severity.ERROR for d in parser.diags):
            sp = None
    return ParseResult(sp, parser.diags)


def validate(sp: Screenplay) -> list[Diagnostic]:
    """Whole-screenplay checks on an already-built tree.

    Positions are 1:1 because in-memory trees carry none; the parser
    reports positioned variants of the range errors itself.
    """
    diags: list[Diagnostic] = []
    for prog in sp.programs.values():
        depth = program_depth(prog)
        if depth > MAX_NESTING_DEPTH:
            diags.append(Diagnostic(
                Severity.ERROR, 1, 1, "E015",
                f"role {prog.role!r} nests {depth} levels, cap is "
                f"{MAX_NESTING_DEPTH}"))
        if not prog.steps:
            diags.append(Diagnostic(
                Severity.ERROR, 1, 1, "E002",
                f"role {prog.role!r} has no steps"))
    for robot_id, role in sorted(sp.cast.items()):
        if role not in sp.programs:
            diags.append(Diagnostic(
                Severity.ERROR, 1, 1, "E020",
                f"cast robot {robot_id} references unknown role {role!r}"))
    return diags


def _format_action(action: Action) -> str:
    atoms = []
    if action.motor is not MotorCommand.STOP:
        atoms.append(f"move {action.motor}")
    if not action.led.is_off:
        atoms.append(f"led {action.led}")
    if action.tx is not None:
        atoms.append(f"send {action.tx.hex_text()}")
    if not atoms:
        atoms.append("move stop")
    return f"{' '.join(atoms)} for {action.duration_ms}ms"


def _format_steps(steps: tuple[Step, ...], indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for step in steps:
        if isinstance(step, Act):
            out.append(pad + _format_action(step.action))
        elif isinstance(step, Repeat):
            out.append(pad + f"repeat {step.count} {{")
            _format_steps(step.body, indent + 1, out)
            out.append(pad + "}")
        elif isinstance(step, Until):
            out.append(pad + f"until {step.event.text()} {{")
            _format_steps(step.body, indent + 1, out)
            out.append(pad + "}")


def format_screenplay(sp: Screenplay) -> str:
    """Canonical form: one step per line, two-space indent per level,
    durations in ms.  parse(format(sp)) is structurally equal to sp."""
    out: list[str] = []
    for i, prog in enumerate(sp.programs.values()):
        if i:
            out.append("")
        out.append(f"role {prog.role} {{")
        _format_steps(prog.steps, 1, out)
        out.append("}")
    return "\n".join(out) + "\n"
