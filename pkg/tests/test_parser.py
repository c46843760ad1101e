import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, make_random_program
from kiloscript.model import (
    Act,
    Action,
    ActionProgram,
    ColorState,
    MotorCommand,
    Screenplay,
    Silence,
    Until,
)
from kiloscript.parser import (
    Severity,
    format_screenplay,
    parse_screenplay,
    validate,
)


def corpus_files():
    files = sorted(CORPUS.rglob("*.screenplay"))
    assert len(files) >= 30, "grammar corpus must hold at least 30 files"
    return files


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_corpus_file_matches_annotation(path: Path):
    text = path.read_text(encoding="utf-8")
    expect = text.splitlines()[0].removeprefix("# expect: ").strip()
    result = parse_screenplay(text)
    if expect == "ok":
        assert result.ok, result.diagnostics
    else:
        code = expect.split()[1]
        assert not result.ok
        assert any(d.code == code for d in result.diagnostics), \
            [d.code for d in result.diagnostics]


def test_move_led_example():
    result = parse_screenplay("role a { move left led 3 0 0 for 500ms }")
    assert result.ok
    (step,) = result.screenplay.programs["a"].steps
    assert step == Act(Action(MotorCommand.TURN_LEFT, ColorState(3, 0, 0),
                              None, 500))


def test_blink_example():
    src = ("role a { until silence 2000ms { led 3 0 0 for 500ms ; "
           "led 0 0 3 for 500ms } }")
    result = parse_screenplay(src)
    assert result.ok
    (step,) = result.screenplay.programs["a"].steps
    assert isinstance(step, Until) and step.event == Silence(2000)
    assert [s.action.led for s in step.body] == [ColorState(3, 0, 0),
                                                 ColorState(0, 0, 3)]


def test_empty_source_position():
    result = parse_screenplay("")
    assert not result.ok
    d = result.diagnostics[0]
    assert (d.code, d.line, d.column) == ("E001", 1, 1)


def test_defaults_for_omitted_atoms():
    result = parse_screenplay("role a { send 0x05 for 1s }")
    (step,) = result.screenplay.programs["a"].steps
    assert step.action.motor is MotorCommand.STOP
    assert step.action.led.is_off
    assert step.action.tx.data == b"\x05"
    assert step.action.duration_ms == 1000


def test_diagnostic_positions_inside_source():
    src = "role a {\n  repeat 0 { move straight for 1s }\n}\n"
    result = parse_screenplay(src)
    lines = src.splitlines()
    for d in result.diagnostics:
        assert 1 <= d.line <= len(lines)
        assert 1 <= d.column <= len(lines[d.line - 1]) + 1


def test_multiple_diagnostics_reported():
    src = ("role a { led 9 0 0 for 1s }\n"
           "role b { repeat 0 { move stop for 1s } }\n")
    result = parse_screenplay(src)
    codes = {d.code for d in result.diagnostics}
    assert {"E012", "E014"} <= codes


def test_format_canonical_layout():
    result = parse_screenplay(
        "role a{move straight for 1s repeat 2{led 1 0 0 for 5ms} }")
    text = format_screenplay(result.screenplay)
    assert text == ("role a {\n"
                    "  move straight for 1000ms\n"
                    "  repeat 2 {\n"
                    "    led 1 0 0 for 5ms\n"
                    "  }\n"
                    "}\n")


def test_format_idempotent():
    rng = random.Random(7)
    for _ in range(30):
        sp = Screenplay({"r": make_random_program(rng, max_actions=20)}, {})
        once = format_screenplay(sp)
        again = format_screenplay(parse_screenplay(once).screenplay)
        assert once == again


def test_roundtrip_random_corpus():
    rng = random.Random(2024)
    for trial in range(200):
        programs = {}
        for i in range(rng.randint(1, 3)):
            prog = make_random_program(rng, max_actions=25)
            prog = ActionProgram(f"r{i}", prog.steps)
            programs[prog.role] = prog
        sp = Screenplay(programs, {})
        result = parse_screenplay(format_screenplay(sp))
        assert result.ok, (trial, result.diagnostics)
        assert result.screenplay == sp, f"round-trip mismatch on trial {trial}"


def test_validate_cast():
    prog = parse_screenplay("role a { move stop for 1s }").screenplay
    ghost = Screenplay(prog.programs, {5: "ghost"})
    diags = validate(ghost)
    assert any(d.code == "E020" for d in diags)
    good = Screenplay(prog.programs, {5: "a"})
    assert validate(good) == []


def test_validate_clean_blink():
    result = parse_screenplay(
        "role a { until silence 2000ms { led 3 0 0 for 500ms } }")
    assert validate(result.screenplay) == []


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_parser_total_on_arbitrary_text(source):
    import re
    result = parse_screenplay(source)
    lines = re.split(r"\r\n|\r|\n", source)
    for d in result.diagnostics:
        assert 1 <= d.line <= len(lines)
        assert 1 <= d.column <= len(lines[d.line - 1]) + 1
        assert d.severity in (Severity.ERROR, Severity.WARNING)


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet="role abcd{}#;0x123msf\n", max_size=120))
def test_parser_total_on_grammar_like_text(source):
    parse_screenplay(source)


def test_validate_depth_cap_on_api_built_tree():
    from kiloscript.model import Act, Action, Repeat

    step = Act(Action(duration_ms=10))
    for _ in range(17):
        step = Repeat(2, (step,))
    deep = Screenplay({"deep": ActionProgram("deep", (step,))}, {})
    diags = validate(deep)
    assert any(d.code == "E015" for d in diags)
