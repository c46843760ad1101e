import random
from pathlib import Path

import pytest

from conftest import GOLDEN, make_random_program
from kiloscript.automaton import LowerOptions, lower
from kiloscript.codegen import (
    CodegenOptions,
    UnsupportedAutomaton,
    emit_c,
    ms_to_ticks,
)
from kiloscript.model import Act, Action, ActionProgram, Repeat
from kiloscript.parser import parse_screenplay

ROLE_CHOICE = {"p09_two_roles": "leader"}


def golden_programs():
    files = sorted((GOLDEN / "programs").glob("*.screenplay"))
    assert len(files) == 10
    return files


def _compile_golden(path: Path) -> str:
    result = parse_screenplay(path.read_text(encoding="utf-8"))
    assert result.ok, result.diagnostics
    role = ROLE_CHOICE.get(path.stem, next(iter(result.screenplay.programs)))
    return emit_c(lower(result.screenplay.programs[role]), CodegenOptions())


@pytest.mark.parametrize("path", golden_programs(), ids=lambda p: p.stem)
def test_golden_corpus_byte_exact(path: Path):
    expected = (GOLDEN / "c" / (path.stem + ".c")).read_text(encoding="utf-8")
    assert _compile_golden(path) == expected


def test_emission_deterministic():
    prog = parse_screenplay(
        (GOLDEN / "programs" / "p05_until_silence.screenplay").read_text()
    ).screenplay.programs["blinker"]
    a = lower(prog)
    assert emit_c(a) == emit_c(a)
    rng = random.Random(3)
    for _ in range(10):
        a = lower(make_random_program(rng, max_actions=25))
        assert emit_c(a) == emit_c(a)


def test_single_kilolib_include():
    for path in golden_programs():
        text = _compile_golden(path)
        includes = [l for l in text.splitlines() if l.startswith("#include")]
        assert includes == ['#include "kilolib.h"']


def test_empty_terminal_skeleton():
    a = lower(ActionProgram("empty", ()))
    text = emit_c(a)
    assert "set_motors(0, 0);" in text
    assert "set_color(RGB(0, 0, 0));" in text
    assert "void main" not in text and "int main(void)" in text


def test_blink_c_shape():
    prog = parse_screenplay(
        (GOLDEN / "programs" / "p05_until_silence.screenplay").read_text()
    ).screenplay.programs["blinker"]
    text = emit_c(lower(prog))
    assert "set_color(RGB(3, 0, 0));" in text
    assert "set_color(RGB(0, 0, 3));" in text
    # 2000 ms at 32 ticks/s
    assert "(uint32_t)(now - last_rx_tick) >= 64u" in text


def test_counters_disabled_rejected():
    prog = ActionProgram("big", (Repeat(5000, (Act(Action(duration_ms=10)),
                                               Act(Action(duration_ms=10)))),))
    a = lower(prog)  # auto -> counters
    assert a.n_counters == 1
    with pytest.raises(UnsupportedAutomaton):
        emit_c(a, CodegenOptions(emit_counters=False))


def test_table_mode_for_wide_automata():
    prog = parse_screenplay(
        (GOLDEN / "programs" / "p10_table_mode.screenplay").read_text()
    ).screenplay.programs["dancer"]
    a = lower(prog)
    assert len(a.states) > 64
    text = emit_c(a)
    assert "static const state_row_t STATES[" in text
    assert "take_edge" in text


def test_tick_conversion_bound():
    for tps in (8, 16, 32, 100, 1000):
        for d in list(range(1, 2000)) + [10**6, 10**9]:
            ticks = ms_to_ticks(d, tps)
            back = ticks * 1000 / tps
            assert abs(back - d) <= 1000 / (2 * tps), (d, tps)


def test_tick_conversion_examples():
    assert ms_to_ticks(500, 32) == 16
    assert ms_to_ticks(1000, 32) == 32
    assert ms_to_ticks(31, 32) == 1
    assert ms_to_ticks(1, 32) == 0  # sub-tick actions flash through


def test_table_mode_without_events():
    from kiloscript.parser import parse_screenplay as _p
    sp = _p("role w { repeat 35 { led 1 0 0 for 100ms "
            "move straight for 100ms } }").screenplay
    a = lower(sp.programs["w"])
    assert len(a.states) > 64
    text = emit_c(a)
    assert "EVENT_EDGES[" not in text  # no event table to declare
    assert "static const state_row_t STATES[" in text
    assert emit_c(a) == text


def test_table_mode_with_counters():
    from kiloscript.parser import parse_screenplay as _p
    src = ("role w { "
           + " ".join(f"led {i % 4} 0 0 for 100ms" for i in range(70))
           + " repeat 9000 { move left for 50ms } }")
    sp = _p(src).screenplay
    a = lower(sp.programs["w"])
    assert len(a.states) > 64 and a.n_counters == 1
    text = emit_c(a)
    assert "chain_op_t CHAIN_OPS[" in text
    assert "static uint32_t counters[1];" in text
