"""Screenplay compiler and deterministic swarm simulator for
Kilobot-class robots: author timed action programs in a small text
format, emit C controllers from them, and replay the same programs in
a simulated arena with the film's algorithmic behaviors built in."""

__version__ = "0.1.0"

from .automaton import (
    Automaton,
    Cursor,
    DepthExceeded,
    LowerOptions,
    LoweringError,
    StateBudgetExceeded,
    automaton_step,
    initial_cursor,
    lower,
)
from .behaviors import (
    ControllerSpec,
    March,
    Orbit,
    Sync,
    TextPixel,
    layout_text,
    march_step,
    orbit_step,
    sync_step,
    text_to_bitmap,
)
from .codegen import CodegenOptions, UnsupportedAutomaton, emit_c
from .model import (
    Act,
    Action,
    ActionProgram,
    ColorState,
    MessageHeard,
    MessagePayload,
    MotorCommand,
    Repeat,
    Screenplay,
    Silence,
    Until,
)
from .parser import (
    Diagnostic,
    ParseResult,
    Severity,
    format_screenplay,
    parse_screenplay,
    validate,
)
from .render import render_frames
from .scene import PhysicsParams, RobotSpec, SceneConfig, SceneError, load_scene
from .sim import World, run, run_world, spawn_world, step_world
from .trace import Trace, TraceEvent, parse_trace

__all__ = [
    "Act",
    "Action",
    "ActionProgram",
    "Automaton",
    "CodegenOptions",
    "ColorState",
    "ControllerSpec",
    "Cursor",
    "DepthExceeded",
    "Diagnostic",
    "LowerOptions",
    "LoweringError",
    "March",
    "MessageHeard",
    "MessagePayload",
    "MotorCommand",
    "Orbit",
    "ParseResult",
    "PhysicsParams",
    "Repeat",
    "RobotSpec",
    "SceneConfig",
    "SceneError",
    "Screenplay",
    "Severity",
    "Silence",
    "StateBudgetExceeded",
    "Sync",
    "TextPixel",
    "Trace",
    "TraceEvent",
    "Until",
    "UnsupportedAutomaton",
    "World",
    "automaton_step",
    "emit_c",
    "format_screenplay",
    "initial_cursor",
    "layout_text",
    "load_scene",
    "lower",
    "march_step",
    "orbit_step",
    "parse_screenplay",
    "parse_trace",
    "render_frames",
    "run",
    "run_world",
    "spawn_world",
    "step_world",
    "sync_step",
    "text_to_bitmap",
    "validate",
]
