import json

import pytest

from conftest import SCENES
from kiloscript.behaviors import March, Orbit, Sync, TextPixel
from kiloscript.model import ColorState
from kiloscript.scene import (
    PhysicsParams,
    SceneError,
    load_scene,
    parse_controller,
    scene_from_dict,
)
from kiloscript.trace import Trace, TraceEvent, parse_trace


def test_load_shipped_scenes():
    for name in ("blink.json", "sync.json", "orbit.json", "march.json",
                 "nowar.json"):
        cfg = load_scene(SCENES / name)
        assert cfg.duration_ms >= cfg.tick_ms


def test_screenplay_path_resolves_relative_to_scene(tmp_path):
    (tmp_path / "inner").mkdir()
    (tmp_path / "inner" / "play.screenplay").write_text(
        "role a { move stop for 1s }\n")
    scene = tmp_path / "inner" / "scene.json"
    scene.write_text(json.dumps({
        "arena": {"width": 100, "height": 100},
        "robots": [{"id": 0, "x": 50, "y": 50, "role": "a"}],
        "screenplay": "play.screenplay",
        "duration_ms": 1000,
    }))
    cfg = load_scene(scene)
    assert "a" in cfg.screenplay.programs


def test_controller_parsing():
    sync = parse_controller({"kind": "sync", "period_ms": 2000,
                             "epsilon": 0.1, "flash_color": [3, 3, 3]})
    assert sync == Sync(2000, 0.1, ColorState(3, 3, 3))
    orbit = parse_controller({"kind": "orbit", "anchor_id": 0,
                              "desired_mm": 60, "band_mm": 16})
    assert orbit == Orbit(0, 60.0, 16.0)
    march = parse_controller({"kind": "march", "period_ms": 2000,
                              "epsilon": 0.1, "duty": 0.25})
    assert march == March(2000, 0.1, 0.25)
    pixel = parse_controller({"kind": "text_pixel", "color": [3, 0, 0]})
    assert pixel == TextPixel(ColorState(3, 0, 0))


def test_controller_errors():
    with pytest.raises(SceneError, match="unknown controller kind"):
        parse_controller({"kind": "wander"})
    with pytest.raises(SceneError, match="missing field"):
        parse_controller({"kind": "sync", "period_ms": 2000})
    with pytest.raises(SceneError, match="duty"):
        parse_controller({"kind": "march", "period_ms": 2000,
                          "epsilon": 0.1, "duty": 1.5})
    with pytest.raises(SceneError):
        parse_controller({"kind": "text_pixel", "color": [4, 0, 0]})


def test_unknown_physics_field_rejected():
    with pytest.raises(SceneError, match="unknown physics"):
        scene_from_dict({
            "arena": {"width": 100, "height": 100},
            "robots": [{"id": 0, "x": 1, "y": 1,
                        "controller": {"kind": "text_pixel",
                                        "color": [1, 0, 0]}}],
            "physics": {"warp_speed": 9},
        })


def test_orbit_anchor_must_exist():
    with pytest.raises(SceneError, match="unknown anchor"):
        scene_from_dict({
            "arena": {"width": 100, "height": 100},
            "robots": [{"id": 1, "x": 50, "y": 50,
                        "controller": {"kind": "orbit", "anchor_id": 7,
                                        "desired_mm": 60, "band_mm": 16}}],
        })


def test_robot_outside_arena_rejected():
    with pytest.raises(SceneError, match="outside"):
        scene_from_dict({
            "arena": {"width": 100, "height": 100},
            "robots": [{"id": 0, "x": 150, "y": 50,
                        "controller": {"kind": "text_pixel",
                                        "color": [1, 0, 0]}}],
        })


def test_physics_validation():
    with pytest.raises(SceneError):
        PhysicsParams(msg_loss_prob=1.5)
    with pytest.raises(SceneError):
        PhysicsParams(comm_radius=0.0)


def test_trace_serialization_round_trip():
    trace = Trace([
        TraceEvent(0, 0, "MOTOR_SET", "straight"),
        TraceEvent(0, 1, "RX", "0xb0 dist=80.000"),
        TraceEvent(31, 0, "BUZZ_ON"),
    ])
    text = trace.to_text()
    assert text == ("0\t0\tMOTOR_SET\tstraight\n"
                    "0\t1\tRX\t0xb0 dist=80.000\n"
                    "31\t0\tBUZZ_ON\t-\n")
    assert parse_trace(text) == trace


def test_robot_needs_exactly_one_driver():
    from kiloscript.scene import RobotSpec
    from kiloscript.behaviors import TextPixel
    with pytest.raises(SceneError, match="exactly one"):
        RobotSpec(0, 1.0, 1.0, role="a",
                  controller=TextPixel(ColorState(1, 0, 0)))
    with pytest.raises(SceneError, match="exactly one"):
        RobotSpec(0, 1.0, 1.0)
