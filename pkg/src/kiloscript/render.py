"""Offline frame rendering: trace + scene to numbered P6 pixmaps.

Poses are reconstructed by replaying the trace's motor commands through
the same kinematics the simulator uses (noise-free, so replay is exact
for noiseless scenes and an approximation otherwise), then sampled per
frame with linear interpolation between ticks.  Robots draw as filled
discs in their LED color; an unlit LED draws black.  Output is
byte-deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .model import MotorCommand
from .scene import SceneConfig
from .sim import apply_motion
from .trace import Trace

PX_PER_MM = 2.0
_LEVELS = (0, 85, 170, 255)
_MOTOR_WORDS = {m.value: m for m in MotorCommand}


class RenderError(ValueError):
    pass


@dataclass
class _Track:
    poses: list[tuple[float, float, float]]
    led_times: list[int]
    led_colors: list[tuple[int, int, int]]


def _parse_led(payload: str) -> tuple[int, int, int]:
    parts = payload.split()
    if len(parts) != 3:
        raise RenderError(f"bad LED payload {payload!r}")
    r, g, b = (int(p) for p in parts)
    return _LEVELS[r], _LEVELS[g], _LEVELS[b]


def replay_tracks(cfg: SceneConfig, trace: Trace) -> dict[int, _Track]:
    """Tick-resolution pose and LED history per robot."""
    known = {r.id for r in cfg.robots}
    for e in trace.events:
        if e.robot_id not in known:
            raise RenderError(f"trace references unknown robot {e.robot_id}")
    motor_events: dict[int, list[tuple[int, MotorCommand]]] = {
        r.id: [] for r in cfg.robots}
    tracks: dict[int, _Track] = {}
    for e in trace.events:
        if e.kind == "MOTOR_SET":
            motor_events[e.robot_id].append(
                (e.t_ms, _MOTOR_WORDS[e.payload]))
    for spec in sorted(cfg.robots, key=lambda r: r.id):
        track = _Track([(spec.x, spec.y, spec.heading_rad)], [], [])
        tracks[spec.id] = track
        events = motor_events[spec.id]
        idx = 0
        motor = MotorCommand.STOP
        x, y, heading = spec.x, spec.y, spec.heading_rad
        r = cfg.physics.body_diameter / 2.0
        lo_x, hi_x = min(r, cfg.arena_w / 2), max(cfg.arena_w - r,
                                                  cfg.arena_w / 2)
        lo_y, hi_y = min(r, cfg.arena_h / 2), max(cfg.arena_h - r,
                                                  cfg.arena_h / 2)
        for t in range(0, cfg.duration_ms, cfg.tick_ms):
            while idx < len(events) and events[idx][0] <= t:
                motor = events[idx][1]
                idx += 1
            x, y, heading = apply_motion(x, y, heading, motor, cfg.tick_ms,
                                         cfg.physics)
            x = min(max(x, lo_x), hi_x)
            y = min(max(y, lo_y), hi_y)
            track.poses.append((x, y, heading))
    for e in trace.events:
        if e.kind == "LED_SET":
            tracks[e.robot_id].led_times.append(e.t_ms)
            tracks[e.robot_id].led_colors.append(_parse_led(e.payload))
    return tracks


def _pose_at(track: _Track, t_ms: float, tick_ms: int) -> tuple[float, float]:
    i = int(t_ms // tick_ms)
    frac = (t_ms - i * tick_ms) / tick_ms
    i = min(i, len(track.poses) - 1)
    j = min(i + 1, len(track.poses) - 1)
    x0, y0, _ = track.poses[i]
    x1, y1, _ = track.poses[j]
    return x0 + (x1 - x0) * frac, y0 + (y1 - y0) * frac


def _led_at(track: _Track, t_ms: float) -> tuple[int, int, int]:
    color = (0, 0, 0)
    for t, c in zip(track.led_times, track.led_colors):
        if t <= t_ms:
            color = c
        else:
            break
    return color


class Frame:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.pixels = bytearray(b"\xff" * (width * height * 3))

    def fill_disc(self, cx: float, cy: float, radius: float,
                  color: tuple[int, int, int]) -> None:
        r2 = radius * radius
        x_lo = max(0, int(math.floor(cx - radius)))
        x_hi = min(self.width - 1, int(math.ceil(cx + radius)))
        y_lo = max(0, int(math.floor(cy - radius)))
        y_hi = min(self.height - 1, int(math.ceil(cy + radius)))
        for py in range(y_lo, y_hi + 1):
            row = py * self.width
            for px in range(x_lo, x_hi + 1):
                if (px - cx) ** 2 + (py - cy) ** 2 <= r2:
                    off = (row + px) * 3
                    self.pixels[off:off + 3] = bytes(color)

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + bytes(self.pixels)


def world_to_px(x: float, y: float, arena_h: float,
                scale: float = PX_PER_MM) -> tuple[float, float]:
    """World mm (y up) to image px (y down)."""
    return x * scale, (arena_h - y) * scale


def render_frames(cfg: SceneConfig, trace: Trace, out_dir: str | Path,
                  fps: int) -> list[Path]:
    if fps < 1:
        raise RenderError("fps must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tracks = replay_tracks(cfg, trace)
    width = int(round(cfg.arena_w * PX_PER_MM))
    height = int(round(cfg.arena_h * PX_PER_MM))
    body_px = cfg.physics.body_diameter / 2.0 * PX_PER_MM
    n_frames = cfg.duration_ms * fps // 1000
    paths = []
    for k in range(n_frames):
        t = k * 1000.0 / fps
        frame = Frame(width, height)
        for rid in sorted(tracks):
            track = tracks[rid]
            x, y = _pose_at(track, t, cfg.tick_ms)
            px, py = world_to_px(x, y, cfg.arena_h)
            frame.fill_disc(px, py, body_px, _led_at(track, t))
        path = out_dir / f"frame_{k:06d}.ppm"
        path.write_bytes(frame.to_ppm())
        paths.append(path)
    return paths
