"""Scene configuration: arena, robots, physics and the cast.

Scene files are JSON with the field names used here.  A robot entry
carries either `role` (a screenplay role) or `controller` (a built-in
behavior spec); the screenplay itself is referenced by path relative to
the scene file (`screenplay`) or inlined (`screenplay_text`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .behaviors import ControllerSpec, March, Orbit, Sync, TextPixel
from .model import ColorState, Screenplay
from .parser import parse_screenplay


class SceneError(ValueError):
    """A scene file or config that cannot be simulated."""


@dataclass(frozen=True)
class PhysicsParams:
    v_straight: float = 10.0          # mm/s
    omega_turn: float = math.pi / 4   # rad/s
    comm_radius: float = 100.0        # mm
    tx_period_ms: int = 500
    msg_loss_prob: float = 0.0
    motion_noise_std: float = 0.0     # fraction of v per tick
    distance_noise_std: float = 0.0   # mm added to range estimates
    body_diameter: float = 33.0       # mm

    def __post_init__(self) -> None:
        if self.comm_radius <= 0:
            raise SceneError("comm_radius must be positive")
        if not 0.0 <= self.msg_loss_prob <= 1.0:
            raise SceneError("msg_loss_prob must be in [0, 1]")
        for name in ("v_straight", "omega_turn", "motion_noise_std",
                     "distance_noise_std", "body_diameter"):
            if getattr(self, name) < 0:
                raise SceneError(f"{name} must be non-negative")
        if self.tx_period_ms < 1:
            raise SceneError("tx_period_ms must be >= 1")


@dataclass(frozen=True)
class RobotSpec:
    id: int
    x: float
    y: float
    heading_rad: float = 0.0
    role: Optional[str] = None
    controller: Optional[ControllerSpec] = None

    def __post_init__(self) -> None:
        if self.id < 0:
            raise SceneError(f"robot id {self.id} must be >= 0")
        if (self.role is None) == (self.controller is None):
            raise SceneError(
                f"robot {self.id} needs exactly one of role or controller")


@dataclass(frozen=True)
class SceneConfig:
    arena_w: float
    arena_h: float
    robots: tuple[RobotSpec, ...]
    screenplay: Optional[Screenplay] = None
    physics: PhysicsParams = field(default_factory=PhysicsParams)
    seed: int = 0
    duration_ms: int = 10_000
    tick_ms: int = 31
    #: treat scene start as a reception, so a silence window can elapse
    #: from t=0 instead of waiting for a first real message
    silence_from_start: bool = True

    def __post_init__(self) -> None:
        if self.arena_w <= 0 or self.arena_h <= 0:
            raise SceneError("arena dimensions must be positive")
        if self.tick_ms < 1:
            raise SceneError("tick_ms must be >= 1")
        if self.duration_ms < self.tick_ms:
            raise SceneError("duration_ms must be >= tick_ms")
        if not self.robots:
            raise SceneError("scene has no robots")
        ids = [r.id for r in self.robots]
        if len(set(ids)) != len(ids):
            dup = sorted(i for i in set(ids) if ids.count(i) > 1)
            raise SceneError(f"duplicate robot id {dup[0]}")
        for r in self.robots:
            if not (0 <= r.x <= self.arena_w and 0 <= r.y <= self.arena_h):
                raise SceneError(
                    f"robot {r.id} at ({r.x}, {r.y}) is outside the "
                    f"{self.arena_w} x {self.arena_h} arena")

    def cast(self) -> dict[int, str]:
        return {r.id: r.role for r in self.robots if r.role is not None}

    def with_cast(self) -> Optional[Screenplay]:
        """The screenplay with this scene's cast merged in."""
        if self.screenplay is None:
            return None
        return replace(self.screenplay, cast=self.cast())


def _parse_color(value) -> ColorState:
    if (not isinstance(value, (list, tuple)) or len(value) != 3
            or not all(isinstance(v, int) for v in value)):
        raise SceneError(f"color must be [r, g, b] ints, got {value!r}")
    try:
        return ColorState(*value)
    except ValueError as exc:
        raise SceneError(str(exc)) from exc


def parse_controller(spec) -> ControllerSpec:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SceneError(f"controller must be an object with kind, got {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "sync":
            return Sync(int(spec["period_ms"]), float(spec["epsilon"]),
                        _parse_color(spec.get("flash_color", [3, 3, 3])))
        if kind == "orbit":
            return Orbit(int(spec["anchor_id"]), float(spec["desired_mm"]),
                         float(spec["band_mm"]))
        if kind == "march":
            return March(int(spec["period_ms"]), float(spec["epsilon"]),
                         float(spec["duty"]))
        if kind == "text_pixel":
            return TextPixel(_parse_color(spec["color"]))
    except KeyError as exc:
        raise SceneError(f"{kind} controller missing field {exc}") from exc
    except ValueError as exc:
        raise SceneError(f"bad {kind} controller: {exc}") from exc
    raise SceneError(f"unknown controller kind {kind!r}")


def _parse_physics(raw) -> PhysicsParams:
    if raw is None:
        return PhysicsParams()
    if not isinstance(raw, dict):
        raise SceneError("physics must be an object")
    known = {f for f in PhysicsParams.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise SceneError(f"unknown physics fields: {sorted(unknown)}")
    return PhysicsParams(**raw)


def scene_from_dict(doc: dict, base_dir: Optional[Path] = None) -> SceneConfig:
    if not isinstance(doc, dict):
        raise SceneError("scene document must be a JSON object")
    try:
        arena = doc["arena"]
        arena_w = float(arena["width"])
        arena_h = float(arena["height"])
    except (KeyError, TypeError) as exc:
        raise SceneError("scene needs arena.width and arena.height") from exc

    screenplay: Optional[Screenplay] = None
    text: Optional[str] = None
    if "screenplay_text" in doc:
        text = doc["screenplay_text"]
        origin = "<screenplay_text>"
    elif "screenplay" in doc:
        rel = Path(doc["screenplay"])
        path = rel if rel.is_absolute() or base_dir is None else base_dir / rel
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SceneError(f"cannot read screenplay {path}: {exc}") from exc
        origin = str(path)
    if text is not None:
        result = parse_screenplay(text)
        if result.screenplay is None:
            msgs = "; ".join(d.render(origin) for d in result.diagnostics[:5])
            raise SceneError(f"screenplay does not parse: {msgs}")
        screenplay = result.screenplay

    robots = []
    for i, entry in enumerate(doc.get("robots", [])):
        if not isinstance(entry, dict):
            raise SceneError(f"robot entry {i} must be an object")
        controller = entry.get("controller")
        robots.append(RobotSpec(
            id=int(entry.get("id", i)),
            x=float(entry["x"]),
            y=float(entry["y"]),
            heading_rad=float(entry.get("heading_rad", 0.0)),
            role=entry.get("role"),
            controller=parse_controller(controller) if controller else None,
        ))

    cfg = SceneConfig(
        arena_w=arena_w,
        arena_h=arena_h,
        robots=tuple(robots),
        screenplay=screenplay,
        physics=_parse_physics(doc.get("physics")),
        seed=int(doc.get("seed", 0)),
        duration_ms=int(doc.get("duration_ms", 10_000)),
        tick_ms=int(doc.get("tick_ms", 31)),
        silence_from_start=bool(doc.get("silence_from_start", True)),
    )
    validate_scene(cfg)
    return cfg


def validate_scene(cfg: SceneConfig) -> None:
    """Cross-checks beyond per-field construction validation."""
    roles_used = {r.role for r in cfg.robots if r.role is not None}
    if roles_used:
        if cfg.screenplay is None:
            raise SceneError(
                f"robots reference roles {sorted(roles_used)} but the scene "
                f"has no screenplay")
        merged = cfg.with_cast()
        from .parser import Severity, validate
        problems = [d for d in validate(merged)
                    if d.severity is Severity.ERROR]
        if problems:
            raise SceneError("; ".join(d.message for d in problems))
    for r in cfg.robots:
        if isinstance(r.controller, Orbit):
            if not any(o.id == r.controller.anchor_id for o in cfg.robots):
                raise SceneError(
                    f"robot {r.id} orbits unknown anchor "
                    f"{r.controller.anchor_id}")


def load_scene(path: str | Path) -> SceneConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise SceneError(f"cannot read scene {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SceneError(f"{path} is not valid JSON: {exc}") from exc
    return scene_from_dict(doc, base_dir=path.parent)
