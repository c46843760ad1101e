"""Deterministic discrete-time simulator for a population of robots.

Each tick runs five phases in a fixed order over robots sorted by id:

1. message delivery: due broadcasts go out; every other robot in comm
   range receives, with optional loss and range-estimate noise;
2. event evaluation: each scripted robot's live events are tested
   against this tick's receptions and its silence clock;
3. control step: the automaton (or reference interpreter, or built-in
   controller) produces the actuator state driving this tick;
4. kinematics: straight motion moves v*dt along the heading; turns
   pivot about the grounded leg, so they also creep the body forward;
   walls clamp the centre inside the arena;
5. trace flush: everything observed this tick is appended in the
   canonical (t, robot, kind) order.

A run is a pure function of its SceneConfig: one seeded RNG drives all
noise, drawn in a fixed order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .automaton import Automaton, Cursor, initial_cursor, lower, step_cursor
from .behaviors import (
    FIRE_BYTE,
    March,
    Orbit,
    Sync,
    TextPixel,
    march_step,
    orbit_step,
    sync_step,
)
from .interpreter import InterpCursor, current_action, interp_step, start_cursor
from .model import (
    ActionProgram,
    ColorState,
    Event,
    LED_OFF,
    MessageHeard,
    MessagePayload,
    MotorCommand,
    Silence,
    event_alphabet,
)
from .scene import PhysicsParams, SceneConfig, SceneError, validate_scene
from .trace import Trace, TraceEvent, kind_order

FIRE_PAYLOAD = MessagePayload(bytes([FIRE_BYTE]))


def apply_motion(x: float, y: float, heading: float, motor: MotorCommand,
                 dt_ms: int, physics: PhysicsParams,
                 speed_factor: float = 1.0) -> tuple[float, float, float]:
    """One tick of pose update; shared by the simulator and the trace
    replay used for rendering."""
    dt = dt_ms / 1000.0
    if motor is MotorCommand.STRAIGHT:
        step = physics.v_straight * dt * speed_factor
        return (x + step * math.cos(heading), y + step * math.sin(heading),
                heading)
    if motor in (MotorCommand.TURN_LEFT, MotorCommand.TURN_RIGHT):
        sign = 1.0 if motor is MotorCommand.TURN_LEFT else -1.0
        pivot_r = physics.body_diameter / 2.0
        px = x + pivot_r * math.cos(heading + sign * math.pi / 2)
        py = y + pivot_r * math.sin(heading + sign * math.pi / 2)
        a = sign * physics.omega_turn * dt
        ca, sa = math.cos(a), math.sin(a)
        dx, dy = x - px, y - py
        return (px + ca * dx - sa * dy, py + sa * dx + ca * dy, heading + a)
    return x, y, heading


@dataclass
class _DriverStep:
    action_motor: MotorCommand
    led: ColorState
    tx: Optional[MessagePayload]
    fired: Optional[Event] = None
    entered_now: tuple[int, ...] = ()
    entered_next: tuple[int, ...] = ()
    oneshots: tuple[MessagePayload, ...] = ()


class _AutomatonDriver:
    def __init__(self, automaton: Automaton):
        self.automaton = automaton
        self.cursor: Cursor = initial_cursor(automaton)

    def initial(self) -> _DriverStep:
        act = self.automaton.action_of(self.automaton.initial)
        return _DriverStep(act.motor, act.led, act.tx,
                           entered_now=(self.automaton.initial,))

    def step(self, robot: "_Robot", dt_ms: int,
             observed: set[Event]) -> _DriverStep:
        out = step_cursor(self.automaton, self.cursor, dt_ms, observed)
        self.cursor = out.cursor
        act = out.output
        return _DriverStep(act.motor, act.led, act.tx, out.fired,
                           out.entered_now, out.entered_next)


class _AstDriver:
    """Runs the program tree through the reference interpreter; used to
    cross-check the automaton route end to end.  Emits no state ids."""

    def __init__(self, program: ActionProgram):
        self.program = program
        self.cursor: InterpCursor = start_cursor(program)

    def initial(self) -> _DriverStep:
        act = current_action(self.cursor)
        return _DriverStep(act.motor, act.led, act.tx)

    def step(self, robot: "_Robot", dt_ms: int,
             observed: set[Event]) -> _DriverStep:
        self.cursor, act, fired = interp_step(
            self.program, self.cursor, dt_ms, observed)
        return _DriverStep(act.motor, act.led, act.tx, fired)


class _SyncDriver:
    def __init__(self, spec: Sync, phase: float):
        self.spec = spec
        self.phase = phase

    def initial(self) -> _DriverStep:
        return _DriverStep(MotorCommand.STOP, LED_OFF, None)

    def step(self, robot: "_Robot", dt_ms: int,
             observed: set[Event]) -> _DriverStep:
        heard = any(p.first == FIRE_BYTE for p, _ in robot.rx_queue)
        self.phase, fired = sync_step(self.phase, dt_ms,
                                      self.spec.period_ms,
                                      self.spec.epsilon, heard)
        led = self.spec.flash_color if fired else LED_OFF
        shots = (FIRE_PAYLOAD,) if fired else ()
        return _DriverStep(MotorCommand.STOP, led, None, oneshots=shots)


class _MarchDriver:
    def __init__(self, spec: March, phase: float):
        self.spec = spec
        self.phase = phase

    def initial(self) -> _DriverStep:
        return _DriverStep(march_step(self.phase, self.spec.duty),
                           LED_OFF, None)

    def step(self, robot: "_Robot", dt_ms: int,
             observed: set[Event]) -> _DriverStep:
        heard = any(p.first == FIRE_BYTE for p, _ in robot.rx_queue)
        self.phase, fired = sync_step(self.phase, dt_ms,
                                      self.spec.period_ms,
                                      self.spec.epsilon, heard)
        shots = (FIRE_PAYLOAD,) if fired else ()
        return _DriverStep(march_step(self.phase, self.spec.duty),
                           LED_OFF, None, oneshots=shots)


class _OrbitDriver:
    def __init__(self, spec: Orbit):
        self.spec = spec
        self.beacon = spec.anchor_id & 0xFF
        self.estimate: Optional[float] = None

    def initial(self) -> _DriverStep:
        return _DriverStep(MotorCommand.STOP, LED_OFF, None)

    def step(self, robot: "_Robot", dt_ms: int,
             observed: set[Event]) -> _DriverStep:
        for payload, est in robot.rx_queue:
            if payload.first == self.beacon:
                self.estimate = est
        if self.estimate is None:
            return _DriverStep(MotorCommand.STOP, LED_OFF, None)
        motor = orbit_step((robot.x, robot.y, robot.heading),
                           max(0.0, self.estimate),
                           self.spec.desired_mm, self.spec.band_mm)
        return _DriverStep(motor, LED_OFF, None)


class _TextPixelDriver:
    def __init__(self, spec: TextPixel):
        self.spec = spec

    def initial(self) -> _DriverStep:
        return _DriverStep(MotorCommand.STOP, self.spec.color, None)

    def step(self, robot: "_Robot", dt_ms: int,
             observed: set[Event]) -> _DriverStep:
        return _DriverStep(MotorCommand.STOP, self.spec.color, None)


@dataclass
class _Robot:
    id: int
    x: float
    y: float
    heading: float
    driver: object
    alphabet: tuple[Event, ...] = ()
    motor: MotorCommand = MotorCommand.STOP
    led: ColorState = LED_OFF
    tx: Optional[MessagePayload] = None
    last_rx_ms: Optional[int] = None
    rx_queue: list[tuple[MessagePayload, float]] = field(default_factory=list)
    next_tx_ms: int = 0
    oneshots: list[MessagePayload] = field(default_factory=list)


@dataclass
class World:
    cfg: SceneConfig
    robots: list[_Robot]
    rng: random.Random
    t_ms: int = 0
    trace: Trace = field(default_factory=Trace)
    warnings: list[str] = field(default_factory=list)
    _pending: list[TraceEvent] = field(default_factory=list)
    _overlaps: set[tuple[int, int]] = field(default_factory=set)

    def emit(self, t_ms: int, robot_id: int, kind: str,
             payload: str = "-") -> None:
        self._pending.append(TraceEvent(t_ms, robot_id, kind, payload))

    def flush(self, t_ms: int) -> None:
        now = [e for e in self._pending if e.t_ms <= t_ms]
        self._pending = [e for e in self._pending if e.t_ms > t_ms]
        now.sort(key=lambda e: (e.t_ms, e.robot_id, kind_order(e.kind)))
        self.trace.events.extend(now)

    def robot(self, robot_id: int) -> _Robot:
        for r in self.robots:
            if r.id == robot_id:
                return r
        raise KeyError(robot_id)


def _payload_text(payload: Optional[MessagePayload]) -> str:
    if payload is None or not payload.data:
        return "-"
    return payload.hex_text()


def _make_driver(spec, screenplay, automata_cache, engine, phase):
    if spec.role is not None:
        program = screenplay.programs[spec.role]
        if engine == "ast":
            return _AstDriver(program), event_alphabet(program)
        if spec.role not in automata_cache:
            automata_cache[spec.role] = lower(program)
        return (_AutomatonDriver(automata_cache[spec.role]),
                event_alphabet(program))
    ctl = spec.controller
    if isinstance(ctl, Sync):
        return _SyncDriver(ctl, phase), ()
    if isinstance(ctl, March):
        return _MarchDriver(ctl, phase), ()
    if isinstance(ctl, Orbit):
        return _OrbitDriver(ctl), ()
    assert isinstance(ctl, TextPixel)
    return _TextPixelDriver(ctl), ()


def spawn_world(cfg: SceneConfig, engine: str = "automaton") -> World:
    """Build the world at t=0 with all drivers applied once.

    The t=0 trace records each robot's starting actuator state, so the
    log is self-contained from the first line.  Oscillator phases are
    drawn here, one uniform draw per sync/march robot in id order.
    """
    if engine not in ("automaton", "ast"):
        raise ValueError(f"unknown engine {engine!r}")
    validate_scene(cfg)
    rng = random.Random(cfg.seed)
    screenplay = cfg.with_cast()
    automata_cache: dict[str, Automaton] = {}
    robots: list[_Robot] = []
    for spec in sorted(cfg.robots, key=lambda r: r.id):
        phase = 0.0
        if isinstance(spec.controller, (Sync, March)):
            phase = rng.random()
        driver, alphabet = _make_driver(spec, screenplay, automata_cache,
                                        engine, phase)
        robots.append(_Robot(spec.id, spec.x, spec.y, spec.heading_rad,
                             driver, alphabet,
                             last_rx_ms=0 if cfg.silence_from_start else None))
    world = World(cfg, robots, rng)
    for robot in world.robots:
        first = robot.driver.initial()
        robot.motor = first.action_motor
        robot.led = first.led
        robot.tx = first.tx
        for sid in first.entered_now:
            world.emit(0, robot.id, "STATE_ENTER", f"s{sid}")
        world.emit(0, robot.id, "MOTOR_SET", str(robot.motor))
        world.emit(0, robot.id, "LED_SET", str(robot.led))
        if robot.motor is not MotorCommand.STOP:
            world.emit(0, robot.id, "BUZZ_ON")
    return world


def _deliver(world: World) -> None:
    cfg = world.cfg
    physics = cfg.physics
    t = world.t_ms
    for sender in world.robots:
        due: list[MessagePayload] = []
        if sender.oneshots:
            due.extend(sender.oneshots)
            sender.oneshots.clear()
        if sender.tx is not None and t >= sender.next_tx_ms:
            due.append(sender.tx)
            sender.next_tx_ms = t + physics.tx_period_ms
        for payload in due:
            world.emit(t, sender.id, "TX", _payload_text(payload))
            for receiver in world.robots:
                if receiver.id == sender.id:
                    continue
                dist = math.hypot(receiver.x - sender.x,
                                  receiver.y - sender.y)
                if dist > physics.comm_radius:
                    continue
                if physics.msg_loss_prob > 0 and (
                        world.rng.random() < physics.msg_loss_prob):
                    continue
                est = dist
                if physics.distance_noise_std > 0:
                    est += world.rng.gauss(0.0, physics.distance_noise_std)
                receiver.rx_queue.append((payload, est))
                receiver.last_rx_ms = t
                world.emit(t, receiver.id, "RX",
                           f"{_payload_text(payload)} dist={est:.3f}")


def _observed_events(robot: _Robot, t: int) -> set[Event]:
    observed: set[Event] = set()
    for ev in robot.alphabet:
        if isinstance(ev, MessageHeard):
            if ev.first is None:
                if robot.rx_queue:
                    observed.add(ev)
            elif any(p.first == ev.first for p, _ in robot.rx_queue):
                observed.add(ev)
        elif isinstance(ev, Silence):
            if robot.last_rx_ms is not None and (
                    t - robot.last_rx_ms >= ev.window_ms):
                observed.add(ev)
    return observed


def step_world(world: World) -> World:
    """Advance exactly one tick; returns the same world object."""
    cfg = world.cfg
    t = world.t_ms
    dt = cfg.tick_ms
    if t >= cfg.duration_ms:
        raise SceneError("world already ran to its configured duration")

    for robot in world.robots:
        robot.rx_queue.clear()
    _deliver(world)

    observed_by_id = {r.id: _observed_events(r, t) for r in world.robots}

    for robot in world.robots:
        out = robot.driver.step(robot, dt, observed_by_id[robot.id])
        if out.fired is not None:
            world.emit(t, robot.id, "EVENT_FIRED", out.fired.text())
        for sid in out.entered_now:
            world.emit(t, robot.id, "STATE_ENTER", f"s{sid}")
        for sid in out.entered_next:
            world.emit(t + dt, robot.id, "STATE_ENTER", f"s{sid}")
        if out.action_motor is not robot.motor:
            world.emit(t, robot.id, "MOTOR_SET", str(out.action_motor))
            was_moving = robot.motor is not MotorCommand.STOP
            now_moving = out.action_motor is not MotorCommand.STOP
            if now_moving and not was_moving:
                world.emit(t, robot.id, "BUZZ_ON")
            elif was_moving and not now_moving:
                world.emit(t, robot.id, "BUZZ_OFF")
            robot.motor = out.action_motor
        if out.led != robot.led:
            world.emit(t, robot.id, "LED_SET", str(out.led))
            robot.led = out.led
        if out.tx != robot.tx:
            if out.tx is not None:
                robot.next_tx_ms = t  # fresh payload broadcasts next delivery
            robot.tx = out.tx
        robot.oneshots.extend(out.oneshots)

    physics = cfg.physics
    for robot in world.robots:
        if robot.motor is MotorCommand.STOP:
            continue
        factor = 1.0
        if (robot.motor is MotorCommand.STRAIGHT
                and physics.motion_noise_std > 0):
            factor = 1.0 + world.rng.gauss(0.0, physics.motion_noise_std)
        robot.x, robot.y, robot.heading = apply_motion(
            robot.x, robot.y, robot.heading, robot.motor, dt, physics,
            factor)
        r = physics.body_diameter / 2.0
        lo_x, hi_x = min(r, cfg.arena_w / 2), max(cfg.arena_w - r,
                                                  cfg.arena_w / 2)
        lo_y, hi_y = min(r, cfg.arena_h / 2), max(cfg.arena_h - r,
                                                  cfg.arena_h / 2)
        robot.x = min(max(robot.x, lo_x), hi_x)
        robot.y = min(max(robot.y, lo_y), hi_y)

    for i, a in enumerate(world.robots):
        for b in world.robots[i + 1:]:
            pair = (a.id, b.id)
            close = (math.hypot(a.x - b.x, a.y - b.y)
                     < physics.body_diameter)
            if close and pair not in world._overlaps:
                world._overlaps.add(pair)
                world.warnings.append(
                    f"t={t + dt} robots {a.id} and {b.id} closer than one "
                    f"body diameter")
            elif not close:
                world._overlaps.discard(pair)

    world.flush(t)
    world.t_ms = t + dt
    return world


def run_world(cfg: SceneConfig, engine: str = "automaton") -> World:
    """Simulate the scene to its duration and return the final world."""
    world = spawn_world(cfg, engine)
    while world.t_ms < cfg.duration_ms:
        step_world(world)
    world.flush(world.t_ms)
    return world


def run(cfg: SceneConfig, engine: str = "automaton") -> Trace:
    """Simulate the scene to its duration; deterministic per config."""
    return run_world(cfg, engine).trace
