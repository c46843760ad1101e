"""Built-in parametric controllers for the algorithmic scenes.

These cover what the screenplay language cannot express: pulse-coupled
flash synchronization, distance-holding orbits around an anchor robot,
a rhythmic march pulsing on the shared beat, and static LED text
pixels.  The step functions are pure; the simulator owns per-robot
state and feeds receptions in.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .model import ColorState, MotorCommand

#: First payload byte of the one-shot broadcast emitted on a flash;
#: hearing it is what couples oscillator phases across robots.
FIRE_BYTE = 0x01

DEFAULT_BODY_DIAMETER_MM = 33.0


class EmptyBitmapError(ValueError):
    pass


@dataclass(frozen=True)
class Sync:
    """Flash and broadcast on a common period, pulling phases together."""

    period_ms: int
    epsilon: float
    flash_color: ColorState

    def __post_init__(self) -> None:
        if self.period_ms < 100:
            raise ValueError("sync period must be >= 100 ms")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("coupling epsilon must be in (0, 1)")


@dataclass(frozen=True)
class Orbit:
    """Hold a target range to the anchor, circling it."""

    anchor_id: int
    desired_mm: float
    band_mm: float

    def __post_init__(self) -> None:
        if self.desired_mm <= 0:
            raise ValueError("desired distance must be positive")
        if self.band_mm <= 0:
            raise ValueError("band must be positive")


@dataclass(frozen=True)
class March:
    """Pulse forward for the duty fraction of each shared beat."""

    period_ms: int
    epsilon: float
    duty: float

    def __post_init__(self) -> None:
        if self.period_ms < 100:
            raise ValueError("march period must be >= 100 ms")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("coupling epsilon must be in (0, 1)")
        if not 0.0 < self.duty < 1.0:
            raise ValueError("duty must be in (0, 1)")


@dataclass(frozen=True)
class TextPixel:
    """Sit still and shine one color; a pixel of a text layout."""

    color: ColorState


ControllerSpec = Union[Sync, Orbit, March, TextPixel]


def sync_step(phase: float, dt_ms: int, period_ms: int, epsilon: float,
              heard_fire: bool) -> tuple[float, bool]:
    """One oscillator tick: advance, couple, fire at threshold.

    Returns the new phase in [0, 1) and whether the oscillator fired;
    a fired oscillator resets to phase zero.
    """
    phase += dt_ms / period_ms
    if heard_fire:
        phase = min(1.0, (1.0 + epsilon) * phase)
    if phase >= 1.0:
        return 0.0, True
    return phase, False


def orbit_step(self_pose: tuple[float, float, float],
               estimated_distance_to_anchor: float,
               desired_mm: float, band_mm: float) -> MotorCommand:
    """Bang-bang range holding; depends only on the distance estimate.

    Too close veers outward (turn left), too far veers inward (turn
    right), inside the band runs straight.  With the anchor kept on the
    right this settles into a circling path; on the rendered image
    (y axis down) the motion reads counter-clockwise.
    """
    del self_pose  # part of the controller signature, not of the policy
    if estimated_distance_to_anchor < 0:
        raise ValueError("distance estimate must be >= 0")
    if estimated_distance_to_anchor < desired_mm - band_mm / 2:
        return MotorCommand.TURN_LEFT
    if estimated_distance_to_anchor > desired_mm + band_mm / 2:
        return MotorCommand.TURN_RIGHT
    return MotorCommand.STRAIGHT


def march_step(phase: float, duty: float) -> MotorCommand:
    """Straight while phase is inside the half-open duty window."""
    if not 0.0 <= phase < 1.0:
        raise ValueError("phase must be in [0, 1)")
    return MotorCommand.STRAIGHT if phase < duty else MotorCommand.STOP


def layout_text(bitmap: list[list[bool]], spacing_mm: float,
                body_diameter_mm: float = DEFAULT_BODY_DIAMETER_MM,
                ) -> list[tuple[float, float]]:
    """Positions for one robot per lit cell, centred on the origin.

    Columns grow +x left to right, rows grow downward (-y), so the
    text reads naturally with y up.  Spacing must leave room for robot
    bodies; lit-cell count equals the returned position count.
    """
    if spacing_mm < body_diameter_mm:
        raise ValueError(
            f"spacing {spacing_mm} mm is below the body diameter "
            f"{body_diameter_mm} mm")
    rows = len(bitmap)
    cols = max((len(r) for r in bitmap), default=0)
    positions = []
    for row_i, row in enumerate(bitmap):
        for col_i, lit in enumerate(row):
            if lit:
                x = (col_i - (cols - 1) / 2) * spacing_mm
                y = ((rows - 1) / 2 - row_i) * spacing_mm
                positions.append((x, y))
    if not positions:
        raise EmptyBitmapError("bitmap has no lit cells")
    return positions


def parse_bitmap(text: str) -> list[list[bool]]:
    """Read a `.`/`#` grid; all lines must be equally long."""
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise EmptyBitmapError("bitmap text is empty")
    width = len(lines[0])
    grid = []
    for i, line in enumerate(lines, 1):
        if len(line) != width:
            raise ValueError(f"bitmap line {i} has length {len(line)}, "
                             f"expected {width}")
        bad = set(line) - {".", "#"}
        if bad:
            raise ValueError(f"bitmap line {i} has stray characters {bad}")
        grid.append([c == "#" for c in line])
    return grid


def load_bitmap(path: str | Path) -> list[list[bool]]:
    return parse_bitmap(Path(path).read_text(encoding="utf-8"))


def count_lit(bitmap: list[list[bool]]) -> int:
    return sum(sum(row) for row in bitmap)


_FONT: Optional[dict[str, list[str]]] = None


def _load_font() -> dict[str, list[str]]:
    global _FONT
    if _FONT is None:
        text = (resources.files("kiloscript") / "data" / "font5x7.txt"
                ).read_text(encoding="utf-8")
        font: dict[str, list[str]] = {}
        glyph: Optional[str] = None
        rows: list[str] = []
        for line in text.splitlines():
            if line.startswith(":"):
                if glyph is not None:
                    font[glyph] = rows
                name = line[1:]
                glyph = " " if name == "SP" else name
                rows = []
            elif line:
                rows.append(line)
        if glyph is not None:
            font[glyph] = rows
        for ch, g in font.items():
            if len(g) != 7 or any(len(r) != 5 for r in g):
                raise ValueError(f"glyph {ch!r} is not 5x7")
        _FONT = font
    return _FONT


def text_to_bitmap(text: str, gap_cols: int = 1) -> list[list[bool]]:
    """Rasterize A-Z/space text through the shipped 5x7 font."""
    font = _load_font()
    text = text.upper()
    unknown = sorted(set(text) - set(font))
    if unknown:
        raise ValueError(f"no glyphs for {unknown}")
    rows = [[] for _ in range(7)]
    for i, ch in enumerate(text):
        glyph = font[ch]
        for r in range(7):
            if i:
                rows[r].extend([False] * gap_cols)
            rows[r].extend(c == "#" for c in glyph[r])
    return rows


def bitmap_to_text(bitmap: list[list[bool]]) -> str:
    return "\n".join("".join("#" if c else "." for c in row)
                     for row in bitmap) + "\n"
