"""Run reports: summary figures and a per-robot event table.

Reads a trace (the tab-separated simulator output) plus its scene and
writes PNG figures next to a summary.tsv: replayed trajectories over
the arena, the LED timeline, and the buzz/activity raster that shows
the rhythm of the motors.  Figures are for humans; the golden-testable
artifacts remain the trace and the P6 frames.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .render import replay_tracks  # noqa: E402
from .scene import SceneConfig  # noqa: E402
from .trace import KINDS, Trace  # noqa: E402

_LED_SCALE = 255.0


def _trajectories_figure(cfg: SceneConfig, trace: Trace, path: Path) -> None:
    tracks = replay_tracks(cfg, trace)
    fig, ax = plt.subplots(figsize=(7, 7 * cfg.arena_h / cfg.arena_w))
    for rid in sorted(tracks):
        xs = [p[0] for p in tracks[rid].poses]
        ys = [p[1] for p in tracks[rid].poses]
        ax.plot(xs, ys, linewidth=0.8)
        ax.plot(xs[-1], ys[-1], "o", markersize=4)
        ax.annotate(str(rid), (xs[-1], ys[-1]), fontsize=7,
                    textcoords="offset points", xytext=(4, 4))
    ax.set_xlim(0, cfg.arena_w)
    ax.set_ylim(0, cfg.arena_h)
    ax.set_aspect("equal")
    ax.set_xlabel("x [mm]")
    ax.set_ylabel("y [mm]")
    ax.set_title("replayed trajectories")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _led_timeline_figure(cfg: SceneConfig, trace: Trace, path: Path) -> None:
    robot_ids = sorted({r.id for r in cfg.robots})
    fig, ax = plt.subplots(figsize=(9, 0.5 + 0.35 * len(robot_ids)))
    for row, rid in enumerate(robot_ids):
        changes = [(e.t_ms, e.payload) for e in trace.events
                   if e.robot_id == rid and e.kind == "LED_SET"]
        spans = []
        colors = []
        for i, (t, payload) in enumerate(changes):
            end = changes[i + 1][0] if i + 1 < len(changes) else cfg.duration_ms
            r, g, b = (int(v) for v in payload.split())
            spans.append((t, end - t))
            colors.append((r / 3, g / 3, b / 3))
        if spans:
            ax.broken_barh(spans, (row - 0.4, 0.8), facecolors=colors,
                           edgecolor="none")
    ax.set_yticks(range(len(robot_ids)), [str(r) for r in robot_ids])
    ax.set_xlim(0, cfg.duration_ms)
    ax.set_xlabel("t [ms]")
    ax.set_ylabel("robot")
    ax.set_title("LED timeline")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _activity_figure(cfg: SceneConfig, trace: Trace, path: Path) -> None:
    robot_ids = sorted({r.id for r in cfg.robots})
    fig, ax = plt.subplots(figsize=(9, 0.5 + 0.35 * len(robot_ids)))
    for row, rid in enumerate(robot_ids):
        on_t = None
        spans = []
        for e in trace.events:
            if e.robot_id != rid:
                continue
            if e.kind == "BUZZ_ON":
                on_t = e.t_ms
            elif e.kind == "BUZZ_OFF" and on_t is not None:
                spans.append((on_t, e.t_ms - on_t))
                on_t = None
        if on_t is not None:
            spans.append((on_t, cfg.duration_ms - on_t))
        if spans:
            ax.broken_barh(spans, (row - 0.4, 0.8), facecolors="0.3",
                           edgecolor="none")
        tx_t = [e.t_ms for e in trace.events
                if e.robot_id == rid and e.kind == "TX"]
        ax.plot(tx_t, [row] * len(tx_t), "|", color="tab:orange",
                markersize=8)
    ax.set_yticks(range(len(robot_ids)), [str(r) for r in robot_ids])
    ax.set_xlim(0, cfg.duration_ms)
    ax.set_xlabel("t [ms]")
    ax.set_ylabel("robot")
    ax.set_title("motor buzz (bars) and broadcasts (ticks)")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_summary_tsv(cfg: SceneConfig, trace: Trace, path: Path) -> None:
    robot_ids = sorted({r.id for r in cfg.robots})
    counts = {rid: {k: 0 for k in KINDS} for rid in robot_ids}
    for e in trace.events:
        counts[e.robot_id][e.kind] += 1
    lines = ["robot_id\t" + "\t".join(KINDS)]
    for rid in robot_ids:
        lines.append(str(rid) + "\t"
                     + "\t".join(str(counts[rid][k]) for k in KINDS))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report(cfg: SceneConfig, trace: Trace,
                 out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for name, fn in (("trajectories.png", _trajectories_figure),
                     ("led_timeline.png", _led_timeline_figure),
                     ("activity.png", _activity_figure)):
        path = out_dir / name
        fn(cfg, trace, path)
        outputs.append(path)
    summary = out_dir / "summary.tsv"
    write_summary_tsv(cfg, trace, summary)
    outputs.append(summary)
    return outputs
