"""Brute-force orbit oracle.

Independent Euler integration of the bang-bang distance-holding rule
around a static anchor, with per-tick noisy range estimates.  Run once
to pin the revolution-time and band-containment bounds asserted by the
orbit acceptance test.

Rule: too close -> turn left, too far -> turn right, else straight.
Turns pivot about the grounded leg (offset = body radius), which is what
makes the rule live: a turn both rotates the body and creeps it forward,
so range keeps evolving while correcting.  Rotate-in-place turns freeze
the range and deadlock the threshold rule; see the decision notes.
"""

from __future__ import annotations

import math
import random

V_MM_S = 10.0
OMEGA_RAD_S = math.pi / 4
DESIRED_MM = 60.0
BAND_MM = 16.0
NOISE_STD_MM = 2.0
SEED = 3
TICK_MS = 31
PIVOT_MM = 16.5
SETTLE_MS = 10_000


def run(duration_ms=60_000, v=V_MM_S, omega=OMEGA_RAD_S, desired=DESIRED_MM,
        band=BAND_MM, noise_std=NOISE_STD_MM, seed=SEED, tick_ms=TICK_MS,
        pivot=PIVOT_MM):
    rng = random.Random(seed)
    x, y = desired, 0.0
    heading = -math.pi / 2  # tangent, anchor kept on the right
    est = None
    t = 0
    bearing_prev = math.atan2(y, x)
    unwound = 0.0
    log = []

    def pivot_turn(x, y, heading, sign):
        px = x + pivot * math.cos(heading + sign * math.pi / 2)
        py = y + pivot * math.sin(heading + sign * math.pi / 2)
        a = sign * omega * tick_ms / 1000.0
        ca, sa = math.cos(a), math.sin(a)
        dx, dy = x - px, y - py
        return px + ca * dx - sa * dy, py + sa * dx + ca * dy, heading + a

    while t < duration_ms:
        d = math.hypot(x, y)
        est = d + (rng.gauss(0.0, noise_std) if noise_std else 0.0)
        if est > desired + band / 2:
            x, y, heading = pivot_turn(x, y, heading, -1.0)
        elif est < desired - band / 2:
            x, y, heading = pivot_turn(x, y, heading, +1.0)
        else:
            x += v * tick_ms / 1000.0 * math.cos(heading)
            y += v * tick_ms / 1000.0 * math.sin(heading)
        b = math.atan2(y, x)
        unwound += (b - bearing_prev + math.pi) % (2 * math.pi) - math.pi
        bearing_prev = b
        log.append((t, d, unwound))
        t += tick_ms
    return log


if __name__ == "__main__":
    log = run()
    nominal = 2 * math.pi * DESIRED_MM / V_MM_S * 1000.0
    rev_t = next((t for t, _, a in log if abs(a) >= 2 * math.pi), None)
    tail = [d for t, d, _ in log if t >= SETTLE_MS]
    print(f"nominal = {nominal:.0f} ms, window ±25% = "
          f"[{0.75 * nominal:.0f}, {1.25 * nominal:.0f}]")
    print(f"first revolution: {rev_t} ms; rotation sense: "
          f"{'negative (clockwise in math axes)' if log[-1][2] < 0 else 'positive'}")
    print(f"distance after {SETTLE_MS} ms settling: "
          f"[{min(tail):.2f}, {max(tail):.2f}] vs claim "
          f"[{DESIRED_MM - BAND_MM:.0f}, {DESIRED_MM + BAND_MM:.0f}]")
