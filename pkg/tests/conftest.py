from __future__ import annotations

import random
from pathlib import Path

import pytest

from kiloscript.model import (
    Act,
    Action,
    ActionProgram,
    ColorState,
    MessageHeard,
    MessagePayload,
    MotorCommand,
    Repeat,
    Silence,
    Until,
)

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"
CORPUS = ROOT / "tests" / "corpus"
SCENES = ROOT / "scenes"


@pytest.fixture(scope="session")
def scenes_dir() -> Path:
    return SCENES


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


def make_random_program(rng: random.Random, max_depth: int = 4,
                        max_actions: int = 100,
                        max_duration_ms: int = 30) -> ActionProgram:
    """Random but well-formed program; used by the property suites."""
    budget = [rng.randint(1, max_actions)]

    def act() -> Act:
        budget[0] -= 1
        tx = None
        if rng.random() < 0.25:
            tx = MessagePayload(bytes(rng.randrange(256)
                                      for _ in range(rng.randint(1, 9))))
        return Act(Action(
            rng.choice(list(MotorCommand)),
            ColorState(rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)),
            tx,
            rng.randint(1, max_duration_ms)))

    def steps(depth: int) -> list:
        out = []
        for _ in range(rng.randint(1, 3)):
            if budget[0] <= 0:
                break
            roll = rng.random()
            if depth < max_depth and roll < 0.30:
                body = steps(depth + 1)
                out.append(Repeat(rng.randint(1, 3), tuple(body))
                           if body else act())
            elif depth < max_depth and roll < 0.55:
                body = steps(depth + 1)
                if rng.random() < 0.5:
                    event = Silence(rng.randint(1, 3 * max_duration_ms))
                else:
                    event = MessageHeard(rng.choice([None, 0x01, 0x2a]))
                out.append(Until(event, tuple(body)) if body else act())
            else:
                out.append(act())
        return out

    body = steps(1)
    if not body:
        body = [act()]
    return ActionProgram("r", tuple(body))
