import math
import random

import pytest

from spinchain.events import CouplingDelay, EffectivePair, HardPulse, PulseSequence
from spinchain.pauli import AXES, OperatorSum


def random_sequence(rng: random.Random, n: int, n_events: int, name: str = "") -> PulseSequence:
    """A random but valid pulse sequence over an n-spin chain.

    Angles and durations are drawn as short decimals so that the 12-digit
    file format represents them exactly.
    """
    events = []
    for _ in range(n_events):
        kind = rng.choice(("pulse", "pulse", "delay", "delay", "effpair"))
        if kind == "pulse":
            if rng.random() < 0.3:
                targets = None
            else:
                count = rng.randint(1, n)
                targets = tuple(rng.sample(range(1, n + 1), count))
            angle = math.radians(round(rng.uniform(-180.0, 180.0), 6))
            events.append(HardPulse(targets, rng.choice(AXES), angle))
        elif kind == "delay":
            duration = round(rng.uniform(0.0, 1.2), 6)
            active = None
            if n > 2 and rng.random() < 0.4:
                count = rng.randint(1, n - 1)
                active = tuple(rng.sample(range(1, n), count))
            events.append(CouplingDelay(duration, active))
        else:
            a, b = rng.sample(range(1, n + 1), 2)
            angle = math.radians(round(rng.uniform(-180.0, 180.0), 6))
            events.append(EffectivePair(a, b, rng.choice(AXES), angle,
                                        round(rng.uniform(0.0, 1.2), 6)))
    return PulseSequence(n, tuple(events), name=name)


def random_product_operator(rng: random.Random, n: int) -> OperatorSum:
    """A random single product-operator term with unit amplitude."""
    weight = rng.randint(1, min(3, n))
    positions = rng.sample(range(1, n + 1), weight)
    letters = ["I"] * n
    for pos in positions:
        letters[pos - 1] = rng.choice("XYZ")
    return OperatorSum(n, {"".join(letters): 0.5})


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
