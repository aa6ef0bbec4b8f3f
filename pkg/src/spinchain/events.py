"""Timed pulse-sequence events and the sequence container.

Three event kinds cover everything the builders and the file format express:

* ``HardPulse`` -- an idealized zero-duration rotation of one or more spins
  about a transverse axis (targets ``None`` means all spins).
* ``CouplingDelay`` -- free evolution under the ZZ coupling terms for a fixed
  time; ``active`` restricts it to a subset of couplings (``None`` = all).
* ``EffectivePair`` -- evolution under an effective two-spin Hamiltonian
  2*pi*J I_a,axis I_b,axis expressed by its accumulated angle; the wall-clock
  duration is stored independently for timing accounting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pauli import check_axis


@dataclass(frozen=True)
class HardPulse:
    targets: tuple[int, ...] | None  # None = all spins
    axis: str
    angle: float  # radians; conjugation by exp(-i*angle*sum_k I_k,axis)

    def __post_init__(self) -> None:
        check_axis(self.axis)
        if self.targets is not None:
            object.__setattr__(self, "targets", tuple(sorted(set(self.targets))))
            if not self.targets:
                raise ValueError("empty pulse target list; use None for all spins")
            if any(t < 1 for t in self.targets):
                raise IndexError("spin indices are 1-based")

    @property
    def duration(self) -> float:
        return 0.0


@dataclass(frozen=True)
class CouplingDelay:
    duration: float  # seconds
    active: tuple[int, ...] | None = None  # 1-based coupling indices; None = all

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError("negative delay duration")
        if self.active is not None:
            object.__setattr__(self, "active", tuple(sorted(set(self.active))))
            if not self.active:
                raise ValueError("empty active-coupling list; use None for all")
            if any(c < 1 for c in self.active):
                raise IndexError("coupling indices are 1-based")


@dataclass(frozen=True)
class EffectivePair:
    a: int
    b: int
    axis: str
    angle: float  # radians; conjugation by exp(-i*angle*2 I_a,axis I_b,axis)
    duration: float = 0.0  # seconds, timing only

    def __post_init__(self) -> None:
        check_axis(self.axis)
        if self.a == self.b:
            raise ValueError("effective pair needs two distinct spins")
        if min(self.a, self.b) < 1:
            raise IndexError("spin indices are 1-based")
        if self.duration < 0:
            raise ValueError("negative pair duration")


Event = HardPulse | CouplingDelay | EffectivePair


@dataclass(frozen=True)
class PulseSequence:
    """Ordered list of timed events over an n-spin chain.

    ``n == 0`` marks a sequence with no spin references (e.g. parsed from an
    empty file); it applies to any chain.  The ``name`` is a display label and
    does not take part in equality.
    """

    n: int
    events: tuple[Event, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))

    @property
    def total_duration(self) -> float:
        return sum(ev.duration for ev in self.events)

    def __len__(self) -> int:
        return len(self.events)
