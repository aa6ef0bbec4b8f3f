"""Timing formulas and echo schedules for chains with unequal couplings.

Advancing the soliton past position k only requires the three couplings that
touch spins k-2..k+1.  Each of those couplings must accumulate exactly the
effective time 1/(2J_c) (a complete conversion), so one step takes the
interval 1/(2 * min J_c) over the window, clipped at the chain ends.  Within
an interval, pi rotations about x invert the sign of the ZZ evolution seen by
the couplings adjacent to the flipped spin:

* the window coupling with the smallest J runs the whole interval unflipped;
* every other window coupling gets one interior flip on its outer spin,
  placed so the signed time integral hits its target exactly;
* each spectator spin adjacent to the window gets flips at the midpoints of
  its window neighbor's constant-sign segments, and every second spin beyond
  that a mid-interval flip, which zeroes all spectator couplings;
* spins with an odd flip count get a closing flip at the interval end, so
  every frame is restored.

All flip times are exact rationals; because the ZZ terms commute and the
pulses are instantaneous, the scheduled interval reproduces the ideal
scaled-coupling propagator exactly (up to a global phase), not just to first
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chain import ChainSpec
from .events import CouplingDelay, Event, HardPulse, PulseSequence
from .sequences import DEG90, NamedSequence


class ScheduleError(ValueError):
    """Echo schedule cannot satisfy its budget."""


@dataclass(frozen=True)
class StepBudget:
    """Effective-time targets for one scheduled interval.

    ``active`` lists contiguous 1-based coupling indices; each must
    accumulate ``targets[c]`` seconds of ZZ evolution (always the full
    conversion 1/(2 J_c)) inside ``interval`` seconds.  Every other coupling
    is a spectator with target zero.
    """

    label: str
    active: tuple[int, ...]
    interval: Fraction
    targets: dict[int, Fraction]


@dataclass(frozen=True)
class EchoSchedule:
    """Flip events (time, spin) over one interval; all flips are 180x."""

    interval: Fraction
    flips: tuple[tuple[Fraction, int], ...]

    def flips_by_spin(self) -> dict[int, list[Fraction]]:
        out: dict[int, list[Fraction]] = {}
        for t, spin in self.flips:
            out.setdefault(spin, []).append(t)
        return {s: sorted(ts) for s, ts in out.items()}


def _target(chain: ChainSpec, c: int) -> Fraction:
    return 1 / (2 * Fraction(chain.coupling(c)))


def soliton_step_time(k: int, chain: ChainSpec) -> Fraction:
    """Interval for advancing the soliton from position k, in seconds.

    Valid for 3 <= k <= n; the window couplings are (k-2, k-1, k) clipped to
    the chain (k = n is the hand-off step into the decoder).
    """
    n = chain.n
    if not 3 <= k <= n:
        raise IndexError(f"step position {k} outside 3..{n}")
    window = [c for c in (k - 2, k - 1, k) if 1 <= c <= n - 1]
    return max(_target(chain, c) for c in window)


@dataclass(frozen=True)
class SolitonTimes:
    encode: Fraction
    propagate: Fraction
    decode: Fraction

    @property
    def total(self) -> Fraction:
        return self.encode + self.propagate + self.decode


def soliton_total_times(chain: ChainSpec) -> SolitonTimes:
    """Exact encode/propagate/decode durations for the scheduled soliton.

    encode    = 1/(2 J_12) + 1/(2 min(J_12, J_23))
    propagate = sum over interior steps of 1/(2 min of the 3-coupling window)
    decode    = 1/(2 min(J_(n-2,n-1), J_(n-1,n))) + 1/(2 J_(n-1,n))
    """
    n = chain.n
    if n < 3:
        raise ValueError("soliton transfer needs at least 3 spins")
    encode = _target(chain, 1) + max(_target(chain, 1), _target(chain, 2))
    propagate = sum(
        (soliton_step_time(k, chain) for k in range(3, n)), Fraction(0)
    )
    decode = soliton_step_time(n, chain) + _target(chain, n - 1)
    return SolitonTimes(encode, propagate, decode)


def soliton_budgets(chain: ChainSpec) -> list[StepBudget]:
    """Per-interval budgets matching the soliton block structure."""
    n = chain.n
    if n < 3:
        raise ValueError("soliton transfer needs at least 3 spins")

    def budget(label: str, couplings: tuple[int, ...]) -> StepBudget:
        targets = {c: _target(chain, c) for c in couplings}
        return StepBudget(label, couplings, max(targets.values()), targets)

    budgets = [
        budget("encode-1", (1,)),
        budget("encode-2", (1, 2)),
    ]
    for k in range(3, n):
        budgets.append(budget(f"advance-{k - 2}", (k - 2, k - 1, k)))
    budgets.append(budget(f"advance-{n - 2}", (n - 2, n - 1)))
    budgets.append(budget("decode", (n - 1,)))
    return budgets


def build_echo_schedule(budget: StepBudget, chain: ChainSpec) -> EchoSchedule:
    """Flip times realizing a budget exactly, in rational arithmetic."""
    n = chain.n
    T = budget.interval
    active = sorted(budget.active)
    if active != list(range(active[0], active[-1] + 1)):
        raise ScheduleError(f"active couplings {active} are not contiguous")
    for c in active:
        if not 1 <= c <= n - 1:
            raise ScheduleError(f"coupling {c} outside 1..{n - 1}")
        if budget.targets[c] > T:
            raise ScheduleError(
                f"target {budget.targets[c]} for coupling {c} exceeds interval {T}"
            )
    reference = next(c for c in active if budget.targets[c] == T)

    interior: dict[int, list[Fraction]] = {}

    def place(outer_spin: int, target: Fraction, inner_flip: Fraction | None):
        """One flip on the outer spin so the coupling integrates to target."""
        if inner_flip is None:
            if target == T:
                return None  # full interval, nothing to do
            u = (T + target) / 2  # signed area 2u - T
        else:
            u = inner_flip - (T - target) / 2  # signed area T - 2|u - v|
        interior.setdefault(outer_spin, []).append(u)
        return u

    inner = None
    for c in range(reference - 1, active[0] - 1, -1):  # walk left; spins (c, c+1)
        inner = place(c, budget.targets[c], inner)
    inner = None
    for c in range(reference + 1, active[-1] + 1):  # walk right
        inner = place(c + 1, budget.targets[c], inner)

    # Spectator decoupling.  The spin adjacent to the window flips at the
    # midpoints of the window-edge spin's constant segments (which also makes
    # its own profile integrate to zero); beyond that, every second spin gets
    # a mid-interval flip.
    lo_spin, hi_spin = active[0], active[-1] + 1
    for edge, step in ((lo_spin, -1), (hi_spin, +1)):
        neighbor = edge + step
        if not 1 <= neighbor <= n:
            continue
        edge_flips = sorted(interior.get(edge, []))
        bounds = [Fraction(0), *edge_flips, T]
        interior[neighbor] = [
            (bounds[i] + bounds[i + 1]) / 2 for i in range(len(bounds) - 1)
        ]
        spin = neighbor + 2 * step
        while 1 <= spin <= n:
            interior[spin] = [T / 2]
            spin += 2 * step

    flips: list[tuple[Fraction, int]] = []
    for spin, times in interior.items():
        if len(times) % 2 == 1:
            times = [*times, T]  # closing flip restores the frame
        flips.extend((t, spin) for t in times)
    flips.sort()
    return EchoSchedule(T, tuple(flips))


def coupling_effective_times(schedule: EchoSchedule, n: int) -> dict[int, Fraction]:
    """Exact signed ZZ evolution time per coupling under a schedule."""
    by_spin = schedule.flips_by_spin()
    out: dict[int, Fraction] = {}
    for c in range(1, n):
        times = sorted(by_spin.get(c, []) + by_spin.get(c + 1, []))
        total, sign, prev = Fraction(0), 1, Fraction(0)
        for t in times:  # simultaneous flips on both spins cancel pairwise
            total += sign * (t - prev)
            sign, prev = -sign, t
        total += sign * (schedule.interval - prev)
        out[c] = total
    return out


def frames_restored(schedule: EchoSchedule) -> bool:
    return all(len(ts) % 2 == 0 for ts in schedule.flips_by_spin().values())


def schedule_events(schedule: EchoSchedule) -> list[Event]:
    """Compile a schedule into delays (all couplings live) and 180x pulses."""
    groups: dict[Fraction, list[int]] = {}
    for t, spin in schedule.flips:
        groups.setdefault(t, []).append(spin)
    events: list[Event] = []
    prev = Fraction(0)
    for t in sorted(groups):
        if t > prev:
            events.append(CouplingDelay(float(t - prev)))
        events.append(HardPulse(tuple(sorted(groups[t])), "x", math.pi))
        prev = t
    if schedule.interval > prev:
        events.append(CouplingDelay(float(schedule.interval - prev)))
    return events


def ideal_interval_events(budget: StepBudget) -> list[Event]:
    """The interval's target evolution as per-coupling scaled delays."""
    return [
        CouplingDelay(float(budget.targets[c]), (c,)) for c in budget.active
    ]


def build_soliton_unequal(chain: ChainSpec) -> NamedSequence:
    """Soliton transfer over an arbitrary chain via echo-scheduled intervals.

    Block structure and pulses match the uniform builder; every coupling
    delay becomes a scheduled interval whose length is set by the slowest
    window coupling.  For a uniform chain this reduces to the plain builder's
    timing exactly.
    """
    n = chain.n
    budgets = soliton_budgets(chain)
    prefix: dict[str, list[Event]] = {
        "encode-1": [HardPulse((1,), "x", DEG90), HardPulse((1,), "y", -DEG90)],
        "encode-2": [HardPulse((1,), "x", DEG90), HardPulse((2,), "y", DEG90)],
        "decode": [HardPulse((n,), "x", -DEG90), HardPulse((n - 1,), "y", DEG90)],
    }
    events: list[Event] = []
    blocks: list[tuple[str, int]] = []
    total = Fraction(0)
    for budget in budgets:
        schedule = build_echo_schedule(budget, chain)
        evs = prefix.get(budget.label, [HardPulse(None, "y", DEG90)]).copy()
        evs.extend(schedule_events(schedule))
        if budget.label == "decode":
            evs.append(HardPulse((n,), "x", -DEG90))
        events.extend(evs)
        blocks.append((budget.label, len(evs)))
        total += budget.interval
    seq = PulseSequence(n, tuple(events), name=f"soliton-scheduled-{n}")
    return NamedSequence("soliton-scheduled", n, 0.0, seq, total, tuple(blocks))


def schedule_report(chain: ChainSpec) -> dict:
    """JSON-ready breakdown: totals, per-interval flips, and audit tables."""
    times = soliton_total_times(chain)
    segments = []
    for budget in soliton_budgets(chain):
        schedule = build_echo_schedule(budget, chain)
        achieved = coupling_effective_times(schedule, chain.n)
        segments.append({
            "label": budget.label,
            "interval_s": float(budget.interval),
            "active_couplings": list(budget.active),
            "flips": [
                {"time_s": float(t), "spin": spin, "axis": "x", "angle_deg": 180.0}
                for t, spin in schedule.flips
            ],
            "audit": [
                {
                    "coupling": c,
                    "target_s": float(budget.targets.get(c, Fraction(0))),
                    "achieved_s": float(achieved[c]),
                    "exact": achieved[c] == budget.targets.get(c, Fraction(0)),
                }
                for c in range(1, chain.n)
            ],
        })
    return {
        "n": chain.n,
        "couplings_hz": list(chain.couplings),
        "breakdown": {
            "encode_s": float(times.encode),
            "propagate_s": float(times.propagate),
            "decode_s": float(times.decode),
            "total_s": float(times.total),
        },
        "segments": segments,
    }
