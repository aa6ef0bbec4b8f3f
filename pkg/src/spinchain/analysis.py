"""Transfer verification, stroboscopic tracking, and strategy comparison.

A transfer succeeds when each of the three source components I_sx, I_sy, I_sz
arrives at the target spin with overlap magnitude 1; transferring all three
certifies that an arbitrary single-spin deviation density operator is moved
intact.  Timing rows are kept in exact rational arithmetic wherever the
coupling constant cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import dense as dense_backend
from .chain import ChainSpec
from .engine import apply_sequence
from .events import PulseSequence
from .pauli import AXES, OperatorSum, spin_op
from .sequences import (
    NamedSequence,
    build_soliton,
    indirect_swap_parts,
    mirror_sequence,
)
from .scheduler import build_soliton_unequal

OVERLAP_TOLERANCE = 1e-9  # |overlap| within this of 1 counts as transferred


@dataclass(frozen=True)
class TransferReport:
    source: int
    target: int
    component_overlaps: dict[str, complex]  # axis -> overlap
    duration: float
    backend_residual: float | None = None
    sign_corrections: tuple = ()

    def magnitudes(self) -> dict[str, float]:
        return {axis: abs(v) for axis, v in self.component_overlaps.items()}

    def success(self, tolerance: float = OVERLAP_TOLERANCE,
                components: tuple[str, ...] = AXES) -> bool:
        mags = self.magnitudes()
        return all(abs(mags[a] - 1.0) <= tolerance for a in components)

    def to_dict(self) -> dict:
        out = {
            "source": self.source,
            "target": self.target,
            "duration_s": self.duration,
            "component_overlaps": {
                a: {"real": v.real, "imag": v.imag}
                for a, v in self.component_overlaps.items()
            },
            "overlap_magnitudes": self.magnitudes(),
            "sign_corrections": list(self.sign_corrections),
        }
        if self.backend_residual is not None:
            out["backend_residual"] = self.backend_residual
        return out


def _resolve_sequence(seq) -> tuple[PulseSequence, float]:
    if isinstance(seq, NamedSequence):
        if seq.sequence is None:
            raise ValueError(f"{seq.kind!r} is a timing model without dynamics")
        return seq.sequence, seq.duration
    return seq, seq.total_duration


def transfer_report(
    seq,
    chain: ChainSpec,
    source: int,
    target: int,
    backend: str = "heisenberg",
    max_spins: int | None = None,
) -> TransferReport:
    """Evolve the three source components and report target overlaps.

    ``backend`` is ``heisenberg`` (default), ``dense`` (oracle only), or
    ``both`` (heisenberg overlaps plus the cross-backend residual).
    """
    if backend not in ("heisenberg", "dense", "both"):
        raise ValueError(f"unknown backend {backend!r}")
    pulse_seq, duration = _resolve_sequence(seq)
    for k in (source, target):
        if not 1 <= k <= chain.n:
            raise IndexError(f"spin {k} outside 1..{chain.n}")

    overlaps: dict[str, complex] = {}
    residual: float | None = None
    if backend == "dense":
        import numpy as np

        U = dense_backend.dense_propagator(pulse_seq, chain, max_spins=max_spins)
        dim = 1 << chain.n
        for axis in AXES:
            src = dense_backend.dense_operator(spin_op(source, axis, chain.n).to_sum())
            tgt = dense_backend.dense_operator(spin_op(target, axis, chain.n).to_sum())
            evolved = dense_backend.conjugate(U, src)
            norm2 = float(np.real(np.trace(tgt.conj().T @ tgt)))
            overlaps[axis] = complex(np.trace(tgt.conj().T @ evolved)) / norm2
    else:
        worst = 0.0
        for axis in AXES:
            start = spin_op(source, axis, chain.n).to_sum()
            evolved = apply_sequence(start, pulse_seq, chain)
            overlaps[axis] = evolved.overlap(spin_op(target, axis, chain.n).to_sum())
            if backend == "both":
                worst = max(
                    worst,
                    dense_backend.backend_agreement(
                        pulse_seq, chain, start, max_spins=max_spins
                    ),
                )
        if backend == "both":
            residual = worst
    return TransferReport(source, target, overlaps, duration, residual)


@dataclass(frozen=True)
class Snapshot:
    time: float
    label: str
    operator: OperatorSum
    dominant_positions: tuple[int, ...]
    dominant_axes: tuple[str, ...]
    dominant_weight: int

    def to_dict(self) -> dict:
        return {
            "time_s": self.time,
            "label": self.label,
            "operator": str(self.operator),
            "terms": [
                {"term": letters, "real": c.real, "imag": c.imag}
                for letters, c in self.operator.sorted_terms()
            ],
            "dominant_positions": list(self.dominant_positions),
            "dominant_axes": list(self.dominant_axes),
            "dominant_weight": self.dominant_weight,
        }


def _dominant(op: OperatorSum) -> tuple[tuple[int, ...], tuple[str, ...], int]:
    if op.is_zero():
        return (), (), 0
    letters, _ = max(op.sorted_terms(), key=lambda kv: abs(kv[1]))
    positions = tuple(i + 1 for i, c in enumerate(letters) if c != "I")
    axes = tuple(c.lower() for c in letters if c != "I")
    return positions, axes, len(positions)


def stroboscopic_track(
    seq: NamedSequence, chain: ChainSpec, op: OperatorSum
) -> list[Snapshot]:
    """Snapshots of the evolving operator at every block boundary.

    The first snapshot (time 0, label ``start``) is the input operator; the
    following ones land on the stroboscopic grid where the soliton pattern
    recurs shifted by one position.
    """
    if seq.sequence is None:
        raise ValueError(f"{seq.kind!r} is a timing model without dynamics")
    positions, axes, weight = _dominant(op)
    snapshots = [Snapshot(0.0, "start", op, positions, axes, weight)]
    t = 0.0
    for label, events in seq.segments():
        block = PulseSequence(seq.sequence.n, events)
        op = apply_sequence(op, block, chain)
        t += block.total_duration
        positions, axes, weight = _dominant(op)
        snapshots.append(Snapshot(t, label, op, positions, axes, weight))
    return snapshots


@dataclass(frozen=True)
class TimingRow:
    """One strategy-comparison row; J-free ratios are exact rationals."""

    n: int
    tau_conv: float
    tau_swap: float
    tau_soliton: float
    step_conv: float
    step_swap: float
    step_soliton: float
    ratio: float
    exact_tau_conv: Fraction = field(compare=False)  # in units of 1/J
    exact_tau_soliton: Fraction = field(compare=False)
    exact_swap_sqrt3: Fraction = field(compare=False)  # tau_swap = (a*sqrt3 + b)/J
    exact_swap_rational: Fraction = field(compare=False)
    exact_ratio: Fraction = field(compare=False)

    def to_csv_row(self) -> list[float]:
        return [self.n, self.tau_conv, self.tau_swap, self.tau_soliton,
                self.step_conv, self.step_swap, self.step_soliton, self.ratio]


TIMING_CSV_COLUMNS = (
    "n", "tau_conv", "tau_swap", "tau_soliton",
    "step_conv", "step_swap", "step_soliton", "ratio",
)


def timing_row(n: int, J: float = 1.0) -> TimingRow:
    swaps, mixes = indirect_swap_parts(n)
    conv = Fraction(3 * (n - 1), 2)
    soliton = Fraction(n + 1, 2)
    swap_sqrt3 = Fraction(3 * swaps, 2)
    swap_rational = Fraction(3 * mixes, 2)
    ratio = soliton / conv
    tau_swap = (float(swap_sqrt3) * math.sqrt(3.0) + float(swap_rational)) / J
    return TimingRow(
        n=n,
        tau_conv=float(conv) / J,
        tau_swap=tau_swap,
        tau_soliton=float(soliton) / J,
        step_conv=float(conv / (n - 1)) / J,
        step_swap=tau_swap / (n - 1),
        step_soliton=float(soliton / (n - 1)) / J,
        ratio=float(ratio),
        exact_tau_conv=conv,
        exact_tau_soliton=soliton,
        exact_swap_sqrt3=swap_sqrt3,
        exact_swap_rational=swap_rational,
        exact_ratio=ratio,
    )


def timing_table(n_max: int, J: float = 1.0) -> list[TimingRow]:
    """Strategy comparison rows for n = 3..n_max."""
    if n_max < 3:
        raise ValueError("comparison starts at n = 3")
    return [timing_row(n, J) for n in range(3, n_max + 1)]


def _merged_exchange(fwd: NamedSequence) -> PulseSequence:
    """Forward and mirrored pulses over shared delays, block by block.

    Both encodings ride the same coupling evolution: each block's delay is
    global, the selective pulses of the two directions act on disjoint spin
    sets once the chain is long enough (n >= 4), and the non-selective
    advance pulses are direction-independent and emitted once.
    """
    n = fwd.sequence.n
    mirrored = mirror_sequence(fwd.sequence)

    def union(first, second):
        merged = list(first)
        merged.extend(ev for ev in second if ev not in merged)
        return merged

    events = []
    pos = 0
    for _, count in fwd.blocks:
        fwd_events = fwd.sequence.events[pos:pos + count]
        mir_events = mirrored.events[pos:pos + count]
        # Every block carries exactly one timed event; keep the pulses on
        # their side of it when merging the two directions.
        cut = next(
            (i for i, ev in enumerate(fwd_events) if ev.duration > 0.0),
            len(fwd_events),
        )
        events.extend(union(fwd_events[:cut], mir_events[:cut]))
        if cut < len(fwd_events):
            events.append(fwd_events[cut])
            events.extend(union(fwd_events[cut + 1:], mir_events[cut + 1:]))
        pos += count
    return PulseSequence(n, tuple(events), name=f"exchange-merged-{n}")


def exchange_experiment(chain: ChainSpec, max_spins: int | None = None) -> dict:
    """Probe end-to-end exchange candidates and report their fidelities.

    Three candidates are evaluated: the forward sequence alone, the mirrored
    sequence run after the forward one (twice the time), and a merged
    sequence that shares every delay between both directions.  Results are
    reported, not asserted: interior spins are generally not preserved, and
    that is expected of an end-to-end exchange that is not a full swap gate.
    """
    n = chain.n
    if n < 3:
        raise ValueError("exchange experiment needs at least 3 spins")
    if chain.is_uniform():
        fwd = build_soliton(n, chain.couplings[0])
    else:
        fwd = build_soliton_unequal(chain)

    candidates: dict[str, PulseSequence] = {"forward": fwd.sequence}
    candidates["sequential-mirror"] = PulseSequence(
        n,
        fwd.sequence.events + mirror_sequence(fwd.sequence).events,
        name=f"exchange-sequential-{n}",
    )
    if chain.is_uniform():
        candidates["merged"] = _merged_exchange(fwd)

    interior = (n + 1) // 2
    report: dict = {
        "n": n,
        "couplings_hz": list(chain.couplings),
        "interior_spin": interior,
        "candidates": {},
    }
    for name, seq in candidates.items():
        fwd_rep = transfer_report(seq, chain, 1, n)
        rev_rep = transfer_report(seq, chain, n, 1)
        back_rep = transfer_report(seq, chain, 1, 1)
        preserved = apply_sequence(
            spin_op(interior, "z", n).to_sum(), seq, chain
        ).overlap(spin_op(interior, "z", n).to_sum())
        report["candidates"][name] = {
            "duration_s": seq.total_duration,
            "forward_magnitudes": fwd_rep.magnitudes(),
            "reverse_magnitudes": rev_rep.magnitudes(),
            "roundtrip_magnitudes": back_rep.magnitudes(),
            "interior_z_overlap_magnitude": abs(preserved),
            "forward_transfers": fwd_rep.success(),
            "reverse_transfers": rev_rep.success(),
        }
    return report
