"""Builders for the named transfer sequences plus the pulse-program format.

Three strategies carry real dynamics:

* ``soliton`` -- encode the spin-1 coherence into a localized three-spin
  correlation, advance it one position per 1/(2J) with a global 90y pulse
  followed by a coupling delay, then decode at the far end.  Total time
  (n+1)/(2J); all three magnetization components transfer.
* ``isotropic`` -- sequential selective isotropic mixing of neighboring
  pairs, each realized as three effective-pair blocks (XX, YY, ZZ) of
  duration 1/(2J).  Total time 3(n-1)/(2J); full transfer.
* ``inept`` -- concatenated single-component transfer through antiphase
  intermediates; n/(2J) total, moves I1x -> Inx only.

``swap13`` (nearest-plus-one indirect swaps) is a timing model only: its
internal pulse sequence is out of scope, so only the published duration
3*sqrt(3)/(2J) per swap enters the comparison tables.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .events import CouplingDelay, EffectivePair, Event, HardPulse, PulseSequence
from .pauli import AXES, format_number

DEG90 = math.radians(90.0)

BUILDER_NAMES = ("soliton", "isotropic", "inept")
TIMING_ONLY_NAMES = ("swap13",)


@dataclass(frozen=True)
class NamedSequence:
    """A built sequence with its exact duration and block structure.

    ``exact_duration`` is in seconds as an exact rational (J is converted to
    an exact binary fraction, so the closed-form timing identities can be
    checked without float rounding).  ``blocks`` partitions the event list
    into labeled stroboscopic segments; snapshots are taken at block
    boundaries.  ``sequence`` is ``None`` for timing-only kinds.
    """

    kind: str
    n: int
    J: float
    sequence: PulseSequence | None
    exact_duration: Fraction
    blocks: tuple[tuple[str, int], ...] = ()
    notes: tuple[str, ...] = field(default=(), compare=False)
    float_duration: float | None = None  # timing-only kinds with irrational times

    @property
    def duration(self) -> float:
        if self.float_duration is not None:
            return self.float_duration
        return float(self.exact_duration)

    def segments(self):
        """Yield (label, events) pairs following the block partition."""
        pos = 0
        for label, count in self.blocks:
            yield label, self.sequence.events[pos:pos + count]
            pos += count


def _delta(J: float) -> tuple[Fraction, float]:
    exact = 1 / (2 * Fraction(J))
    return exact, float(exact)


def build_soliton(n: int, J: float = 1.0) -> NamedSequence:
    """Soliton-encoded full-state transfer, total duration (n+1)/(2J).

    Encoding takes two blocks (selective pulses on spins 1 and 2, each
    followed by a coupling delay), the correlation then advances one position
    per block under a non-selective 90y pulse plus delay, and two final
    blocks decode onto spin n.  The encode stage spans three spins, so
    n >= 3 is required.
    """
    if n < 3:
        raise ValueError("soliton transfer needs at least 3 spins")
    dexact, d = _delta(J)
    events: list[Event] = []
    blocks: list[tuple[str, int]] = []

    def block(label: str, evs: list[Event]) -> None:
        events.extend(evs)
        blocks.append((label, len(evs)))

    block("encode-1", [
        HardPulse((1,), "x", DEG90),
        HardPulse((1,), "y", -DEG90),
        CouplingDelay(d),
    ])
    block("encode-2", [
        HardPulse((1,), "x", DEG90),
        HardPulse((2,), "y", DEG90),
        CouplingDelay(d),
    ])
    # n-2 advancement blocks move the correlation from position 3 to the
    # chain end and hand it to the decoder.
    for step in range(1, n - 1):
        block(f"advance-{step}", [
            HardPulse(None, "y", DEG90),
            CouplingDelay(d),
        ])
    block("decode", [
        HardPulse((n,), "x", -DEG90),
        HardPulse((n - 1,), "y", DEG90),
        CouplingDelay(d),
        HardPulse((n,), "x", -DEG90),
    ])
    seq = PulseSequence(n, tuple(events), name=f"soliton-{n}")
    return NamedSequence("soliton", n, J, seq, (n + 1) * dexact, tuple(blocks))


def build_isotropic_chain(n: int, J: float = 1.0) -> NamedSequence:
    """Sequential selective isotropic mixing, total duration 3(n-1)/(2J).

    Transfer step k exchanges spins k and k+1 through three commuting
    effective-pair blocks (XX, YY, ZZ), each of duration 1/(2J) and
    accumulated angle pi/2; all other couplings are decoupled during the
    step.
    """
    if n < 2:
        raise ValueError("isotropic transfer needs at least 2 spins")
    dexact, d = _delta(J)
    events: list[Event] = []
    blocks: list[tuple[str, int]] = []
    for k in range(1, n):
        for axis in AXES:
            events.append(EffectivePair(k, k + 1, axis, DEG90, d))
            blocks.append((f"mix-{k}-{axis}{axis}", 1))
    seq = PulseSequence(n, tuple(events), name=f"isotropic-{n}")
    return NamedSequence("isotropic", n, J, seq, 3 * (n - 1) * dexact, tuple(blocks))


def build_inept(n: int, J: float = 1.0) -> NamedSequence:
    """Concatenated single-component transfer, total duration n/(2J).

    One leading delay creates the first antiphase term; each of the n-1
    conversion blocks then applies a 90x pulse pair and lets the chain evolve
    for another 1/(2J), which simultaneously completes one transfer and
    prepares the next antiphase term.  Only the x component arrives at spin
    n; y and z do not transfer.
    """
    if n < 2:
        raise ValueError("transfer needs at least 2 spins")
    dexact, d = _delta(J)
    events: list[Event] = [CouplingDelay(d)]
    blocks: list[tuple[str, int]] = [("prep", 1)]
    for k in range(1, n):
        events.extend([
            HardPulse((k,), "x", DEG90),
            HardPulse((k + 1,), "x", DEG90),
            CouplingDelay(d),
        ])
        blocks.append((f"step-{k}", 3))
    seq = PulseSequence(n, tuple(events), name=f"inept-{n}")
    return NamedSequence("inept", n, J, seq, n * dexact, tuple(blocks))


def indirect_swap_parts(n: int) -> tuple[int, int]:
    """Composition of the indirect-swap strategy: (swap count, mixing count).

    Swaps act on spins (k, k+2) and move the state two positions in
    3*sqrt(3)/(2J) each; an even chain length needs one final selective
    isotropic mixing step of 3/(2J) between the last two spins.
    """
    if n < 3:
        raise ValueError("indirect swaps need at least 3 spins")
    if n % 2 == 1:
        return (n - 1) // 2, 0
    return (n - 2) // 2, 1


def indirect_swap_timing(n: int, J: float = 1.0) -> float:
    """Total transfer time of the indirect-swap strategy in seconds."""
    swaps, mixes = indirect_swap_parts(n)
    return (swaps * 3.0 * math.sqrt(3.0) + mixes * 3.0) / (2.0 * J)


def build_timing_only(kind: str, n: int, J: float = 1.0) -> NamedSequence:
    """A duration-only entry (no dynamics) for table rows."""
    if kind != "swap13":
        raise ValueError(f"unknown timing-only kind {kind!r}")
    swaps, mixes = indirect_swap_parts(n)
    # the swap duration carries a factor sqrt(3), so only the float is kept
    return NamedSequence(kind, n, J, None, Fraction(0),
                         notes=(f"{swaps} swaps + {mixes} mixing steps",),
                         float_duration=indirect_swap_timing(n, J))


def build_named(kind: str, n: int, J: float = 1.0) -> NamedSequence:
    if kind == "soliton":
        return build_soliton(n, J)
    if kind == "isotropic":
        return build_isotropic_chain(n, J)
    if kind == "inept":
        return build_inept(n, J)
    raise ValueError(f"unknown builder {kind!r}; expected one of {BUILDER_NAMES}")


def mirror_sequence(seq: PulseSequence, name: str = "") -> PulseSequence:
    """Relabel spins k -> n+1-k (couplings c -> n-c) throughout a sequence."""
    n = seq.n
    if n == 0:
        raise ValueError("cannot mirror a sequence without a spin count")
    out: list[Event] = []
    for ev in seq.events:
        if isinstance(ev, HardPulse):
            targets = ev.targets and tuple(n + 1 - t for t in ev.targets)
            out.append(HardPulse(targets, ev.axis, ev.angle))
        elif isinstance(ev, CouplingDelay):
            active = ev.active and tuple(n - c for c in ev.active)
            out.append(CouplingDelay(ev.duration, active))
        else:
            out.append(EffectivePair(n + 1 - ev.a, n + 1 - ev.b, ev.axis,
                                     ev.angle, ev.duration))
    return PulseSequence(n, tuple(out), name=name or f"mirror({seq.name})")


# -- pulse-program file format --------------------------------------------------
#
# UTF-8 text, one event per line.  '#' starts a comment, blank lines are
# ignored.  An optional leading 'spins <n>' directive pins the chain length
# (emitted by the formatter whenever the sequence references spins).
#
#   pulse <targets> <axis> <angle_deg>     targets = 'all' or '1,3'
#   delay <seconds> [only=<i,j,...>]       1-based coupling indices
#   effpair <a> <b> <axis> <angle_deg> [dur=<seconds>]
#
# Angles are degrees in files and radians internally; negative angles express
# opposite rotation senses.  Numbers are printed with 12 significant digits.


class ParseError(ValueError):
    """Pulse-program syntax error, carrying a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _parse_float(token: str, line: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(line, f"{what} must be a number, got {token!r}") from None


def _parse_index(token: str, line: int, what: str) -> int:
    if not re.fullmatch(r"\d+", token):
        raise ParseError(line, f"{what} must be a positive integer, got {token!r}")
    value = int(token)
    if value < 1:
        raise ParseError(line, f"{what} must be >= 1, got {value}")
    return value


def _parse_index_list(token: str, line: int, what: str) -> tuple[int, ...]:
    parts = token.split(",")
    if not token or any(not p for p in parts):
        raise ParseError(line, f"malformed {what} list {token!r}")
    return tuple(_parse_index(p, line, what) for p in parts)


def parse_sequence(text: str, name: str = "") -> PulseSequence:
    """Parse pulse-program text into a sequence.

    The chain length is taken from the ``spins`` header when present (spin
    and coupling references are then validated against it) and inferred from
    the largest reference otherwise.  Empty text parses to the empty
    sequence.
    """
    events: list[Event] = []
    declared_n: int | None = None
    max_spin = 0

    def check_spins(spins, lineno):
        nonlocal max_spin
        for s in spins:
            if declared_n is not None and s > declared_n:
                raise ParseError(
                    lineno, f"spin {s} outside chain of {declared_n} spins")
            max_spin = max(max_spin, s)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]
        if directive == "spins":
            if events or declared_n is not None:
                raise ParseError(lineno, "'spins' must appear once, before any event")
            if len(args) != 1:
                raise ParseError(lineno, "usage: spins <n>")
            declared_n = _parse_index(args[0], lineno, "spin count")
            if declared_n < 2:
                raise ParseError(lineno, "chain needs at least 2 spins")
            continue
        if directive == "pulse":
            if len(args) != 3:
                raise ParseError(lineno, "usage: pulse <targets> <axis> <angle_deg>")
            if args[0] == "all":
                targets = None
            else:
                targets = _parse_index_list(args[0], lineno, "spin index")
                check_spins(targets, lineno)
            axis = args[1]
            if axis not in AXES:
                raise ParseError(lineno, f"unknown axis {axis!r}")
            angle = math.radians(_parse_float(args[2], lineno, "angle"))
            events.append(HardPulse(targets, axis, angle))
        elif directive == "delay":
            if not args or len(args) > 2:
                raise ParseError(lineno, "usage: delay <seconds> [only=<i,j,...>]")
            duration = _parse_float(args[0], lineno, "duration")
            if duration < 0:
                raise ParseError(lineno, "delay duration must be >= 0")
            active = None
            if len(args) == 2:
                if not args[1].startswith("only="):
                    raise ParseError(lineno, f"unexpected token {args[1]!r}")
                active = _parse_index_list(args[1][5:], lineno, "coupling index")
                if declared_n is not None and max(active) > declared_n - 1:
                    raise ParseError(
                        lineno,
                        f"coupling {max(active)} outside chain of {declared_n} spins")
                check_spins([c + 1 for c in active], lineno)
            events.append(CouplingDelay(duration, active))
        elif directive == "effpair":
            if len(args) not in (4, 5):
                raise ParseError(
                    lineno, "usage: effpair <a> <b> <axis> <angle_deg> [dur=<seconds>]")
            a = _parse_index(args[0], lineno, "spin index")
            b = _parse_index(args[1], lineno, "spin index")
            if a == b:
                raise ParseError(lineno, "effpair spins must differ")
            check_spins((a, b), lineno)
            axis = args[2]
            if axis not in AXES:
                raise ParseError(lineno, f"unknown axis {axis!r}")
            angle = math.radians(_parse_float(args[3], lineno, "angle"))
            duration = 0.0
            if len(args) == 5:
                if not args[4].startswith("dur="):
                    raise ParseError(lineno, f"unexpected token {args[4]!r}")
                duration = _parse_float(args[4][4:], lineno, "duration")
                if duration < 0:
                    raise ParseError(lineno, "effpair duration must be >= 0")
            events.append(EffectivePair(a, b, axis, angle, duration))
        else:
            raise ParseError(lineno, f"unknown directive {directive!r}")
    n = declared_n if declared_n is not None else max_spin
    return PulseSequence(n, tuple(events), name=name)


def _format_targets(targets: tuple[int, ...] | None) -> str:
    return "all" if targets is None else ",".join(str(t) for t in targets)


def format_sequence(seq: PulseSequence) -> str:
    """Canonical text form; parsing it back reproduces the event list.

    Values are printed with 12 significant digits, so any value expressible
    at that precision round-trips exactly and every formatted file is
    byte-stable under format -> parse -> format.
    """
    lines: list[str] = []
    if seq.n > 0:
        lines.append(f"spins {seq.n}")
    for ev in seq.events:
        if isinstance(ev, HardPulse):
            lines.append(
                f"pulse {_format_targets(ev.targets)} {ev.axis} "
                f"{format_number(math.degrees(ev.angle))}"
            )
        elif isinstance(ev, CouplingDelay):
            line = f"delay {format_number(ev.duration)}"
            if ev.active is not None:
                line += f" only={','.join(str(c) for c in ev.active)}"
            lines.append(line)
        else:
            line = (
                f"effpair {ev.a} {ev.b} {ev.axis} "
                f"{format_number(math.degrees(ev.angle))}"
            )
            if ev.duration != 0.0:
                line += f" dur={format_number(ev.duration)}"
            lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
