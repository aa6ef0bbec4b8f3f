"""Heisenberg-picture evolution of operator sums with closed-form rules.

Sign convention, fixed once and validated against the dense backend: every
event conjugates the operator as A -> U A U^dag with U = exp(-i*angle*G) for
generator G.  Under this convention

    rotate(I1z, (1,), "y", pi/2)  ->  +I1x
    evolve_coupling(I1x, 1, J, 1/(2J))  ->  +2*I1y*I2z

Rotations with explicitly negative angles realize the exp(+i...) factors that
appear inside composite propagators.

All rules exploit that a Pauli string h with h^2 = 1 conjugates another
string P as: P unchanged when [h, P] = 0, else cos(2*phi)*P - i*sin(2*phi)*h*P
where phi is the accumulated half-angle of exp(-i*phi*h).
"""

from __future__ import annotations

import math

from .chain import ChainSpec
from .events import CouplingDelay, EffectivePair, HardPulse, PulseSequence
from .pauli import AXIS_LETTER, SINGLE_PRODUCT, OperatorSum, check_axis

# (axis, letter) -> (image letter, sign of the sine branch) for conjugation by
# exp(-i*theta*I_axis): letter -> cos(theta)*letter + sign*sin(theta)*image.
_ROTATION = {
    ("x", "Y"): ("Z", 1.0), ("x", "Z"): ("Y", -1.0),
    ("y", "Z"): ("X", 1.0), ("y", "X"): ("Z", -1.0),
    ("z", "X"): ("Y", 1.0), ("z", "Y"): ("X", -1.0),
}


def _collect(n: int, terms: dict[str, complex]) -> OperatorSum:
    out = OperatorSum(n)
    out._terms = terms
    out._prune()
    return out


def _acc(terms: dict[str, complex], letters: str, coeff: complex) -> None:
    cur = terms.get(letters)
    terms[letters] = coeff if cur is None else cur + coeff


def rotate(op: OperatorSum, targets, axis: str, angle: float) -> OperatorSum:
    """Conjugate by exp(-i*angle*sum_{k in targets} I_{k,axis}).

    ``targets`` is an iterable of 1-based spin positions, or ``None`` for all
    spins.  An empty iterable is a no-op.  Weight is preserved: the rotation
    mixes the two letters transverse to ``axis`` position by position.
    """
    check_axis(axis)
    n = op.n
    if targets is None:
        positions: tuple[int, ...] = tuple(range(1, n + 1))
    else:
        positions = tuple(targets)
        for k in positions:
            if not 1 <= k <= n:
                raise IndexError(f"spin {k} outside 1..{n}")
    c, s = math.cos(angle), math.sin(angle)
    terms = dict(op._terms)
    for k in positions:
        i = k - 1
        new: dict[str, complex] = {}
        for letters, coeff in terms.items():
            rule = _ROTATION.get((axis, letters[i]))
            if rule is None:  # identity letter, or letter parallel to the axis
                _acc(new, letters, coeff)
            else:
                image, sign = rule
                _acc(new, letters, coeff * c)
                _acc(new, letters[:i] + image + letters[i + 1:], coeff * s * sign)
        terms = new
    return _collect(n, terms)


def _unit_string_step(
    terms: dict[str, complex],
    i: int,
    j: int,
    h_i: str,
    h_j: str,
    c: float,
    s: float,
) -> dict[str, complex]:
    """Conjugation by exp(-i*phi*h) for h = h_i at position i times h_j at j.

    ``c``/``s`` are cos/sin of the full angle 2*phi.  A term anticommutes with
    h exactly when an odd number of its two letters at i, j anticommutes with
    the matching h letter.
    """
    new: dict[str, complex] = {}
    for letters, coeff in terms.items():
        la, lb = letters[i], letters[j]
        anti = (la not in ("I", h_i)) + (lb not in ("I", h_j))
        if anti != 1:
            _acc(new, letters, coeff)
            continue
        _acc(new, letters, coeff * c)
        pa, ma = SINGLE_PRODUCT[(h_i, la)]
        pb, mb = SINGLE_PRODUCT[(h_j, lb)]
        phase = -1j * pa * pb
        if i < j:
            image = letters[:i] + ma + letters[i + 1:j] + mb + letters[j + 1:]
        else:
            image = letters[:j] + mb + letters[j + 1:i] + ma + letters[i + 1:]
        _acc(new, image, coeff * s * phase)
    return new


def evolve_coupling(op: OperatorSum, coupling: int, J: float, t: float) -> OperatorSum:
    """Conjugate by exp(-i*2*pi*J*t*I_kz*I_(k+1)z) for coupling index k.

    The accumulated full angle is pi*J*t; t = 1/(2J) converts in-phase and
    antiphase terms into each other completely.  Term weight changes by at
    most one.
    """
    if t < 0:
        raise ValueError("negative evolution time")
    n = op.n
    if not 1 <= coupling <= n - 1:
        raise IndexError(f"coupling {coupling} outside 1..{n - 1}")
    full = math.pi * J * t
    c, s = math.cos(full), math.sin(full)
    i = coupling - 1
    new = _unit_string_step(dict(op._terms), i, i + 1, "Z", "Z", c, s)
    return _collect(n, new)


def evolve_effective(op: OperatorSum, a: int, b: int, axis: str, angle: float) -> OperatorSum:
    """Conjugate by exp(-i*angle*2*I_{a,axis}*I_{b,axis})."""
    check_axis(axis)
    if a == b:
        raise ValueError("effective pair needs two distinct spins")
    n = op.n
    for k in (a, b):
        if not 1 <= k <= n:
            raise IndexError(f"spin {k} outside 1..{n}")
    letter = AXIS_LETTER[axis]
    c, s = math.cos(angle), math.sin(angle)
    new = _unit_string_step(dict(op._terms), a - 1, b - 1, letter, letter, c, s)
    return _collect(n, new)


def apply_event(op: OperatorSum, event, chain: ChainSpec) -> OperatorSum:
    """Apply one sequence event in the Heisenberg picture."""
    if isinstance(event, HardPulse):
        return rotate(op, event.targets, event.axis, event.angle)
    if isinstance(event, CouplingDelay):
        active = event.active or tuple(range(1, chain.n))
        for k in active:
            # ZZ terms all commute, so the per-coupling factors may be applied
            # in any order.
            op = evolve_coupling(op, k, chain.coupling(k), event.duration)
        return op
    if isinstance(event, EffectivePair):
        return evolve_effective(op, event.a, event.b, event.axis, event.angle)
    raise TypeError(f"unknown event type {type(event).__name__}")


def apply_sequence(op: OperatorSum, seq: PulseSequence, chain: ChainSpec) -> OperatorSum:
    """Fold the events of a sequence left to right over the operator."""
    if seq.n not in (0, chain.n):
        raise ValueError(f"sequence is for {seq.n} spins, chain has {chain.n}")
    if op.n != chain.n:
        raise ValueError(f"operator is for {op.n} spins, chain has {chain.n}")
    for event in seq.events:
        op = apply_event(op, event, chain)
    return op
