"""Dense-matrix oracle backend for cross-validating the string engine.

Every event propagator has a closed form: hard pulses are tensor products of
2x2 rotations, coupling delays are diagonal in the computational basis, and
effective pair blocks follow from h^2 = 1.  No general matrix exponential is
used anywhere.

The oracle is capped at a configurable spin count (default 12, i.e. a
4096 x 4096 propagator) so a stray call cannot exhaust memory; the cap can be
moved with the SPINCHAIN_ORACLE_MAX environment variable or per call.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .chain import ChainSpec
from .engine import apply_sequence
from .events import CouplingDelay, EffectivePair, HardPulse, PulseSequence
from .pauli import AXIS_LETTER, OperatorSum

ORACLE_MAX_DEFAULT = 12
ORACLE_MAX_ENV = "SPINCHAIN_ORACLE_MAX"

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class OracleLimitError(RuntimeError):
    """Chain too long for the dense oracle."""


def oracle_limit(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(ORACLE_MAX_ENV)
    return int(env) if env else ORACLE_MAX_DEFAULT


def _check_limit(n: int, max_spins: int | None) -> None:
    limit = oracle_limit(max_spins)
    if n > limit:
        raise OracleLimitError(
            f"dense oracle limited to {limit} spins (requested {n}); "
            f"raise with --oracle-max-spins or {ORACLE_MAX_ENV}"
        )


def string_matrix(letters: str) -> np.ndarray:
    """Kronecker product of single-spin Pauli matrices, spin 1 leftmost."""
    out = SIGMA[letters[0]]
    for c in letters[1:]:
        out = np.kron(out, SIGMA[c])
    return out


def dense_operator(op: OperatorSum) -> np.ndarray:
    """2^n x 2^n matrix of an operator sum."""
    dim = 1 << op.n
    out = np.zeros((dim, dim), dtype=complex)
    for letters, coeff in op.terms().items():
        out += coeff * string_matrix(letters)
    return out


def _z_columns(n: int) -> np.ndarray:
    """z eigenvalues (+-1) per spin for every basis index; shape (2^n, n)."""
    idx = np.arange(1 << n)
    shifts = np.arange(n - 1, -1, -1)  # spin k sits at bit n-k
    return 1 - 2 * ((idx[:, None] >> shifts[None, :]) & 1)


def event_propagator(event, chain: ChainSpec) -> np.ndarray:
    n = chain.n
    if isinstance(event, HardPulse):
        targets = set(event.targets or range(1, n + 1))
        half = event.angle / 2.0
        rot = math.cos(half) * SIGMA["I"] - 1j * math.sin(half) * SIGMA[AXIS_LETTER[event.axis]]
        out = rot if 1 in targets else SIGMA["I"]
        for k in range(2, n + 1):
            out = np.kron(out, rot if k in targets else SIGMA["I"])
        return out
    if isinstance(event, CouplingDelay):
        z = _z_columns(n)
        phase = np.zeros(1 << n)
        for k in event.active or range(1, n):
            J = chain.coupling(k)
            # exponent of exp(-i*2*pi*J*t*I_z I_z); I_z I_z = sigma_z sigma_z / 4
            phase += 2 * math.pi * J * event.duration * 0.25 * (z[:, k - 1] * z[:, k])
        return np.diag(np.exp(-1j * phase))
    if isinstance(event, EffectivePair):
        letters = ["I"] * n
        letters[event.a - 1] = AXIS_LETTER[event.axis]
        letters[event.b - 1] = AXIS_LETTER[event.axis]
        h = string_matrix("".join(letters))
        half = event.angle / 2.0  # exp(-i*angle*2 I I) = exp(-i*(angle/2)*h)
        return math.cos(half) * np.eye(1 << n) - 1j * math.sin(half) * h
    raise TypeError(f"unknown event type {type(event).__name__}")


def dense_propagator(
    seq: PulseSequence, chain: ChainSpec, max_spins: int | None = None
) -> np.ndarray:
    """Ordered product of event propagators (first event rightmost)."""
    _check_limit(chain.n, max_spins)
    if seq.n not in (0, chain.n):
        raise ValueError(f"sequence is for {seq.n} spins, chain has {chain.n}")
    U = np.eye(1 << chain.n, dtype=complex)
    for event in seq.events:
        U = event_propagator(event, chain) @ U
    return U


def conjugate(U: np.ndarray, A: np.ndarray) -> np.ndarray:
    return U @ A @ U.conj().T


def phase_aligned_residual(U: np.ndarray, V: np.ndarray) -> float:
    """Max-norm distance of two unitaries after removing a global phase.

    Echo pulses contribute a scalar per spin (even powers of -i*sigma_x), so
    a scheduled interval should match its ideal propagator up to exactly such
    a phase.
    """
    i, j = np.unravel_index(int(np.argmax(np.abs(V))), V.shape)
    phase = U[i, j] / V[i, j]
    phase /= abs(phase)
    return float(np.max(np.abs(U - phase * V)))


def backend_agreement(
    seq: PulseSequence,
    chain: ChainSpec,
    op: OperatorSum,
    max_spins: int | None = None,
) -> float:
    """Max-norm difference between string-engine and dense-oracle evolution."""
    _check_limit(chain.n, max_spins)
    evolved = apply_sequence(op, seq, chain)
    U = dense_propagator(seq, chain, max_spins=max_spins)
    reference = conjugate(U, dense_operator(op))
    return float(np.max(np.abs(dense_operator(evolved) - reference)))
