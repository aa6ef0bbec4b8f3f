"""Coherence transfer through Ising spin chains: simulation and verification.

The package provides exact Pauli-string operator algebra, two evolution
backends (a Heisenberg-picture string engine and a dense-matrix oracle),
builders for the named transfer strategies, echo scheduling for unequal
couplings, and reporting/analysis utilities behind the ``spinchain`` CLI.
"""

from .chain import ChainSpec
from .engine import apply_sequence, evolve_coupling, evolve_effective, rotate
from .events import CouplingDelay, EffectivePair, HardPulse, PulseSequence
from .pauli import (
    OperatorSum,
    PauliString,
    ladder_minus,
    product_operator,
    soliton_minus,
    soliton_op,
    spin_op,
)
from .sequences import (
    NamedSequence,
    build_inept,
    build_isotropic_chain,
    build_soliton,
    format_sequence,
    indirect_swap_timing,
    parse_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "CouplingDelay",
    "EffectivePair",
    "HardPulse",
    "NamedSequence",
    "OperatorSum",
    "PauliString",
    "PulseSequence",
    "apply_sequence",
    "build_inept",
    "build_isotropic_chain",
    "build_soliton",
    "evolve_coupling",
    "evolve_effective",
    "format_sequence",
    "indirect_swap_timing",
    "ladder_minus",
    "parse_sequence",
    "product_operator",
    "rotate",
    "soliton_minus",
    "soliton_op",
    "spin_op",
]
