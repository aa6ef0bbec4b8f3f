"""Chain geometry: spin count and nearest-neighbor coupling constants."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class ChainSpec:
    """A linear chain of n spins with couplings J_{k,k+1} in Hz.

    ``couplings[k-1]`` is the constant between spins k and k+1 (1-based
    coupling index k, k = 1..n-1).
    """

    couplings: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "couplings", tuple(float(j) for j in self.couplings))
        if len(self.couplings) < 1:
            raise ValueError("chain needs at least 2 spins (one coupling)")
        if any(j <= 0 for j in self.couplings):
            raise ValueError("all couplings must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.couplings) + 1

    @classmethod
    def uniform(cls, n: int, J: float) -> "ChainSpec":
        """Equal-coupling chain with J_{k-1,k} = J for every pair."""
        if n < 2:
            raise ValueError("chain needs at least 2 spins")
        return cls((float(J),) * (n - 1))

    def is_uniform(self) -> bool:
        return len(set(self.couplings)) == 1

    def coupling(self, k: int) -> float:
        """J between spins k and k+1 (1-based coupling index)."""
        if not 1 <= k <= self.n - 1:
            raise IndexError(f"coupling {k} outside 1..{self.n - 1}")
        return self.couplings[k - 1]

    @classmethod
    def from_json(cls, text: str) -> "ChainSpec":
        """Parse ``{"n": 5, "couplings_hz": [1.0, 2.0, 1.0, 0.5]}``."""
        data = json.loads(text)
        couplings = data.get("couplings_hz")
        if couplings is None:
            raise ValueError("chain JSON needs a 'couplings_hz' array")
        spec = cls(tuple(couplings))
        declared = data.get("n")
        if declared is not None and int(declared) != spec.n:
            raise ValueError(
                f"chain JSON declares n={declared} but has {len(couplings)} couplings"
            )
        return spec

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "couplings_hz": list(self.couplings)})
