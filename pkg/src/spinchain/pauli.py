"""Exact algebra of Pauli strings and NMR product operators.

Everything is stored at the sigma level: a term is a string of single-spin
Pauli letters (``I``, ``X``, ``Y``, ``Z``), one per spin, with a complex
coefficient.  The NMR product-operator prefactor 2^(w-1) (w = number of
non-identity factors) is applied only at construction and display, so every
product operator carries sigma-level coefficient 1/2:

    I1x          -> 0.5 * X..
    2*I1x*I2z    -> 0.5 * XZ.
    4*I1x*I2y*I3z -> 0.5 * XYZ

Spin indices are 1-based throughout.  All operations are pure functions on
immutable values and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

AXES = ("x", "y", "z")

AXIS_LETTER = {"x": "X", "y": "Y", "z": "Z"}

# Coefficients with magnitude below this are dropped after every collection.
# Evolution rules generate exact zeros contaminated by rounding (e.g. cos of
# a right angle); 1e-14 sits far below every verification tolerance.
PRUNE_THRESHOLD = 1e-14

# sigma_a . sigma_b = phase * sigma_c over the letters I, X, Y, Z.
SINGLE_PRODUCT: dict[tuple[str, str], tuple[complex, str]] = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def check_axis(axis: str) -> str:
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}, expected one of {AXES}")
    return axis


@dataclass(frozen=True)
class PauliString:
    """A tensor product of Pauli letters with a complex coefficient."""

    letters: str
    coeff: complex = 1.0 + 0j

    def __post_init__(self) -> None:
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)}")
        object.__setattr__(self, "coeff", complex(self.coeff))

    @property
    def n(self) -> int:
        return len(self.letters)

    def weight(self) -> int:
        """Number of non-identity letters."""
        return sum(1 for c in self.letters if c != "I")

    def multiply(self, other: "PauliString") -> "PauliString":
        """Matrix product self . other, phase absorbed into the coefficient."""
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        phase = self.coeff * other.coeff
        out = []
        for a, b in zip(self.letters, other.letters):
            p, c = SINGLE_PRODUCT[(a, b)]
            phase *= p
            out.append(c)
        return PauliString("".join(out), phase)

    __mul__ = multiply

    def to_sum(self) -> "OperatorSum":
        return OperatorSum(self.n, {self.letters: self.coeff})

    def __str__(self) -> str:
        return format_term(self.letters, self.coeff)


class OperatorSum:
    """Sparse linear combination of Pauli strings over a fixed chain length.

    Internally a map from letter strings to complex coefficients; terms whose
    coefficient magnitude falls below ``PRUNE_THRESHOLD`` are dropped after
    every collection, so exact zeros never linger as rounding dust.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms=None):
        self.n = int(n)
        self._terms: dict[str, complex] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else terms
            for letters, coeff in items:
                if len(letters) != self.n:
                    raise ValueError(f"term length {len(letters)} != chain length {self.n}")
                self._accumulate(letters, complex(coeff))
            self._prune()

    @classmethod
    def from_strings(cls, *strings: PauliString) -> "OperatorSum":
        if not strings:
            raise ValueError("need at least one Pauli string")
        n = strings[0].n
        return cls(n, [(s.letters, s.coeff) for s in strings])

    def _accumulate(self, letters: str, coeff: complex) -> None:
        cur = self._terms.get(letters)
        if cur is None:
            self._terms[letters] = coeff
        else:
            self._terms[letters] = cur + coeff

    def _prune(self) -> None:
        dead = [k for k, v in self._terms.items() if abs(v) < PRUNE_THRESHOLD]
        for k in dead:
            del self._terms[k]

    # -- container niceties ------------------------------------------------

    def terms(self) -> dict[str, complex]:
        """Copy of the term map."""
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[str, complex]]:
        """Terms sorted by (weight, positions, axis order x<y<z) for display."""
        return sorted(self._terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    def coefficient(self, letters: str) -> complex:
        return self._terms.get(letters, 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OperatorSum)
            and self.n == other.n
            and self._terms == other._terms
        )

    def __hash__(self):
        raise TypeError("OperatorSum is not hashable")

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        self._check_same_length(other)
        out = OperatorSum(self.n)
        out._terms = dict(self._terms)
        for letters, coeff in other._terms.items():
            out._accumulate(letters, coeff)
        out._prune()
        return out

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + (-1.0) * other

    def __neg__(self) -> "OperatorSum":
        return (-1.0) * self

    def __mul__(self, scalar: complex) -> "OperatorSum":
        if isinstance(scalar, OperatorSum):
            return self.multiply(scalar)
        out = OperatorSum(self.n)
        out._terms = {k: v * scalar for k, v in self._terms.items()}
        out._prune()
        return out

    __rmul__ = __mul__

    # -- algebra -------------------------------------------------------------

    def multiply(self, other: "OperatorSum") -> "OperatorSum":
        """Operator product, collected and pruned."""
        self._check_same_length(other)
        out = OperatorSum(self.n)
        for la, ca in self._terms.items():
            for lb, cb in other._terms.items():
                phase = ca * cb
                letters = []
                for a, b in zip(la, lb):
                    p, c = SINGLE_PRODUCT[(a, b)]
                    phase *= p
                    letters.append(c)
                out._accumulate("".join(letters), phase)
        out._prune()
        return out

    def commutator(self, other: "OperatorSum") -> "OperatorSum":
        """AB - BA, collected and pruned."""
        return self.multiply(other) - other.multiply(self)

    def adjoint(self) -> "OperatorSum":
        """Hermitian conjugate; Pauli strings are Hermitian so only the
        coefficients conjugate."""
        out = OperatorSum(self.n)
        out._terms = {k: v.conjugate() for k, v in self._terms.items()}
        return out

    def norm(self) -> float:
        """Coefficient 2-norm, i.e. sqrt(Tr(A^dag A) / 2^n)."""
        return sum(abs(v) ** 2 for v in self._terms.values()) ** 0.5

    def overlap(self, other: "OperatorSum") -> complex:
        """Normalized trace overlap Tr(B^dag A) / sqrt(Tr(A^dag A) Tr(B^dag B)).

        Distinct Pauli strings are trace-orthogonal, so this reduces to a dot
        product of coefficient vectors.  ``self`` plays the role of A.
        """
        self._check_same_length(other)
        na, nb = self.norm(), other.norm()
        if na == 0.0 or nb == 0.0:
            raise ValueError("overlap undefined for a zero operator")
        shared = self._terms.keys() & other._terms.keys()
        acc = sum((other._terms[k].conjugate() * self._terms[k] for k in shared), 0j)
        return acc / (na * nb)

    def max_coeff_diff(self, other: "OperatorSum") -> float:
        """Largest coefficient difference between two sums."""
        self._check_same_length(other)
        keys = self._terms.keys() | other._terms.keys()
        return max(
            (abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) for k in keys),
            default=0.0,
        )

    def _check_same_length(self, other: "OperatorSum") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def __str__(self) -> str:
        return format_operator(self)

    def __repr__(self) -> str:
        return f"OperatorSum({self.n}, {self._terms!r})"


# -- named constructors -------------------------------------------------------


def product_operator(factors, n: int) -> PauliString:
    """Product operator 2^(w-1) * prod I_{k,axis} as a sigma-level string.

    ``factors`` is a list of (position, axis) pairs with distinct positions.
    The 2^(w-1) prefactor combines with the w factors of 1/2 from
    I = sigma/2, so the stored coefficient is 1/2 regardless of weight.
    """
    if not factors:
        raise ValueError("need at least one factor")
    letters = ["I"] * n
    seen = set()
    for pos, axis in factors:
        if not 1 <= pos <= n:
            raise IndexError(f"spin {pos} outside 1..{n}")
        if pos in seen:
            raise ValueError(f"duplicate spin {pos} in product operator")
        seen.add(pos)
        letters[pos - 1] = AXIS_LETTER[check_axis(axis)]
    return PauliString("".join(letters), 0.5)


def spin_op(k: int, axis: str, n: int) -> PauliString:
    """Single-spin operator I_{k,axis}."""
    return product_operator([(k, axis)], n)


def soliton_op(k: int, axis: str, n: int) -> PauliString:
    """Localized soliton product operator at chain position k.

    x family: 2*I(k-2)x*I(k-1)z;  y family: 2*I(k-1)x*I(k)z;
    z family: 4*I(k-2)x*I(k-1)y*I(k)z.  The y operator at position k has the
    same letter string as the x operator at position k+1; both views are the
    same PauliString.
    """
    check_axis(axis)
    if not 3 <= k <= n:
        raise IndexError(f"soliton position {k} outside 3..{n}")
    if axis == "x":
        return product_operator([(k - 2, "x"), (k - 1, "z")], n)
    if axis == "y":
        return product_operator([(k - 1, "x"), (k, "z")], n)
    return product_operator([(k - 2, "x"), (k - 1, "y"), (k, "z")], n)


def ladder_minus(k: int, n: int) -> OperatorSum:
    """Lowering operator I_k^- = I_kx - i*I_ky."""
    return spin_op(k, "x", n).to_sum() - 1j * spin_op(k, "y", n).to_sum()


def soliton_minus(k: int, n: int) -> OperatorSum:
    """Soliton lowering combination at position k (x family - i * y family)."""
    return soliton_op(k, "x", n).to_sum() - 1j * soliton_op(k, "y", n).to_sum()


# -- display -------------------------------------------------------------------


def _term_sort_key(letters: str):
    positions = tuple(i + 1 for i, c in enumerate(letters) if c != "I")
    axes = tuple("XYZ".index(c) for c in letters if c != "I")
    return (len(positions), positions, axes)


def format_number(x: float) -> str:
    """Fixed 12-significant-digit decimal used in all text output."""
    return f"{x:.12g}"


def _clean(a: complex) -> complex:
    """Zero out sub-threshold real/imag dust for display purposes only."""
    re = 0.0 if abs(a.real) < PRUNE_THRESHOLD else a.real
    im = 0.0 if abs(a.imag) < PRUNE_THRESHOLD else a.imag
    return complex(re, im)


def _format_coefficient(a: complex) -> str:
    if a.imag == 0.0:
        return format_number(a.real)
    if a.real == 0.0:
        return f"{format_number(a.imag)}j"
    sign = "+" if a.imag >= 0 else "-"
    return f"({format_number(a.real)}{sign}{format_number(abs(a.imag))}j)"


def format_term(letters: str, coeff: complex) -> str:
    """One term in NMR product-operator notation, e.g. ``2*I1x*I2z``.

    ``coeff`` is the sigma-level coefficient; the displayed product-operator
    amplitude is 2*coeff (the all-identity term displays against E = unity/2).
    """
    w = sum(1 for c in letters if c != "I")
    if w == 0:
        body = "E"
    else:
        parts = [
            f"I{i + 1}{c.lower()}" for i, c in enumerate(letters) if c != "I"
        ]
        body = "*".join(parts)
        if w >= 2:
            body = f"{2 ** (w - 1)}*{body}"
    amp = _clean(2 * coeff)
    if amp == 1:
        return body
    if amp == -1:
        return f"-{body}"
    return f"{_format_coefficient(amp)}*{body}"


def format_operator(op: OperatorSum) -> str:
    """Deterministic rendering of a sum, terms sorted by (weight, position)."""
    items = op.sorted_terms()
    if not items:
        return "0"
    rendered = []
    for i, (letters, coeff) in enumerate(items):
        amp = _clean(2 * coeff)
        if i > 0 and amp.imag == 0.0 and amp.real < 0:
            rendered.append(" - " + format_term(letters, -coeff))
        elif i > 0:
            rendered.append(" + " + format_term(letters, coeff))
        else:
            rendered.append(format_term(letters, coeff))
    return "".join(rendered)
