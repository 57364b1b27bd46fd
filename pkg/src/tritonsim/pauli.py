"""Weighted Pauli strings and sums.

Qubit ``k`` is bit ``k`` of the basis-state index (qubit 0 is the least
significant bit).  Labels are written with qubit 0 leftmost, so ``"ZIIZ"``
is Z on qubits 0 and 3.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable

import numpy as np

if TYPE_CHECKING:
    from .simulator import StateVector

AXES = "IXYZ"
MAX_DENSE_QUBITS = 12
IMAG_TOLERANCE = 1e-10

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliTerm:
    """``coefficient * axes[0] (x) axes[1] (x) ...`` with a real coefficient."""

    coefficient: float
    axes: str

    def __post_init__(self):
        axes = self.axes.upper()
        if not axes or any(a not in AXES for a in axes):
            raise PauliError(f"invalid Pauli label {self.axes!r}")
        if isinstance(self.coefficient, complex) or np.iscomplexobj(self.coefficient):
            raise PauliError("Pauli coefficients must be real")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @property
    def num_qubits(self) -> int:
        return len(self.axes)

    @classmethod
    def from_sparse(cls, coefficient: float, ops: dict[int, str], num_qubits: int) -> PauliTerm:
        """Build from ``{qubit: axis}``; unlisted qubits carry I."""
        label = ["I"] * num_qubits
        for q, a in ops.items():
            if not 0 <= q < num_qubits:
                raise PauliError(f"qubit {q} outside register of {num_qubits}")
            label[q] = a
        return cls(coefficient, "".join(label))

    def to_dense(self) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        # kron puts its first factor on the most significant bit
        for a in reversed(self.axes):
            out = np.kron(out, _SINGLE[a])
        return self.coefficient * out

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Return ``P |psi>`` for the unit-weight string (coefficient ignored)."""
        flip, phase = _string_action(self.axes)
        out = np.empty_like(amplitudes, dtype=complex)
        out[flip] = phase * amplitudes
        return out

    def __str__(self) -> str:
        return f"{self.coefficient!r} * {self.axes}"


@lru_cache(maxsize=4096)
def _string_action(axes: str) -> tuple[np.ndarray, np.ndarray]:
    # P|i> = phase(i) |i ^ flip_mask>
    n = len(axes)
    idx = np.arange(2**n)
    flip_mask = sum(1 << q for q, a in enumerate(axes) if a in "XY")
    sign_mask = sum(1 << q for q, a in enumerate(axes) if a in "YZ")
    n_y = axes.count("Y")
    parity = np.zeros(2**n, dtype=np.int64)
    masked = idx & sign_mask
    for q in range(n):
        parity ^= (masked >> q) & 1
    phase = (1j) ** n_y * (1 - 2 * parity)
    flip = idx ^ flip_mask
    flip.setflags(write=False)
    phase.setflags(write=False)
    return flip, phase


@dataclass(frozen=True)
class PauliSum:
    """``identity_offset * I + sum(terms)`` on a fixed register."""

    num_qubits: int
    terms: tuple[PauliTerm, ...] = ()
    identity_offset: float = 0.0

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if t.num_qubits != self.num_qubits:
                raise PauliError(
                    f"term {t.axes} acts on {t.num_qubits} qubits, register has {self.num_qubits}"
                )
        if np.iscomplexobj(self.identity_offset):
            raise PauliError("identity offset must be real")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "identity_offset", float(self.identity_offset))

    @classmethod
    def from_terms(cls, terms: Iterable[PauliTerm], identity_offset: float = 0.0,
                   num_qubits: int | None = None) -> PauliSum:
        terms = tuple(terms)
        if num_qubits is None:
            if not terms:
                raise PauliError("register size needed for an empty sum")
            num_qubits = terms[0].num_qubits
        return cls(num_qubits, terms, identity_offset)

    def __add__(self, other: PauliSum) -> PauliSum:
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.num_qubits != self.num_qubits:
            raise PauliError("register sizes differ")
        return PauliSum(self.num_qubits, self.terms + other.terms,
                        self.identity_offset + other.identity_offset)

    def __mul__(self, scalar: float) -> PauliSum:
        scalar = float(scalar)
        return PauliSum(
            self.num_qubits,
            tuple(PauliTerm(scalar * t.coefficient, t.axes) for t in self.terms),
            scalar * self.identity_offset,
        )

    __rmul__ = __mul__

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-1.0) * other

    def simplify(self, atol: float = 0.0) -> PauliSum:
        """Merge repeated labels and drop terms with ``|c| <= atol``."""
        merged: dict[str, float] = {}
        offset = self.identity_offset
        for t in self.terms:
            if set(t.axes) == {"I"}:
                offset += t.coefficient
                continue
            merged[t.axes] = merged.get(t.axes, 0.0) + t.coefficient
        terms = tuple(PauliTerm(c, a) for a, c in merged.items() if abs(c) > atol)
        return PauliSum(self.num_qubits, terms, offset)

    def coefficient_of(self, axes: str) -> float:
        if set(axes) == {"I"}:
            return self.identity_offset + sum(t.coefficient for t in self.terms if t.axes == axes)
        return sum(t.coefficient for t in self.terms if t.axes == axes.upper())

    def __str__(self) -> str:
        return format_pauli_sum(self)


def build_triton_hamiltonian(t: float, u: float) -> PauliSum:
    """Four-qubit spin-isospin Hamiltonian of the fixed-site triton.

    H = 8t + U/2 - 2t sum_k X_k - U/4 (Z_0 Z_3 + Z_1 Z_2) - U/4 sum_{i<j<k} Z_i Z_j Z_k
    """
    n = 4
    terms = [PauliTerm.from_sparse(-2.0 * t, {k: "X"}, n) for k in range(n)]
    for pair in ((0, 3), (1, 2)):
        terms.append(PauliTerm.from_sparse(-u / 4.0, {q: "Z" for q in pair}, n))
    for triple in itertools.combinations(range(n), 3):
        terms.append(PauliTerm.from_sparse(-u / 4.0, {q: "Z" for q in triple}, n))
    return PauliSum(n, tuple(terms), 8.0 * t + u / 2.0)


def _amplitudes(psi) -> np.ndarray:
    return np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)


def expectation(h: PauliSum, psi: StateVector | np.ndarray) -> float:
    """``<psi|h|psi>`` computed string by string on the amplitudes."""
    amps = _amplitudes(psi)
    if amps.shape != (2**h.num_qubits,):
        raise PauliError(
            f"state of length {amps.shape[0]} does not match {h.num_qubits}-qubit operator"
        )
    total = complex(h.identity_offset * np.vdot(amps, amps))
    for term in h.terms:
        total += term.coefficient * np.vdot(amps, term.apply(amps))
    if abs(total.imag) > IMAG_TOLERANCE:
        raise PauliError(f"expectation has imaginary part {total.imag:.3e}; operator not Hermitian")
    return total.real


def term_expectations(h: PauliSum, psi) -> np.ndarray:
    """Per-term ``<P_k>`` for unit-weight strings, in term order."""
    amps = _amplitudes(psi)
    return np.array([np.vdot(amps, t.apply(amps)).real for t in h.terms])


def to_dense(h: PauliSum) -> np.ndarray:
    if h.num_qubits > MAX_DENSE_QUBITS:
        raise PauliError(f"refusing dense matrix for {h.num_qubits} qubits (max {MAX_DENSE_QUBITS})")
    dim = 2**h.num_qubits
    out = h.identity_offset * np.eye(dim, dtype=complex)
    for t in h.terms:
        out += t.to_dense()
    return out


_TERM_RE = re.compile(r"^(?P<coef>[^*]+)\*\s*(?P<label>[IXYZ]+)$")


def format_pauli_sum(h: PauliSum) -> str:
    """One term per line: ``<coef> * <label>``; the offset is written as an all-I term."""
    lines = [f"{h.identity_offset!r} * {'I' * h.num_qubits}"]
    lines.extend(str(t) for t in h.terms)
    return "\n".join(lines)


def parse_pauli_sum(text: str) -> PauliSum:
    """Inverse of :func:`format_pauli_sum`.  Blank lines and ``#`` comments are skipped."""
    terms: list[PauliTerm] = []
    offset = 0.0
    n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _TERM_RE.match(line)
        if not m:
            raise PauliError(f"line {lineno}: cannot parse {raw!r}")
        try:
            coef = float(m["coef"].replace(" ", ""))
        except ValueError:
            raise PauliError(f"line {lineno}: bad coefficient in {raw!r}") from None
        label = m["label"]
        if n is None:
            n = len(label)
        elif len(label) != n:
            raise PauliError(f"line {lineno}: label {label} has wrong length (expected {n})")
        if set(label) == {"I"}:
            offset += coef
        else:
            terms.append(PauliTerm(coef, label))
    if n is None:
        raise PauliError("no terms found")
    return PauliSum(n, tuple(terms), offset)


def pauli_basis_decomposition(matrix: np.ndarray) -> dict[str, complex]:
    """Coefficients ``Tr(P M) / 2^n`` for every Pauli label (nonzero only)."""
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    n = int(round(np.log2(dim)))
    if matrix.shape != (dim, dim) or 2**n != dim:
        raise PauliError("matrix must be square with power-of-two dimension")
    out = {}
    for label in map("".join, itertools.product(AXES, repeat=n)):
        c = np.trace(PauliTerm(1.0, label).to_dense() @ matrix) / dim
        if abs(c) > 1e-14:
            out[label] = c
    return out

