"""Dense statevector simulator.

Basis index bit ``q`` is the state of qubit ``q``.  Gates are immutable; a
:class:`Circuit` with unbound parameter slots must be bound before it is
applied (see :func:`tritonsim.ansatz.bind`).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from .pauli import PauliSum, PauliTerm, term_expectations

NORM_TOLERANCE = 1e-10


class SimulationError(ValueError):
    pass


@dataclass
class StateVector:
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise SimulationError(
                f"{self.amplitudes.shape[0]} amplitudes cannot describe {self.num_qubits} qubits"
            )

    @classmethod
    def zero(cls, num_qubits: int) -> StateVector:
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> StateVector:
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, num_qubits)

    @classmethod
    def from_bits(cls, bits: str) -> StateVector:
        """``bits[q]`` is the value of qubit ``q``; ``"10"`` is qubit 0 set."""
        return cls.basis(len(bits), sum(int(b) << q for q, b in enumerate(bits)))

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(round(np.log2(amps.shape[0])))
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(amps, n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> StateVector:
        return StateVector(self.amplitudes.copy(), self.num_qubits)


GATE_KINDS = ("RY", "X", "Z", "CZ", "CRY", "CPAULI")


@dataclass(frozen=True)
class Gate:
    """One gate.

    ``controls`` holds ``(qubit, required_value)`` pairs.  An ``RY``/``CRY``
    gate either carries a concrete ``angle`` or a ``param`` slot index.
    ``CPAULI`` applies ``sign * axes`` to ``targets`` when every control matches.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()
    angle: float | None = None
    param: int | None = None
    axes: str = ""
    sign: int = 1

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise SimulationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple((int(q), int(v)) for q, v in self.controls))
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise SimulationError(f"{self.kind} gate repeats a qubit: {qubits}")
        if any(v not in (0, 1) for _, v in self.controls):
            raise SimulationError("control values must be 0 or 1")
        if self.kind in ("RY", "CRY") and (self.angle is None) == (self.param is None):
            raise SimulationError(f"{self.kind} needs exactly one of angle or param")
        if self.kind == "CPAULI":
            if len(self.axes) != len(self.targets) or any(a not in "IXYZ" for a in self.axes):
                raise SimulationError("CPAULI axes must name one Pauli per target")
            if self.sign not in (1, -1):
                raise SimulationError("CPAULI sign must be +1 or -1")
        if self.kind == "CZ" and len(self.targets) != 2:
            raise SimulationError("CZ acts on two qubits")
        if self.kind in ("RY", "X", "Z", "CRY") and len(self.targets) != 1:
            raise SimulationError(f"{self.kind} acts on one target")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls) + self.targets

    @property
    def is_bound(self) -> bool:
        return self.kind not in ("RY", "CRY") or self.angle is not None

    def adjoint(self) -> Gate:
        if self.kind in ("RY", "CRY"):
            if self.angle is None:
                raise SimulationError("cannot invert an unbound rotation")
            return replace(self, angle=-self.angle)
        return self

    @staticmethod
    def ry(qubit: int, angle: float | None = None, param: int | None = None) -> Gate:
        return Gate("RY", (qubit,), angle=angle, param=param)

    @staticmethod
    def x(qubit: int) -> Gate:
        return Gate("X", (qubit,))

    @staticmethod
    def z(qubit: int) -> Gate:
        return Gate("Z", (qubit,))

    @staticmethod
    def cz(a: int, b: int) -> Gate:
        return Gate("CZ", (a, b))

    @staticmethod
    def cry(controls: Sequence[tuple[int, int]], target: int, angle: float) -> Gate:
        return Gate("CRY", (target,), controls=tuple(controls), angle=angle)

    @staticmethod
    def cpauli(controls: Sequence[tuple[int, int]], targets: Sequence[int], axes: str,
               sign: int = 1) -> Gate:
        return Gate("CPAULI", tuple(targets), controls=tuple(controls), axes=axes, sign=sign)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            if any(not 0 <= q < self.num_qubits for q in g.qubits):
                raise SimulationError(f"{g.kind} on {g.qubits} outside {self.num_qubits}-qubit register")
        object.__setattr__(self, "gates", gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise SimulationError("cannot concatenate circuits on different registers")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def adjoint(self) -> Circuit:
        return Circuit(self.num_qubits, tuple(g.adjoint() for g in reversed(self.gates)))

    def shifted(self, offset: int, num_qubits: int) -> Circuit:
        """Relabel every qubit ``q -> q + offset`` inside a larger register."""
        out = []
        for g in self.gates:
            out.append(replace(
                g,
                targets=tuple(q + offset for q in g.targets),
                controls=tuple((q + offset, v) for q, v in g.controls),
            ))
        return Circuit(num_qubits, tuple(out))

    @property
    def num_parameters(self) -> int:
        slots = [g.param for g in self.gates if g.param is not None]
        return max(slots) + 1 if slots else 0

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)


def ry_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


_FIXED = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@lru_cache(maxsize=1024)
def _pair_indices(n: int, target: int, controls: tuple[tuple[int, int], ...]):
    idx = np.arange(2**n)
    keep = ((idx >> target) & 1) == 0
    for q, v in controls:
        keep &= ((idx >> q) & 1) == v
    i0 = idx[keep]
    return i0, i0 | (1 << target)


@lru_cache(maxsize=1024)
def _control_mask(n: int, controls: tuple[tuple[int, int], ...]) -> np.ndarray:
    idx = np.arange(2**n)
    keep = np.ones(2**n, dtype=bool)
    for q, v in controls:
        keep &= ((idx >> q) & 1) == v
    return np.flatnonzero(keep)


def _apply_1q(amps: np.ndarray, n: int, matrix: np.ndarray, target: int, controls) -> None:
    i0, i1 = _pair_indices(n, target, controls)
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    amps[i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def _apply_gate(amps: np.ndarray, n: int, gate: Gate) -> None:
    kind = gate.kind
    if kind in ("RY", "CRY"):
        _apply_1q(amps, n, ry_matrix(gate.angle), gate.targets[0], gate.controls)
    elif kind in ("X", "Z"):
        _apply_1q(amps, n, _FIXED[kind], gate.targets[0], gate.controls)
    elif kind == "CZ":
        a, b = gate.targets
        amps[_control_mask(n, ((a, 1), (b, 1)))] *= -1
    elif kind == "CPAULI":
        label = ["I"] * n
        for q, ax in zip(gate.targets, gate.axes):
            label[q] = ax
        term = PauliTerm(1.0, "".join(label))
        sel = _control_mask(n, gate.controls)
        flipped = term.apply(amps)
        # the Pauli never touches control qubits, so matched indices map onto matched indices
        amps[sel] = gate.sign * flipped[sel]


def apply(circuit: Circuit, state: StateVector) -> StateVector:
    """Return ``U_circuit |state>``; the input is left untouched."""
    if circuit.num_qubits != state.num_qubits:
        raise SimulationError(
            f"{circuit.num_qubits}-qubit circuit applied to {state.num_qubits}-qubit state"
        )
    amps = state.amplitudes.copy()
    for gate in circuit.gates:
        if not gate.is_bound:
            raise SimulationError("circuit has unbound parameter slots; bind it first")
        _apply_gate(amps, circuit.num_qubits, gate)
    return StateVector(amps, state.num_qubits)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary, column ``k`` being the image of basis state ``k``."""
    n = circuit.num_qubits
    if n > 12:
        raise SimulationError("dense unitary limited to 12 qubits")
    cols = [apply(circuit, StateVector.basis(n, k)).amplitudes for k in range(2**n)]
    return np.stack(cols, axis=1)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``."""
    if a.num_qubits != b.num_qubits:
        raise SimulationError("inner product of states on different registers")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def make_rng(seed) -> np.random.Generator:
    """Counter-based (Philox) generator; ``seed`` may be an int, a tuple or a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    elif isinstance(seed, (tuple, list)):
        ss = np.random.SeedSequence([int(s) for s in seed])
    else:
        ss = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def sample_indices(state: StateVector, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``shots`` basis indices by inverse CDF over ``|amplitude|^2``."""
    cdf = np.cumsum(state.probabilities())
    u = rng.random(shots) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)


def sample(state: StateVector, qubits: Sequence[int], shots: int, seed) -> dict[str, int]:
    """Measure ``qubits`` ``shots`` times.

    Keys are bitstrings whose ``k``-th character is the outcome of ``qubits[k]``.
    """
    qubits = list(qubits)
    if not qubits:
        raise SimulationError("no qubits to measure")
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    if any(not 0 <= q < state.num_qubits for q in qubits):
        raise SimulationError("measured qubit outside register")
    idx = sample_indices(state, shots, make_rng(seed))
    code = np.zeros(shots, dtype=np.int64)
    for k, q in enumerate(qubits):
        code |= ((idx >> q) & 1) << k
    values, counts = np.unique(code, return_counts=True)
    out = {
        "".join(str((int(v) >> k) & 1) for k in range(len(qubits))): int(c)
        for v, c in zip(values, counts)
    }
    return dict(sorted(out.items()))


def estimate_expectation(h: PauliSum, state: StateVector, shots_per_term: int,
                         rng: np.random.Generator) -> float:
    """Shot-noise estimate of ``<h>``.

    Measuring a Pauli string in its eigenbasis returns +1 with probability
    ``(1 + <P>) / 2``, so each term's sample mean is drawn as a binomial count.
    """
    exact = np.clip(term_expectations(h, state), -1.0, 1.0)
    plus = rng.binomial(shots_per_term, (1.0 + exact) / 2.0)
    estimates = 2.0 * plus / shots_per_term - 1.0
    coefs = np.array([t.coefficient for t in h.terms])
    return float(h.identity_offset + coefs @ estimates)


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return StateVector(amps / np.linalg.norm(amps), num_qubits)


def tensor(*states: StateVector) -> StateVector:
    """Product state; the first argument occupies the lowest qubits."""
    amps = np.array([1.0 + 0j])
    n = 0
    for s in states:
        amps = np.kron(s.amplitudes, amps)
        n += s.num_qubits
    return StateVector(amps, n)
