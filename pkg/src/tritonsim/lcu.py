"""Linear combination of unitaries for the two-level excitation operator.

Register layout: target qubits 0 and 1, ancilla qubits 2, 3, 4.  The ancilla
value ``j`` (qubit 2 is its least significant bit) selects one Pauli string.
The prepare tree rotates the most significant ancilla first.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .excitation import ExcitationCoefficients, RestrictedOperator, coefficients_from_angle, excitation_operator
from .oracle import exact_transition
from .pauli import PauliSum, PauliTerm, to_dense
from .simulator import Circuit, Gate, StateVector, apply, circuit_unitary, sample
from .variational import parallel_map, task_seed

NUM_TARGETS = 2
NUM_ANCILLAS = 3
TARGETS = (0, 1)
ANCILLAS = (2, 3, 4)
INITIAL_TARGET = "10"  # ground level: mode 0 occupied
EXCITED_TARGET = "01"
ZERO_TOL = 1e-14

# ancilla value for each canonical string; slot 1 is left empty so the
# first rotation separates the diagonal part from the hopping part
SLOTS = {"II": 0, "ZI": 2, "IZ": 3, "XX": 4, "YY": 5, "XY": 6, "YX": 7}


class LcuError(ValueError):
    pass


@dataclass(frozen=True)
class UnitaryEntry:
    weight: float  # mu > 0
    axes: str
    sign: int
    slot: int


@dataclass(frozen=True)
class UnitaryDecomposition:
    entries: tuple[UnitaryEntry, ...]
    num_ancillas: int = NUM_ANCILLAS

    def __post_init__(self):
        slots = [e.slot for e in self.entries]
        if len(set(slots)) != len(slots):
            raise LcuError("two entries share an ancilla slot")
        if any(not 0 <= s < 2**self.num_ancillas for s in slots):
            raise LcuError("slot outside the ancilla register")
        if any(e.weight <= 0 for e in self.entries):
            raise LcuError("weights must be positive")

    @property
    def lambda_norm(self) -> float:
        return float(sum(e.weight for e in self.entries))

    def weights(self) -> np.ndarray:
        w = np.zeros(2**self.num_ancillas)
        for e in self.entries:
            w[e.slot] = e.weight
        return w

    def operator(self) -> PauliSum:
        terms = [PauliTerm(e.sign * e.weight, e.axes) for e in self.entries if set(e.axes) != {"I"}]
        offset = sum(e.sign * e.weight for e in self.entries if set(e.axes) == {"I"})
        return PauliSum(NUM_TARGETS, tuple(terms), offset)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, str]], num_ancillas: int = NUM_ANCILLAS):
        """Entries in the given order, one slot each; zero coefficients are dropped."""
        entries = []
        for coef, axes in terms:
            if abs(coef) > ZERO_TOL:
                entries.append(UnitaryEntry(abs(coef), axes, 1 if coef > 0 else -1, len(entries)))
        if not entries:
            raise LcuError("operator is zero")
        return cls(tuple(entries), num_ancillas)


def decompose(op: RestrictedOperator | PauliSum) -> UnitaryDecomposition:
    """Signed, positively weighted Pauli strings in canonical slots."""
    pauli = op.pauli if isinstance(op, RestrictedOperator) else op
    if pauli.num_qubits != NUM_TARGETS:
        raise LcuError("expected a 2-qubit operator")
    pieces = [(pauli.identity_offset, "II")] + [(t.coefficient, t.axes) for t in pauli.simplify().terms]
    entries = []
    for coef, axes in pieces:
        if abs(coef) <= ZERO_TOL:
            continue
        if axes not in SLOTS:
            raise LcuError(f"no slot for Pauli string {axes}")
        entries.append(UnitaryEntry(abs(coef), axes, 1 if coef > 0 else -1, SLOTS[axes]))
    if not entries:
        raise LcuError("operator is zero")
    return UnitaryDecomposition(tuple(sorted(entries, key=lambda e: e.slot)))


def build_prepare(decomp: UnitaryDecomposition) -> Circuit:
    """Binary tree of (zero/one-controlled) RY gates on a local ancilla register.

    Maps ``|0...0>`` to ``sum_j sqrt(mu_j / lambda) |j>``.
    """
    m = decomp.num_ancillas
    w = decomp.weights()
    gates = []
    for level in range(m):
        qubit = m - 1 - level
        span = 2 ** (qubit + 1)
        for prefix in range(2**level):
            lo = prefix * span
            w0 = w[lo: lo + span // 2].sum()
            w1 = w[lo + span // 2: lo + span].sum()
            if w1 == 0.0:
                continue
            angle = 2.0 * math.atan2(math.sqrt(w1), math.sqrt(w0))
            controls = tuple((m - 1 - k, (prefix >> (level - 1 - k)) & 1) for k in range(level))
            gates.append(Gate.cry(controls, qubit, angle) if controls else Gate.ry(qubit, angle))
    return Circuit(m, tuple(gates))


def build_select(decomp: UnitaryDecomposition) -> Circuit:
    """``sum_j |j><j| (x) sign_j P_j`` on targets 0-1 and ancillas 2-4."""
    n = NUM_TARGETS + decomp.num_ancillas
    gates = []
    for e in decomp.entries:
        if set(e.axes) == {"I"} and e.sign == 1:
            continue
        controls = tuple((NUM_TARGETS + b, (e.slot >> b) & 1) for b in range(decomp.num_ancillas))
        gates.append(Gate.cpauli(controls, TARGETS, e.axes, e.sign))
    return Circuit(n, tuple(gates))


def lcu_circuit(decomp: UnitaryDecomposition) -> Circuit:
    n = NUM_TARGETS + decomp.num_ancillas
    prep = build_prepare(decomp).shifted(NUM_TARGETS, n)
    return prep + build_select(decomp) + prep.adjoint()


def lcu_block(decomp: UnitaryDecomposition) -> np.ndarray:
    """Target-space block of the circuit with ancillas in and out of ``|0>``.

    Equals ``operator / lambda_norm``.
    """
    u = circuit_unitary(lcu_circuit(decomp))
    dim = 2**NUM_TARGETS
    return u[:dim, :dim]


def output_state(decomp: UnitaryDecomposition, target_bits: str = INITIAL_TARGET) -> StateVector:
    bits = target_bits + "0" * decomp.num_ancillas
    return apply(lcu_circuit(decomp), StateVector.from_bits(bits))


@dataclass
class LcuEstimate:
    shots: int
    successes: int
    transitions: int
    coefficients: ExcitationCoefficients | None = None
    lambda_norm: float = float("nan")
    counts: dict = field(default_factory=dict, repr=False)

    @property
    def p_success(self) -> float:
        return self.successes / self.shots

    @property
    def p_transition(self) -> float:
        return self.transitions / self.successes if self.successes else float("nan")

    @property
    def se_success(self) -> float:
        p = self.p_success
        return math.sqrt(p * (1 - p) / self.shots)

    @property
    def se_transition(self) -> float:
        if not self.successes:
            return float("nan")
        p = self.p_transition
        return math.sqrt(p * (1 - p) / self.successes)

    @property
    def undefined(self) -> bool:
        """No post-selected shots, so the transition probability is undefined."""
        return self.successes == 0


def run_lcu(decomp: UnitaryDecomposition, shots: int, seed=0,
            coefficients: ExcitationCoefficients | None = None) -> LcuEstimate:
    """Sample the LCU output; success means every ancilla reads 0."""
    if shots < 1:
        raise LcuError("shots must be >= 1")
    psi = output_state(decomp)
    n = psi.num_qubits
    counts = sample(psi, range(n), shots, seed)
    zeros = "0" * decomp.num_ancillas
    successes = sum(c for k, c in counts.items() if k[NUM_TARGETS:] == zeros)
    transitions = sum(c for k, c in counts.items()
                      if k[NUM_TARGETS:] == zeros and k[:NUM_TARGETS] == EXCITED_TARGET)
    return LcuEstimate(shots, successes, transitions, coefficients, decomp.lambda_norm, counts)


def estimate_point(coeffs: ExcitationCoefficients, shots: int, seed=0) -> LcuEstimate:
    decomp = decompose(excitation_operator(coeffs))
    return run_lcu(decomp, shots, seed, coeffs)


def _point_task(args) -> LcuEstimate:
    theta, phi, mapping, alpha0, shots, seed = args
    return estimate_point(coefficients_from_angle(theta, phi, mapping, alpha0), shots, seed)


def sweep(thetas: Sequence[float], phi: float = 0.0, mapping: str = "dipole-axis",
          alpha0: float = 1.0, shots: int = 10_000, seed=0, jobs: int = 1) -> list[LcuEstimate]:
    """Polar sweep; point ``i`` uses seed ``(seed, i, 0)``.

    With the same seed this matches the first azimuthal column of :func:`sweep3d`.
    """
    tasks = [(t, phi, mapping, alpha0, shots, task_seed(seed, i, 0)) for i, t in enumerate(thetas)]
    return parallel_map(_point_task, tasks, jobs)


def sweep3d(thetas: Sequence[float], phis: Sequence[float], mapping: str = "dipole-axis",
            alpha0: float = 1.0, shots: int = 10_000, seed=0, jobs: int = 1) -> list[LcuEstimate]:
    """Full grid, theta-major; point ``(i, j)`` uses seed ``(seed, i, j)``."""
    tasks = [(t, p, mapping, alpha0, shots, task_seed(seed, i, j))
             for i, t in enumerate(thetas) for j, p in enumerate(phis)]
    return parallel_map(_point_task, tasks, jobs)


def oracle_check(est: LcuEstimate, nsigma: float = 3.0) -> dict:
    """Compare an estimate with the closed form at ``nsigma`` binomial standard deviations.

    The deviation scale uses the exact probabilities, so a point whose exact
    value is 0 or 1 must be matched exactly.
    """
    p_s, p_t = exact_transition(est.coefficients)
    sd_s = math.sqrt(max(p_s * (1 - p_s), 0.0) / est.shots)
    ok_s = abs(est.p_success - p_s) <= nsigma * sd_s + 1e-12
    if est.undefined or math.isnan(p_t):
        ok_t = None
    else:
        sd_t = math.sqrt(max(p_t * (1 - p_t), 0.0) / est.successes)
        ok_t = abs(est.p_transition - p_t) <= nsigma * sd_t + 1e-12
    return {"p_success": p_s, "p_transition": p_t, "success_ok": ok_s, "transition_ok": ok_t}


CSV_COLUMNS = ("theta_rad", "phi_rad", "alpha", "beta", "gamma", "delta", "lambda_norm",
               "shots", "successes", "transitions", "p_success", "p_transition",
               "se_success", "se_transition")


def sweep_rows(estimates: Sequence[LcuEstimate]) -> list[list]:
    rows = []
    for e in estimates:
        c = e.coefficients
        rows.append([c.theta, c.phi, c.alpha, c.beta, c.gamma, c.delta, e.lambda_norm,
                     e.shots, e.successes, e.transitions, e.p_success, e.p_transition,
                     e.se_success, e.se_transition])
    return rows


def sweep_csv(estimates: Sequence[LcuEstimate], header: Sequence[str] = ()) -> str:
    """CSV text; ``header`` lines are written first as ``# `` comments."""
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in sweep_rows(estimates):
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[dict]:
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(lines)]


def dense_operator(decomp: UnitaryDecomposition) -> np.ndarray:
    return to_dense(decomp.operator())
