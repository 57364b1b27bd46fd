"""Two-level excitation operator: first quantisation, Jordan-Wigner image and subspace form.

Mode ``p`` is occupied when qubit ``p`` is ``|1>``.  The single-particle
subspace is spanned by ``|q0=1, q1=0>`` (mode 0, the ground level) and
``|q0=0, q1=1>`` (mode 1, the excited level); in basis-index terms these
are indices 1 and 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .pauli import PauliSum, PauliTerm, pauli_basis_decomposition, to_dense

SUBSPACE = (1, 2)
LEAKAGE = (0, 3)
TOL = 1e-12

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)


class ExcitationError(ValueError):
    pass


@dataclass(frozen=True)
class ExcitationCoefficients:
    """``alpha I + beta X + delta Y + gamma Z`` on the (ground, excited) pair."""

    alpha: float
    beta: float
    gamma: float
    delta: float = 0.0
    theta: float = 0.0
    phi: float = 0.0
    mapping: str = ""

    def matrix(self) -> np.ndarray:
        return self.alpha * _I2 + self.beta * _X + self.delta * _Y + self.gamma * _Z

    @property
    def one_norm(self) -> float:
        return abs(self.alpha) + abs(self.beta) + abs(self.gamma) + abs(self.delta)


@dataclass(frozen=True)
class RestrictedOperator:
    pauli: PauliSum
    matrix: np.ndarray  # 2x2 action on (mode 0, mode 1)


def annihilation_operators(num_modes: int) -> list[np.ndarray]:
    """Dense ``c_p`` under Jordan-Wigner: ``Z_0 ... Z_{p-1} (X_p + i Y_p) / 2``."""
    lower = (_X + 1j * _Y) / 2  # |0><1|
    ops = []
    for p in range(num_modes):
        factors = [_Z] * p + [lower] + [_I2] * (num_modes - p - 1)
        out = np.array([[1.0 + 0j]])
        for f in reversed(factors):
            out = np.kron(out, f)
        ops.append(out)
    return ops


def _pauli_sum_from_dense(matrix: np.ndarray) -> PauliSum:
    n = int(round(np.log2(matrix.shape[0])))
    coeffs = pauli_basis_decomposition(matrix)
    if any(abs(c.imag) > TOL for c in coeffs.values()):
        raise ExcitationError("operator is not Hermitian")
    identity = "I" * n
    terms = tuple(PauliTerm(c.real, label) for label, c in coeffs.items()
                  if label != identity and abs(c.real) > TOL)
    return PauliSum(n, terms, coeffs.get(identity, 0.0).real)


def jordan_wigner_two_mode(h) -> PauliSum:
    """Qubit image of ``sum_pq h[p, q] c_p^dag c_q`` for a 2x2 Hermitian ``h``."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise ExcitationError("expected a 2x2 matrix")
    if np.max(np.abs(h - h.conj().T)) > TOL:
        raise ExcitationError("single-particle matrix is not Hermitian")
    c = annihilation_operators(2)
    dense = sum(h[p, q] * c[p].conj().T @ c[q] for p in range(2) for q in range(2))
    return _pauli_sum_from_dense(dense)


def subspace_matrix(op: PauliSum) -> np.ndarray:
    dense = to_dense(op)
    return dense[np.ix_(SUBSPACE, SUBSPACE)]


def leakage(op: PauliSum) -> float:
    """Largest matrix element between the single-particle subspace and its complement."""
    dense = to_dense(op)
    return float(max(np.max(np.abs(dense[np.ix_(LEAKAGE, SUBSPACE)])),
                     np.max(np.abs(dense[np.ix_(SUBSPACE, LEAKAGE)]))))


def restricted_form(matrix) -> PauliSum:
    """Canonical 2-qubit operator acting as ``matrix`` on the subspace.

    ``m = a I + b X + d Y + c Z`` becomes
    ``a + (c/2)(Z1 - Z0) + (b/2)(X0X1 + Y0Y1) + (d/2)(X0Y1 - Y0X1)``.
    """
    m = np.asarray(matrix, dtype=complex)
    a = (m[0, 0] + m[1, 1]).real / 2
    c = (m[0, 0] - m[1, 1]).real / 2
    b = m[1, 0].real
    d = m[1, 0].imag
    spec = [(-c / 2, "ZI"), (c / 2, "IZ"), (b / 2, "XX"), (b / 2, "YY"),
            (d / 2, "XY"), (-d / 2, "YX")]
    terms = tuple(PauliTerm(v, label) for v, label in spec if v != 0.0)
    return PauliSum(2, terms, a)


def restrict_to_subspace(op: PauliSum) -> RestrictedOperator:
    if op.num_qubits != 2:
        raise ExcitationError("expected a 2-qubit operator")
    if leakage(op) > TOL:
        raise ExcitationError("operator couples the single-particle subspace to |00> or |11>")
    m = subspace_matrix(op)
    if np.max(np.abs(m - m.conj().T)) > TOL:
        raise ExcitationError("operator is not Hermitian on the subspace")
    return RestrictedOperator(restricted_form(m), m)


def excitation_operator(coeffs: ExcitationCoefficients) -> RestrictedOperator:
    return restrict_to_subspace(jordan_wigner_two_mode(coeffs.matrix()))


def single_z_form(alpha: float, beta: float, gamma: float) -> PauliSum:
    """``alpha + gamma Z0 + (beta/2)(X0X1 + Y0Y1)``."""
    terms = (PauliTerm(gamma, "ZI"), PauliTerm(beta / 2, "XX"), PauliTerm(beta / 2, "YY"))
    return PauliSum(2, terms, alpha)


def antisymmetric_z_form(alpha: float, beta: float, gamma: float) -> PauliSum:
    """``alpha + (gamma/2)(Z0 - Z1) + (beta/2)(X0X1 + Y0Y1)``."""
    terms = (PauliTerm(gamma / 2, "ZI"), PauliTerm(-gamma / 2, "IZ"),
             PauliTerm(beta / 2, "XX"), PauliTerm(beta / 2, "YY"))
    return PauliSum(2, terms, alpha)


# ---------------------------------------------------------------- mappings

Mapping = Callable[[float, float, float], tuple[float, float, float, float]]


def _dipole_axis(theta: float, phi: float, alpha0: float):
    return alpha0, np.sin(theta) * np.cos(phi), np.cos(theta), np.sin(theta) * np.sin(phi)


def _deuteron(theta: float, phi: float, alpha0: float):
    return alpha0, np.sin(theta) * np.cos(phi), -alpha0, np.sin(theta) * np.sin(phi)


MAPPINGS: dict[str, Mapping] = {
    "dipole-axis": _dipole_axis,
    "deuteron": _deuteron,
}


def register_mapping(name: str, fn: Mapping) -> None:
    """Add a mapping ``(theta, phi, alpha0) -> (alpha, beta, gamma, delta)``."""
    MAPPINGS[name] = fn


def coefficients_from_angle(theta: float, phi: float = 0.0, mapping: str = "dipole-axis",
                            alpha0: float = 1.0) -> ExcitationCoefficients:
    try:
        fn = MAPPINGS[mapping]
    except KeyError:
        raise ExcitationError(
            f"unknown mapping {mapping!r}; known: {', '.join(sorted(MAPPINGS))}"
        ) from None
    alpha, beta, gamma, delta = (float(v) for v in fn(theta, phi, alpha0))
    return ExcitationCoefficients(alpha, beta, gamma, delta, float(theta), float(phi), mapping)
