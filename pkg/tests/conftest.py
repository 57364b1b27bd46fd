import numpy as np
import pytest

from tritonsim.ansatz import AnsatzSpec, build_ansatz, prepare_state
from tritonsim.oracle import diagonalize
from tritonsim.pauli import build_triton_hamiltonian
from tritonsim.reference import TABLE1

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_label(label):
    """Dense Pauli string, qubit 0 = least significant bit (rightmost kron factor)."""
    out = np.array([[1.0 + 0j]])
    for axis in label:
        out = np.kron(SINGLE[axis], out)
    return out


@pytest.fixture(scope="session")
def hamiltonian():
    return build_triton_hamiltonian(1.0, -7.0)


@pytest.fixture(scope="session")
def spectrum(hamiltonian):
    return diagonalize(hamiltonian)


@pytest.fixture(scope="session")
def table_states():
    circuit = build_ansatz(AnsatzSpec())
    return {k: prepare_state(circuit, v) for k, v in TABLE1.items()}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
