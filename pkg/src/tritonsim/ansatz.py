"""Hardware-efficient ansatz: blocks of RY rotations followed by a CZ ring."""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .simulator import Circuit, Gate, SimulationError, StateVector, apply


class AnsatzError(ValueError):
    pass


@dataclass(frozen=True)
class AnsatzSpec:
    num_qubits: int = 4
    num_blocks: int = 4

    def __post_init__(self):
        if self.num_qubits < 2:
            raise AnsatzError("circular entanglement needs at least two qubits")
        if self.num_blocks < 1:
            raise AnsatzError("need at least one block")

    @property
    def num_parameters(self) -> int:
        return self.num_blocks * self.num_qubits


def ring_pairs(qubit_count: int) -> list[tuple[int, int]]:
    """CZ pairs (0,1), (1,2), ..., (n-1,0), each unordered pair once."""
    pairs, seen = [], set()
    for q in range(qubit_count):
        pair = (q, (q + 1) % qubit_count)
        key = frozenset(pair)
        if key not in seen:
            seen.add(key)
            pairs.append(pair)
    return pairs


def build_block(qubit_count: int, param_offset: int = 0) -> Circuit:
    if qubit_count < 2:
        raise AnsatzError("circular entanglement needs at least two qubits")
    gates = [Gate.ry(q, param=param_offset + q) for q in range(qubit_count)]
    gates += [Gate.cz(a, b) for a, b in ring_pairs(qubit_count)]
    return Circuit(qubit_count, tuple(gates))


def build_ansatz(spec: AnsatzSpec = AnsatzSpec()) -> Circuit:
    """``num_blocks`` blocks; slot ``k`` of block ``b`` is parameter ``b * num_qubits + k``."""
    circuit = Circuit(spec.num_qubits)
    for b in range(spec.num_blocks):
        circuit = circuit + build_block(spec.num_qubits, b * spec.num_qubits)
    return circuit


def bind(circuit: Circuit, theta) -> Circuit:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size != circuit.num_parameters:
        raise AnsatzError(
            f"expected {circuit.num_parameters} parameters, got {theta.size}"
        )
    gates = tuple(
        replace(g, angle=float(theta[g.param]), param=None) if g.param is not None else g
        for g in circuit.gates
    )
    return Circuit(circuit.num_qubits, gates)


def prepare_state(circuit: Circuit, theta) -> StateVector:
    """Bind ``theta`` and run the circuit on ``|0...0>``."""
    return apply(bind(circuit, theta), StateVector.zero(circuit.num_qubits))


def circuit_to_dict(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        entry = {"name": g.kind, "targets": list(g.targets)}
        if g.controls:
            entry["controls"] = [[q, v] for q, v in g.controls]
        if g.angle is not None:
            entry["angle"] = g.angle
        if g.param is not None:
            entry["param"] = g.param
        if g.kind == "CPAULI":
            entry["axes"] = g.axes
            entry["sign"] = g.sign
        gates.append(entry)
    return {"num_qubits": circuit.num_qubits, "gates": gates}


def circuit_from_dict(data: dict) -> Circuit:
    try:
        gates = tuple(
            Gate(
                e["name"],
                tuple(e["targets"]),
                controls=tuple(tuple(c) for c in e.get("controls", ())),
                angle=e.get("angle"),
                param=e.get("param"),
                axes=e.get("axes", ""),
                sign=e.get("sign", 1),
            )
            for e in data["gates"]
        )
        return Circuit(int(data["num_qubits"]), gates)
    except (KeyError, TypeError, SimulationError) as exc:
        raise AnsatzError(f"malformed circuit description: {exc}") from exc


def circuit_to_json(circuit: Circuit) -> str:
    return json.dumps(circuit_to_dict(circuit), indent=1)


def circuit_from_json(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))
