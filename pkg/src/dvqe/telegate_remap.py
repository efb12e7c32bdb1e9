"""Monolithic to distributed circuit conversion with TeleGate expansion.

A cross-QPU CNOT(c, t) with communication qubits ``a`` (control side) and
``b`` (target side) becomes, in deferred-measurement form::

    H a; CNOT a b          EPR pair on the comm qubits
    CNOT c a               entangle control with its comm qubit
    CNOT a b               replaces measure(a) + classically controlled X(b)
    CNOT b t               act on the target
    H b; CZ b c            replaces X-basis measure(b) + classically controlled Z(c)
    H a; H b               both comm qubits are |+> here; return them to |0>
"""

from __future__ import annotations

import enum

import numpy as np

from . import sim_core
from .circuit_ir import (
    FIXED_1Q,
    ROTATIONS,
    AnsatzSpec,
    Circuit,
    Gate,
    bind_and_run,
    build_monolithic_ansatz,
)
from .errors import DimensionError
from .topology import Topology

TG = "TG"


class TelegateMode(str, enum.Enum):
    DEFERRED = "deferred"
    STOCHASTIC = "stochastic"


def telegate_cnot(control: int, target: int, comm_control: int, comm_target: int) -> list[Gate]:
    a, b, c, t = comm_control, comm_target, control, target
    return [
        Gate("H", (a,), tag=TG),
        Gate("CNOT", (a, b), tag=TG),
        Gate("CNOT", (c, a), tag=TG),
        Gate("CNOT", (a, b), tag=TG),
        Gate("CNOT", (b, t), tag=TG),
        Gate("H", (b,), tag=TG),
        Gate("CZ", (b, c), tag=TG),
        Gate("H", (a,), tag=TG),
        Gate("H", (b,), tag=TG),
    ]


def _check_sizes(circuit: Circuit, topology: Topology) -> None:
    if circuit.n_qubits != topology.n_compute:
        raise DimensionError(
            f"circuit has {circuit.n_qubits} qubits but topology {topology.config} "
            f"holds {topology.n_compute} compute qubits"
        )


def remap(circuit: Circuit, topology: Topology, mode: TelegateMode | str = TelegateMode.DEFERRED) -> Circuit:
    """Relocate gates onto the joint register and expand every cross-QPU two-qubit gate.

    Both modes produce the same deferred-measurement circuit; ``stochastic``
    only changes how :func:`run_stochastic_telegate` executes it.
    """
    TelegateMode(mode)
    _check_sizes(circuit, topology)
    order = topology.compute_order
    gates: list[Gate] = []
    for g in circuit.gates:
        if len(g.qubits) == 1:
            gates.append(g.retarget(order.__getitem__))
            continue
        u, v = g.qubits
        qa, qb = topology.qpu_of_variable(u), topology.qpu_of_variable(v)
        if qa == qb:
            gates.append(g.retarget(order.__getitem__))
            continue
        c, t = order[u], order[v]
        a, b = topology.comm_indices[qa], topology.comm_indices[qb]
        if g.kind == "CNOT":
            gates.extend(telegate_cnot(c, t, a, b))
        else:
            # CZ(c, t) = H(t) CNOT(c, t) H(t)
            gates.append(Gate("H", (t,), tag=TG))
            gates.extend(telegate_cnot(c, t, a, b))
            gates.append(Gate("H", (t,), tag=TG))
    return Circuit(topology.n_total, gates, circuit.n_params, compute_qubits=order)


def _apply_bound(state: sim_core.StateVector, g: Gate, theta: np.ndarray, mapping) -> sim_core.StateVector:
    qubits = [mapping(q) for q in g.qubits]
    if g.kind in ROTATIONS:
        angle = theta[g.param] if g.param is not None else g.angle
        U = {"RX": sim_core.rx, "RY": sim_core.ry, "RZ": sim_core.rz}[g.kind](angle)
        return sim_core.apply_1q(state, qubits[0], U)
    if g.kind in FIXED_1Q:
        return sim_core.apply_1q(state, qubits[0], FIXED_1Q[g.kind])
    if g.kind == "CNOT":
        return sim_core.apply_cnot(state, *qubits)
    return sim_core.apply_cz(state, *qubits)


def _reset(state: sim_core.StateVector, qubit: int, outcome: int) -> sim_core.StateVector:
    return sim_core.apply_1q(state, qubit, sim_core.PAULI_X) if outcome else state


def _teleported_cnot(state, c, t, a, b, rng):
    state = sim_core.apply_1q(state, a, sim_core.HADAMARD)
    state = sim_core.apply_cnot(state, a, b)
    state = sim_core.apply_cnot(state, c, a)
    m1, state = sim_core.measure(state, a, rng)
    state = _reset(state, a, m1)
    if m1:
        state = sim_core.apply_1q(state, b, sim_core.PAULI_X)
    state = sim_core.apply_cnot(state, b, t)
    state = sim_core.apply_1q(state, b, sim_core.HADAMARD)
    m2, state = sim_core.measure(state, b, rng)
    state = _reset(state, b, m2)
    if m2:
        state = sim_core.apply_1q(state, c, sim_core.PAULI_Z)
    return state


def run_stochastic_telegate(circuit: Circuit, topology: Topology, theta, seed) -> sim_core.StateVector:
    """Execute with real mid-circuit measurements and classical corrections.

    Returns the state on the compute qubits in variable order.
    """
    _check_sizes(circuit, topology)
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != circuit.n_params:
        raise DimensionError(f"expected {circuit.n_params} parameters, got {theta.shape[0]}")
    rng = np.random.default_rng(seed)
    order = topology.compute_order
    state = sim_core.init_zero(topology.n_total)
    for g in circuit.gates:
        if len(g.qubits) == 2:
            u, v = g.qubits
            qa, qb = topology.qpu_of_variable(u), topology.qpu_of_variable(v)
            if qa != qb:
                c, t = order[u], order[v]
                a, b = topology.comm_indices[qa], topology.comm_indices[qb]
                if g.kind == "CZ":
                    state = sim_core.apply_1q(state, t, sim_core.HADAMARD)
                state = _teleported_cnot(state, c, t, a, b, rng)
                if g.kind == "CZ":
                    state = sim_core.apply_1q(state, t, sim_core.HADAMARD)
                continue
        state = _apply_bound(state, g, theta, order.__getitem__)
    return sim_core.extract_subspace(state, list(order))


def run_compute_state(circuit: Circuit, theta) -> sim_core.StateVector:
    """Run a (possibly distributed) circuit and return its compute-qubit state."""
    state = bind_and_run(circuit, theta)
    return sim_core.extract_subspace(state, list(circuit.compute_qubits))


def verify_equivalence(spec: AnsatzSpec, topology: Topology, theta) -> float:
    mono = build_monolithic_ansatz(spec)
    dist = remap(mono, topology)
    return sim_core.fidelity(bind_and_run(mono, theta), run_compute_state(dist, theta))
