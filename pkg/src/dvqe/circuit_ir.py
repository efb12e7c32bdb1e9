"""Gate-list circuits with parameter slots, the layered ansatz, and execution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, sim_core
from .errors import DimensionError

ROTATIONS = ("RX", "RY", "RZ")
FIXED_1Q = {"H": sim_core.HADAMARD, "X": sim_core.PAULI_X, "Z": sim_core.PAULI_Z}
TWO_QUBIT = ("CNOT", "CZ")
KINDS = ROTATIONS + tuple(FIXED_1Q) + TWO_QUBIT
_REAL_KINDS = {"RY", "H", "X", "Z", "CNOT", "CZ"}
_ROT_BATCH = {"RX": sim_core.rx_batch, "RY": sim_core.ry_batch, "RZ": sim_core.rz_batch}
_ROT = {"RX": sim_core.rx, "RY": sim_core.ry, "RZ": sim_core.rz}
_FIXED_STACKS = {k: _kernels.as_gate_stack(v) for k, v in FIXED_1Q.items()}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    angle: float | None = None
    param: int | None = None
    tag: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DimensionError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(qubits) != arity:
            raise DimensionError(f"{self.kind} acts on {arity} qubit(s), got {qubits}")
        if arity == 2 and qubits[0] == qubits[1]:
            raise DimensionError(f"{self.kind} needs distinct qubits, got {qubits}")
        if self.kind in ROTATIONS:
            if (self.angle is None) == (self.param is None):
                raise DimensionError(f"{self.kind} needs exactly one of a fixed angle or a parameter slot")
        elif self.angle is not None or self.param is not None:
            raise DimensionError(f"{self.kind} takes no angle")

    def retarget(self, mapping) -> "Gate":
        return Gate(self.kind, tuple(mapping(q) for q in self.qubits), self.angle, self.param, self.tag)


def ry(qubit: int, *, param: int | None = None, angle: float | None = None) -> Gate:
    return Gate("RY", (qubit,), angle=angle, param=param)


def cnot(control: int, target: int, tag: str | None = None) -> Gate:
    return Gate("CNOT", (control, target), tag=tag)


@dataclass(frozen=True)
class Circuit:
    """Ordered gates over ``n_qubits``.

    ``compute_qubits`` lists, in problem-variable order, the register qubits
    that carry variables; it is ``0..n-1`` unless the circuit was distributed.
    """

    n_qubits: int
    gates: tuple = ()
    n_params: int = 0
    compute_qubits: tuple | None = None

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        if self.n_qubits < 1:
            raise DimensionError(f"circuit needs at least one qubit, got {self.n_qubits}")
        used = set()
        for g in gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise DimensionError(f"{g.kind} on qubit {q} outside a {self.n_qubits}-qubit circuit")
            if g.param is not None:
                if not 0 <= g.param < self.n_params:
                    raise DimensionError(f"parameter slot {g.param} outside 0..{self.n_params - 1}")
                used.add(g.param)
        if len(used) != self.n_params:
            missing = sorted(set(range(self.n_params)) - used)
            raise DimensionError(f"parameter slots never referenced: {missing}")
        cq = tuple(range(self.n_qubits)) if self.compute_qubits is None else tuple(self.compute_qubits)
        if len(set(cq)) != len(cq) or any(not 0 <= q < self.n_qubits for q in cq):
            raise DimensionError(f"invalid compute qubit list {cq}")
        object.__setattr__(self, "compute_qubits", cq)

    @property
    def n_compute(self) -> int:
        return len(self.compute_qubits)

    def is_real(self) -> bool:
        return all(g.kind in _REAL_KINDS for g in self.gates)


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int
    depth: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DimensionError(f"ansatz needs at least one qubit, got {self.n_qubits}")
        if self.depth < 1:
            raise DimensionError(f"ansatz depth must be >= 1, got {self.depth}")


def build_monolithic_ansatz(spec: AnsatzSpec) -> Circuit:
    """Per layer: RY on every qubit, then CNOT(i, i+1) down the chain."""
    n, gates = spec.n_qubits, []
    for layer in range(spec.depth):
        gates.extend(ry(q, param=layer * n + q) for q in range(n))
        gates.extend(cnot(q, q + 1) for q in range(n - 1))
    return Circuit(n, gates, n * spec.depth)


# an ancilla whose |1> probability is below this is exactly |0> up to roundoff
RELEASE_TOL = 1e-20


class _Register:
    """State stack over the currently active qubits, kept in ascending global order.

    Qubits outside ``circuit.compute_qubits`` start in |0> and are only
    materialized while in use. After a fixed single-qubit gate an ancilla
    that is back in |0> is dropped again; this is exact, and anything that
    is not clean stays in the register for the final leak check.
    """

    def __init__(self, circuit: Circuit, batch: int, dtype):
        self.ancillas = set(range(circuit.n_qubits)) - set(circuit.compute_qubits)
        self.active = sorted(circuit.compute_qubits)
        self.psi = np.zeros((batch, 1 << len(self.active)), dtype=dtype)
        self.psi[:, 0] = 1.0

    @property
    def n(self) -> int:
        return len(self.active)

    def pos(self, qubit: int) -> int:
        if qubit not in self.active:
            self._allocate(qubit)
        return self.active.index(qubit)

    def _allocate(self, qubit: int) -> None:
        k = sum(q < qubit for q in self.active)
        B = self.psi.shape[0]
        grown = np.zeros((B, 1 << k, 2, self.psi.shape[1] >> k), dtype=self.psi.dtype)
        grown[:, :, 0, :] = self.psi.reshape(B, 1 << k, -1)
        self.psi = grown.reshape(B, -1)
        self.active.insert(k, qubit)

    def maybe_release(self, qubit: int) -> None:
        if qubit not in self.ancillas:
            return
        k = self.active.index(qubit)
        if _kernels.excited_probability(self.psi, self.n, k) < RELEASE_TOL:
            B = self.psi.shape[0]
            self.psi = np.ascontiguousarray(self.psi.reshape(B, 1 << k, 2, -1)[:, :, 0, :]).reshape(B, -1)
            self.active.pop(k)

    def full(self, n_qubits: int) -> np.ndarray:
        for q in range(n_qubits):
            self.pos(q)
        return self.psi


def _apply(psi: np.ndarray, n: int, g: Gate, pos: list, thetas: np.ndarray) -> None:
    if g.kind in ROTATIONS:
        if g.param is not None:
            U = _ROT_BATCH[g.kind](thetas[:, g.param])
        else:
            U = _ROT[g.kind](g.angle)
        _kernels.apply_1q(psi, n, pos[0], _kernels.as_gate_stack(U).astype(psi.dtype, copy=False))
    elif g.kind in FIXED_1Q:
        _kernels.apply_1q(psi, n, pos[0], _FIXED_STACKS[g.kind].astype(psi.dtype, copy=False))
    elif g.kind == "CNOT":
        _kernels.apply_cnot(psi, n, pos[0], pos[1])
    else:
        _kernels.apply_cz(psi, n, pos[0], pos[1])


def run_batch(circuit: Circuit, thetas, initial: np.ndarray | None = None) -> np.ndarray:
    """Run one circuit for a stack of parameter vectors; returns ``(B, 2**n)`` amplitudes."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    if thetas.shape[1] != circuit.n_params:
        raise DimensionError(f"expected {circuit.n_params} parameters, got {thetas.shape[1]}")
    B, N = thetas.shape[0], circuit.n_qubits
    if initial is not None:
        psi = np.array(np.broadcast_to(np.asarray(initial, dtype=complex), (B, 1 << N)))
        for g in circuit.gates:
            _apply(psi, N, g, list(g.qubits), thetas)
        return psi
    reg = _Register(circuit, B, float if circuit.is_real() else complex)
    for g in circuit.gates:
        pos = [reg.pos(q) for q in g.qubits]
        _apply(reg.psi, reg.n, g, pos, thetas)
        if g.kind in FIXED_1Q:
            reg.maybe_release(g.qubits[0])
    return reg.full(N)


def bind_and_run(circuit: Circuit, theta, initial: sim_core.StateVector | None = None) -> sim_core.StateVector:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != circuit.n_params:
        raise DimensionError(f"expected {circuit.n_params} parameters, got {theta.shape[0]}")
    if initial is not None and initial.n_qubits != circuit.n_qubits:
        raise DimensionError(f"initial state has {initial.n_qubits} qubits, circuit has {circuit.n_qubits}")
    amps = run_batch(circuit, theta[None, :], None if initial is None else initial.amps)
    return sim_core.StateVector(amps[0])


def _format_gate(g: Gate) -> str:
    parts = [g.kind] + [f"q{q}" for q in g.qubits]
    if g.param is not None:
        parts.append(f"theta[{g.param}]")
    elif g.angle is not None:
        parts.append(f"{g.angle:.12g}")
    if g.tag:
        parts.append(g.tag)
    return " ".join(parts)


def render_text(circuit: Circuit, topology=None) -> str:
    """One gate per line, e.g. ``RY q3 theta[5]`` or ``CNOT q3 q5 TG``."""
    lines = [f"# circuit qubits={circuit.n_qubits} params={circuit.n_params} gates={len(circuit.gates)}"]
    if topology is not None:
        lines.extend(f"# q{q} {topology.label(q)}" for q in range(topology.n_total))
    lines.extend(_format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"
