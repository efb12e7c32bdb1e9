"""Logical multi-QPU layout.

Register layout: QPU0 compute qubits, QPU0 comm qubit, QPU1 compute qubits,
QPU1 comm qubit, and so on. Problem variable ``i`` is the ``i``-th compute
qubit in that order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, DimensionError


@dataclass(frozen=True)
class Qpu:
    compute_global_indices: tuple
    comm_global_index: int

    @property
    def compute_count(self) -> int:
        return len(self.compute_global_indices)


@dataclass(frozen=True)
class Topology:
    qpus: tuple

    @property
    def n_compute(self) -> int:
        return sum(qpu.compute_count for qpu in self.qpus)

    @property
    def n_total(self) -> int:
        return self.n_compute + len(self.qpus)

    @property
    def config(self) -> list[int]:
        return [qpu.compute_count for qpu in self.qpus]

    @property
    def compute_order(self) -> tuple:
        """Global indices of the compute qubits in variable order."""
        return tuple(g for qpu in self.qpus for g in qpu.compute_global_indices)

    @property
    def comm_indices(self) -> tuple:
        return tuple(qpu.comm_global_index for qpu in self.qpus)

    def qpu_of_variable(self, variable: int) -> int:
        self._check_variable(variable)
        for k, qpu in enumerate(self.qpus):
            if variable < qpu.compute_count:
                return k
            variable -= qpu.compute_count
        raise AssertionError("unreachable")

    def _check_variable(self, variable: int) -> None:
        if not 0 <= variable < self.n_compute:
            raise DimensionError(f"variable {variable} outside 0..{self.n_compute - 1}")

    def label(self, global_index: int) -> str:
        for k, qpu in enumerate(self.qpus):
            if global_index == qpu.comm_global_index:
                return f"QPU{k}.comm"
            if global_index in qpu.compute_global_indices:
                return f"QPU{k}.compute.{qpu.compute_global_indices.index(global_index)}"
        raise DimensionError(f"global index {global_index} outside 0..{self.n_total - 1}")


def greedy_allocate(n_compute: int, m_qpus: int) -> list[int]:
    """Least-load assignment of variables to QPUs, ties to the lowest index."""
    if m_qpus < 1:
        raise ConfigError(f"need at least one QPU, got {m_qpus}")
    if m_qpus > n_compute:
        raise ConfigError(f"{m_qpus} QPUs for {n_compute} variables leaves a QPU without compute qubits")
    loads = [0] * m_qpus
    for _ in range(n_compute):
        loads[loads.index(min(loads))] += 1
    return loads


def from_config(qpu_qubit_config, n_compute: int | None = None) -> Topology:
    config = [int(c) for c in qpu_qubit_config]
    if not config or any(c < 1 for c in config):
        raise ConfigError(f"every QPU needs at least one compute qubit, got {config}")
    if n_compute is not None and sum(config) != n_compute:
        raise ConfigError(f"QPU config {config} holds {sum(config)} compute qubits, problem has {n_compute}")
    qpus, cursor = [], 0
    for count in config:
        qpus.append(Qpu(tuple(range(cursor, cursor + count)), cursor + count))
        cursor += count + 1
    return Topology(tuple(qpus))


def parse_config(text: str) -> list[int]:
    """``"3,1,1"`` -> ``[3, 1, 1]``."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad QPU list {text!r}: expected comma-separated integers") from exc


def map_compute_to_global(topology: Topology, variable_index: int) -> int:
    topology._check_variable(variable_index)
    return topology.compute_order[variable_index]


def comm_of(topology: Topology, qpu_index: int) -> int:
    if not 0 <= qpu_index < len(topology.qpus):
        raise DimensionError(f"QPU {qpu_index} outside 0..{len(topology.qpus) - 1}")
    return topology.qpus[qpu_index].comm_global_index
