"""Shot sampling of a trained circuit and minimum-energy solution selection."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import sim_core
from .circuit_ir import Circuit, run_batch
from .errors import DimensionError, InfeasibleError, ProtocolViolationError
from .hamiltonian import IsingHamiltonian, energy_of_bitstring
from .qubo_model import UcInstance

DEFAULT_SHOTS = 4000


@dataclass(frozen=True)
class UcFilter:
    powers: tuple
    demand: float
    epsilon_D: float = 0.0

    @classmethod
    def from_instance(cls, uc: UcInstance) -> "UcFilter":
        return cls(tuple(uc.powers), uc.demand, uc.epsilon_D)

    def accepts(self, z) -> bool:
        return abs(float(np.dot(self.powers, z)) - self.demand) <= self.epsilon_D


@dataclass(frozen=True)
class SelectionConfig:
    shots: int = DEFAULT_SHOTS
    uc_filter: UcFilter | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise DimensionError(f"shots must be positive, got {self.shots}")


@dataclass(frozen=True)
class Selection:
    z: np.ndarray | None
    cost: float | None
    feasible: bool
    unfiltered_best: tuple | None = None

    def require(self) -> "Selection":
        if not self.feasible:
            raise InfeasibleError("no sampled bitstring satisfies the demand constraint", best=self.unfiltered_best)
        return self

    def report(self, shots: int) -> dict:
        z = self.z if self.feasible else self.unfiltered_best[0]
        cost = self.cost if self.feasible else self.unfiltered_best[1]
        return {"z": [int(b) for b in z], "cost": cost, "feasible": self.feasible, "shots": shots}


def bits_of(key: str) -> np.ndarray:
    return np.array([int(ch) for ch in key], dtype=int)


def execute_and_sample(circuit: Circuit, theta, shots: int = DEFAULT_SHOTS, seed=None) -> dict:
    """Sample the joint register and key each shot by its compute bits in variable order."""
    amps = run_batch(circuit, np.asarray(theta, dtype=float).reshape(1, -1))[0]
    probs = np.abs(amps) ** 2
    idx = sim_core.sample_indices(probs, shots, np.random.default_rng(seed))
    labels, counts = np.unique(idx, return_counts=True)
    N = circuit.n_qubits
    compute = list(circuit.compute_qubits)
    others = [q for q in range(N) if q not in compute]
    hist: dict[str, int] = {}
    for label, count in zip(labels, counts):
        joint = sim_core.bitstring(int(label), N)
        if any(joint[q] == "1" for q in others):
            raise ProtocolViolationError(f"sampled {joint} with a communication qubit in |1>")
        key = "".join(joint[q] for q in compute)
        hist[key] = hist.get(key, 0) + int(count)
    return dict(sorted(hist.items()))


def select_solution(hist: dict, H: IsingHamiltonian, cfg: SelectionConfig = SelectionConfig()) -> Selection:
    """Lowest-energy bitstring in the sampled support, after the optional demand filter.

    Counts only matter through support membership. Ties go to the
    lexicographically smallest key.
    """
    support = sorted(k for k, c in hist.items() if c > 0)
    if not support:
        raise DimensionError("cannot select from an empty histogram")
    for key in support:
        if len(key) != H.n:
            raise DimensionError(f"histogram key {key!r} does not have {H.n} bits")

    def argmin(keys):
        best_key = min(keys, key=lambda k: (energy_of_bitstring(H, bits_of(k)), k))
        return bits_of(best_key), energy_of_bitstring(H, bits_of(best_key))

    unfiltered = argmin(support)
    if cfg.uc_filter is None:
        return Selection(unfiltered[0], unfiltered[1], True, unfiltered)
    feasible = [k for k in support if cfg.uc_filter.accepts(bits_of(k))]
    if not feasible:
        return Selection(None, None, False, unfiltered)
    z, cost = argmin(feasible)
    return Selection(z, cost, True, unfiltered)


def histogram_json(hist: dict) -> str:
    return json.dumps(dict(sorted(hist.items())), indent=2)
