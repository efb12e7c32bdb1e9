"""Diagonal Ising Hamiltonian obtained from a QUBO via x = (1 - z) / 2.

Bit value 0 is spin +1. Qubit 0 is the most significant bit of a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NumericError
from .qubo_model import QuboProblem, index_bits

NORM_TOL = 1e-9


@dataclass(frozen=True)
class IsingHamiltonian:
    n: int
    h: np.ndarray
    J: dict = field(default_factory=dict)
    const_offset: float = 0.0

    def __post_init__(self):
        h = np.array(self.h, dtype=float).reshape(-1)
        if self.n < 1 or h.shape[0] != self.n:
            raise DimensionError(f"h has length {h.shape[0]}, expected n={self.n}")
        J = {}
        for (i, j), v in dict(self.J).items():
            if not 0 <= i < j < self.n:
                raise DimensionError(f"coupling key ({i}, {j}) must satisfy 0 <= i < j < {self.n}")
            J[(int(i), int(j))] = float(v)
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "const_offset", float(self.const_offset))

    def diagonal(self) -> np.ndarray:
        """Energies of all 2^n basis states, indexed by basis label."""
        Z = 1.0 - 2.0 * index_bits(np.arange(1 << self.n), self.n)
        E = Z @ self.h + self.const_offset
        for (i, j), v in self.J.items():
            E += v * Z[:, i] * Z[:, j]
        return E


def qubo_to_hamiltonian(problem: QuboProblem) -> IsingHamiltonian:
    Q, q, n = problem.Q, problem.q, problem.n
    diag = np.diag(Q)
    off = Q - np.diag(diag)
    # x_i^2 = x_i, so the diagonal behaves like a linear term
    h = -(diag + q) / 2.0 - off.sum(axis=1) / 2.0
    const = float((diag + q).sum() / 2.0 + np.triu(off, 1).sum() / 2.0 + problem.offset)
    J = {(i, j): Q[i, j] / 2.0 for i in range(n) for j in range(i + 1, n) if Q[i, j] != 0.0}
    return IsingHamiltonian(n=n, h=h, J=J, const_offset=const)


def energy_of_bitstring(H: IsingHamiltonian, x) -> float:
    x = np.asarray(x)
    if x.shape != (H.n,):
        raise DimensionError(f"bitstring has shape {x.shape}, expected ({H.n},)")
    z = 1.0 - 2.0 * x.astype(float)
    e = float(H.h @ z) + H.const_offset
    for (i, j), v in H.J.items():
        e += v * z[i] * z[j]
    return e


def expectation(H: IsingHamiltonian, probs) -> float:
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (1 << H.n,):
        raise DimensionError(f"probability vector has shape {probs.shape}, expected ({1 << H.n},)")
    total = probs.sum()
    if abs(total - 1.0) > NORM_TOL or np.any(probs < -NORM_TOL):
        raise NumericError(f"probabilities must be nonnegative and sum to 1, got sum {total!r}")
    return float(probs @ H.diagonal())


def ground_energy(H: IsingHamiltonian) -> float:
    return float(H.diagonal().min())
