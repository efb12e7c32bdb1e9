"""Dense statevector engine.

Qubit 0 is the most significant bit of the amplitude index. Every public
operation returns a new :class:`StateVector`; the ``*_batch`` kernels work on
stacks of states shaped ``(batch, 2**n)`` and are what the circuit runner uses.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapacityError, DimensionError, EntanglementLeakError, NumericError

MAX_QUBITS = 24
NORM_TOL = 1e-9
UNITARY_TOL = 1e-12
LEAK_TOL = 1e-9

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    """exp(-i theta Y / 2); real-valued."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]])


def rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]])


def ry_batch(thetas: np.ndarray) -> np.ndarray:
    c, s = np.cos(thetas / 2.0), np.sin(thetas / 2.0)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def rx_batch(thetas: np.ndarray) -> np.ndarray:
    c, s = np.cos(thetas / 2.0), -1j * np.sin(thetas / 2.0)
    return np.stack([np.stack([c + 0j, s], -1), np.stack([s, c + 0j], -1)], -2)


def rz_batch(thetas: np.ndarray) -> np.ndarray:
    a, b = np.exp(-0.5j * thetas), np.exp(0.5j * thetas)
    zero = np.zeros_like(a)
    return np.stack([np.stack([a, zero], -1), np.stack([zero, b], -1)], -2)


@dataclass
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        n = int(amps.size).bit_length() - 1
        if amps.size < 2 or (1 << n) != amps.size:
            raise DimensionError(f"amplitude count {amps.size} is not a power of two >= 2")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise NumericError(f"state is not normalized (norm^2 = {norm!r})")
        self.amps = amps

    @property
    def n_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


def _check_qubit(n: int, qubit: int) -> None:
    if not 0 <= qubit < n:
        raise DimensionError(f"qubit index {qubit} out of range for {n} qubits")


def _check_pair(n: int, a: int, b: int) -> None:
    _check_qubit(n, a)
    _check_qubit(n, b)
    if a == b:
        raise DimensionError(f"two-qubit gate needs distinct qubits, got {a} twice")


def _check_unitary(U: np.ndarray) -> np.ndarray:
    U = np.asarray(U)
    if U.shape != (2, 2):
        raise DimensionError(f"single-qubit gate must be 2x2, got {U.shape}")
    if not np.allclose(U.conj().T @ U, np.eye(2), rtol=0.0, atol=UNITARY_TOL):
        raise NumericError("gate matrix is not unitary")
    return U


# --- batched kernels ------------------------------------------------------------


def apply_1q_batch(psi: np.ndarray, n: int, qubit: int, U: np.ndarray) -> np.ndarray:
    """Apply ``U`` (2x2, or one 2x2 per batch row) to ``qubit`` of every state."""
    U = _kernels.as_gate_stack(U)
    out = np.array(psi, dtype=np.result_type(psi.dtype, U.dtype))
    _kernels.apply_1q(out, n, qubit, U.astype(out.dtype, copy=False))
    return out


def apply_cnot_batch(psi: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    out = psi.copy()
    _kernels.apply_cnot(out, n, control, target)
    return out


def apply_cz_batch(psi: np.ndarray, n: int, a: int, b: int) -> np.ndarray:
    out = psi.copy()
    _kernels.apply_cz(out, n, a, b)
    return out


# --- single-state API -------------------------------------------------------------


def init_zero(n_qubits: int) -> StateVector:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(amps)


def basis_state(n_qubits: int, index: int) -> StateVector:
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[index] = 1.0
    return StateVector(state)


def apply_1q(state: StateVector, qubit: int, U: np.ndarray) -> StateVector:
    n = state.n_qubits
    _check_qubit(n, qubit)
    U = _check_unitary(U)
    return StateVector(apply_1q_batch(state.amps[None, :], n, qubit, U)[0])


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    n = state.n_qubits
    _check_pair(n, control, target)
    return StateVector(apply_cnot_batch(state.amps[None, :], n, control, target)[0])


def apply_cz(state: StateVector, a: int, b: int) -> StateVector:
    n = state.n_qubits
    _check_pair(n, a, b)
    return StateVector(apply_cz_batch(state.amps[None, :], n, a, b)[0])


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amps) ** 2


def bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def sample_indices(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF draws of basis labels."""
    if shots < 1:
        raise DimensionError(f"shots must be positive, got {shots}")
    cdf = np.cumsum(probs)
    u = rng.random(shots) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, probs.size - 1)


def sample(state: StateVector, shots: int, seed) -> Counter:
    """Histogram of ``shots`` measured bitstrings (qubit 0 first)."""
    rng = np.random.default_rng(seed)
    idx = sample_indices(probabilities(state), shots, rng)
    labels, counts = np.unique(idx, return_counts=True)
    n = state.n_qubits
    return Counter({bitstring(int(b), n): int(c) for b, c in zip(labels, counts)})


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"fidelity needs equal sizes, got {a.n_qubits} and {b.n_qubits}")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2))


def measure(state: StateVector, qubit: int, rng: np.random.Generator) -> tuple[int, StateVector]:
    """Projective Z measurement; returns the outcome and the collapsed state."""
    n = state.n_qubits
    _check_qubit(n, qubit)
    t = state.amps.reshape(1 << qubit, 2, -1)
    p1 = float(np.sum(np.abs(t[:, 1, :]) ** 2))
    outcome = int(rng.random() < p1)
    kept = np.zeros_like(t)
    kept[:, outcome, :] = t[:, outcome, :]
    weight = p1 if outcome else 1.0 - p1
    return outcome, StateVector(kept.reshape(-1) / np.sqrt(weight))


def extract_subspace(
    state: StateVector, keep: list[int], expect_rest_zero: bool = True
) -> StateVector:
    """Pure state on ``keep`` (in the given order) with the other qubits projected to |0>.

    With ``expect_rest_zero`` the discarded qubits must carry less than
    ``LEAK_TOL`` probability on |1>, otherwise the input was entangled with
    them and :class:`EntanglementLeakError` is raised.
    """
    n = state.n_qubits
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep) or not keep:
        raise DimensionError(f"keep list must be non-empty and distinct, got {keep}")
    for k in keep:
        _check_qubit(n, k)
    rest = [q for q in range(n) if q not in keep]
    t = state.amps.reshape((2,) * n)
    t = np.transpose(t, rest + keep).reshape(1 << len(rest), 1 << len(keep))
    sub = t[0]
    leak = float(np.sum(np.abs(t[1:]) ** 2))
    if expect_rest_zero and leak >= LEAK_TOL:
        raise EntanglementLeakError(
            f"probability {leak:.3e} on discarded qubits {rest}; expected them in |0>"
        )
    norm = np.sqrt(np.vdot(sub, sub).real)
    if norm == 0.0:
        raise EntanglementLeakError("no amplitude left with discarded qubits in |0>")
    return StateVector(sub / norm)
