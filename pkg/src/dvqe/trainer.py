"""ADAM training of ansatz parameters on exact expectation values.

The same code path serves monolithic and distributed circuits: the energy
is always read from the compute qubits named by ``circuit.compute_qubits``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit_ir import Circuit, run_batch
from .errors import DimensionError, EquivalenceError, NumericError
from .hamiltonian import IsingHamiltonian
from .qubo_model import index_bits

# amplitudes held at once when evaluating parameter batches
_BATCH_BUDGET = 1 << 21


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.05
    max_iters: int = 200
    rel_tol: float = 1e-3
    fd_step: float = 1e-2
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        if not self.lr > 0 or not self.rel_tol > 0 or not self.fd_step > 0:
            raise DimensionError("lr, rel_tol and fd_step must be positive")
        if self.max_iters < 0:
            raise DimensionError(f"max_iters must be nonnegative, got {self.max_iters}")
        if not (0 < self.adam_beta1 < 1 and 0 < self.adam_beta2 < 1):
            raise DimensionError("ADAM betas must lie in (0, 1)")


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, p: int) -> "AdamState":
        return cls(np.zeros(p), np.zeros(p), 0)


@dataclass
class TrainHistory:
    energies: list = field(default_factory=list)
    converged: bool = False

    @property
    def iterations_used(self) -> int:
        return len(self.energies)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iter,energy\n")
        for i, e in enumerate(self.energies):
            buf.write(f"{i},{e!r}\n")
        return buf.getvalue()


class EnergyEvaluator:
    """Exact ``<psi(theta)|H|psi(theta)>`` for one circuit.

    Callable on a single parameter vector; :meth:`batch` evaluates a stack.
    For a distributed circuit the diagonal is lifted to the joint register by
    reading each basis label's compute bits, which marginalizes the comm qubits.
    """

    def __init__(self, circuit: Circuit, H: IsingHamiltonian):
        if circuit.n_compute != H.n:
            raise DimensionError(f"circuit carries {circuit.n_compute} variables, Hamiltonian has {H.n}")
        self.circuit = circuit
        self.H = H
        diag = H.diagonal()
        N = circuit.n_qubits
        if circuit.compute_qubits == tuple(range(N)):
            self.diagonal = diag
        else:
            bits = index_bits(np.arange(1 << N), N)[:, list(circuit.compute_qubits)].astype(np.int64)
            weights = 1 << np.arange(H.n - 1, -1, -1, dtype=np.int64)
            self.diagonal = diag[bits @ weights]
        self.evaluations = 0

    @property
    def n_params(self) -> int:
        return self.circuit.n_params

    def batch(self, thetas) -> np.ndarray:
        thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
        step = max(1, _BATCH_BUDGET >> self.circuit.n_qubits)
        out = np.empty(thetas.shape[0])
        for s in range(0, thetas.shape[0], step):
            amps = run_batch(self.circuit, thetas[s : s + step])
            probs = amps.real**2 + amps.imag**2 if np.iscomplexobj(amps) else amps**2
            # dividing by the total cancels the O(ulp) norm drift that repeated
            # Hadamards leave behind, which matters once energies reach ~1e6
            out[s : s + step] = (probs @ self.diagonal) / probs.sum(axis=1)
        self.evaluations += thetas.shape[0]
        return out

    def __call__(self, theta) -> float:
        return float(self.batch(np.asarray(theta, dtype=float).reshape(1, -1))[0])


def energy(circuit: Circuit, H: IsingHamiltonian, theta) -> float:
    return EnergyEvaluator(circuit, H)(theta)


def _fd(evaluate, theta: np.ndarray, fd_step: float) -> np.ndarray:
    p = theta.shape[0]
    shifts = fd_step * np.eye(p)
    values = evaluate(np.vstack([theta + shifts, theta - shifts]))
    return (values[:p] - values[p:]) / (2.0 * fd_step)


def fd_gradient(circuit: Circuit, H: IsingHamiltonian, theta, fd_step: float = 1e-2, evaluator=None) -> np.ndarray:
    """Central differences, one +/- shift pair per parameter."""
    if not fd_step > 0:
        raise DimensionError(f"fd_step must be positive, got {fd_step}")
    evaluator = evaluator or EnergyEvaluator(circuit, H)
    return _fd(evaluator.batch, np.asarray(theta, dtype=float), fd_step)


def adam_step(state: AdamState, theta, g, cfg: TrainConfig) -> tuple[np.ndarray, AdamState]:
    theta = np.asarray(theta, dtype=float)
    g = np.asarray(g, dtype=float)
    if not theta.shape == g.shape == state.m.shape:
        raise DimensionError(f"shape mismatch: theta {theta.shape}, grad {g.shape}, moments {state.m.shape}")
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    t = state.t + 1
    m = b1 * state.m + (1.0 - b1) * g
    v = b2 * state.v + (1.0 - b2) * g * g
    m_hat = m / (1.0 - b1**t)
    v_hat = v / (1.0 - b2**t)
    new_theta = theta - cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
    return new_theta, AdamState(m, v, t)


def relative_change(current: float, previous: float) -> float:
    return abs(current - previous) / max(abs(current), 1e-8)


def train(circuit: Circuit, H: IsingHamiltonian, theta0, cfg: TrainConfig, evaluator=None, trajectory=None):
    """Minimize the energy from ``theta0``.

    Each iteration evaluates E_t, stops when the relative change from E_{t-1}
    falls below ``rel_tol``, otherwise takes one ADAM step on the
    finite-difference gradient. Returns the final parameters and the history.
    If ``trajectory`` is a list, every evaluated parameter vector is appended.
    """
    evaluator = evaluator or EnergyEvaluator(circuit, H)
    theta = np.array(theta0, dtype=float).reshape(-1)
    if theta.shape[0] != circuit.n_params:
        raise DimensionError(f"expected {circuit.n_params} parameters, got {theta.shape[0]}")
    history = TrainHistory()
    adam = AdamState.zeros(theta.shape[0])
    for t in range(cfg.max_iters):
        e = evaluator(theta)
        if not math.isfinite(e):
            raise NumericError(f"non-finite energy {e!r} at iteration {t}")
        history.energies.append(e)
        if trajectory is not None:
            trajectory.append(theta.copy())
        if t > 0 and relative_change(e, history.energies[-2]) < cfg.rel_tol:
            history.converged = True
            break
        g = _fd(evaluator.batch, theta, cfg.fd_step)
        theta, adam = adam_step(adam, theta, g, cfg)
    return theta, history


def train_shared(circuit_mono: Circuit, circuit_dist: Circuit, H: IsingHamiltonian, theta0, cfg: TrainConfig, tol: float = 1e-9):
    """Train the monolithic circuit and replay its parameter trajectory on the distributed one.

    Returns ``(history_mono, history_dist)``; raises :class:`EquivalenceError`
    if the two energies differ by ``tol`` or more at any visited point.
    """
    if circuit_mono.n_params != circuit_dist.n_params:
        raise DimensionError("circuits have different parameter counts")
    trajectory: list = []
    _, hist_mono = train(circuit_mono, H, theta0, cfg, trajectory=trajectory)
    dist = EnergyEvaluator(circuit_dist, H)
    hist_dist = TrainHistory(energies=[dist(th) for th in trajectory], converged=hist_mono.converged)
    for t, (a, b) in enumerate(zip(hist_mono.energies, hist_dist.energies)):
        if not abs(a - b) < tol:
            raise EquivalenceError(f"iteration {t}: monolithic {a!r} vs distributed {b!r}")
    return hist_mono, hist_dist
