"""QUBO instances, JSON I/O, unit-commitment builder and exhaustive oracle.

Cost convention: ``x^T Q x + q^T x + offset`` over ``x in {0,1}^n``.
Bit 0 of a bitstring is variable 0 and the most significant bit when the
bitstring is read as an integer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, DimensionError, ParseError

MAX_BRUTE_FORCE_VARS = 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class QuboProblem:
    Q: np.ndarray
    q: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        q = np.array(self.q, dtype=float).reshape(-1)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise DimensionError(f"Q must be square, got shape {Q.shape}")
        if Q.shape[0] < 1:
            raise DimensionError("QUBO needs at least one variable")
        if q.shape[0] != Q.shape[0]:
            raise DimensionError(f"q has length {q.shape[0]}, expected {Q.shape[0]}")
        Q = (Q + Q.T) / 2.0
        Q.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def __eq__(self, other):
        if not isinstance(other, QuboProblem):
            return NotImplemented
        return (
            np.array_equal(self.Q, other.Q)
            and np.array_equal(self.q, other.q)
            and self.offset == other.offset
        )

    __hash__ = None


@dataclass(frozen=True)
class UcInstance:
    """Unit commitment with one fixed output level per generator."""

    costs: tuple
    powers: tuple
    demand: float
    penalty_lambda: float
    epsilon_D: float = 0.0

    def __post_init__(self):
        costs = tuple(float(c) for c in self.costs)
        powers = tuple(float(p) for p in self.powers)
        if len(costs) < 1 or len(costs) != len(powers):
            raise DimensionError(
                f"costs ({len(costs)}) and powers ({len(powers)}) must have equal nonzero length"
            )
        if not self.penalty_lambda > 0:
            raise DimensionError(f"penalty_lambda must be positive, got {self.penalty_lambda}")
        if self.epsilon_D < 0:
            raise DimensionError(f"epsilon_D must be nonnegative, got {self.epsilon_D}")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "demand", float(self.demand))
        object.__setattr__(self, "penalty_lambda", float(self.penalty_lambda))
        object.__setattr__(self, "epsilon_D", float(self.epsilon_D))

    @property
    def n(self) -> int:
        return len(self.costs)

    def objective(self, x: Sequence[int]) -> float:
        """Penalized objective evaluated directly, without the QUBO matrices."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(self.powers)
        return float(np.dot(self.costs, x) + self.penalty_lambda * (p @ x - self.demand) ** 2)

    def power_of(self, x: Sequence[int]) -> float:
        return float(np.dot(self.powers, np.asarray(x, dtype=float)))


def _as_bits(x, n: int) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (n,):
        raise DimensionError(f"bit vector has shape {x.shape}, expected ({n},)")
    return x.astype(float)


def cost(problem: QuboProblem, x: Sequence[int]) -> float:
    xv = _as_bits(x, problem.n)
    return float(xv @ problem.Q @ xv + problem.q @ xv + problem.offset)


def index_bits(indices: np.ndarray, n: int) -> np.ndarray:
    """Rows of bits for basis indices; column 0 is the most significant bit."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.int8)


def all_costs(problem: QuboProblem, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Costs of the bitstrings with integer labels in ``[start, stop)``."""
    n = problem.n
    stop = (1 << n) if stop is None else stop
    X = index_bits(np.arange(start, stop), n).astype(float)
    return np.einsum("bi,ij,bj->b", X, problem.Q, X) + X @ problem.q + problem.offset


def brute_force(problem: QuboProblem) -> tuple[np.ndarray, float]:
    """Exhaustive minimum; ties go to the lexicographically smallest bitstring."""
    n = problem.n
    if n > MAX_BRUTE_FORCE_VARS:
        raise CapacityError(f"brute force is capped at {MAX_BRUTE_FORCE_VARS} variables, got {n}")
    best_idx, best_cost = 0, np.inf
    total = 1 << n
    # chunks are scanned in increasing label order, so strict < keeps the first minimum
    for start in range(0, total, _CHUNK):
        costs = all_costs(problem, start, min(start + _CHUNK, total))
        k = int(np.argmin(costs))
        if costs[k] < best_cost:
            best_idx, best_cost = start + k, float(costs[k])
    x = index_bits(np.array([best_idx]), n)[0].astype(int)
    # recompute on the winning bitstring so the reported value matches cost() exactly
    return x, cost(problem, x)


def build_uc_qubo(uc: UcInstance) -> QuboProblem:
    p = np.asarray(uc.powers)
    lam, D = uc.penalty_lambda, uc.demand
    return QuboProblem(
        Q=lam * np.outer(p, p),
        q=np.asarray(uc.costs) - 2.0 * lam * D * p,
        offset=lam * D * D,
    )


# --- JSON I/O -----------------------------------------------------------------


def _parse_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    return data


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _vector(data: dict, key: str) -> list[float]:
    if key not in data:
        raise ParseError(f"missing field {key!r}")
    value = data[key]
    if not isinstance(value, list):
        raise ParseError(f"field {key!r} must be a list")
    return [_number(v, f"{key}[{i}]") for i, v in enumerate(value)]


def load_problem(text: str) -> QuboProblem:
    data = _parse_json(text)
    if "Q" not in data:
        raise ParseError("missing field 'Q'")
    rows = data["Q"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("field 'Q' must be a non-empty list of rows")
    n = len(rows)
    Q = []
    for r, row in enumerate(rows):
        if not isinstance(row, list):
            raise ParseError(f"Q row {r}: expected a list")
        if len(row) != n:
            raise ParseError(f"Q row {r}: expected {n} entries (square matrix), got {len(row)}")
        Q.append([_number(v, f"Q[{r}][{c}]") for c, v in enumerate(row)])
    q = _vector(data, "q")
    if len(q) != n:
        raise ParseError(f"field 'q': expected {n} entries, got {len(q)}")
    offset = _number(data.get("offset", 0.0), "offset")
    return QuboProblem(Q=np.array(Q), q=np.array(q), offset=offset)


def save_problem(problem: QuboProblem) -> str:
    return json.dumps(
        {"Q": problem.Q.tolist(), "q": problem.q.tolist(), "offset": problem.offset},
        indent=2,
    )


def load_uc(text: str) -> UcInstance:
    data = _parse_json(text)
    costs = _vector(data, "costs")
    powers = _vector(data, "powers")
    if len(costs) != len(powers) or not costs:
        raise ParseError(
            f"'costs' ({len(costs)}) and 'powers' ({len(powers)}) must have equal nonzero length"
        )
    for key in ("demand", "penalty_lambda"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    lam = _number(data["penalty_lambda"], "penalty_lambda")
    if lam <= 0:
        raise ParseError(f"penalty_lambda: must be positive, got {lam}")
    eps = _number(data.get("epsilon_D", 0.0), "epsilon_D")
    if eps < 0:
        raise ParseError(f"epsilon_D: must be nonnegative, got {eps}")
    return UcInstance(
        costs=costs,
        powers=powers,
        demand=_number(data["demand"], "demand"),
        penalty_lambda=lam,
        epsilon_D=eps,
    )


def save_uc(uc: UcInstance) -> str:
    return json.dumps(
        {
            "costs": list(uc.costs),
            "powers": list(uc.powers),
            "demand": uc.demand,
            "penalty_lambda": uc.penalty_lambda,
            "epsilon_D": uc.epsilon_D,
        },
        indent=2,
    )
