"""Initial ansatz parameters: uniform random, Black Hole, Gray Wolf, or Artificial Bee Colony.

Every metaheuristic minimizes an energy objective over angle vectors in
[0, 2*pi) and returns the best (theta, energy) pair it ever evaluated.
Objectives are plain callables ``theta -> float``; if they also expose
``batch(thetas) -> energies`` whole populations are evaluated in one call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * np.pi
EVENT_HORIZON_EPS = 1e-9

INIT_RANDOM, INIT_BH, INIT_GWO, INIT_ABC = 1, 2, 3, 4
INIT_NAMES = {INIT_RANDOM: "random", INIT_BH: "black_hole", INIT_GWO: "gray_wolf", INIT_ABC: "bee_colony"}


@dataclass(frozen=True)
class InitConfig:
    init_type: int = INIT_RANDOM
    population: int = 20
    max_iter: int = 50
    seed: int = 0
    abc_limit: int = 20

    def __post_init__(self):
        if self.init_type not in INIT_NAMES:
            raise ConfigError(f"init_type must be one of 1..4, got {self.init_type}")
        if self.population < 1 or self.max_iter < 1 or self.abc_limit < 1:
            raise ConfigError("population, max_iter and abc_limit must be positive")
        if self.init_type in (INIT_BH, INIT_ABC) and self.population < 2:
            raise ConfigError(f"{INIT_NAMES[self.init_type]} needs a population of at least 2")
        if self.init_type == INIT_GWO and self.population < 4:
            raise ConfigError("gray wolf needs a population of at least 4 (three leaders plus one follower)")

    def rng(self) -> np.random.Generator:
        """Stream keyed on (seed, init_type) so switching method leaves other streams alone."""
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, self.init_type])


def _wrap(x: np.ndarray) -> np.ndarray:
    return np.mod(x, TWO_PI)


def _evaluate(objective, thetas: np.ndarray) -> np.ndarray:
    if len(thetas) == 0:
        return np.empty(0)
    batch = getattr(objective, "batch", None)
    if batch is not None:
        return np.asarray(batch(thetas), dtype=float)
    return np.array([float(objective(t)) for t in thetas])


class _BestSoFar:
    def __init__(self):
        self.theta = None
        self.energy = np.inf
        self.trace: list[float] = []

    def update(self, thetas: np.ndarray, energies: np.ndarray) -> None:
        if len(energies):
            k = int(np.argmin(energies))
            if energies[k] < self.energy:
                self.theta, self.energy = thetas[k].copy(), float(energies[k])

    def mark(self) -> None:
        self.trace.append(self.energy)


def random_init(p: int, seed) -> np.ndarray:
    """``p`` angles i.i.d. uniform on [0, 2*pi). ``seed`` may be an int or a Generator."""
    if p < 1:
        raise ConfigError(f"parameter count must be positive, got {p}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return _wrap(rng.uniform(0.0, TWO_PI, p))


def event_horizon(energies: np.ndarray, bh: int) -> float:
    """Radius f_BH / sum(f) on shifted fitness f = E - min(E) + eps."""
    f = energies - energies.min() + EVENT_HORIZON_EPS
    return float(f[bh] / f.sum())


def black_hole_init(objective, p: int, cfg: InitConfig, trace: list | None = None):
    rng = cfg.rng()
    N = cfg.population
    stars = rng.uniform(0.0, TWO_PI, (N, p))
    E = _evaluate(objective, stars)
    best = _BestSoFar()
    best.update(stars, E)
    everyone = np.arange(N)
    for _ in range(cfg.max_iter):
        bh = int(np.argmin(E))
        others = everyone != bh
        r = rng.random((N, p))
        stars[others] = _wrap(stars[others] + r[others] * (stars[bh] - stars[others]))
        E[others] = _evaluate(objective, stars[others])
        best.update(stars, E)
        # a star that beat the black hole takes its place before the horizon check
        bh = int(np.argmin(E))
        radius = event_horizon(E, bh)
        dist = np.linalg.norm(stars - stars[bh], axis=1)
        swallowed = (dist < radius) & (everyone != bh)
        if swallowed.any():
            stars[swallowed] = rng.uniform(0.0, TWO_PI, (int(swallowed.sum()), p))
            E[swallowed] = _evaluate(objective, stars[swallowed])
            best.update(stars, E)
        best.mark()
    if trace is not None:
        trace.extend(best.trace)
    return best.theta, best.energy


def gwo_coefficient(iteration: int, max_iter: int) -> float:
    """``a`` falls linearly from 2 at the first iteration to 0 at the last."""
    if max_iter <= 1:
        return 2.0
    return 2.0 * (1.0 - iteration / (max_iter - 1))


def gwo_move(wolves: np.ndarray, leaders: np.ndarray, a: float, rng: np.random.Generator) -> np.ndarray:
    """New positions: mean over leaders L of L - A*|C*L - x|, A = 2a*r1 - a, C = 2*r2."""
    moves = []
    for leader in leaders:
        r1 = rng.random(wolves.shape)
        r2 = rng.random(wolves.shape)
        A = 2.0 * a * r1 - a
        C = 2.0 * r2
        moves.append(leader - A * np.abs(C * leader - wolves))
    return _wrap(sum(moves) / len(moves))


def gray_wolf_init(objective, p: int, cfg: InitConfig, trace: list | None = None):
    if cfg.population < 4:
        raise ConfigError("gray wolf needs a population of at least 4")
    rng = cfg.rng()
    wolves = rng.uniform(0.0, TWO_PI, (cfg.population, p))
    E = _evaluate(objective, wolves)
    best = _BestSoFar()
    best.update(wolves, E)
    for t in range(cfg.max_iter):
        order = np.argsort(E, kind="stable")
        leaders, omegas = wolves[order[:3]].copy(), order[3:]
        wolves[omegas] = gwo_move(wolves[omegas], leaders, gwo_coefficient(t, cfg.max_iter), rng)
        E[omegas] = _evaluate(objective, wolves[omegas])
        best.update(wolves, E)
        best.mark()
    if trace is not None:
        trace.extend(best.trace)
    return best.theta, best.energy


def abc_selection_probs(energies: np.ndarray) -> np.ndarray:
    """Onlooker weights from fit = 1 / (1 + E - min(E))."""
    fit = 1.0 / (1.0 + (energies - energies.min()))
    return fit / fit.sum()


def _abc_neighbours(sources: np.ndarray, picks: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    N, p = sources.shape
    out = sources[picks].copy()
    for row, i in enumerate(picks):
        k = int(rng.integers(N - 1))
        k += k >= i
        j = int(rng.integers(p))
        phi = rng.uniform(-1.0, 1.0)
        out[row, j] = sources[i, j] + phi * (sources[i, j] - sources[k, j])
    return _wrap(out)


def bee_colony_init(objective, p: int, cfg: InitConfig, trace: list | None = None):
    rng = cfg.rng()
    N = cfg.population
    sources = rng.uniform(0.0, TWO_PI, (N, p))
    E = _evaluate(objective, sources)
    trials = np.zeros(N, dtype=int)
    best = _BestSoFar()
    best.update(sources, E)

    def greedy(picks, candidates):
        energies = _evaluate(objective, candidates)
        for i, cand, e in zip(picks, candidates, energies):
            if e < E[i]:
                sources[i], E[i], trials[i] = cand, e, 0
            else:
                trials[i] += 1
        best.update(candidates, energies)

    for _ in range(cfg.max_iter):
        employed = np.arange(N)
        greedy(employed, _abc_neighbours(sources, employed, rng))
        onlookers = rng.choice(N, size=N, p=abc_selection_probs(E))
        greedy(onlookers, _abc_neighbours(sources, onlookers, rng))
        stale = np.flatnonzero(trials >= cfg.abc_limit)
        if stale.size:
            sources[stale] = rng.uniform(0.0, TWO_PI, (stale.size, p))
            E[stale] = _evaluate(objective, sources[stale])
            trials[stale] = 0
            best.update(sources[stale], E[stale])
        best.mark()
    if trace is not None:
        trace.extend(best.trace)
    return best.theta, best.energy


_METHODS = {INIT_BH: black_hole_init, INIT_GWO: gray_wolf_init, INIT_ABC: bee_colony_init}


def warm_start(objective, p: int, cfg: InitConfig):
    """Dispatch on ``cfg.init_type``; returns ``(theta0, energy(theta0))``."""
    if cfg.init_type == INIT_RANDOM:
        theta = random_init(p, cfg.rng())
        return theta, float(objective(theta))
    return _METHODS[cfg.init_type](objective, p, cfg)
