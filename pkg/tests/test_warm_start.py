import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import example
from dvqe.circuit_ir import AnsatzSpec, build_monolithic_ansatz
from dvqe.errors import ConfigError
from dvqe.hamiltonian import qubo_to_hamiltonian
from dvqe.trainer import EnergyEvaluator
from dvqe.warm_start import (
    TWO_PI,
    InitConfig,
    abc_selection_probs,
    bee_colony_init,
    black_hole_init,
    event_horizon,
    gray_wolf_init,
    gwo_coefficient,
    gwo_move,
    random_init,
    warm_start,
)

METHODS = [black_hole_init, gray_wolf_init, bee_colony_init]
TYPE_OF = {black_hole_init: 2, gray_wolf_init: 3, bee_colony_init: 4}


def sphere(theta):
    return float(np.sum(np.asarray(theta) ** 2))


class CountingObjective:
    """Sphere objective that records every point it was asked about."""

    def __init__(self):
        self.seen = []

    def __call__(self, theta):
        self.seen.append(np.array(theta))
        return sphere(theta)


class TestConfig:
    def test_defaults(self):
        cfg = InitConfig()
        assert (cfg.population, cfg.max_iter, cfg.abc_limit) == (20, 50, 20)

    @pytest.mark.parametrize(
        "kwargs",
        [{"init_type": 0}, {"init_type": 5}, {"population": 0}, {"max_iter": 0}, {"abc_limit": 0},
         {"init_type": 2, "population": 1}, {"init_type": 3, "population": 3}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            InitConfig(**kwargs)

    def test_stream_depends_on_type(self):
        a = InitConfig(2, seed=7).rng().random()
        b = InitConfig(3, seed=7).rng().random()
        assert a != b


class TestRandomInit:
    def test_reproducible_and_in_range(self):
        a, b = random_init(3, 11), random_init(3, 11)
        np.testing.assert_array_equal(a, b)
        assert a.shape == (3,) and np.all((0 <= a) & (a < TWO_PI))

    def test_seeds_differ(self):
        assert not np.array_equal(random_init(4, 1), random_init(4, 2))

    def test_accepts_generator(self):
        np.testing.assert_array_equal(random_init(2, np.random.default_rng(5)), random_init(2, 5))

    def test_rejects_empty(self):
        with pytest.raises(ConfigError):
            random_init(0, 0)


class TestBlackHole:
    def test_horizon(self):
        E = np.array([3.0, 1.0, 2.0])
        f = E - 1.0 + 1e-9
        assert event_horizon(E, 1) == pytest.approx(f[1] / f.sum())

    def test_improves_on_initial_best(self):
        cfg = InitConfig(2, 20, 50, seed=0)
        initial = np.random.default_rng([0, 2]).uniform(0, TWO_PI, (20, 5))
        _, e = black_hole_init(sphere, 5, cfg)
        assert e < min(sphere(s) for s in initial)


class TestGrayWolf:
    def test_schedule(self):
        assert gwo_coefficient(0, 50) == 2.0
        assert gwo_coefficient(49, 50) == 0.0
        assert gwo_coefficient(0, 1) == 2.0

    def test_a_zero_moves_to_leader_average(self, rng):
        wolves = rng.uniform(0, TWO_PI, (6, 4))
        leaders = rng.uniform(0, TWO_PI, (3, 4))
        np.testing.assert_allclose(gwo_move(wolves, leaders, 0.0, rng), leaders.mean(axis=0)[None].repeat(6, 0), atol=1e-12)

    def test_positions_wrapped(self, rng):
        wolves = rng.uniform(0, TWO_PI, (10, 3))
        out = gwo_move(wolves, wolves[:3], 2.0, rng)
        assert np.all((0 <= out) & (out < TWO_PI))


class TestBeeColony:
    def test_selection_probs_distribution(self):
        p = abc_selection_probs(np.array([-3.0, 0.0, 5.0, 5.0]))
        assert np.all(p >= 0) and p.sum() == pytest.approx(1.0)
        assert p[0] == pytest.approx(1.0 / (1.0 + 1 / 4 + 2 / 9))

    def test_abc_limit_one_still_monotone(self):
        trace = []
        bee_colony_init(sphere, 3, InitConfig(4, 6, 30, seed=1, abc_limit=1), trace)
        assert all(b <= a for a, b in zip(trace, trace[1:]))

    def test_neighbour_moves_one_dimension(self):
        obj = CountingObjective()
        bee_colony_init(obj, 4, InitConfig(4, 5, 1, seed=3, abc_limit=100))
        initial, employed = np.array(obj.seen[:5]), np.array(obj.seen[5:10])
        changed = (np.abs(employed - initial) > 0).sum(axis=1)
        assert np.all(changed <= 1)


@pytest.mark.parametrize("method", METHODS)
class TestCommonContract:
    def test_energy_matches_theta(self, method):
        theta, e = method(sphere, 4, InitConfig(TYPE_OF[method], 8, 10, seed=2))
        assert e == sphere(theta) and theta.shape == (4,) and np.all(np.isfinite(theta))

    def test_deterministic(self, method):
        cfg = InitConfig(TYPE_OF[method], 8, 10, seed=9)
        a, b = method(sphere, 3, cfg), method(sphere, 3, cfg)
        np.testing.assert_array_equal(a[0], b[0])
        assert a[1] == b[1]

    def test_trace_monotone(self, method):
        trace = []
        method(sphere, 3, InitConfig(TYPE_OF[method], 8, 15, seed=4), trace)
        assert len(trace) == 15 and all(b <= a for a, b in zip(trace, trace[1:]))

    def test_batch_and_scalar_objectives_agree(self, method):
        class Batched:
            def __call__(self, theta):
                return sphere(theta)

            def batch(self, thetas):
                return np.sum(np.asarray(thetas) ** 2, axis=1)

        cfg = InitConfig(TYPE_OF[method], 8, 10, seed=6)
        a, b = method(sphere, 3, cfg), method(Batched(), 3, cfg)
        np.testing.assert_array_equal(a[0], b[0])

    @settings(max_examples=15)
    @given(seed=st.integers(0, 2**63 - 1), p=st.integers(1, 6))
    def test_not_worse_than_initial_population(self, method, seed, p):
        obj = CountingObjective()
        cfg = InitConfig(TYPE_OF[method], 6, 5, seed=seed)
        theta, e = method(obj, p, cfg)
        assert e <= min(sphere(t) for t in obj.seen[:6])
        assert e == min(sphere(t) for t in obj.seen)


def test_dispatch_random():
    theta, e = warm_start(sphere, 3, InitConfig(1, seed=8))
    np.testing.assert_array_equal(theta, random_init(3, InitConfig(1, seed=8).rng()))
    assert e == sphere(theta)


def test_abc_beats_random_on_example2():
    circuit = build_monolithic_ansatz(AnsatzSpec(4, 2))
    evaluator = EnergyEvaluator(circuit, qubo_to_hamiltonian(example(2)))
    abc = [warm_start(evaluator, 8, InitConfig(4, seed=s))[1] for s in range(10)]
    rnd = [warm_start(evaluator, 8, InitConfig(1, seed=s))[1] for s in range(10)]
    assert np.median(abc) <= np.median(rnd)
