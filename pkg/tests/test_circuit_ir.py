import numpy as np
import pytest
from hypothesis import given, strategies as st

from dvqe import sim_core
from dvqe.circuit_ir import (
    AnsatzSpec,
    Circuit,
    Gate,
    bind_and_run,
    build_monolithic_ansatz,
    cnot,
    render_text,
    run_batch,
    ry,
)
from dvqe.errors import DimensionError
from dvqe.telegate_remap import remap
from dvqe.topology import from_config


def reference_run(circuit, theta):
    """Gate-by-gate oracle through the public single-state API (no batching, no lazy ancillas)."""
    state = sim_core.init_zero(circuit.n_qubits)
    for g in circuit.gates:
        if g.kind in ("RX", "RY", "RZ"):
            angle = theta[g.param] if g.param is not None else g.angle
            state = sim_core.apply_1q(state, g.qubits[0], getattr(sim_core, g.kind.lower())(angle))
        elif g.kind == "H":
            state = sim_core.apply_1q(state, g.qubits[0], sim_core.HADAMARD)
        elif g.kind == "X":
            state = sim_core.apply_1q(state, g.qubits[0], sim_core.PAULI_X)
        elif g.kind == "Z":
            state = sim_core.apply_1q(state, g.qubits[0], sim_core.PAULI_Z)
        elif g.kind == "CNOT":
            state = sim_core.apply_cnot(state, *g.qubits)
        else:
            state = sim_core.apply_cz(state, *g.qubits)
    return state.amps


class TestGate:
    def test_rotation_needs_angle_or_slot(self):
        with pytest.raises(DimensionError):
            Gate("RY", (0,))
        with pytest.raises(DimensionError):
            Gate("RY", (0,), angle=1.0, param=0)

    def test_fixed_gates_take_no_angle(self):
        with pytest.raises(DimensionError):
            Gate("H", (0,), angle=1.0)

    def test_arity(self):
        with pytest.raises(DimensionError):
            Gate("CNOT", (0,))
        with pytest.raises(DimensionError):
            Gate("CZ", (1, 1))

    def test_unknown_kind(self):
        with pytest.raises(DimensionError):
            Gate("SWAP", (0, 1))

    def test_retarget(self):
        g = cnot(0, 1, tag="TG").retarget(lambda q: q + 3)
        assert g.qubits == (3, 4) and g.tag == "TG"


class TestCircuit:
    def test_slot_out_of_range(self):
        with pytest.raises(DimensionError):
            Circuit(1, [ry(0, param=1)], 1)

    def test_unreferenced_slot(self):
        with pytest.raises(DimensionError, match=r"\[1\]"):
            Circuit(1, [ry(0, param=0)], 2)

    def test_qubit_out_of_range(self):
        with pytest.raises(DimensionError):
            Circuit(2, [cnot(0, 2)])

    def test_default_compute_qubits(self):
        assert Circuit(3).compute_qubits == (0, 1, 2)

    def test_is_real(self):
        assert build_monolithic_ansatz(AnsatzSpec(3, 2)).is_real()
        assert not Circuit(1, [Gate("RX", (0,), angle=0.1)]).is_real()


class TestAnsatz:
    def test_two_qubits_one_layer(self):
        c = build_monolithic_ansatz(AnsatzSpec(2, 1))
        assert c.gates == (ry(0, param=0), ry(1, param=1), cnot(0, 1))
        assert c.n_params == 2

    def test_single_qubit_three_layers(self):
        c = build_monolithic_ansatz(AnsatzSpec(1, 3))
        assert [g.kind for g in c.gates] == ["RY"] * 3 and c.n_params == 3

    def test_eight_qubits_depth_two(self):
        c = build_monolithic_ansatz(AnsatzSpec(8, 2))
        assert c.n_params == 16
        assert sum(g.kind == "CNOT" for g in c.gates) == 14

    def test_layer_major_slots(self):
        c = build_monolithic_ansatz(AnsatzSpec(3, 2))
        assert [(g.qubits[0], g.param) for g in c.gates if g.kind == "RY"] == [
            (0, 0), (1, 1), (2, 2), (0, 3), (1, 4), (2, 5)
        ]

    def test_deterministic(self):
        assert build_monolithic_ansatz(AnsatzSpec(5, 3)) == build_monolithic_ansatz(AnsatzSpec(5, 3))

    @pytest.mark.parametrize("n, d", [(0, 1), (2, 0)])
    def test_invalid_spec(self, n, d):
        with pytest.raises(DimensionError):
            AnsatzSpec(n, d)


class TestRun:
    def test_zero_angles_give_zero_state(self):
        s = bind_and_run(build_monolithic_ansatz(AnsatzSpec(4, 2)), np.zeros(8))
        assert s.amps[0] == 1

    def test_single_ry_pi(self):
        s = bind_and_run(build_monolithic_ansatz(AnsatzSpec(1, 1)), [np.pi])
        assert abs(s.amps[1]) == pytest.approx(1.0, abs=1e-15)

    def test_repeatable(self, rng):
        c = build_monolithic_ansatz(AnsatzSpec(4, 3))
        theta = rng.uniform(0, 2 * np.pi, 12)
        np.testing.assert_array_equal(bind_and_run(c, theta).amps, bind_and_run(c, theta).amps)

    def test_parameter_length(self):
        with pytest.raises(DimensionError):
            bind_and_run(build_monolithic_ansatz(AnsatzSpec(2, 1)), [0.0])

    def test_initial_state(self):
        c = Circuit(2, [cnot(0, 1)])
        s = bind_and_run(c, [], sim_core.basis_state(2, 0b10))
        assert s.amps[0b11] == 1

    def test_batch_matches_single(self, rng):
        c = build_monolithic_ansatz(AnsatzSpec(4, 2))
        thetas = rng.uniform(0, 2 * np.pi, (5, 8))
        batch = run_batch(c, thetas)
        for row, theta in zip(batch, thetas):
            np.testing.assert_allclose(row, reference_run(c, theta), atol=1e-13)

    def test_mixed_gate_set_matches_oracle(self, rng):
        gates = [
            Gate("RX", (0,), param=0), Gate("H", (1,)), Gate("RZ", (2,), angle=0.3), Gate("CZ", (0, 2)),
            Gate("X", (1,)), Gate("RY", (1,), param=1), Gate("CNOT", (2, 0)), Gate("Z", (0,)),
        ]
        c = Circuit(3, gates, 2)
        theta = rng.uniform(0, 2 * np.pi, 2)
        np.testing.assert_allclose(bind_and_run(c, theta).amps, reference_run(c, theta), atol=1e-13)

    def test_lazy_ancillas_match_full_register(self, rng):
        # distributed circuits allocate comm qubits on demand; compare with a plain full-register run
        mono = build_monolithic_ansatz(AnsatzSpec(5, 2))
        dist = remap(mono, from_config([2, 1, 2], 5))
        theta = rng.uniform(0, 2 * np.pi, 10)
        np.testing.assert_allclose(run_batch(dist, theta)[0], reference_run(dist, theta), atol=1e-12)

    @given(st.integers(1, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_norm_preserved(self, n, d, seed):
        theta = np.random.default_rng(seed).uniform(0, 2 * np.pi, n * d)
        s = bind_and_run(build_monolithic_ansatz(AnsatzSpec(n, d)), theta)
        assert abs(s.norm() - 1.0) < 1e-9

    def test_layer_parameter_swap_changes_state(self, rng):
        c = build_monolithic_ansatz(AnsatzSpec(3, 2))
        theta = rng.uniform(0, 2 * np.pi, 6)
        swapped = np.concatenate([theta[3:], theta[:3]])
        assert sim_core.fidelity(bind_and_run(c, theta), bind_and_run(c, swapped)) < 1 - 1e-6


class TestRender:
    def test_empty(self):
        assert render_text(Circuit(2)) == "# circuit qubits=2 params=0 gates=0\n"

    def test_small_ansatz(self):
        lines = render_text(build_monolithic_ansatz(AnsatzSpec(2, 1))).splitlines()
        assert lines[1:] == ["RY q0 theta[0]", "RY q1 theta[1]", "CNOT q0 q1"]

    def test_fixed_angle(self):
        assert render_text(Circuit(1, [Gate("RZ", (0,), angle=0.5)])).splitlines()[1] == "RZ q0 0.5"

    def test_distributed_annotations(self):
        topo = from_config([2, 2, 2], 6)
        text = render_text(remap(build_monolithic_ansatz(AnsatzSpec(6, 2)), topo), topo)
        assert "# q2 QPU0.comm" in text and "# q4 QPU1.compute.1" in text
        tg = [line for line in text.splitlines() if line.endswith(" TG")]
        # every expanded gate touches a comm qubit (q2, q5, q8); there are no cross-QPU CZs here
        comm = {"q2", "q5", "q8"}
        assert len(tg) == 2 * 2 * 9
        assert all(comm & set(line.split()) for line in tg)
        assert "CNOT q0 q1" in text
