"""Tests for the dense qudit state-vector backend."""

import numpy as np
import pytest

from core.errors import GraphError, MemoryCapError, PreconditionError, ZeroProbabilityError
from core.graph import WeightedGraph, local_complement
from simulation.qudit import (LocalGate, QuditState, apply_cz, apply_lc_unitary, apply_local,
                              apply_matrix, build_graph_state, check_size, computational_state,
                              dft, equal_up_to_phase, hadamard, measure, outcome_probabilities,
                              pauli_x, pauli_z, plus_state, state_from_vector, tensor, y_basis,
                              z_basis)
from utils.config import MAX_AMPS_ENV, load_config
from utils.graph_families import labeled_graphs


class TestStates:
    @pytest.mark.parametrize("n, d", [(1, 2), (2, 2), (1, 3), (3, 5)])
    def test_plus_state_amplitudes(self, n, d):
        s = plus_state(n, d)
        assert np.allclose(s.amps, d ** (-n / 2))

    def test_plus_state_preconditions(self):
        with pytest.raises(ValueError):
            plus_state(0, 2)
        with pytest.raises(ValueError):
            plus_state(1, 1)

    def test_memory_cap(self):
        with pytest.raises(MemoryCapError):
            plus_state(25, 2)

    def test_memory_cap_env_override(self, monkeypatch):
        monkeypatch.setenv(MAX_AMPS_ENV, "8")
        plus_state(3, 2)
        with pytest.raises(MemoryCapError):
            check_size(4, 2)

    def test_memory_cap_from_config_file(self, config, tmp_path):
        (tmp_path / "config.yaml").write_text("simulation:\n  max_amplitudes: 8\n", encoding="utf-8")
        assert load_config()['simulation']['max_amplitudes'] == 8
        plus_state(3, 2)
        with pytest.raises(MemoryCapError):
            plus_state(5, 2)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            QuditState(1, 2, np.array([1, 1]))

    def test_amplitudes_are_read_only(self):
        s = plus_state(1, 2)
        with pytest.raises(ValueError):
            s.amps[0] = 0

    def test_register_zero_most_significant(self):
        s = computational_state([1, 0], 2)
        assert s.amps[2] == 1

    def test_tensor_order(self):
        s = tensor(computational_state([1], 3), computational_state([2], 3))
        assert s.amps[1 * 3 + 2] == 1

    def test_state_from_vector_normalizes(self):
        s = state_from_vector([1, 1j])
        assert s.n == 1
        assert np.isclose(np.linalg.norm(s.amps), 1.0)


class TestGates:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_dft_is_unitary(self, d):
        f = dft(d)
        assert np.allclose(f.conj().T @ f, np.eye(d), atol=1e-12)

    def test_dft_is_hadamard_for_qubits(self):
        assert np.allclose(dft(2), hadamard())

    def test_clock_and_shift(self):
        d = 3
        x, z = pauli_x(d), pauli_z(d)
        omega = np.exp(2j * np.pi / d)
        assert np.allclose(z @ x, omega * x @ z)

    def test_cz_phase_on_11(self):
        s = apply_cz(plus_state(2, 2), 0, 1)
        assert np.allclose(s.amps, np.array([1, 1, 1, -1]) / 2)

    def test_cz_zero_weight_is_identity(self, rng):
        s = state_from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))
        assert np.allclose(apply_cz(s, 0, 1, 0).amps, s.amps)

    def test_cz_weight_two_is_identity_for_qubits(self):
        s = plus_state(2, 2)
        assert np.allclose(apply_cz(s, 0, 1, 2).amps, s.amps)

    def test_cz_same_register(self):
        with pytest.raises(ValueError):
            apply_cz(plus_state(2, 2), 1, 1)

    def test_unitaries_preserve_norm(self, rng):
        s = state_from_vector(rng.normal(size=27) + 1j * rng.normal(size=27), d=3)
        out = apply_cz(apply_matrix(s, 1, dft(3)), 0, 2, 2)
        assert abs(np.linalg.norm(out.amps) - 1.0) < 1e-12

    def test_local_gate_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            LocalGate(0, np.array([[1, 1], [0, 1]]))

    def test_local_gate_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_local(plus_state(1, 3), LocalGate(0, hadamard()))


class TestGraphStates:
    def test_empty_graph_is_product(self):
        s = build_graph_state(WeightedGraph.empty(2, 2))
        assert np.allclose(s.amps, plus_state(2, 2).amps)

    def test_single_edge(self, edge):
        assert np.allclose(build_graph_state(edge).amps, np.array([1, 1, 1, -1]) / 2)

    def test_triangle_signs(self, triangle):
        s = build_graph_state(triangle)
        expected = [(-1) ** (a * b + b * c + c * a) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
        assert np.allclose(s.amps, np.array(expected) / np.sqrt(8))

    def test_modulus_must_match(self, edge):
        with pytest.raises(GraphError):
            build_graph_state(edge, 3)
        with pytest.raises(GraphError):
            build_graph_state(WeightedGraph.from_edges(2, [(0, 1)]))


class TestLcUnitary:
    def test_single_edge_is_fixed(self, edge):
        s = build_graph_state(edge)
        assert equal_up_to_phase(apply_lc_unitary(s, edge, 0, 1), s)[0]

    def test_star_center_completes_neighbors(self, star4):
        s = apply_lc_unitary(build_graph_state(star4), star4, 0, 1)
        assert equal_up_to_phase(s, build_graph_state(local_complement(star4, 0, 1)))[0]

    def test_inverse_pair(self, star4, rng):
        s = state_from_vector(rng.normal(size=16) + 1j * rng.normal(size=16))
        out = apply_lc_unitary(apply_lc_unitary(s, star4, 2, 1), star4, 2, -1)
        assert equal_up_to_phase(out, s)[0]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_commutes_with_local_complement(self, n):
        for g in labeled_graphs(n):
            s = build_graph_state(g)
            for j in range(n):
                for sign in (1, -1):
                    out = apply_lc_unitary(s, g, j, sign)
                    target = build_graph_state(local_complement(g, j, sign))
                    assert equal_up_to_phase(out, target)[1] < 1e-10

    def test_qubits_only(self):
        g = WeightedGraph.from_edges(2, [(0, 1)], modulus=3)
        with pytest.raises(PreconditionError):
            apply_lc_unitary(build_graph_state(g), g, 0, 1)

    def test_bad_sign(self, edge):
        with pytest.raises(ValueError):
            apply_lc_unitary(build_graph_state(edge), edge, 0, 2)


class TestMeasure:
    def test_plus_in_x_basis(self):
        result = measure(plus_state(1, 2), 0, hadamard())
        assert result.outcome == 0
        assert result.probability == pytest.approx(1.0)
        assert result.post.n == 0

    def test_z_measurement_of_edge(self, edge):
        s = build_graph_state(edge)
        for outcome, expected in ((0, [1, 1]), (1, [1, -1])):
            result = measure(s, 0, z_basis(), outcome)
            assert result.probability == pytest.approx(0.5)
            assert equal_up_to_phase(result.post, state_from_vector(expected))[0]

    def test_y_measurement_of_line_middle(self, path3):
        result = measure(build_graph_state(path3), 1, y_basis(), 0)
        s_dag = np.diag([1, -1j])
        expected = apply_matrix(apply_matrix(build_graph_state(WeightedGraph.from_edges(2, [(0, 1)], 2)),
                                             0, s_dag), 1, s_dag)
        assert result.probability == pytest.approx(0.5)
        assert equal_up_to_phase(result.post, expected)[0]

    def test_probabilities_sum_to_one(self, rng):
        s = state_from_vector(rng.normal(size=9) + 1j * rng.normal(size=9), d=3)
        for j in range(2):
            assert abs(outcome_probabilities(s, j, dft(3)).sum() - 1.0) < 1e-12

    def test_forced_zero_probability(self):
        with pytest.raises(ZeroProbabilityError):
            measure(computational_state([0]), 0, z_basis(), 1)

    def test_probability_floor_from_config_file(self, config, tmp_path):
        (tmp_path / "config.yaml").write_text("tolerances:\n  probability_floor: 0.6\n", encoding="utf-8")
        load_config()
        with pytest.raises(ZeroProbabilityError):
            measure(plus_state(1, 2), 0, z_basis(), 0)
        assert measure(plus_state(1, 2), 0, z_basis(), 0, floor=0.4).probability == pytest.approx(0.5)

    def test_sampling_is_seeded(self, path3):
        s = build_graph_state(path3)
        a = [measure(s, 1, y_basis(), rng=np.random.default_rng(7)).outcome for _ in range(5)]
        b = [measure(s, 1, y_basis(), rng=np.random.default_rng(7)).outcome for _ in range(5)]
        assert a == b

    def test_rejects_non_unitary_basis(self):
        with pytest.raises(ValueError):
            measure(plus_state(1, 2), 0, np.array([[1, 0], [1, 0]]))


class TestEqualUpToPhase:
    def test_identical(self, rng):
        s = state_from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))
        assert equal_up_to_phase(s, s) == (True, 0.0)

    def test_global_phase(self, rng):
        s = state_from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))
        ok, residual = equal_up_to_phase(s, 1j * s.amps)
        assert ok
        assert residual < 1e-14

    def test_orthogonal(self):
        ok, residual = equal_up_to_phase(computational_state([0]), computational_state([1]))
        assert not ok
        assert residual == pytest.approx(np.sqrt(2))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            equal_up_to_phase(plus_state(1, 2), plus_state(2, 2))
