"""Tests for the wire and two-memory engines."""

import numpy as np
import pytest

from core.entities import ByproductFrame, EntanglingMode
from core.errors import PreconditionError, ZeroProbabilityError
from algorithms.compilation import wire_unitary
from algorithms.protocol_checks import expected_bus_state, random_qubit_state
from simulation.qudit import (apply_cz, computational_state, equal_up_to_phase,
                              plus_state, state_from_vector)
from simulation.sequential import (BUS_MAX_LIVE, WIRE_MAX_LIVE, TwoMemoryEngine, WireEngine,
                                   deferred_wire, frame_apply, frame_remove, outcome_branches,
                                   run_wire)

ZERO = computational_state([0])
PLUS = plus_state(1, 2)
MINUS = state_from_vector([1, -1])


class TestFrame:
    def test_trivial_frame(self, rng):
        s = random_qubit_state(rng)
        assert np.allclose(frame_remove(s, ByproductFrame()).amps, s.amps)

    def test_x_on_minus(self):
        assert equal_up_to_phase(frame_apply(MINUS, ByproductFrame(1, 0)), MINUS)[0]

    def test_apply_then_remove(self, rng):
        s = random_qubit_state(rng)
        frame = ByproductFrame(1, 1)
        assert equal_up_to_phase(frame_remove(frame_apply(s, frame), frame), s)[1] < 1e-12

    def test_bits_only(self):
        with pytest.raises(ValueError):
            ByproductFrame(2, 0)

    def test_h_swaps_exponents(self):
        frame = ByproductFrame(1, 0)
        frame.propagate_h()
        assert frame.to_tuple() == (0, 1)

    def test_only_x_flips_angle(self):
        assert ByproductFrame(1, 0).adapt_angle(0.3) == -0.3
        assert ByproductFrame(0, 1).adapt_angle(0.3) == 0.3


class TestWireCycle:
    def test_zero_to_plus(self):
        engine = WireEngine(ZERO)
        record = engine.wire_cycle(0.0, 0)
        assert record.probability == pytest.approx(0.5)
        assert engine.frame.to_tuple() == (0, 0)
        assert equal_up_to_phase(engine.memory, PLUS)[0]

    def test_plus_to_zero(self):
        engine = WireEngine(PLUS)
        engine.wire_cycle(0.0, 0)
        assert equal_up_to_phase(engine.logical_state(), ZERO)[0]

    def test_outcome_one_sets_x_frame(self):
        engine = WireEngine(ZERO)
        record = engine.wire_cycle(0.0, 1)
        assert record.frame_after == (1, 0)
        assert equal_up_to_phase(engine.logical_state(), PLUS)[0]
        # X |+> is |+> again, so the stored state is also |+>
        assert equal_up_to_phase(engine.memory, PLUS)[0]

    @pytest.mark.parametrize("theta", [0.0, 0.4, -1.3, np.pi])
    def test_cycle_applies_h_rz(self, rng, theta):
        psi = random_qubit_state(rng)
        expected = state_from_vector(wire_unitary([theta]) @ psi.amps)
        for outcome in (0, 1):
            engine = WireEngine(psi)
            record = engine.wire_cycle(theta, outcome)
            assert record.probability == pytest.approx(0.5)
            assert equal_up_to_phase(engine.logical_state(), expected)[1] < 1e-10

    def test_register_count(self):
        engine = WireEngine(ZERO)
        for theta in (0.1, 0.2, 0.3):
            engine.wire_cycle(theta, 0)
            assert engine.live_registers == 1
        assert engine.peak_live_registers == WIRE_MAX_LIVE

    def test_basis_labels(self):
        assert WireEngine(ZERO).wire_cycle(0.0, 0).basis == 'H-equatorial'
        assert WireEngine(ZERO, absorb_hadamard=False).wire_cycle(0.0, 0).basis == 'equatorial'

    def test_input_must_be_one_qubit(self):
        with pytest.raises(PreconditionError):
            WireEngine(plus_state(2, 2))
        with pytest.raises(PreconditionError):
            WireEngine(plus_state(1, 3))


class TestRunWire:
    def test_empty_schedule_echoes_input(self, rng):
        psi = random_qubit_state(rng)
        logical, trace = run_wire(WireEngine(psi), [])
        assert len(trace) == 0
        assert np.allclose(logical.amps, psi.amps)

    def test_two_zero_angles(self):
        logical, trace = run_wire(WireEngine(ZERO), [0.0, 0.0], [0, 0])
        assert equal_up_to_phase(logical, ZERO)[0]
        assert trace.outcomes == [0, 0]

    def test_plus_restored(self):
        for outcomes in outcome_branches(2):
            logical, _ = run_wire(WireEngine(PLUS), [0.0, 0.0], outcomes)
            assert equal_up_to_phase(logical, PLUS)[0]

    def test_branch_determinism(self, rng):
        thetas = list(rng.uniform(0, 2 * np.pi, size=5))
        psi = random_qubit_state(rng)
        expected = state_from_vector(wire_unitary(thetas) @ psi.amps)
        for outcomes in outcome_branches(len(thetas)):
            logical, trace = run_wire(WireEngine(psi), thetas, outcomes)
            assert trace.angles == thetas
            assert equal_up_to_phase(logical, expected)[1] < 1e-10

    def test_sampled_run_is_seeded(self):
        thetas = [0.3, 1.1, -0.4]
        a, trace_a = run_wire(WireEngine(ZERO, rng=np.random.default_rng(5)), thetas)
        b, trace_b = run_wire(WireEngine(ZERO, rng=np.random.default_rng(5)), thetas)
        assert trace_a.outcomes == trace_b.outcomes
        assert np.allclose(a.amps, b.amps)

    def test_outcome_length_mismatch(self):
        with pytest.raises(ValueError):
            run_wire(WireEngine(ZERO), [0.0, 0.0], [0])

    def test_active_and_absorbed_hadamard_agree(self, rng):
        psi = random_qubit_state(rng)
        thetas = [0.7, -0.2, 2.0]
        for outcomes in outcome_branches(3):
            passive, _ = run_wire(WireEngine(psi), thetas, outcomes)
            active, _ = run_wire(WireEngine(psi, absorb_hadamard=False), thetas, outcomes)
            assert equal_up_to_phase(passive, active)[1] < 1e-12


class TestDeferredWire:
    def test_matches_sequential_on_every_branch(self, rng):
        psi = random_qubit_state(rng)
        thetas = list(rng.uniform(0, 2 * np.pi, size=4))
        for outcomes in outcome_branches(4):
            sequential, trace = run_wire(WireEngine(psi), thetas, outcomes)
            deferred, probabilities = deferred_wire(psi, thetas, outcomes)
            assert equal_up_to_phase(sequential, deferred)[1] < 1e-10
            assert np.allclose(probabilities, [c.probability for c in trace.cycles])

    def test_empty_schedule(self):
        logical, probabilities = deferred_wire(ZERO, [], [])
        assert probabilities == []
        assert np.allclose(logical.amps, ZERO.amps)


class TestTwoMemoryEngine:
    def test_direct_on_plus(self):
        engine = TwoMemoryEngine(plus_state(2, 2))
        record = engine.entangle_memories(EntanglingMode.DIRECT)
        assert record.sigma == 0
        assert np.allclose(engine.joint.amps, np.array([1, 1, 1, -1]) / 2)

    def test_direct_has_no_outcome(self):
        with pytest.raises(ValueError):
            TwoMemoryEngine(plus_state(2, 2)).entangle_memories(EntanglingMode.DIRECT, 0)

    def test_bus_outcome_zero_is_s_dagger(self):
        engine = TwoMemoryEngine(plus_state(2, 2))
        record = engine.entangle_memories(EntanglingMode.BUS, 0)
        assert record.sigma == -1
        assert record.probability == pytest.approx(0.5)
        s_dag = np.diag([1, -1j])
        expected = np.kron(s_dag, s_dag) @ (np.array([1, 1, 1, -1]) / 2)
        assert equal_up_to_phase(engine.joint, expected)[0]
        assert engine.corrections == [3, 3]

    def test_bus_outcome_one_is_s(self):
        engine = TwoMemoryEngine(plus_state(2, 2))
        assert engine.entangle_memories('bus', 1).sigma == 1
        assert engine.corrections == [1, 1]

    @pytest.mark.parametrize("outcome", [0, 1])
    def test_bus_then_correction_equals_direct(self, rng, outcome):
        joint = random_qubit_state(rng, 2)
        engine = TwoMemoryEngine(joint)
        record = engine.entangle_memories(EntanglingMode.BUS, outcome)
        assert equal_up_to_phase(engine.joint, expected_bus_state(joint, record.sigma))[1] < 1e-10
        assert equal_up_to_phase(engine.corrected_state(), apply_cz(joint, 0, 1))[1] < 1e-10
        assert engine.peak_live_registers == BUS_MAX_LIVE
        assert engine.live_registers == 2

    def test_corrections_accumulate(self, rng):
        joint = random_qubit_state(rng, 2)
        engine = TwoMemoryEngine(joint)
        engine.entangle_memories(EntanglingMode.BUS, 1)
        engine.entangle_memories(EntanglingMode.BUS, 1)
        # CZ twice is the identity, S^2 = Z per memory
        assert engine.corrections == [2, 2]
        assert equal_up_to_phase(engine.corrected_state(), joint)[1] < 1e-10

    def test_needs_two_qubits(self):
        with pytest.raises(PreconditionError):
            TwoMemoryEngine(plus_state(3, 2))

    def test_probability_floor_applies_to_bus(self, rng):
        engine = TwoMemoryEngine(random_qubit_state(rng, 2), floor=0.6)
        with pytest.raises(ZeroProbabilityError):
            engine.entangle_memories(EntanglingMode.BUS, 0)
