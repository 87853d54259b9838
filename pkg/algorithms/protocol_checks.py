"""
Oracle checks for the sequential protocol: branch determinism of the wire,
sequential vs deferred execution, passive basis redefinition, compiled
rotations, bus vs direct memory entangling and the bus graph-measurement rule.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from algorithms.compilation import compile_unitary, wire_unitary
from core.entities import EntanglingMode, Report
from core.graph import PauliBasis, WeightedGraph, max_weight_difference, measure_graph
from simulation.qudit import (QuditState, apply_cz, apply_matrix, build_graph_state,
                              equal_up_to_phase, measure, phase_s, plus_state,
                              state_from_vector, y_basis)
from simulation.sequential import (BUS_MAX_LIVE, WIRE_MAX_LIVE, TwoMemoryEngine,
                                   WireEngine, deferred_wire, outcome_branches, run_wire)

logger = logging.getLogger(__name__)


def random_qubit_state(rng: np.random.Generator, n: int = 1) -> QuditState:
    """Haar-random n-qubit state (first column of a Haar unitary)"""
    return state_from_vector(unitary_group.rvs(2 ** n, random_state=rng)[:, 0])


def expected_bus_state(joint: QuditState, sigma: int) -> QuditState:
    """(S^sigma (x) S^sigma) CZ applied to a two-memory state"""
    s = np.linalg.matrix_power(phase_s(), sigma % 4)
    state = apply_cz(joint, 0, 1)
    return apply_matrix(apply_matrix(state, 0, s), 1, s)


class ProtocolVerifier:
    """Brute-force checks of the sequential engines"""

    def __init__(self, tol: float = 1e-10, identity_tol: float = 1e-12,
                 rng: Optional[np.random.Generator] = None):
        """
        Args:
            tol: Residual bound for state comparisons up to phase
            identity_tol: Bound for the branch-by-branch basis-redefinition check
            rng: Generator for random inputs and angles
        """
        self.tol = tol
        self.identity_tol = identity_tol
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def verify_wire_schedule(self, thetas: Sequence[float], input_state: QuditState,
                             target: Optional[np.ndarray] = None, check: str = 'wire') -> Report:
        """
        Run every outcome branch of a schedule. Each branch must match the
        matrix-product oracle (or an explicit target) and the deferred
        full-register execution of the same branch.
        """
        target = wire_unitary(thetas) if target is None else target
        expected = state_from_vector(target @ input_state.amps)

        first = None
        oracle_residual = deferred_residual = determinism_residual = 0.0
        peak = 1
        branches = 0
        for outcomes in outcome_branches(len(thetas)):
            engine = WireEngine(input_state)
            logical, _ = run_wire(engine, thetas, outcomes)
            peak = max(peak, engine.peak_live_registers)
            deferred, _ = deferred_wire(input_state, thetas, outcomes)

            oracle_residual = max(oracle_residual, equal_up_to_phase(logical, expected)[1])
            deferred_residual = max(deferred_residual, equal_up_to_phase(logical, deferred)[1])
            first = logical if first is None else first
            determinism_residual = max(determinism_residual, equal_up_to_phase(logical, first)[1])
            branches += 1

        residual = max(oracle_residual, deferred_residual, determinism_residual)
        if peak > WIRE_MAX_LIVE:
            residual = float('inf')
        return Report.from_residual(
            check, residual, self.tol,
            {'k': len(thetas), 'thetas': [float(t) for t in thetas], 'branches': branches,
             'oracle_residual': oracle_residual, 'deferred_residual': deferred_residual,
             'determinism_residual': determinism_residual, 'peak_live_registers': peak},
        )

    def verify_compiled_unitary(self, target: np.ndarray, input_state: QuditState) -> Report:
        thetas = compile_unitary(target)
        return self.verify_wire_schedule(thetas, input_state, target=target, check='compile')

    def verify_basis_redefinition(self, theta: float, input_state: QuditState) -> Report:
        """
        One cycle with the register-side H applied as a gate against the same
        cycle with H folded into the basis, branch by branch.
        """
        probability_residual = state_residual = 0.0
        for outcome in (0, 1):
            active = WireEngine(input_state, absorb_hadamard=False)
            passive = WireEngine(input_state, absorb_hadamard=True)
            record_active = active.wire_cycle(theta, outcome)
            record_passive = passive.wire_cycle(theta, outcome)
            probability_residual = max(probability_residual,
                                       abs(record_active.probability - record_passive.probability))
            state_residual = max(state_residual,
                                 equal_up_to_phase(active.memory, passive.memory)[1])
        return Report.from_residual(
            'basis_redefinition', max(probability_residual, state_residual), self.identity_tol,
            {'theta': float(theta), 'probability_residual': probability_residual,
             'state_residual': state_residual},
        )

    def verify_direct(self, joint: QuditState) -> Report:
        engine = TwoMemoryEngine(joint)
        engine.entangle_memories(EntanglingMode.DIRECT)
        residual = float(np.linalg.norm(engine.joint.amps - apply_cz(joint, 0, 1).amps))
        return Report.from_residual('block2d_direct', residual, self.identity_tol,
                                    {'mode': EntanglingMode.DIRECT.value})

    def verify_bus_branch(self, joint: QuditState, outcome: Optional[int] = None) -> Report:
        """
        One bus branch (forced, or sampled from rng): the joint state equals
        (S^sigma (x) S^sigma) CZ |psi>, and after removing the stored corrections it
        equals the direct CZ |psi>.
        """
        bus = TwoMemoryEngine(joint, rng=self.rng)
        record = bus.entangle_memories(EntanglingMode.BUS, outcome)
        _, map_residual = equal_up_to_phase(bus.joint, expected_bus_state(joint, record.sigma))
        _, corrected_residual = equal_up_to_phase(bus.corrected_state(), apply_cz(joint, 0, 1))

        residual = max(map_residual, corrected_residual)
        if bus.peak_live_registers > BUS_MAX_LIVE:
            residual = float('inf')
        return Report.from_residual(
            'block2d_bus', residual, self.tol,
            {'mode': EntanglingMode.BUS.value, 'outcome': record.outcome, 'sigma': record.sigma,
             'probability': record.probability, 'map_residual': map_residual,
             'corrected_residual': corrected_residual,
             'peak_live_registers': bus.peak_live_registers},
        )

    def verify_bus_direct(self, joint: QuditState) -> Report:
        """Both bus branches against the direct CZ"""
        branches = [self.verify_bus_branch(joint, outcome) for outcome in (0, 1)]
        residual = max(b.max_residual for b in branches)
        return Report.from_residual(
            'bus_direct', residual, self.tol,
            {'map_residual': max(b.params['map_residual'] for b in branches),
             'corrected_residual': max(b.params['corrected_residual'] for b in branches),
             'peak_live_registers': max(b.params['peak_live_registers'] for b in branches)},
        )

    def verify_fig4_lu_equivalence(self) -> Report:
        """
        Line m1 - r - m2 with r measured in Y: each branch leaves (S^sigma (x) S^sigma)
        CZ|++> on the memories, and the graph rule (LC at r, delete r) gives the
        edge m1 - m2.
        """
        line = WeightedGraph.from_edges(3, [(0, 1), (1, 2)], modulus=2)
        state = build_graph_state(line, 2)
        memories = plus_state(2, 2)

        residuals = {}
        for outcome in (0, 1):
            result = measure(state, 1, y_basis(), outcome)
            sigma = -1 if outcome == 0 else 1
            residuals[outcome] = equal_up_to_phase(result.post, expected_bus_state(memories, sigma))[1]

        edge = WeightedGraph.from_edges(2, [(0, 1)], modulus=2)
        graph_residual = max_weight_difference(measure_graph(line, 1, PauliBasis.Y), edge)
        return Report.from_residual(
            'fig4', max(residuals[0], residuals[1], graph_residual), self.tol,
            {'outcome0_residual': residuals[0], 'outcome1_residual': residuals[1],
             'graph_rule_residual': graph_residual},
        )
