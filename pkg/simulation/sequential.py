"""
Sequential measurement-based engines: one memory processing a stream of flying
registers (the quantum wire), and two memories entangled directly or through a
bus register.

Per cycle the memory m meets a fresh register r in |+>, CZ(m, r) entangles them,
H_m (x) H_r swaps the two roles, and r is measured in an equatorial basis. The
register-side H is never applied as a gate: it is folded into the measurement
basis. The logical state is read out only after removing the Pauli frame.
"""

import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from core.entities import (ByproductFrame, CycleRecord, EntanglingMode,
                           EntanglingRecord, ProtocolTrace)
from core.errors import PreconditionError
from simulation.qudit import (QuditState, apply_cz, apply_matrix,
                              equatorial_basis, hadamard, measure, pauli_x, pauli_z,
                              phase_s, plus_state, tensor, y_basis)

logger = logging.getLogger(__name__)

WIRE_MAX_LIVE = 2
BUS_MAX_LIVE = 3


def _require_qubits(state: QuditState, n: int, what: str):
    if state.d != 2 or state.n != n:
        raise PreconditionError(f"{what} must be a {n}-qubit state, got n={state.n}, d={state.d}")


def frame_apply(state: QuditState, frame: ByproductFrame, register: int = 0) -> QuditState:
    """X^x Z^z on one register"""
    if frame.z:
        state = apply_matrix(state, register, pauli_z(2))
    if frame.x:
        state = apply_matrix(state, register, pauli_x(2))
    return state


def frame_remove(state: QuditState, frame: ByproductFrame, register: int = 0) -> QuditState:
    """Z^{-z} X^{-x}; inverse of frame_apply"""
    if frame.x:
        state = apply_matrix(state, register, pauli_x(2))
    if frame.z:
        state = apply_matrix(state, register, pauli_z(2))
    return state


class WireEngine:
    """Single memory consuming one flying register per cycle"""

    def __init__(self, input_state: QuditState, rng: Optional[np.random.Generator] = None,
                 absorb_hadamard: bool = True, floor: Optional[float] = None):
        """
        Args:
            input_state: One-qubit logical input stored in the memory
            rng: Generator for sampled outcomes
            absorb_hadamard: Fold the register-side H into the measurement basis;
                False applies it as a gate before an equatorial measurement
            floor: Smallest probability a forced outcome may have (default: tolerances.probability_floor)
        """
        _require_qubits(input_state, 1, "wire input")
        self.memory = input_state
        self.frame = ByproductFrame()
        self.trace = ProtocolTrace()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.absorb_hadamard = absorb_hadamard
        self.floor = floor
        self.live_registers = 1
        self.peak_live_registers = 1

    def _attach(self) -> QuditState:
        self.live_registers += 1
        self.peak_live_registers = max(self.peak_live_registers, self.live_registers)
        return tensor(self.memory, plus_state(1, 2))

    def wire_cycle(self, theta: float, forced_outcome: Optional[int] = None) -> CycleRecord:
        """
        One memory/register cycle; the logical state becomes H R_z(theta) of the
        previous logical state.

        Raises:
            ZeroProbabilityError: forced outcome below the probability floor
        """
        adapted = self.frame.adapt_angle(theta)
        joint = apply_cz(self._attach(), 0, 1)
        joint = apply_matrix(joint, 0, hadamard())

        if self.absorb_hadamard:
            basis, label = equatorial_basis(adapted) @ hadamard(), 'H-equatorial'
        else:
            joint = apply_matrix(joint, 1, hadamard())
            basis, label = equatorial_basis(adapted), 'equatorial'

        result = measure(joint, 1, basis, forced_outcome, self.rng, self.floor)
        self.memory = result.post
        self.live_registers -= 1

        # stored X^x Z^z L  ->  X^s H R_z(theta') X^x Z^z L  ~  X^(z^s) Z^x H R_z(theta) L
        self.frame.propagate_h()
        self.frame.apply_x(result.outcome)

        record = CycleRecord(theta, adapted, label, result.outcome, result.probability,
                             self.frame.to_tuple())
        self.trace.append(record)
        logger.debug("cycle theta=%.4f theta'=%.4f s=%d frame=%s",
                     theta, adapted, result.outcome, record.frame_after)
        return record

    def logical_state(self) -> QuditState:
        return frame_remove(self.memory, self.frame)


def run_wire(engine: WireEngine, thetas: Sequence[float],
             outcomes: Optional[Sequence[int]] = None) -> Tuple[QuditState, ProtocolTrace]:
    """
    Run one cycle per angle with feed-forward; outcomes are forced when given,
    sampled otherwise.
    """
    if outcomes is not None and len(outcomes) != len(thetas):
        raise ValueError(f"{len(thetas)} angles but {len(outcomes)} outcomes")
    for i, theta in enumerate(thetas):
        engine.wire_cycle(theta, None if outcomes is None else outcomes[i])
    return engine.logical_state(), engine.trace


def deferred_wire(input_state: QuditState, thetas: Sequence[float],
                  outcomes: Sequence[int]) -> Tuple[QuditState, List[float]]:
    """
    Full-register oracle: all k flying registers are present from the start,
    every interaction CZ(0, i) is followed by the swap unitary H_i (x) H_0, and the
    registers are measured in order only afterwards, with the same feed-forward.

    Returns:
        (frame-removed logical state, outcome probabilities)
    """
    _require_qubits(input_state, 1, "wire input")
    if len(outcomes) != len(thetas):
        raise ValueError(f"{len(thetas)} angles but {len(outcomes)} outcomes")
    k = len(thetas)
    state = input_state if k == 0 else tensor(input_state, plus_state(k, 2))
    h = hadamard()
    for i in range(1, k + 1):
        state = apply_cz(state, 0, i)
        state = apply_matrix(apply_matrix(state, i, h), 0, h)

    frame = ByproductFrame()
    probabilities = []
    for theta, outcome in zip(thetas, outcomes):
        result = measure(state, 1, equatorial_basis(frame.adapt_angle(theta)), outcome)
        state = result.post
        probabilities.append(result.probability)
        frame.propagate_h()
        frame.apply_x(result.outcome)
    return frame_remove(state, frame), probabilities


def outcome_branches(k: int) -> Iterator[Tuple[int, ...]]:
    return itertools.product((0, 1), repeat=k)


# ---------------------------------------------------------------------------
# Two memories
# ---------------------------------------------------------------------------

def _s_power(exponent: int) -> np.ndarray:
    return np.linalg.matrix_power(phase_s(), exponent % 4)


class TwoMemoryEngine:
    """
    Two memories (registers 0 and 1) that can be entangled by a direct CZ or by a
    bus register measured in the Y basis. Bus corrections are S-powers per memory,
    stored and never applied to the joint state.
    """

    def __init__(self, joint: QuditState, rng: Optional[np.random.Generator] = None,
                 floor: Optional[float] = None):
        _require_qubits(joint, 2, "two-memory state")
        self.joint = joint
        self.corrections = [0, 0]
        self.records: List[EntanglingRecord] = []
        self.rng = rng if rng is not None else np.random.default_rng()
        self.floor = floor
        self.live_registers = 2
        self.peak_live_registers = 2

    def entangle_memories(self, mode: EntanglingMode,
                          forced_outcome: Optional[int] = None) -> EntanglingRecord:
        """
        Direct: CZ(m1, m2). Bus: |+> register r, CZ(m1, r), CZ(m2, r), Y-measure r;
        the joint map is (S^sigma (x) S^sigma) CZ with sigma = -1 for outcome 0 and
        +1 for outcome 1.
        """
        mode = EntanglingMode(mode)
        if mode is EntanglingMode.DIRECT:
            if forced_outcome is not None:
                raise ValueError("direct entangling has no measurement outcome")
            self.joint = apply_cz(self.joint, 0, 1)
            record = EntanglingRecord(mode, None, 1.0, 0)
        else:
            self.live_registers += 1
            self.peak_live_registers = max(self.peak_live_registers, self.live_registers)
            state = apply_cz(apply_cz(tensor(self.joint, plus_state(1, 2)), 0, 2), 1, 2)
            result = measure(state, 2, y_basis(), forced_outcome, self.rng, self.floor)
            self.joint = result.post
            self.live_registers -= 1
            sigma = -1 if result.outcome == 0 else 1
            self.corrections = [(c + sigma) % 4 for c in self.corrections]
            record = EntanglingRecord(mode, result.outcome, result.probability, sigma)
        self.records.append(record)
        logger.debug("entangle %s -> %s", mode.value, record.to_dict())
        return record

    def corrected_state(self) -> QuditState:
        """Joint state with the stored S-power corrections removed"""
        state = self.joint
        for register, exponent in enumerate(self.corrections):
            if exponent:
                state = apply_matrix(state, register, _s_power(-exponent))
        return state
