"""
Dense state-vector simulation of qudit graph states.

Register 0 is the most significant mixed-radix digit: the amplitude of
|a_0 a_1 ... a_{n-1}> sits at index sum_j a_j d^(n-1-j), which is exactly
numpy's C-order reshape to a (d,)*n tensor.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

from core.errors import (GraphError, MemoryCapError, PreconditionError,
                         ZeroProbabilityError)
from core.graph import WeightedGraph, neighborhood
from utils.config import max_amplitudes, probability_floor

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuditState:
    """Normalized amplitude vector over n registers of local dimension d"""
    n: int
    d: int
    amps: np.ndarray

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"Local dimension must be >= 2, got {self.d}")
        if self.n < 0:
            raise ValueError(f"Register count must be >= 0, got {self.n}")
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.size != self.d ** self.n:
            raise ValueError(f"Expected {self.d ** self.n} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"State is not normalized (norm {norm:.15f})")
        amps.flags.writeable = False
        object.__setattr__(self, 'amps', amps)

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((self.d,) * self.n)

    def _check_register(self, j: int):
        if not 0 <= j < self.n:
            raise ValueError(f"Register {j} out of range [0, {self.n})")


@dataclass(frozen=True, eq=False)
class LocalGate:
    """d x d unitary acting on one register"""
    target: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Gate matrix must be square, got shape {m.shape}")
        check_unitary(m)
        m.flags.writeable = False
        object.__setattr__(self, 'matrix', m)


class MeasurementResult(NamedTuple):
    outcome: int
    probability: float
    post: QuditState


def check_unitary(m: np.ndarray, tol: float = UNITARY_TOL):
    err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if err > tol:
        raise ValueError(f"Matrix is not unitary (deviation {err:.2e})")


def check_size(n: int, d: int, cap: Optional[int] = None):
    """
    Raises:
        MemoryCapError: if d**n exceeds the amplitude cap
    """
    cap = max_amplitudes() if cap is None else cap
    if d ** n > cap:
        raise MemoryCapError(f"{d}^{n} = {d ** n} amplitudes exceeds the cap of {cap}")


# ---------------------------------------------------------------------------
# Gate library
# ---------------------------------------------------------------------------

def _roots(d: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(d) / d)


def dft(d: int) -> np.ndarray:
    """(F)_{ab} = exp(2 pi i ab / d) / sqrt(d)"""
    a = np.arange(d)
    return _roots(d)[np.outer(a, a) % d] / np.sqrt(d)


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def pauli_x(d: int = 2) -> np.ndarray:
    """Shift: X|a> = |a+1 mod d>"""
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def pauli_z(d: int = 2) -> np.ndarray:
    """Clock: Z|a> = w^a |a>"""
    return np.diag(_roots(d))


def phase_s() -> np.ndarray:
    return np.diag([1, 1j])


def rz(theta: float) -> np.ndarray:
    """R_z(theta)|1> = e^{i theta}|1>"""
    return np.diag([1, np.exp(1j * theta)])


def equatorial_basis(theta: float) -> np.ndarray:
    """Rows <b_s| for |b_s> = (|0> + (-1)^s e^{-i theta}|1>)/sqrt(2)"""
    phase = np.exp(1j * theta)
    return np.array([[1, phase], [1, -phase]]) / np.sqrt(2)


def y_basis() -> np.ndarray:
    """Rows <y_s|; outcome 0 is (|0> - i|1>)/sqrt(2), outcome 1 is (|0> + i|1>)/sqrt(2)"""
    return np.array([[1, 1j], [1, -1j]]) / np.sqrt(2)


def z_basis(d: int = 2) -> np.ndarray:
    return np.eye(d, dtype=complex)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

def plus_state(n: int, d: int, cap: Optional[int] = None) -> QuditState:
    if n < 1:
        raise ValueError(f"Register count must be >= 1, got {n}")
    if d < 2:
        raise ValueError(f"Local dimension must be >= 2, got {d}")
    check_size(n, d, cap)
    return QuditState(n, d, np.full(d ** n, d ** (-n / 2), dtype=complex))


def computational_state(digits: Sequence[int], d: int = 2) -> QuditState:
    n = len(digits)
    amps = np.zeros(d ** n, dtype=complex)
    index = 0
    for a in digits:
        if not 0 <= a < d:
            raise ValueError(f"Digit {a} out of range for d={d}")
        index = index * d + a
    amps[index] = 1.0
    return QuditState(n, d, amps)


def state_from_vector(vector: Sequence[complex], d: int = 2, normalize: bool = True) -> QuditState:
    amps = np.asarray(vector, dtype=complex).reshape(-1)
    n = int(round(np.log(amps.size) / np.log(d))) if amps.size > 1 else 0
    if d ** n != amps.size:
        raise ValueError(f"Vector length {amps.size} is not a power of {d}")
    if normalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("Cannot normalize the zero vector")
        amps = amps / norm
    return QuditState(n, d, amps)


def tensor(*states: QuditState, cap: Optional[int] = None) -> QuditState:
    """Registers of the first state come first (most significant)"""
    d = states[0].d
    if any(s.d != d for s in states):
        raise ValueError("All states in a tensor product must share d")
    n = sum(s.n for s in states)
    check_size(n, d, cap)
    amps = states[0].amps
    for s in states[1:]:
        amps = np.kron(amps, s.amps)
    return QuditState(n, d, amps)


# ---------------------------------------------------------------------------
# Unitary evolution
# ---------------------------------------------------------------------------

def apply_matrix(s: QuditState, j: int, matrix: np.ndarray) -> QuditState:
    s._check_register(j)
    out = np.tensordot(matrix, s.tensor(), axes=([1], [j]))
    return QuditState(s.n, s.d, np.moveaxis(out, 0, j).reshape(-1))


def apply_local(s: QuditState, gate: LocalGate) -> QuditState:
    if gate.matrix.shape != (s.d, s.d):
        raise ValueError(f"Gate is {gate.matrix.shape}, state has d={s.d}")
    return apply_matrix(s, gate.target, gate.matrix)


def apply_cz(s: QuditState, j: int, k: int, w: int = 1) -> QuditState:
    """Multiply the amplitude with digits (a_j, a_k) by exp(2 pi i w a_j a_k / d)"""
    if j == k:
        raise ValueError(f"CZ needs two distinct registers, got j = k = {j}")
    s._check_register(j)
    s._check_register(k)
    w = int(w) % s.d
    if w == 0:
        return s
    shape_j = [1] * s.n
    shape_k = [1] * s.n
    shape_j[j] = s.d
    shape_k[k] = s.d
    a_j = np.arange(s.d).reshape(shape_j)
    a_k = np.arange(s.d).reshape(shape_k)
    phase = _roots(s.d)[(w * a_j * a_k) % s.d]
    return QuditState(s.n, s.d, (s.tensor() * phase).reshape(-1))


def build_graph_state(g: WeightedGraph, d: Optional[int] = None, cap: Optional[int] = None) -> QuditState:
    """
    CZ^(w) for every edge applied to |+>^n.

    Raises:
        GraphError: if the graph modulus differs from d
    """
    d = g.modulus if d is None else d
    if g.modulus is None or g.modulus != d:
        raise GraphError(f"Graph modulus {g.modulus} does not match local dimension {d}")
    state = plus_state(g.n, d, cap)
    for j, k, w in g.edges():
        state = apply_cz(state, j, k, int(w))
    return state


@lru_cache(maxsize=None)
def _lc_exponentials(sign: int) -> Tuple[np.ndarray, np.ndarray]:
    x_part = expm(-1j * sign * np.pi / 4 * pauli_x(2))
    z_part = expm(1j * sign * np.pi / 4 * np.diag([1.0, -1.0]))
    x_part.flags.writeable = False
    z_part.flags.writeable = False
    return x_part, z_part


def lc_unitary_factors(g: WeightedGraph, j: int, sign: int) -> dict:
    """
    Single-qubit factors of U_LC(j, sign) = e^{-i sign pi/4 X_j} (x)_{l in N_j} e^{i sign pi/4 Z_l}.

    Returns:
        dict register -> 2x2 unitary
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    x_part, z_part = _lc_exponentials(sign)
    factors = {j: x_part}
    for l in neighborhood(g, j):
        factors[l] = z_part
    return factors


def apply_lc_unitary(s: QuditState, g: WeightedGraph, j: int, sign: int) -> QuditState:
    """Local Clifford realizing local_complement(g, j, sign) on qubit graph states"""
    if s.d != 2:
        raise PreconditionError(f"LC unitaries are implemented for qubits only, got d={s.d}")
    if g.n != s.n:
        raise PreconditionError(f"graph has {g.n} vertices but the state has {s.n} registers")
    for register, matrix in lc_unitary_factors(g, j, sign).items():
        s = apply_matrix(s, register, matrix)
    return s


# ---------------------------------------------------------------------------
# Measurement and comparison
# ---------------------------------------------------------------------------

def outcome_probabilities(s: QuditState, j: int, basis: np.ndarray) -> np.ndarray:
    s._check_register(j)
    rotated = np.tensordot(np.asarray(basis), s.tensor(), axes=([1], [j]))
    return np.sum(np.abs(rotated.reshape(s.d, -1)) ** 2, axis=1)


def measure(s: QuditState, j: int, basis: Union[np.ndarray, LocalGate],
            outcome: Optional[int] = None, rng: Optional[np.random.Generator] = None,
            floor: Optional[float] = None) -> MeasurementResult:
    """
    Projective measurement of register j in the basis {basis^dagger |k>}.

    The outcome is forced when given, otherwise sampled from rng. The measured
    register is removed from the returned post-measurement state.

    Raises:
        ZeroProbabilityError: forced outcome with probability below floor
            (the configured probability_floor when not given)
    """
    matrix = basis.matrix if isinstance(basis, LocalGate) else np.asarray(basis, dtype=complex)
    if matrix.shape != (s.d, s.d):
        raise ValueError(f"Basis is {matrix.shape}, state has d={s.d}")
    check_unitary(matrix)
    s._check_register(j)

    rotated = np.tensordot(matrix, s.tensor(), axes=([1], [j]))
    probs = np.sum(np.abs(rotated.reshape(s.d, -1)) ** 2, axis=1)

    if outcome is None:
        rng = rng if rng is not None else np.random.default_rng()
        outcome = int(rng.choice(s.d, p=probs / probs.sum()))
    elif not 0 <= outcome < s.d:
        raise ValueError(f"Outcome {outcome} out of range for d={s.d}")

    prob = float(probs[outcome])
    floor = probability_floor() if floor is None else floor
    if prob < floor:
        raise ZeroProbabilityError(f"Outcome {outcome} on register {j} has probability {prob:.3e}")

    branch = rotated[outcome].reshape(-1) / np.sqrt(prob)
    logger.debug("Measured register %d -> %d (p=%.6f)", j, outcome, prob)
    return MeasurementResult(outcome, prob, QuditState(s.n - 1, s.d, branch))


def equal_up_to_phase(s1: Union[QuditState, np.ndarray], s2: Union[QuditState, np.ndarray],
                      tol: float = 1e-10) -> Tuple[bool, float]:
    """
    min over phi of ||s1 - e^{i phi} s2|| and whether it is below tol.

    Evaluated directly at the optimal phase rather than through 2 - 2|<s1|s2>|,
    which loses half the digits near zero.
    """
    v1 = s1.amps if isinstance(s1, QuditState) else np.asarray(s1, dtype=complex).reshape(-1)
    v2 = s2.amps if isinstance(s2, QuditState) else np.asarray(s2, dtype=complex).reshape(-1)
    if v1.shape != v2.shape:
        raise ValueError(f"States have different sizes: {v1.size} vs {v2.size}")
    overlap = np.vdot(v2, v1)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    residual = float(np.linalg.norm(v1 - phase * v2))
    return residual < tol, residual
