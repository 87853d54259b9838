"""
Local-unitary SWAP equivalences on qubit and qudit graph states.

Two routes move a leaf r of m to m's position: the Hadamard pair H_r (x) H_m,
and the chain of LC unitaries U_LC(r, -1) U_LC(m, +1). Both are compared
against the graph state of the relabelled graph, up to global phase.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from core.entities import Report
from core.errors import PreconditionError
from core.graph import (WeightedGraph, check_swap_precondition, local_complement,
                        permute, swap_by_lc, transposition, graphs_equal)
from simulation.qudit import (QuditState, apply_lc_unitary, apply_matrix,
                              build_graph_state, dft, equal_up_to_phase, hadamard,
                              pauli_x, pauli_z, plus_state, state_from_vector, tensor)

logger = logging.getLogger(__name__)

QUDIT_VARIANTS: Tuple[Tuple[str, bool, bool], ...] = (
    ("F_r (x) F_m", False, False),
    ("F_r^dag (x) F_m", True, False),
    ("F_r (x) F_m^dag", False, True),
    ("F_r^dag (x) F_m^dag", True, True),
)


def _cz_matrix() -> np.ndarray:
    return np.diag([1, 1, 1, -1]).astype(complex)


class LuEquivalenceVerifier:
    """State-vector checks of the SWAP-by-LC identities"""

    def __init__(self, state_tol: float = 1e-10, identity_tol: float = 1e-12,
                 rng: Optional[np.random.Generator] = None):
        """
        Args:
            state_tol: Residual bound for state comparisons up to phase
            identity_tol: Residual bound for exact operator identities
            rng: Generator for the random single-qubit states of the identity check
        """
        self.state_tol = state_tol
        self.identity_tol = identity_tol
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def _swap_target(self, g: WeightedGraph, m: int, r: int, d: int) -> QuditState:
        swapped = swap_by_lc(g, m, r)
        if not graphs_equal(swapped, permute(g, transposition(g.n, m, r))):
            raise PreconditionError(f"swap_by_lc({m}, {r}) did not act as the transposition")
        return build_graph_state(swapped, d)

    def verify_eq1(self, g: WeightedGraph, m: int, r: int) -> Report:
        """
        (H_r (x) H_m)|G> against |G with m and r exchanged>, plus the explicit
        LC-unitary chain realizing the same swap.

        Raises:
            PreconditionError: graph not a qubit graph, or r is not a leaf of m
        """
        if g.modulus != 2:
            raise PreconditionError(f"expected a qubit graph (modulus 2), got modulus {g.modulus}")
        check_swap_precondition(g, m, r)

        state = build_graph_state(g, 2)
        target = self._swap_target(g, m, r, 2)

        h = hadamard()
        hadamard_pair = apply_matrix(apply_matrix(state, r, h), m, h)
        _, hadamard_residual = equal_up_to_phase(hadamard_pair, target)

        chain = apply_lc_unitary(state, g, m, +1)
        chain = apply_lc_unitary(chain, local_complement(g, m, 1), r, -1)
        _, chain_residual = equal_up_to_phase(chain, target)

        return Report.from_residual(
            'eq1', max(hadamard_residual, chain_residual), self.state_tol,
            {'n': g.n, 'm': m, 'r': r,
             'hadamard_residual': hadamard_residual, 'lc_chain_residual': chain_residual},
        )

    def verify_eq3_identity(self) -> Report:
        """
        e^{-i pi/4 X_r} e^{i pi/4 Z_m} CZ = CZ e^{i pi/4 Z_m} e^{-i pi/4 X_r Z_m} as 4x4
        matrices (register order r, m), the same identity on |+>_r |psi>_m, and the
        stabilizer property of the left factor on CZ(|+>_r |psi>_m).
        """
        x, z, eye = pauli_x(2), np.diag([1.0, -1.0]).astype(complex), np.eye(2)
        rot_x = np.kron(expm(-1j * np.pi / 4 * x), eye)
        rot_z = np.kron(eye, expm(1j * np.pi / 4 * z))
        cz = _cz_matrix()
        lhs = rot_x @ rot_z @ cz
        rhs = cz @ rot_z @ expm(-1j * np.pi / 4 * np.kron(x, z))
        matrix_residual = float(np.max(np.abs(lhs - rhs)))

        psi = state_from_vector(unitary_group.rvs(2, random_state=self.rng)[:, 0])
        product = tensor(plus_state(1, 2), psi).amps
        vector_residual = float(np.linalg.norm(lhs @ product - rhs @ product))

        stabilizer = rot_x @ rot_z
        graph_state = cz @ tensor(plus_state(1, 2), plus_state(1, 2)).amps
        _, graph_residual = equal_up_to_phase(stabilizer @ graph_state, graph_state)
        generic = cz @ product
        _, generic_residual = equal_up_to_phase(stabilizer @ generic, generic)

        residual = max(matrix_residual, vector_residual, graph_residual, generic_residual)
        return Report.from_residual(
            'eq3', residual, self.identity_tol,
            {'matrix_residual': matrix_residual, 'vector_residual': vector_residual,
             'stabilizer_residual_plus': graph_residual,
             'stabilizer_residual_random_psi': generic_residual},
        )

    def verify_qudit_swap(self, g: WeightedGraph, m: int, r: int, d: int) -> Report:
        """
        Try the four DFT dagger placements on |G> and report every variant that
        reaches the swapped graph state; the residual is the best variant's.
        """
        if g.modulus != d:
            raise PreconditionError(f"graph modulus {g.modulus} does not match d={d}")
        check_swap_precondition(g, m, r)

        state = build_graph_state(g, d)
        target = self._swap_target(g, m, r, d)
        f = dft(d)
        f_dag = f.conj().T

        residuals = {}
        for name, dagger_r, dagger_m in QUDIT_VARIANTS:
            out = apply_matrix(state, r, f_dag if dagger_r else f)
            out = apply_matrix(out, m, f_dag if dagger_m else f)
            residuals[name] = equal_up_to_phase(out, target)[1]

        passing: List[str] = [name for name, _, _ in QUDIT_VARIANTS if residuals[name] < self.state_tol]
        best = min(residuals.values())
        logger.debug("qudit swap d=%d n=%d: passing %s", d, g.n, passing)
        return Report.from_residual(
            'qudit', best, self.state_tol,
            {'d': d, 'n': g.n, 'm': m, 'r': r, 'passing': passing,
             'first_passing': passing[0] if passing else None},
        )
