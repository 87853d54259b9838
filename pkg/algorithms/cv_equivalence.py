"""
Nullifier-level checks of the continuous-variable SWAP equivalence and of the
Gaussian LC unitaries.

All comparisons go through recover_graph, so transformed nullifiers that come
out scaled or reordered still compare equal.
"""

import logging

import numpy as np

from core.entities import Report
from core.errors import PreconditionError
from core.graph import (WeightedGraph, check_swap_precondition, local_complement,
                        max_weight_difference, permute, transposition,
                        weighted_local_complement)
from simulation.gaussian import (SymplecticOp, compose, nullifier_basis, recover_graph,
                                 row_space_residual, symplectic_cz, symplectic_fourier,
                                 symplectic_lc_unitary, symplectic_qp, symplectic_shear_p,
                                 symplectic_shear_q, symplectic_weighted_lc,
                                 transform_nullifiers)

logger = logging.getLogger(__name__)


def swap_operator(n: int, m: int, r: int) -> SymplecticOp:
    """F_r^dagger (x) F_m"""
    return symplectic_fourier(n, r, dagger=True) @ symplectic_fourier(n, m)


def leaf_residual_operator(n: int, m: int, r: int) -> SymplecticOp:
    """e^{i p_r^2/2} e^{-i q_m^2/2}: what the LC chain applies on top of the swap"""
    return symplectic_shear_p(n, r, 1) @ symplectic_shear_q(n, m, -1)


def transformed_graph(g: WeightedGraph, op: SymplecticOp, atol: float = 1e-10) -> WeightedGraph:
    return recover_graph(transform_nullifiers(nullifier_basis(g), op), atol)


class CvEquivalenceVerifier:
    """Symplectic checks of the CV swap identities"""

    def __init__(self, tol: float = 1e-10, identity_tol: float = 1e-12):
        self.tol = tol
        self.identity_tol = identity_tol

    def verify_eq2(self, g: WeightedGraph, m: int, r: int) -> Report:
        """
        Transport the nullifiers of g through F_r^dagger (x) F_m and through the LC
        chain U_LC(r, -1) U_LC(m, +1); both must recover g with m and r exchanged.
        The leaf residual operator must fix the nullifier space of g.

        Raises:
            PreconditionError: graph carries a modulus, or r is not a leaf of m
        """
        if g.modulus is not None:
            raise PreconditionError(f"expected a real-weighted graph, got modulus {g.modulus}")
        check_swap_precondition(g, m, r)
        expected = permute(g, transposition(g.n, m, r))

        swap_residual = max_weight_difference(transformed_graph(g, swap_operator(g.n, m, r)), expected)

        chain = (symplectic_lc_unitary(local_complement(g, m, 1), r, -1)
                 @ symplectic_lc_unitary(g, m, +1))
        chain_residual = max_weight_difference(transformed_graph(g, chain), expected)

        nb = nullifier_basis(g)
        stabilized = transform_nullifiers(nb, leaf_residual_operator(g.n, m, r))
        stabilizer_residual = row_space_residual(nb.M, stabilized.M)

        return Report.from_residual(
            'eq2', max(swap_residual, chain_residual, stabilizer_residual), self.tol,
            {'n': g.n, 'm': m, 'r': r, 'swap_residual': swap_residual,
             'lc_chain_residual': chain_residual, 'stabilizer_residual': stabilizer_residual},
        )

    def verify_eq4_identity(self) -> Report:
        """
        e^{i p_r^2/2} e^{-i q_m^2/2} CZ = CZ e^{i p_r^2/2} e^{i p_r q_m} on two modes
        (r = 0, m = 1); the right-hand residual fixes p_r; and on the edge graph
        U_LC(r, -1) U_LC(m, +1) = (F_r^dagger (x) F_m) e^{i p_r^2/2} e^{-i q_m^2/2}.
        """
        r, m = 0, 1
        cz = symplectic_cz(2, r, m, 1)
        lhs = compose(symplectic_shear_p(2, r, 1), symplectic_shear_q(2, m, -1), cz)
        rhs = compose(cz, symplectic_shear_p(2, r, 1), symplectic_qp(2, r, m, 1))
        matrix_residual = float(np.max(np.abs(lhs.S - rhs.S)))

        residual_op = symplectic_shear_p(2, r, 1) @ symplectic_qp(2, r, m, 1)
        p_r = np.zeros((1, 4))
        p_r[0, 2 + r] = 1.0
        momentum_residual = row_space_residual(p_r, p_r @ residual_op.transport)

        edge = WeightedGraph.from_edges(2, [(r, m)])
        chain = symplectic_lc_unitary(edge, r, -1) @ symplectic_lc_unitary(edge, m, +1)
        factored = swap_operator(2, m, r) @ leaf_residual_operator(2, m, r)
        chain_residual = float(np.max(np.abs(chain.S - factored.S)))

        return Report.from_residual(
            'eq4', max(matrix_residual, momentum_residual, chain_residual), self.identity_tol,
            {'matrix_residual': matrix_residual, 'momentum_row_residual': momentum_residual,
             'lc_chain_residual': chain_residual},
        )

    def verify_lc_property(self, g: WeightedGraph, j: int, sign: int) -> Report:
        """
        recover_graph after symplectic_lc_unitary against local_complement.

        The shear form realizes the unweighted rule only when every edge at j has
        weight +1; other graphs are rejected rather than reported as failures.
        """
        if any(g.weight(j, k) not in (0, 1) for k in range(g.n)):
            raise PreconditionError(f"edges at vertex {j} must have weight 1 for the LC unitary")
        residual = max_weight_difference(
            transformed_graph(g, symplectic_lc_unitary(g, j, sign)), local_complement(g, j, sign)
        )
        return Report.from_residual('cv_lc', residual, self.tol, {'n': g.n, 'j': j, 'sign': sign})

    def verify_weighted_lc_property(self, g: WeightedGraph, j: int, delta: float) -> Report:
        """recover_graph after symplectic_weighted_lc against weighted_local_complement"""
        residual = max_weight_difference(
            transformed_graph(g, symplectic_weighted_lc(g, j, delta)),
            weighted_local_complement(g, j, delta),
        )
        return Report.from_residual('cv_weighted_lc', residual, self.tol,
                                    {'n': g.n, 'j': j, 'delta': float(delta)})
