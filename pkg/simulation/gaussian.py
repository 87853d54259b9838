"""
Continuous-variable backend: symplectic Gaussian unitaries, nullifier algebra
for ideal CV graph states and a finite-squeezing covariance simulator.

Quadratures are ordered (q_1..q_n, p_1..p_n) with [q, p] = i (hbar = 1), so the
vacuum has variance 1/2 per quadrature.

A SymplecticOp stores the Heisenberg matrix S of its unitary U, U^dagger x U = S x,
so S(U_a U_b) = S_a S_b. The conjugation x -> U x U^dagger (used to transport
nullifiers from |psi> to U|psi>) is S^{-1}:

    F            (q, p)  -> (p, -q)
    CZ_jk(w)     p_j     -> p_j - w q_k,  p_k -> p_k - w q_j
    e^{i a p^2/2}  q     -> q + a p
    e^{i b q^2/2}  p     -> p - b q

Derivation of the graph nullifiers: |0>_p is annihilated by p_j, and conjugating
p_j with e^{i w q_j q_k} gives p_j - w q_k, hence CZ_G |0>_p^n is annihilated by
p_j - sum_k Gamma_jk q_k for every j.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.linalg import pinv

from core.errors import GraphError, NullifierBasisError
from core.graph import WeightedGraph, neighborhood
from utils.config import physicality_tolerance

logger = logging.getLogger(__name__)

SYMPLECTIC_TOL = 1e-10
PINV_ATOL = 1e-15


def symplectic_form(n: int) -> np.ndarray:
    """Omega for the (q.., p..) ordering"""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def _require_real_weighted(g: WeightedGraph):
    if g.modulus is not None:
        raise GraphError(f"CV graphs carry real weights; got a graph with modulus {g.modulus}")


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Gaussian unitary as a 2n x 2n Heisenberg matrix plus (always zero) displacement"""
    n: int
    S: np.ndarray
    c: Optional[np.ndarray] = None
    label: str = ''

    def __post_init__(self):
        S = np.array(self.S, dtype=float)
        if S.shape != (2 * self.n, 2 * self.n):
            raise ValueError(f"Symplectic matrix must be {2 * self.n}x{2 * self.n}, got {S.shape}")
        c = np.zeros(2 * self.n) if self.c is None else np.array(self.c, dtype=float)
        object.__setattr__(self, 'S', S)
        object.__setattr__(self, 'c', c)
        if self.symplectic_error() > SYMPLECTIC_TOL:
            raise ValueError(f"Matrix is not symplectic (error {self.symplectic_error():.2e})")

    @classmethod
    def identity(cls, n: int) -> "SymplecticOp":
        return cls(n, np.eye(2 * n), label='I')

    def symplectic_error(self) -> float:
        omega = symplectic_form(self.n)
        return float(np.max(np.abs(self.S @ omega @ self.S.T - omega))) if self.n else 0.0

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        """Operator product U_self U_other"""
        if self.n != other.n:
            raise ValueError(f"Mode count mismatch: {self.n} vs {other.n}")
        label = f"{self.label}{other.label}" if self.label and other.label else ''
        return SymplecticOp(self.n, self.S @ other.S, label=label)

    def inverse(self) -> "SymplecticOp":
        """S^{-1} = -Omega S^T Omega, exact for integer matrices"""
        omega = symplectic_form(self.n)
        return SymplecticOp(self.n, -omega @ self.S.T @ omega, label=f"({self.label})^-1" if self.label else '')

    @property
    def transport(self) -> np.ndarray:
        """Matrix of x -> U x U^dagger"""
        return self.inverse().S


def compose(*ops: SymplecticOp) -> SymplecticOp:
    """compose(A, B, C) represents the operator product A B C"""
    result = ops[0]
    for op in ops[1:]:
        result = result @ op
    return result


def _check_mode(n: int, j: int):
    if not 0 <= j < n:
        raise ValueError(f"Mode {j} out of range [0, {n})")


def symplectic_fourier(n: int, j: int, dagger: bool = False) -> SymplecticOp:
    """F_j (or F_j^dagger): conjugation sends (q_j, p_j) to (p_j, -q_j) for F"""
    _check_mode(n, j)
    S = np.eye(2 * n)
    sign = -1.0 if dagger else 1.0
    S[j, j] = S[n + j, n + j] = 0.0
    S[j, n + j] = -sign
    S[n + j, j] = sign
    return SymplecticOp(n, S, label=f"F{j}" + ("^dag" if dagger else ""))


def symplectic_cz(n: int, j: int, k: int, w: float = 1.0) -> SymplecticOp:
    """e^{i w q_j q_k}"""
    if j == k:
        raise ValueError(f"CZ needs two distinct modes, got j = k = {j}")
    _check_mode(n, j)
    _check_mode(n, k)
    S = np.eye(2 * n)
    S[n + j, k] = float(w)
    S[n + k, j] = float(w)
    return SymplecticOp(n, S, label=f"CZ{j}{k}")


def symplectic_shear_p(n: int, j: int, a: float) -> SymplecticOp:
    """e^{i a p_j^2 / 2}"""
    _check_mode(n, j)
    S = np.eye(2 * n)
    S[j, n + j] = -float(a)
    return SymplecticOp(n, S)


def symplectic_shear_q(n: int, j: int, b: float) -> SymplecticOp:
    """e^{i b q_j^2 / 2}"""
    _check_mode(n, j)
    S = np.eye(2 * n)
    S[n + j, j] = float(b)
    return SymplecticOp(n, S)


def symplectic_qp(n: int, r: int, m: int, c: float = 1.0) -> SymplecticOp:
    """e^{i c p_r q_m}"""
    if r == m:
        raise ValueError(f"e^(i p q) coupling needs two distinct modes, got {r}")
    _check_mode(n, r)
    _check_mode(n, m)
    S = np.eye(2 * n)
    S[r, m] = -float(c)
    S[n + m, n + r] = float(c)
    return SymplecticOp(n, S)


def symplectic_graph(g: WeightedGraph) -> SymplecticOp:
    """Product of CZ(w) over all edges (they commute)"""
    _require_real_weighted(g)
    op = SymplecticOp.identity(g.n)
    for j, k, w in g.edges():
        op = op @ symplectic_cz(g.n, j, k, float(w))
    return op


def symplectic_lc_unitary(g: WeightedGraph, j: int, sign: int) -> SymplecticOp:
    """e^{+-i p_j^2/2} (x)_{l in N_j} e^{-+i q_l^2/2}"""
    _require_real_weighted(g)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    op = symplectic_shear_p(g.n, j, sign)
    for l in sorted(neighborhood(g, j)):
        op = op @ symplectic_shear_q(g.n, l, -sign)
    return op


def symplectic_weighted_lc(g: WeightedGraph, j: int, delta: float) -> SymplecticOp:
    """e^{i delta p_j^2/2} (x)_{l in N_j} e^{-i delta Gamma_jl^2 q_l^2/2}; realizes weighted_local_complement"""
    _require_real_weighted(g)
    op = symplectic_shear_p(g.n, j, float(delta))
    for l in sorted(neighborhood(g, j)):
        op = op @ symplectic_shear_q(g.n, l, -float(delta) * float(g.weight(j, l)) ** 2)
    return op


# ---------------------------------------------------------------------------
# Nullifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NullifierBasis:
    """Row j holds the quadrature coefficients of the j-th nullifier"""
    n: int
    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        if M.shape != (self.n, 2 * self.n):
            raise ValueError(f"Nullifier matrix must be {self.n}x{2 * self.n}, got {M.shape}")
        if self.n and np.linalg.matrix_rank(M) < self.n:
            raise ValueError("Nullifier rows are linearly dependent")
        object.__setattr__(self, 'M', M)


def nullifier_basis(g: WeightedGraph) -> NullifierBasis:
    """M = [-Gamma | I]"""
    _require_real_weighted(g)
    return NullifierBasis(g.n, np.hstack([-g.as_array(), np.eye(g.n)]))


def transform_nullifiers(nb: NullifierBasis, op: SymplecticOp) -> NullifierBasis:
    """Coefficients of U n U^dagger: M' = M S^{-1}"""
    if nb.n != op.n:
        raise ValueError(f"Mode count mismatch: basis {nb.n}, operator {op.n}")
    return NullifierBasis(nb.n, nb.M @ op.transport)


def recover_graph(nb: NullifierBasis, atol: float = 1e-10) -> WeightedGraph:
    """
    Row-reduce to [-Gamma | I] and return Gamma.

    Entries below atol are set to zero.

    Raises:
        NullifierBasisError: singular p-block, asymmetric or nonzero-diagonal Gamma
    """
    n = nb.n
    a_block, p_block = nb.M[:, :n], nb.M[:, n:]
    if np.linalg.matrix_rank(p_block) < n:
        raise NullifierBasisError("not a graph-state nullifier basis: p-block is singular")
    gamma = -np.linalg.solve(p_block, a_block)
    asym = float(np.max(np.abs(gamma - gamma.T))) if n else 0.0
    diag = float(np.max(np.abs(np.diag(gamma)))) if n else 0.0
    if asym > atol or diag > atol:
        raise NullifierBasisError(
            f"not a graph-state nullifier basis: asymmetry {asym:.2e}, diagonal {diag:.2e}"
        )
    gamma = (gamma + gamma.T) / 2
    gamma[np.abs(gamma) < atol] = 0.0
    np.fill_diagonal(gamma, 0.0)
    rows = tuple(tuple(Fraction(float(x)) for x in row) for row in gamma)
    return WeightedGraph(n, rows, None)


def row_space_residual(reference: np.ndarray, candidate: np.ndarray) -> float:
    """Largest component of candidate rows outside the row space of reference"""
    reference = np.atleast_2d(reference)
    candidate = np.atleast_2d(candidate)
    projector = pinv(reference) @ reference
    return float(np.max(np.abs(candidate - candidate @ projector)))


# ---------------------------------------------------------------------------
# Finite squeezing
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GaussianState:
    """Covariance matrix V and mean vector of an n-mode Gaussian state"""
    n: int
    V: np.ndarray
    mean: np.ndarray = field(default=None)

    def __post_init__(self):
        V = np.array(self.V, dtype=float).reshape(2 * self.n, 2 * self.n)
        mean = np.zeros(2 * self.n) if self.mean is None else np.array(self.mean, dtype=float).reshape(-1)
        if mean.shape != (2 * self.n,):
            raise ValueError(f"Mean must have length {2 * self.n}, got {mean.shape}")
        if self.n and np.max(np.abs(V - V.T)) > self._scaled_tolerance(V):
            raise ValueError("Covariance matrix is not symmetric")
        object.__setattr__(self, 'V', (V + V.T) / 2)
        object.__setattr__(self, 'mean', mean)
        if not self.is_physical():
            raise ValueError("Covariance matrix violates the uncertainty principle")

    @staticmethod
    def _scaled_tolerance(V: np.ndarray, tol: Optional[float] = None) -> float:
        """Rounding in V grows with its largest entry (e^{2 zeta}/2 for squeezed modes)"""
        tol = physicality_tolerance() if tol is None else tol
        return tol * max(1.0, float(np.abs(V).max(initial=0.0)))

    def is_physical(self, tol: Optional[float] = None) -> bool:
        """V + i Omega / 2 >= 0, up to tol relative to the largest entry of V"""
        if self.n == 0:
            return True
        eigs = np.linalg.eigvalsh(self.V + 0.5j * symplectic_form(self.n))
        return bool(eigs.min() >= -self._scaled_tolerance(self.V, tol))

    def purity(self) -> float:
        """1 / sqrt(det(2V))"""
        return float(1.0 / np.sqrt(np.linalg.det(2 * self.V))) if self.n else 1.0

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        idx = list(modes) + [self.n + m for m in modes]
        return GaussianState(len(modes), self.V[np.ix_(idx, idx)], self.mean[idx])


class HomodyneResult(NamedTuple):
    outcome: float
    post: GaussianState


def vacuum(n: int) -> GaussianState:
    return GaussianState(n, np.eye(2 * n) / 2)


def apply_symplectic(gs: GaussianState, op: SymplecticOp) -> GaussianState:
    if gs.n != op.n:
        raise ValueError(f"Mode count mismatch: state {gs.n}, operator {op.n}")
    return GaussianState(gs.n, op.S @ gs.V @ op.S.T, op.S @ gs.mean + op.c)


def gaussian_graph_state(g: WeightedGraph, zeta: float) -> GaussianState:
    """
    p-squeezed vacua (Var q = e^{2 zeta}/2, Var p = e^{-2 zeta}/2) entangled by
    the graph's CZ gates; the ideal CV graph state is the zeta -> inf limit.
    """
    if zeta < 0:
        raise ValueError(f"Squeezing must be >= 0, got {zeta}")
    _require_real_weighted(g)
    squeezed = np.diag([np.exp(2 * zeta) / 2] * g.n + [np.exp(-2 * zeta) / 2] * g.n)
    return apply_symplectic(GaussianState(g.n, squeezed), symplectic_graph(g))


def nullifier_variances(gs: GaussianState, g: WeightedGraph) -> np.ndarray:
    """Var(n_j) = row_j V row_j^T for the nullifiers of g"""
    if gs.n != g.n:
        raise ValueError(f"Mode count mismatch: state {gs.n}, graph {g.n}")
    M = nullifier_basis(g).M
    return np.einsum('ij,jk,ik->i', M, gs.V, M)


def homodyne_measure(gs: GaussianState, k: int, phi: float, outcome: Optional[float] = None,
                     rng: Optional[np.random.Generator] = None) -> HomodyneResult:
    """
    Measure cos(phi) q_k + sin(phi) p_k and condition the remaining modes.

    The conditional update uses a pseudo-inverse of the measured variance, so
    a perfectly squeezed measured quadrature leaves the other modes unchanged
    instead of dividing by zero.
    """
    _check_mode(gs.n, k)
    n = gs.n
    v = np.zeros(2 * n)
    v[k] = np.cos(phi)
    v[n + k] = np.sin(phi)
    mu = float(v @ gs.mean)
    var = float(v @ gs.V @ v)

    if outcome is None:
        rng = rng if rng is not None else np.random.default_rng()
        outcome = float(rng.normal(mu, np.sqrt(max(var, 0.0))))

    keep = [i for i in range(n) if i != k] + [n + i for i in range(n) if i != k]
    cross = gs.V[keep] @ v
    inv = pinv(np.atleast_2d(var), atol=PINV_ATOL, rtol=0.0)[0, 0]
    V_post = gs.V[np.ix_(keep, keep)] - inv * np.outer(cross, cross)
    mean_post = gs.mean[keep] + cross * inv * (outcome - mu)
    logger.debug("Homodyne on mode %d at phi=%.4f -> %.6f", k, phi, outcome)
    return HomodyneResult(float(outcome), GaussianState(n - 1, V_post, mean_post))
