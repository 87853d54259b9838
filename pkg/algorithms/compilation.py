"""
Compiling single-qubit unitaries onto the sequential wire.

Every wire cycle applies H R_z(theta) to the logical state, so a schedule
[t_1, ..., t_k] realizes H R_z(t_k) ... H R_z(t_1). Any U(2) element factors as
R_z(gamma) H R_z(beta) H R_z(alpha) up to phase, which the wire reaches with four
cycles (the trailing theta = 0 cycle cancels the leftover H).
"""

from typing import List, Sequence, Tuple

import numpy as np

from simulation.qudit import hadamard, rz

DEGENERATE_TOL = 1e-12


def wire_unitary(thetas: Sequence[float]) -> np.ndarray:
    """Matrix-product oracle: H R_z(theta_k) ... H R_z(theta_1)"""
    u = np.eye(2, dtype=complex)
    h = hadamard()
    for theta in thetas:
        u = h @ rz(theta) @ u
    return u


def compile_rotation(alpha: float, beta: float, gamma: float) -> List[float]:
    """
    Angle schedule realizing R_z(gamma) H R_z(beta) H R_z(alpha).

    Returns:
        [alpha, beta, gamma, 0.0], or [alpha + gamma, 0.0] when beta vanishes
        (H R_z(0) H is the identity). An all-zero rotation therefore compiles to
        [0.0, 0.0], the even power H^2.
    """
    if abs(np.angle(np.exp(1j * beta))) < DEGENERATE_TOL:
        return [alpha + gamma, 0.0]
    return [alpha, beta, gamma, 0.0]


def euler_angles(u: np.ndarray) -> Tuple[float, float, float]:
    """
    (alpha, beta, gamma) with u = e^{i phi} R_z(gamma) H R_z(beta) H R_z(alpha).

    H R_z(beta) H = e^{i beta/2} [[c, -i s], [-i s, c]] with c = cos(beta/2),
    s = sin(beta/2); beta is taken in [0, pi] so c, s >= 0.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"Expected a 2x2 matrix, got shape {u.shape}")
    c, s = abs(u[0, 0]), abs(u[1, 0])
    beta = 2 * float(np.arctan2(s, c))

    if c < DEGENERATE_TOL:
        phi = np.angle(u[1, 0]) + np.pi / 2
        alpha = np.angle(u[0, 1]) + np.pi / 2 - phi
        return float(alpha), beta, 0.0

    v = u * np.exp(-1j * np.angle(u[0, 0]))
    if s < DEGENERATE_TOL:
        return float(np.angle(v[1, 1])), beta, 0.0
    gamma = np.angle(v[1, 0]) + np.pi / 2
    alpha = np.angle(v[0, 1]) + np.pi / 2
    return float(alpha), beta, float(gamma)


def compile_unitary(u: np.ndarray) -> List[float]:
    return compile_rotation(*euler_angles(u))
