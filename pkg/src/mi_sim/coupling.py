"""Mutual inductance between tri-axis coil frames.

A transmit orientation u_p and receive orientation u_q couple through
m = mu_2 pi a^2 n_c u_q^t (L H) u_p; stacking all nine orientation pairs of
two orthonormal frames gives the 3x3 coupling matrix M.  The orientation
optimum m* is the spectral norm of the coupling kernel.

Coil orientations are real unit vectors, so the spectral norm is reachable
by physical coils only when the kernel's top singular pair is linearly
polarized (real up to a common phase); `optimal_orientations` returns the
best real pair either way.
"""

from __future__ import annotations

import numpy as np

from .field_matrix import FieldMatrix
from .media import CoilSpec

ORIENTATION_TOL = 1e-12
FRAME_TOL = 1e-10


def coupling_constant(fm: FieldMatrix, rx_coil: CoilSpec) -> float:
    """mu_2 pi a^2 n_c: flux scale of the receive coil [H m]."""
    return fm.water_permeability * rx_coil.area * rx_coil.turns


def _check_orientation(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (3,):
        raise ValueError("orientation must be a 3-vector")
    if abs(np.linalg.norm(u) - 1.0) > ORIENTATION_TOL:
        raise ValueError("orientation must be a unit vector")
    return u


def _check_frame(frame: np.ndarray) -> np.ndarray:
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (3, 3):
        raise ValueError("frame must be a 3x3 matrix")
    if np.max(np.abs(frame.T @ frame - np.eye(3))) > FRAME_TOL:
        raise ValueError("frame columns must be orthonormal")
    return frame


def mutual_inductance(u_p, u_q, fm: FieldMatrix, rx_coil: CoilSpec) -> complex:
    """Mutual inductance [H] between transmit axis u_p and receive axis u_q.

    The field matrix must have been built with unit transmit current.
    """
    u_p = _check_orientation(u_p)
    u_q = _check_orientation(u_q)
    return coupling_constant(fm, rx_coil) * complex(u_q @ fm.cartesian @ u_p)


def coupling_matrix(tx_frame, rx_frame, fm: FieldMatrix,
                    rx_coil: CoilSpec) -> np.ndarray:
    """3x3 coupling matrix; entry (q, p) couples tx coil p to rx coil q."""
    tx_frame = _check_frame(tx_frame)
    rx_frame = _check_frame(rx_frame)
    return coupling_constant(fm, rx_coil) * (rx_frame.T @ fm.cartesian @ tx_frame)


def m_star(fm: FieldMatrix, rx_coil: CoilSpec) -> float:
    """Orientation-optimal mutual inductance [H]: the kernel's spectral norm."""
    return coupling_constant(fm, rx_coil) * float(
        np.linalg.svd(fm.cartesian, compute_uv=False)[0])


def rank1_defect(fm: FieldMatrix) -> float:
    """||L H||_F / sigma_max: 1 for a rank-1 kernel, sqrt(3) at the other end.

    Reported per scenario because the selection theorems' m*-based constants
    are exact only in the rank-1 limit.
    """
    s = np.linalg.svd(fm.cartesian, compute_uv=False)
    return float(np.linalg.norm(s) / s[0])


def random_orientation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random direction on the unit sphere."""
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_frame(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform random rotation (orthonormal columns, det +1)."""
    a = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0.0:
        q[:, 2] = -q[:, 2]
    return q


def frame_rng(seed: int, draw: int) -> np.random.Generator:
    """Deterministic per-draw generator; identical under any parallel split."""
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(draw))))


def best_real_direction(w: np.ndarray) -> np.ndarray:
    """Real unit u maximizing |u . w| for a complex vector w.

    Splitting w = w_r + j w_i, |u.w|^2 = u^t (w_r w_r^t + w_i w_i^t) u, so
    the optimum is the top eigenvector of that rank-<=2 Gram matrix.
    """
    gram = np.outer(w.real, w.real) + np.outer(w.imag, w.imag)
    vals, vecs = np.linalg.eigh(gram)
    return vecs[:, -1]


def optimal_orientations(kernel: np.ndarray, iterations: int = 40):
    """Best real orientation pair (u_t, u_r) for a complex coupling kernel.

    Alternating maximization seeded from the top singular pair: for fixed
    u_r the optimal u_t is the best real direction of K^t u_r, and vice
    versa.  Converges to sigma_max when the top pair is linearly polarized.
    """
    kernel = np.asarray(kernel, dtype=complex)
    _, _, vh = np.linalg.svd(kernel)
    u_t = best_real_direction(vh[0].conj())
    for _ in range(iterations):
        u_r = best_real_direction(kernel @ u_t)
        u_t = best_real_direction(kernel.T @ u_r)
    gain = abs(u_r @ kernel @ u_t)
    return u_t, u_r, float(gain)


def complete_frame(first_column: np.ndarray) -> np.ndarray:
    """Orthonormal det +1 frame whose first column is the given direction."""
    u = _check_orientation(first_column)
    helper = np.eye(3)[np.argmin(np.abs(u))]
    v = np.cross(u, helper)
    v = v / np.linalg.norm(v)
    w = np.cross(u, v)
    return np.column_stack([u, v, w])


def aligned_frames(fm: FieldMatrix):
    """Frames whose first coils realize the best real orientation pair."""
    u_t, u_r, _ = optimal_orientations(fm.cartesian)
    return complete_frame(u_t), complete_frame(u_r)
