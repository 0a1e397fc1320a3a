"""Doubled (2n-dimensional) operators whose sparsity matches the network.

The state interleaves the two branch solutions, (x+_1, x-_1, x+_2, x-_2, ...).
The structured operator combines a diagonal factor sqrt(D) with an adjacency
factor tensored against a nilpotent 2x2 block, so its off-diagonal blocks
appear exactly where links exist; summing the branches recovers every
solution of the second-order dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dynamics import Trajectory, _check_finite, _grid, OVERFLOW_LIMIT
from .errors import DimensionMismatch, NumericalFailure, ZeroDegreeNode
from .graph import WeightedDigraph, build_matrices

E2 = np.eye(2)
SIGN2 = np.diag([1.0, -1.0])
NILPOTENT = 0.5 * np.array([[1.0, 1.0], [-1.0, -1.0]])
SWAP2 = np.array([[0.0, 1.0], [1.0, 0.0]])


def interleave(x_plus: np.ndarray, x_minus: np.ndarray) -> np.ndarray:
    """(x+, x-) -> (x+_1, x-_1, x+_2, x-_2, ...)."""
    if x_plus.shape != x_minus.shape:
        raise DimensionMismatch("branch vectors differ in length")
    out = np.empty(2 * len(x_plus), dtype=np.result_type(x_plus, x_minus, float))
    out[0::2] = x_plus
    out[1::2] = x_minus
    return out


def extract_plus(x_hat: np.ndarray) -> np.ndarray:
    return x_hat[0::2]


def extract_minus(x_hat: np.ndarray) -> np.ndarray:
    return x_hat[1::2]


def branch_sum(x_hat) -> np.ndarray:
    """s = x+ + x-, the physical state recovered from the doubled vector."""
    x_hat = np.asarray(x_hat)
    return x_hat[..., 0::2] + x_hat[..., 1::2]


@dataclass(frozen=True)
class SparseFactors:
    """Hd = diag(sqrt(d_i)) and Ha with Ha[i, j] = w_ij / sqrt(d_i)."""

    Hd: np.ndarray
    Ha: np.ndarray


@dataclass(frozen=True)
class DoubledOperator:
    matrix: np.ndarray
    kind: str                    # "spectral" or "structured"
    factors: dict


def kron_laplacian(L: np.ndarray) -> np.ndarray:
    """L_hat = L (x) E, block (i, j) equal to L[i, j] I2."""
    return np.kron(np.asarray(L), E2)


def hat_H_spectral(H: np.ndarray) -> DoubledOperator:
    """H (x) diag(1, -1); squares to L (x) E but is dense like H."""
    H = np.asarray(H)
    return DoubledOperator(matrix=np.kron(H, SIGN2), kind="spectral", factors={"H": H})


def sparse_factors(g: WeightedDigraph) -> SparseFactors:
    A, D, _ = build_matrices(g)
    d = np.diag(D)
    for i, di in enumerate(d):
        if di == 0:
            raise ZeroDegreeNode(g.labels[i])
    return SparseFactors(Hd=np.diag(np.sqrt(d)), Ha=A / np.sqrt(d)[:, None])


def hat_H_structured(f: SparseFactors) -> DoubledOperator:
    """Hd (x) diag(1,-1) - Ha (x) X with X the nilpotent half-block."""
    matrix = np.kron(f.Hd, SIGN2) - np.kron(f.Ha, NILPOTENT)
    return DoubledOperator(matrix=matrix, kind="structured", factors={"Hd": f.Hd, "Ha": f.Ha})


def offdiag_block_pattern(matrix: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Boolean n x n mask: 2x2 block (i, j), i != j, has any entry above tol."""
    n = matrix.shape[0] // 2
    blocks = np.abs(matrix).reshape(n, 2, n, 2).max(axis=(1, 3))
    pattern = blocks > tol
    np.fill_diagonal(pattern, False)
    return pattern


def sparsity_match(f: SparseFactors, g: WeightedDigraph) -> bool:
    """Off-diagonal block pattern of the structured operator equals A's pattern."""
    got = offdiag_block_pattern(hat_H_structured(f).matrix)
    want = g.adjacency() > 0
    return bool(np.array_equal(got, want))


def hat_H_squared_expansion(f: SparseFactors):
    """Three-term expansion of the structured operator squared.

    Returns (termD, termSym, termMix); termD - termSym - termMix equals the
    square.  termMix vanishes exactly when Hd commutes with Ha (regular graphs).
    """
    Hd, Ha = f.Hd, f.Ha
    termD = np.kron(Hd @ Hd, E2)
    termSym = np.kron(Hd @ Ha + Ha @ Hd, 0.5 * E2)
    termMix = np.kron(Hd @ Ha - Ha @ Hd, 0.5 * SWAP2)
    return termD, termSym, termMix


def laplacian_from_factors(f: SparseFactors) -> np.ndarray:
    """L = Hd^2 - Hd Ha (and A = Hd Ha, D = Hd^2)."""
    return f.Hd @ f.Hd - f.Hd @ f.Ha


def integrate_doubled(op: DoubledOperator, x_hat0, t_end=10.0, dt=1e-3) -> Trajectory:
    """Propagate i dx_hat/dt = H_hat x_hat with the exact one-step propagator."""
    x = np.asarray(x_hat0, dtype=complex).copy()
    if x.shape != (op.matrix.shape[0],):
        raise DimensionMismatch("doubled state length does not match operator")
    step = scipy.linalg.expm(-1j * op.matrix * dt)
    times = _grid(t_end, dt)
    states = np.empty((len(times), len(x)), dtype=complex)
    states[0] = x
    for k in range(1, len(times)):
        x = step @ x
        _check_finite(x, times[k])
        if np.abs(x).max() > OVERFLOW_LIMIT:
            raise NumericalFailure(f"doubled state overflow at t={times[k]}")
        states[k] = x
    return Trajectory(
        times=times, states=states, meta={"integrator": "expm", "dt": dt, "kind": op.kind}
    )


def lift_initial_conditions(f: SparseFactors, x0, v0) -> np.ndarray:
    """Doubled initial state with branch sum s(0) = x0 and s'(0) = v0.

    x+-(0) = (x0 +- i Hd^{-1} v0) / 2; the projection of the structured
    operator along (1, 1) rows reduces to Hd (x) (1, -1), which makes the
    lift invertible whenever Hd is.
    """
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    d_sqrt = np.diag(f.Hd)
    shift = 1j * v0 / d_sqrt
    return interleave(0.5 * (x0 + shift), 0.5 * (x0 - shift))


def projection_identity_check(f: SparseFactors, x_hat) -> float:
    """Relative residual of (I (x) (1,1)) H_hat^2 x_hat = L x."""
    x_hat = np.asarray(x_hat, dtype=complex)
    H_hat = hat_H_structured(f).matrix
    lhs = branch_sum(H_hat @ (H_hat @ x_hat))
    rhs = laplacian_from_factors(f) @ branch_sum(x_hat)
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(rhs)))


def infeasibility_witness() -> dict:
    """Verify why no exact doubled square root with matching sparsity exists.

    The nilpotent factor X is singular, so no Y with XY = E exists; the
    relaxed conditions Y^2 = E, X^2 = O are satisfiable.
    """
    X = NILPOTENT
    Y = SIGN2
    det_X = float(np.linalg.det(X))
    X_sq = X @ X
    Y_sq = Y @ Y
    return {
        "det_X": det_X,
        "X_squared_is_zero": bool(np.array_equal(X_sq, np.zeros((2, 2)))),
        "Y_squared_is_identity": bool(np.array_equal(Y_sq, E2)),
        "X_invertible": det_X != 0.0,
        "exact_condition_feasible": False,
        "relaxed_condition_feasible": True,
    }
