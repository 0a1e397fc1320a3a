"""Symmetrizability detection, Laplacian decomposition, and mode coordinates.

A digraph is symmetrizable when positive node weights m exist with
m_i w_ij = m_j w_ji on every linked pair; then M^{1/2} L M^{-1/2} is a
symmetric matrix sharing the Laplacian spectrum.  Non-symmetrizable graphs
are split into a symmetrizable part plus a one-way-link remainder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSymmetrizable, NumericalFailure
from .graph import WeightedDigraph, build_matrices

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SymmetrizationWeights:
    """Per-node weights m with m_i w_ij = m_j w_ji, normalized to min(m) = 1."""

    m: np.ndarray

    def matrix_sqrt(self) -> np.ndarray:
        return np.diag(np.sqrt(self.m))

    def matrix_inv_sqrt(self) -> np.ndarray:
        return np.diag(1.0 / np.sqrt(self.m))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem of the symmetrized form S0 = M^{1/2} L0 M^{-1/2}."""

    S0: np.ndarray
    eigenvalues: np.ndarray      # ascending, eigenvalues[0] ~ 0
    P: np.ndarray                # orthogonal, columns are eigenvectors
    weights: SymmetrizationWeights


@dataclass(frozen=True)
class LaplacianSplit:
    """L = L0 + LI with L0 symmetrizable (under m) and LI one-way."""

    L0: np.ndarray
    LI: np.ndarray
    weights: SymmetrizationWeights

    @property
    def is_pure_symmetrizable(self) -> bool:
        return not np.any(self.LI)


def _reciprocal_weight_table(g: WeightedDigraph) -> dict[tuple[int, int], float]:
    return {(s, d): w for s, d, w in g.edges}


def check_symmetrizable(g: WeightedDigraph, tol: float = DEFAULT_TOL) -> SymmetrizationWeights:
    """Find symmetrizing weights m, or raise NotSymmetrizable.

    m is propagated over a spanning forest of the reciprocal-link structure
    (root weight 1), then every edge is checked for the detailed-balance
    residual |m_i w_ij - m_j w_ji| <= tol * max(m_i w_ij, m_j w_ji).
    """
    w = _reciprocal_weight_table(g)
    for (s, d), _ in w.items():
        if (d, s) not in w:
            raise NotSymmetrizable("one_way_edge", edge=(g.labels[s], g.labels[d]))

    adj: list[list[int]] = [[] for _ in range(g.n)]
    for s, d, _ in g.edges:
        adj[s].append(d)

    m = np.full(g.n, np.nan)
    for root in range(g.n):
        if not np.isnan(m[root]):
            continue
        m[root] = 1.0
        stack = [root]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if np.isnan(m[j]):
                    # detailed balance forces m_j = m_i w_ij / w_ji
                    m[j] = m[i] * w[(i, j)] / w[(j, i)]
                    stack.append(j)

    for (i, j), wij in w.items():
        lhs, rhs = m[i] * wij, m[j] * w[(j, i)]
        if abs(lhs - rhs) > tol * max(lhs, rhs):
            raise NotSymmetrizable("cycle_inconsistent", edge=(g.labels[i], g.labels[j]))

    m /= m.min()
    return SymmetrizationWeights(m=m)


def null_weight_cross_check(g: WeightedDigraph) -> np.ndarray:
    """Independent m estimate: left null vector of L, rescaled to min 1."""
    _, _, L = build_matrices(g)
    _, _, vh = np.linalg.svd(L.T)
    m = vh[-1]
    if m.sum() < 0:
        m = -m
    return m / m.min()


def decompose_laplacian(g: WeightedDigraph, tol: float = DEFAULT_TOL) -> LaplacianSplit:
    """Split L into a symmetrizable part L0 and a one-way remainder LI.

    Symmetrizable input keeps L whole (LI = 0).  Otherwise m is fixed to 1
    and each linked pair contributes min(w_ij, w_ji) symmetrically to L0;
    the residual weight goes one-way into LI, so LI = L - L0 entrywise.
    """
    _, _, L = build_matrices(g)
    try:
        weights = check_symmetrizable(g, tol)
        return LaplacianSplit(L0=L, LI=np.zeros_like(L), weights=weights)
    except NotSymmetrizable:
        pass

    w = _reciprocal_weight_table(g)
    A0 = np.zeros((g.n, g.n))
    for (s, d), wij in w.items():
        wji = w.get((d, s), 0.0)
        A0[s, d] = min(wij, wji)
    L0 = np.diag(A0.sum(axis=1)) - A0
    return LaplacianSplit(L0=L0, LI=L - L0, weights=SymmetrizationWeights(m=np.ones(g.n)))


def _fix_signs(P: np.ndarray) -> np.ndarray:
    """Deterministic sign: largest-magnitude component of each column positive."""
    P = P.copy()
    for k in range(P.shape[1]):
        i = np.argmax(np.abs(P[:, k]))
        if P[i, k] < 0:
            P[:, k] = -P[:, k]
    return P


def symmetrize(L0: np.ndarray, weights: SymmetrizationWeights) -> SpectralDecomposition:
    """Eigendecompose S0 = M^{1/2} L0 M^{-1/2} (symmetric by construction)."""
    n = L0.shape[0]
    if not np.any(L0):
        # empty symmetrizable part: any orthonormal basis works, pick identity
        return SpectralDecomposition(
            S0=np.zeros((n, n)), eigenvalues=np.zeros(n), P=np.eye(n), weights=weights
        )
    S0 = weights.matrix_sqrt() @ L0 @ weights.matrix_inv_sqrt()
    asym = np.abs(S0 - S0.T).max()
    if asym > 1e-10 * max(1.0, np.abs(S0).max()):
        raise NumericalFailure(f"symmetrized form is not symmetric (residual {asym:.3e})")
    S0 = 0.5 * (S0 + S0.T)
    try:
        lam, P = np.linalg.eigh(S0)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    return SpectralDecomposition(S0=S0, eigenvalues=lam, P=_fix_signs(P), weights=weights)


def spectral_decomposition(g: WeightedDigraph, tol: float = DEFAULT_TOL):
    """Convenience: split the graph and eigendecompose its symmetrizable part."""
    split = decompose_laplacian(g, tol)
    return split, symmetrize(split.L0, split.weights)


def to_modes(x: np.ndarray, sd: SpectralDecomposition) -> np.ndarray:
    """Node coordinates -> mode coordinates, psi = P^T M^{1/2} x."""
    x = np.asarray(x)
    if x.shape != (sd.P.shape[0],):
        raise DimensionMismatch(f"state length {x.shape} vs n={sd.P.shape[0]}")
    return sd.P.T @ (np.sqrt(sd.weights.m) * x)


def from_modes(psi: np.ndarray, sd: SpectralDecomposition) -> np.ndarray:
    """Mode coordinates -> node coordinates, x = M^{-1/2} P psi."""
    psi = np.asarray(psi)
    if psi.shape != (sd.P.shape[0],):
        raise DimensionMismatch(f"mode length {psi.shape} vs n={sd.P.shape[0]}")
    return (sd.P @ psi) / np.sqrt(sd.weights.m)


def mode_interaction_matrix(LI: np.ndarray, sd: SpectralDecomposition) -> np.ndarray:
    """Lambda_I = P^T (M^{1/2} L_I M^{-1/2}) P."""
    if LI.shape != sd.P.shape:
        raise DimensionMismatch(f"LI shape {LI.shape} vs {sd.P.shape}")
    w = sd.weights
    return sd.P.T @ (w.matrix_sqrt() @ LI @ w.matrix_inv_sqrt()) @ sd.P
