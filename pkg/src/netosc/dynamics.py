"""Time integration, oscillation energy, and divergence scoring.

Second-order dynamics (d^2x/dt^2 = -Lx) are integrated with fixed-step RK4
on the (x, v) system; first-order dynamics (+-i dpsi/dt = Omega psi) use the
exact one-step propagator expm(-+ i Omega dt) applied along the grid.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    Diverged,
    GridMismatch,
    NotSymmetrizable,
    NumericalFailure,
)
from .graph import WeightedDigraph, build_matrices
from .sqrt_ops import principal_sqrt
from .symmetry import SpectralDecomposition, spectral_decomposition

OVERFLOW_LIMIT = 1e12
GROWTH_THRESHOLD = 1e-9


@dataclass(frozen=True)
class Trajectory:
    """States sampled on a uniform time grid."""

    times: np.ndarray
    states: np.ndarray           # shape (len(times), dim)
    meta: dict = field(default_factory=dict)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def to_csv(self) -> str:
        n = self.states.shape[1]
        out = io.StringIO()
        out.write("t," + ",".join(f"node{i}_re,node{i}_im" for i in range(n)) + "\n")
        for t, row in zip(self.times, self.states):
            cells = [f"{t:.12g}"]
            for z in row:
                z = complex(z)
                cells.append(f"{z.real:.12g}")
                cells.append(f"{z.imag:.12g}")
            out.write(",".join(cells) + "\n")
        return out.getvalue()


@dataclass(frozen=True)
class ModalAmplitudes:
    """Complex excitation amplitude per oscillation mode."""

    a: np.ndarray


@dataclass(frozen=True)
class EnergyReport:
    total: float
    per_node: np.ndarray
    time_series: np.ndarray | None = None


@dataclass(frozen=True)
class FlamingIndicator:
    growth_rate: float
    worst_eigenvalue: complex
    verdict: str                 # "stable" or "divergent"


def _grid(t_end: float, dt: float) -> np.ndarray:
    if dt <= 0 or t_end < 0:
        raise ValueError("dt must be > 0 and t_end >= 0")
    steps = int(round(t_end / dt))
    return np.arange(steps + 1) * dt


def _check_finite(y, t):
    if not np.all(np.isfinite(y)):
        raise NumericalFailure(f"non-finite state at t={t}")


def integrate_wave(L, x0, v0, t_end=10.0, dt=1e-3) -> Trajectory:
    """RK4 integration of d^2x/dt^2 = -Lx from (x0, v0).

    Returns states x(t); velocities ride along in meta["velocities"].
    On overflow (|x| > 1e12) the trajectory is truncated and flagged
    diverged instead of raising.
    """
    L = np.asarray(L, dtype=float)
    x = np.asarray(x0, dtype=float).copy()
    v = np.asarray(v0, dtype=float).copy()
    if x.shape != (L.shape[0],) or v.shape != (L.shape[0],):
        raise DimensionMismatch("state length does not match L")
    times = _grid(t_end, dt)
    xs = np.empty((len(times), len(x)))
    vs = np.empty_like(xs)
    xs[0], vs[0] = x, v
    diverged_at = None
    k = 0
    for k in range(1, len(times)):
        # RK4 on y' = (v, -Lx)
        k1x, k1v = v, -(L @ x)
        k2x, k2v = v + 0.5 * dt * k1v, -(L @ (x + 0.5 * dt * k1x))
        k3x, k3v = v + 0.5 * dt * k2v, -(L @ (x + 0.5 * dt * k2x))
        k4x, k4v = v + dt * k3v, -(L @ (x + dt * k3x))
        x = x + (dt / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        _check_finite(x, times[k])
        if np.abs(x).max() > OVERFLOW_LIMIT:
            diverged_at = times[k]
            k -= 1
            break
        xs[k], vs[k] = x, v
    last = k + 1
    meta = {"integrator": "rk4", "dt": dt, "velocities": vs[:last]}
    if diverged_at is not None:
        meta["diverged_at"] = diverged_at
    return Trajectory(times=times[:last], states=xs[:last], meta=meta)


def integrate_fundamental(Omega, psi0, sign="+", t_end=10.0, dt=1e-3) -> Trajectory:
    """Propagate +-i dpsi/dt = Omega psi, i.e. psi(t) = expm(-+i Omega t) psi0."""
    Omega = np.asarray(Omega, dtype=complex)
    psi = np.asarray(psi0, dtype=complex).copy()
    if psi.shape != (Omega.shape[0],):
        raise DimensionMismatch("state length does not match Omega")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    s = -1j if sign == "+" else 1j
    step = scipy.linalg.expm(s * Omega * dt)
    times = _grid(t_end, dt)
    states = np.empty((len(times), len(psi)), dtype=complex)
    states[0] = psi
    for k in range(1, len(times)):
        psi = step @ psi
        if not np.all(np.isfinite(psi)) or np.abs(psi).max() > OVERFLOW_LIMIT:
            raise NumericalFailure(f"fundamental-equation state overflow at t={times[k]}")
        states[k] = psi
    return Trajectory(
        times=times, states=states, meta={"integrator": "expm", "dt": dt, "sign": sign}
    )


def superpose(traj_plus: Trajectory, traj_minus: Trajectory, c_plus, c_minus) -> Trajectory:
    """Pointwise c+ psi+(t) + c- psi-(t) on a shared grid."""
    if traj_plus.states.shape != traj_minus.states.shape or not np.array_equal(
        traj_plus.times, traj_minus.times
    ):
        raise GridMismatch("trajectories live on different grids")
    return Trajectory(
        times=traj_plus.times,
        states=c_plus * traj_plus.states + c_minus * traj_minus.states,
        meta={"integrator": "superpose", "dt": traj_plus.dt},
    )


def product_form_solve(Omega0, OmegaI, psiI0, sign="+", t_end=10.0, dt=1e-3):
    """Interaction-picture factorization psi(t) = Psi0(t) psiI(t).

    Psi0(t) is the diagonal free propagator with Psi0(0) = I; psiI obeys
    +-i dpsiI/dt = (Psi0(-t) OmegaI Psi0(t)) psiI and is advanced by RK4.
    Returns (full trajectory psi, interaction trajectory psiI).
    """
    omega0 = np.diag(np.asarray(Omega0, dtype=complex)).copy()
    OmegaI = np.asarray(OmegaI, dtype=complex)
    psiI = np.asarray(psiI0, dtype=complex).copy()
    if psiI.shape != (len(omega0),) or OmegaI.shape != (len(omega0), len(omega0)):
        raise DimensionMismatch("operator/state dimensions disagree")
    s = -1j if sign == "+" else 1j

    def rhs(t, y):
        phase = np.exp(s * omega0 * t)               # diagonal of Psi0(t)
        return s * ((OmegaI * np.outer(1.0 / phase, phase)) @ y)

    times = _grid(t_end, dt)
    statesI = np.empty((len(times), len(psiI)), dtype=complex)
    statesI[0] = psiI
    for k in range(1, len(times)):
        t = times[k - 1]
        k1 = rhs(t, psiI)
        k2 = rhs(t + 0.5 * dt, psiI + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, psiI + 0.5 * dt * k2)
        k4 = rhs(t + dt, psiI + dt * k3)
        psiI = psiI + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_finite(psiI, times[k])
        statesI[k] = psiI

    phases = np.exp(s * np.outer(times, omega0))     # Psi0 diagonals per time
    states = phases * statesI
    meta = {"integrator": "product-form-rk4", "dt": dt, "sign": sign}
    return (
        Trajectory(times=times, states=states, meta=meta),
        Trajectory(times=times, states=statesI, meta=meta),
    )


def second_order_residual(traj: Trajectory, Lambda) -> float:
    """Max relative centered-difference residual of psi'' = -Lambda psi."""
    Lambda = np.asarray(Lambda, dtype=complex)
    psi = traj.states
    dt = traj.dt
    acc = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / dt**2
    forcing = psi[1:-1] @ Lambda.T
    num = np.linalg.norm(acc + forcing, axis=1)
    den = np.maximum(1.0, np.linalg.norm(forcing, axis=1))
    return float((num / den).max())


def first_order_residual(traj: Trajectory, Omega, sign="+") -> float:
    """Max relative centered-difference residual of +-i psi' = Omega psi."""
    Omega = np.asarray(Omega, dtype=complex)
    psi = traj.states
    dt = traj.dt
    pm = 1j if sign == "+" else -1j
    deriv = (psi[2:] - psi[:-2]) / (2 * dt)
    forcing = psi[1:-1] @ Omega.T
    num = np.linalg.norm(pm * deriv - forcing, axis=1)
    den = np.maximum(1.0, np.linalg.norm(forcing, axis=1))
    return float((num / den).max())


def wave_energy_series(traj: Trajectory, sd: SpectralDecomposition) -> np.ndarray:
    """E(t) = (1/2)(|psi_dot|^2 + psi . Lambda0 psi) along an integrate_wave run."""
    vs = traj.meta["velocities"]
    m_sqrt = np.sqrt(sd.weights.m)
    psi = (traj.states * m_sqrt) @ sd.P
    psi_dot = (vs * m_sqrt) @ sd.P
    return 0.5 * (
        np.sum(np.abs(psi_dot) ** 2, axis=1)
        + np.sum(sd.eigenvalues * np.abs(psi) ** 2, axis=1)
    )


def node_energy(
    sd: SpectralDecomposition, amps: ModalAmplitudes, split=None
) -> EnergyReport:
    """Per-node oscillation energy (1/2) sum_mu lambda_mu |a_mu|^2 v_{mu,i}^2.

    The zero-frequency mode carries no energy.  If a Laplacian split is
    supplied it must have an empty one-way part.
    """
    if split is not None and not split.is_pure_symmetrizable:
        raise NotSymmetrizable("energy centrality requires a symmetrizable graph")
    a = np.asarray(amps.a)
    if a.shape != sd.eigenvalues.shape:
        raise DimensionMismatch("amplitude length does not match mode count")
    weights = sd.eigenvalues.clip(min=0.0) * np.abs(a) ** 2
    per_node = 0.5 * (sd.P**2) @ weights
    return EnergyReport(total=float(0.5 * weights.sum()), per_node=per_node)


def degree_centrality_energy(g: WeightedDigraph) -> EnergyReport:
    """Energy under unit amplitude in every mode: diag(S0)/2, the degree/2 law."""
    split, sd = spectral_decomposition(g)
    if not split.is_pure_symmetrizable:
        raise NotSymmetrizable("energy centrality requires a symmetrizable graph")
    return node_energy(sd, ModalAmplitudes(a=np.ones(g.n)), split=split)


def flaming_indicator(L) -> FlamingIndicator:
    """Divergence score: max |Im sqrt(lambda)| over the Laplacian spectrum."""
    L = np.asarray(L, dtype=float)
    try:
        eigs = np.linalg.eigvals(L)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    # snap eigenvalues within solver rounding of the nonnegative real axis onto
    # it: sqrt amplifies an O(eps) imaginary part near 0 to O(sqrt(eps))
    clip = 1e-9 * max(1.0, np.linalg.norm(L, "fro"))
    eigs = eigs.astype(complex)
    on_axis = (np.abs(eigs.imag) <= clip) & (eigs.real >= -clip)
    eigs[on_axis] = np.maximum(eigs[on_axis].real, 0.0)
    rates = np.abs(np.imag(np.sqrt(eigs)))
    worst = int(np.argmax(rates))
    rate = float(rates[worst])
    return FlamingIndicator(
        growth_rate=rate,
        worst_eigenvalue=complex(eigs[worst]),
        verdict="divergent" if rate > GROWTH_THRESHOLD else "stable",
    )
