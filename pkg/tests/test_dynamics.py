import numpy as np
import pytest

from netosc import (
    ModalAmplitudes,
    build_bundle,
    build_matrices,
    degree_centrality_energy,
    flaming_indicator,
    integrate_fundamental,
    integrate_wave,
    mode_interaction_matrix,
    node_energy,
    product_form_solve,
    spectral_decomposition,
    superpose,
)
from netosc.errors import GridMismatch, NotSymmetrizable
from netosc.dynamics import (
    first_order_residual,
    second_order_residual,
    wave_energy_series,
)

from conftest import (
    k3,
    path3,
    random_detailed_balance_graph,
    random_digraph,
    random_symmetric_graph,
    ring3,
    star4,
    sym2,
)


def bundle_for(g):
    split, sd = spectral_decomposition(g)
    return sd, build_bundle(sd, mode_interaction_matrix(split.LI, sd))


def test_wave_two_node_closed_form():
    _, _, L = build_matrices(sym2())
    traj = integrate_wave(L, np.array([1.0, 0.0]), np.zeros(2), t_end=1.0, dt=1e-3)
    t = traj.times
    expected = np.stack(
        [(1 + np.cos(np.sqrt(2) * t)) / 2, (1 - np.cos(np.sqrt(2) * t)) / 2], axis=1
    )
    assert np.abs(traj.states - expected).max() <= 1e-6


def test_wave_constant_on_uniform_state(rng):
    g = random_digraph(rng, 6)
    _, _, L = build_matrices(g)
    traj = integrate_wave(L, 3.0 * np.ones(6), np.zeros(6), t_end=2.0, dt=1e-3)
    assert np.abs(traj.states - 3.0).max() <= 1e-9


def test_wave_divergence_matches_indicator():
    _, _, L = build_matrices(ring3())
    ind = flaming_indicator(L)
    traj = integrate_wave(L, np.array([1.0, 0.0, 0.0]), np.zeros(3), t_end=30.0, dt=1e-3)
    mask = traj.times >= 10.0
    slope = np.polyfit(traj.times[mask], np.log(np.linalg.norm(traj.states[mask], axis=1)), 1)[0]
    assert abs(slope - ind.growth_rate) <= 0.05 * ind.growth_rate


def test_wave_energy_conservation(rng):
    g = random_detailed_balance_graph(rng, 7)
    sd, _ = bundle_for(g)
    _, _, L = build_matrices(g)
    x0 = rng.standard_normal(7)
    traj = integrate_wave(L, x0, rng.standard_normal(7), t_end=10.0, dt=1e-3)
    E = wave_energy_series(traj, sd)
    assert (E.max() - E.min()) / max(E.max(), 1e-30) <= 1e-6


def test_fundamental_diagonal_evolution():
    Omega = np.diag([0.0, np.sqrt(2.0)])
    traj = integrate_fundamental(Omega, np.array([1.0, 1.0]), "+", t_end=1.0, dt=1e-3)
    expected = np.stack(
        [np.ones_like(traj.times), np.exp(-1j * np.sqrt(2) * traj.times)], axis=1
    )
    assert np.abs(traj.states - expected).max() <= 1e-10


def test_fundamental_zero_state(rng):
    g = random_digraph(rng, 4)
    _, b = bundle_for(g)
    traj = integrate_fundamental(b.Omega, np.zeros(4, dtype=complex), "-", t_end=1.0, dt=1e-2)
    assert not np.any(traj.states)


def test_fundamental_satisfies_second_order(rng):
    g = random_detailed_balance_graph(rng, 8)
    _, b = bundle_for(g)
    psi0 = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    for sign in "+-":
        traj = integrate_fundamental(b.Omega, psi0, sign, t_end=2.0, dt=1e-3)
        assert second_order_residual(traj, b.Lambda) <= 1e-5


def test_superpose_trivial_combination(rng):
    _, b = bundle_for(sym2())
    psi0 = np.array([1.0, 1.0], dtype=complex)
    tp = integrate_fundamental(b.Omega, psi0, "+", t_end=1.0, dt=1e-3)
    tm = integrate_fundamental(b.Omega, psi0, "-", t_end=1.0, dt=1e-3)
    combo = superpose(tp, tm, 1.0, 0.0)
    assert np.array_equal(combo.states, tp.states)


def test_superpose_conjugate_pair_is_real():
    _, b = bundle_for(sym2())
    psi0 = np.array([1.0, 1.0], dtype=complex)
    tp = integrate_fundamental(b.Omega, psi0, "+", t_end=1.0, dt=1e-3)
    tm = integrate_fundamental(b.Omega, psi0, "-", t_end=1.0, dt=1e-3)
    combo = superpose(tp, tm, 0.5, 0.5)
    assert np.abs(combo.states.imag).max() <= 1e-10


def test_superpose_generic_fails_first_order():
    # the documented two-node witness: second-order holds, first-order breaks
    _, b = bundle_for(sym2())
    psi0 = np.array([1.0, 1.0], dtype=complex)
    tp = integrate_fundamental(b.Omega, psi0, "+", t_end=1.0, dt=1e-3)
    tm = integrate_fundamental(b.Omega, psi0, "-", t_end=1.0, dt=1e-3)
    combo = superpose(tp, tm, 0.3, 0.9)
    assert second_order_residual(combo, b.Lambda) <= 1e-5
    assert first_order_residual(combo, b.Omega, "+") > 1e-3
    assert first_order_residual(combo, b.Omega, "-") > 1e-3


def test_superpose_grid_mismatch(rng):
    _, b = bundle_for(sym2())
    psi0 = np.array([1.0, 1.0], dtype=complex)
    tp = integrate_fundamental(b.Omega, psi0, "+", t_end=1.0, dt=1e-3)
    tm = integrate_fundamental(b.Omega, psi0, "-", t_end=0.5, dt=1e-3)
    with pytest.raises(GridMismatch):
        superpose(tp, tm, 1.0, 1.0)


def test_product_form_free_case(rng):
    g = random_symmetric_graph(rng, 5)
    _, b = bundle_for(g)
    psi0 = rng.standard_normal(5).astype(complex)
    traj, traj_I = product_form_solve(b.Omega0, b.OmegaI, psi0, "+", t_end=1.0, dt=1e-3)
    assert np.abs(traj_I.states - psi0).max() <= 1e-12
    assert np.allclose(traj.states[0], psi0)


def test_product_form_matches_direct(rng):
    g = random_digraph(rng, 6)
    _, b = bundle_for(g)
    psi0 = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    for sign in "+-":
        traj, _ = product_form_solve(b.Omega0, b.OmegaI, psi0, sign, t_end=5.0, dt=1e-3)
        direct = integrate_fundamental(b.Omega, psi0, sign, t_end=5.0, dt=1e-3)
        assert np.abs(traj.states - direct.states).max() <= 1e-5


def test_node_energy_star_unit_amplitudes():
    g = star4()
    split, sd = spectral_decomposition(g)
    report = node_energy(sd, ModalAmplitudes(np.ones(4)), split=split)
    assert np.allclose(report.per_node, [1.5, 0.5, 0.5, 0.5], atol=1e-9)
    assert abs(report.per_node.sum() - report.total) <= 1e-9


def test_node_energy_zero_amplitudes(rng):
    g = random_symmetric_graph(rng, 5)
    _, sd = spectral_decomposition(g)
    report = node_energy(sd, ModalAmplitudes(np.zeros(5)))
    assert report.total == 0.0
    assert not np.any(report.per_node)


def test_node_energy_single_mode(rng):
    g = random_symmetric_graph(rng, 6)
    _, sd = spectral_decomposition(g)
    a = np.zeros(6)
    a[3] = 1.0
    report = node_energy(sd, ModalAmplitudes(a))
    lam = sd.eigenvalues[3]
    assert np.allclose(report.per_node, 0.5 * lam * sd.P[:, 3] ** 2, atol=1e-12)
    assert abs(report.total - 0.5 * lam) <= 1e-12


def test_degree_centrality_path():
    assert np.allclose(degree_centrality_energy(path3()).per_node, [0.5, 1.0, 0.5], atol=1e-9)


def test_degree_centrality_complete_graph():
    assert np.allclose(degree_centrality_energy(k3()).per_node, [1.0, 1.0, 1.0], atol=1e-9)


def test_degree_centrality_weighted(rng):
    g = random_symmetric_graph(rng, 7, weighted=True)
    _, sd = spectral_decomposition(g)
    report = degree_centrality_energy(g)
    assert np.allclose(report.per_node, np.diag(sd.S0) / 2, atol=1e-9)


def test_degree_centrality_rejects_one_way():
    with pytest.raises(NotSymmetrizable):
        degree_centrality_energy(ring3())


def test_flaming_symmetrizable_is_stable(rng):
    g = random_detailed_balance_graph(rng, 8)
    _, _, L = build_matrices(g)
    ind = flaming_indicator(L)
    assert ind.verdict == "stable"
    assert ind.growth_rate <= 1e-9


def test_flaming_ring_hand_value():
    _, _, L = build_matrices(ring3())
    ind = flaming_indicator(L)
    # eigenvalues 0 and 3/2 +- i sqrt(3)/2; root modulus 3^{1/4}, angle 15 deg
    assert abs(ind.growth_rate - 3**0.25 * np.sin(np.radians(15.0))) <= 1e-9
    assert ind.verdict == "divergent"


def test_flaming_one_way_pair_is_stable():
    from netosc import from_edges

    _, _, L = build_matrices(from_edges([("1", "2", 1.0)]))
    ind = flaming_indicator(L)
    assert ind.verdict == "stable"


def test_wave_divergence_truncates():
    _, _, L = build_matrices(ring3())
    # push far enough that |x| passes the 1e12 guard (rate ~0.34: t ~ 90)
    traj = integrate_wave(L, np.array([1.0, 0.0, 0.0]), np.zeros(3), t_end=120.0, dt=1e-2)
    assert "diverged_at" in traj.meta
    assert traj.times[-1] < 120.0
