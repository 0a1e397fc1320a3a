"""Command-line front end: batch analysis and verification reports.

All reports are deterministic JSON (stable key order, 12-significant-digit
floats); trajectories can be exported as CSV.  Exit codes: 0 success,
1 usage, 2 input parse error, 3 numerical failure, 4 model violation.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import doubled, dynamics, graph, sqrt_ops, symmetry
from .errors import DimensionMismatch, NetoscError, NotSymmetrizable
from .reporting import canonical_json, matrix_payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(canonical_json({"error": "Usage", "detail": message}) + "\n")
        sys.exit(1)


def _add_common(sub, multi_input=False):
    if multi_input:
        sub.add_argument("--input", required=True, nargs="+", help="edge-list file(s)")
    else:
        sub.add_argument("--input", required=True, help="edge-list file")
    sub.add_argument("--t-end", type=float, default=10.0)
    sub.add_argument("--dt", type=float, default=1e-3)
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netosc", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    for name in (
        "info",
        "check",
        "decompose",
        "spectrum",
        "sqrt",
        "simulate",
        "fundamental",
        "product-form",
        "doubled",
        "centrality",
        "flaming",
    ):
        sub = subs.add_parser(name)
        _add_common(sub)
        if name == "sqrt":
            sub.add_argument("--dump-operators", action="store_true")
        if name in ("simulate", "doubled"):
            sub.add_argument("--x0", help="comma-separated initial positions")
            sub.add_argument("--v0", help="comma-separated initial velocities")
        if name in ("fundamental", "product-form"):
            sub.add_argument("--sign", choices=("+", "-"), default="+")
            sub.add_argument("--psi0", help="comma-separated initial mode amplitudes")
    verify = subs.add_parser("verify")
    _add_common(verify, multi_input=True)
    return parser


def _parse_vector(arg, n, default):
    if arg is None:
        return default
    vec = np.array([float(p) for p in arg.split(",")])
    if len(vec) != n:
        raise DimensionMismatch(f"expected {n} components, got {len(vec)}")
    return vec


def _bundle_for_graph(g, tol):
    split, sd = symmetry.spectral_decomposition(g, tol)
    lam_I = symmetry.mode_interaction_matrix(split.LI, sd)
    return split, sd, sqrt_ops.build_bundle(sd, lam_I)


def _default_x0(n):
    x0 = np.zeros(n)
    x0[0] = 1.0
    return x0


def cmd_info(args):
    g = graph.load_edge_list(args.input)
    A = g.adjacency()
    return {
        "n": g.n,
        "num_edges": len(g.edges),
        "labels": list(g.labels),
        "out_degrees": A.sum(axis=1),
        "total_weight": float(A.sum()),
    }


def cmd_check(args):
    g = graph.load_edge_list(args.input)
    try:
        w = symmetry.check_symmetrizable(g, args.tol)
        return {"symmetrizable": True, "m": w.m, "violations": []}
    except NotSymmetrizable as exc:
        violation = {"reason": exc.reason}
        if exc.edge is not None:
            violation["edge"] = list(exc.edge)
        return {"symmetrizable": False, "m": None, "violations": [violation]}


def cmd_decompose(args):
    g = graph.load_edge_list(args.input)
    split = symmetry.decompose_laplacian(g, args.tol)
    return {
        "symmetrizable": split.is_pure_symmetrizable,
        "m": split.weights.m,
        "violations": [],
        "split": {"L0": split.L0, "LI": split.LI},
    }


def cmd_spectrum(args):
    g = graph.load_edge_list(args.input)
    split, sd = symmetry.spectral_decomposition(g, args.tol)
    return {
        "eigenvalues": sd.eigenvalues,
        "m": sd.weights.m,
        "symmetrizable": split.is_pure_symmetrizable,
    }


def cmd_sqrt(args):
    g = graph.load_edge_list(args.input)
    _, _, bundle = _bundle_for_graph(g, args.tol)
    report = {
        "omega_residual": sqrt_ops.sqrt_residual(bundle),
        "h_residual": sqrt_ops.node_sqrt_residual(bundle),
    }
    if getattr(args, "dump_operators", False):
        report["operators"] = {
            "Lambda": matrix_payload(bundle.Lambda),
            "Omega": matrix_payload(bundle.Omega),
            "Omega0": matrix_payload(bundle.Omega0),
            "OmegaI": matrix_payload(bundle.OmegaI),
            "H": matrix_payload(bundle.H),
            "H0": matrix_payload(bundle.H0),
            "HI": matrix_payload(bundle.HI),
        }
    return report


def cmd_simulate(args):
    g = graph.load_edge_list(args.input)
    L = graph.laplacian(g)
    x0 = _parse_vector(args.x0, g.n, _default_x0(g.n))
    v0 = _parse_vector(args.v0, g.n, np.zeros(g.n))
    traj = dynamics.integrate_wave(L, x0, v0, t_end=args.t_end, dt=args.dt)
    if args.format == "csv":
        return traj.to_csv()
    report = {"t_end": args.t_end, "dt": args.dt, "final_state": traj.states[-1]}
    if "diverged_at" in traj.meta:
        report["diverged_at"] = traj.meta["diverged_at"]
    return report


def cmd_fundamental(args):
    g = graph.load_edge_list(args.input)
    _, sd, bundle = _bundle_for_graph(g, args.tol)
    psi0 = _parse_vector(args.psi0, g.n, symmetry.to_modes(_default_x0(g.n), sd)).astype(
        complex
    )
    traj = dynamics.integrate_fundamental(
        bundle.Omega, psi0, sign=args.sign, t_end=args.t_end, dt=args.dt
    )
    if args.format == "csv":
        return traj.to_csv()
    return {
        "sign": args.sign,
        "final_state": traj.states[-1],
        "second_order_residual": dynamics.second_order_residual(traj, bundle.Lambda),
    }


def cmd_product_form(args):
    g = graph.load_edge_list(args.input)
    _, sd, bundle = _bundle_for_graph(g, args.tol)
    psi0 = _parse_vector(args.psi0, g.n, symmetry.to_modes(_default_x0(g.n), sd)).astype(
        complex
    )
    traj, traj_I = dynamics.product_form_solve(
        bundle.Omega0, bundle.OmegaI, psi0, sign=args.sign, t_end=args.t_end, dt=args.dt
    )
    direct = dynamics.integrate_fundamental(
        bundle.Omega, psi0, sign=args.sign, t_end=args.t_end, dt=args.dt
    )
    gap = float(np.abs(traj.states - direct.states).max())
    if args.format == "csv":
        return traj.to_csv()
    return {"sign": args.sign, "sup_gap_vs_direct": gap, "final_state": traj.states[-1]}


def cmd_doubled(args):
    g = graph.load_edge_list(args.input)
    f = doubled.sparse_factors(g)
    x0 = _parse_vector(args.x0, g.n, _default_x0(g.n))
    v0 = _parse_vector(args.v0, g.n, np.zeros(g.n))
    op = doubled.hat_H_structured(f)
    traj = doubled.integrate_doubled(
        op, doubled.lift_initial_conditions(f, x0, v0), t_end=args.t_end, dt=args.dt
    )
    s = doubled.branch_sum(traj.states)
    wave = dynamics.integrate_wave(graph.laplacian(g), x0, v0, t_end=args.t_end, dt=args.dt)
    gap = float(np.abs(s[: len(wave.states)] - wave.states).max())
    if args.format == "csv":
        return traj.to_csv()
    return {
        "sparsity_match": doubled.sparsity_match(f, g),
        "theorem1_gap": gap,
        "final_branch_sum": s[-1],
    }


def cmd_centrality(args):
    g = graph.load_edge_list(args.input)
    report = dynamics.degree_centrality_energy(g)
    return {"total": report.total, "per_node": report.per_node, "labels": list(g.labels)}


def cmd_flaming(args):
    g = graph.load_edge_list(args.input)
    ind = dynamics.flaming_indicator(graph.laplacian(g))
    return {
        "growth_rate": ind.growth_rate,
        "worst_eigenvalue": ind.worst_eigenvalue,
        "verdict": ind.verdict,
    }


def verify_graph(path, args) -> dict:
    g = graph.load_edge_list(path)
    L = graph.laplacian(g)
    f = doubled.sparse_factors(g)
    op = doubled.hat_H_structured(f)
    termD, termSym, termMix = doubled.hat_H_squared_expansion(f)
    eq19 = float(
        np.linalg.norm(termD - termSym - termMix - op.matrix @ op.matrix, "fro")
    )

    rng = np.random.default_rng(args.seed)
    x0 = rng.standard_normal(g.n)
    v0 = rng.standard_normal(g.n)
    traj = doubled.integrate_doubled(
        op, doubled.lift_initial_conditions(f, x0, v0), t_end=args.t_end, dt=args.dt
    )
    s = doubled.branch_sum(traj.states)
    eq22 = dynamics.second_order_residual(
        dynamics.Trajectory(times=traj.times, states=s), L
    )
    wave = dynamics.integrate_wave(L, x0, v0, t_end=args.t_end, dt=args.dt)
    theorem1_gap = float(np.abs(s[: len(wave.states)] - wave.states).max())
    eq26 = max(
        doubled.projection_identity_check(f, rng.standard_normal(2 * g.n))
        for _ in range(100)
    )
    return {
        "input": os.path.basename(path),
        "sparsity_match": doubled.sparsity_match(f, g),
        "eq19_residual": eq19,
        "eq22_residual": eq22,
        "eq26_residual": eq26,
        "theorem1_gap": theorem1_gap,
    }


def cmd_verify(args):
    workers = int(os.environ.get("NETOSC_THREADS", "0")) or None
    if len(args.input) == 1:
        return [verify_graph(args.input[0], args)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: verify_graph(p, args), args.input))


COMMANDS = {
    "info": cmd_info,
    "check": cmd_check,
    "decompose": cmd_decompose,
    "spectrum": cmd_spectrum,
    "sqrt": cmd_sqrt,
    "simulate": cmd_simulate,
    "fundamental": cmd_fundamental,
    "product-form": cmd_product_form,
    "doubled": cmd_doubled,
    "centrality": cmd_centrality,
    "flaming": cmd_flaming,
    "verify": cmd_verify,
}


def run(argv) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except NetoscError as exc:
        sys.stderr.write(canonical_json(exc.payload()) + "\n")
        return exc.exit_code
    except FileNotFoundError as exc:
        sys.stderr.write(canonical_json({"error": "FileNotFound", "detail": str(exc)}) + "\n")
        return 2
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        sys.stdout.write(canonical_json(result) + "\n")
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
