"""Shared fixtures and random-graph generators for the test suite."""

import numpy as np
import pytest

from netosc import from_edges


def ring3():
    return from_edges([("1", "2"), ("2", "3"), ("3", "1")])


def path3():
    return from_edges([("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")])


def path5():
    e = []
    for i in range(4):
        e += [(str(i), str(i + 1)), (str(i + 1), str(i))]
    return from_edges(e)


def star4():
    e = []
    for leaf in ("l1", "l2", "l3"):
        e += [("c", leaf), (leaf, "c")]
    return from_edges(e)


def k3():
    e = []
    for i in range(3):
        for j in range(3):
            if i != j:
                e.append((str(i), str(j)))
    return from_edges(e)


def sym2():
    return from_edges([("a", "b", 1.0), ("b", "a", 1.0)])


def random_digraph(rng, n, extra=None, weighted=True):
    """Strongly connected digraph: directed ring plus random extra edges."""
    if extra is None:
        extra = rng.integers(0, 2 * n)
    edges = {(i, (i + 1) % n) for i in range(n)}
    for _ in range(extra):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            edges.add((int(i), int(j)))
    weight = (lambda: float(rng.uniform(0.5, 2.0))) if weighted else (lambda: 1.0)
    return from_edges([(str(i), str(j), weight()) for i, j in sorted(edges)])


def random_undirected_skeleton(rng, n, extra=None):
    """Connected undirected pair set: random spanning tree plus extras."""
    if extra is None:
        extra = int(rng.integers(0, n))
    pairs = set()
    order = rng.permutation(n)
    for k in range(1, n):
        i = int(order[k])
        j = int(order[rng.integers(0, k)])
        pairs.add((min(i, j), max(i, j)))
    for _ in range(extra):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            pairs.add((min(int(i), int(j)), max(int(i), int(j))))
    return sorted(pairs)


def random_detailed_balance_graph(rng, n, return_m=False):
    """Symmetrizable digraph built from node weights m and symmetric base weights."""
    m = rng.uniform(0.5, 2.0, size=n)
    edges = []
    for i, j in random_undirected_skeleton(rng, n):
        b = float(rng.uniform(0.5, 2.0))
        edges.append((str(i), str(j), b / m[i]))
        edges.append((str(j), str(i), b / m[j]))
    g = from_edges(edges)
    # from_edges assigns indices by first appearance; remap m accordingly
    m_by_label = np.array([m[int(lbl)] for lbl in g.labels])
    if return_m:
        return g, m_by_label / m_by_label.min()
    return g


def random_symmetric_graph(rng, n, weighted=False):
    """Connected graph with reciprocal equal weights (m identically 1)."""
    edges = []
    for i, j in random_undirected_skeleton(rng, n):
        w = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
        edges.append((str(i), str(j), w))
        edges.append((str(j), str(i), w))
    return from_edges(edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
