"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's own code paths: they
enumerate subsets/assignments directly so they can certify the fast
implementations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from container_bench import Csp, Graph, Hypergraph


@pytest.fixture(scope="session")
def triangle_csp() -> Csp:
    """Proper-2-colouring of a triangle: unsatisfiable, distance 1/3."""
    return Csp.of(3, 2, 2, [((i, j), [(0, 0), (1, 1)])
                            for i in range(3) for j in range(i + 1, 3)])


@pytest.fixture(scope="session")
def nae_csp() -> Csp:
    """Single not-all-equal constraint on three boolean variables."""
    return Csp.of(3, 2, 3, [((0, 1, 2), [(0, 0, 0), (1, 1, 1)])])


@pytest.fixture(scope="session")
def triangle_graph() -> Graph:
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture(scope="session")
def k4() -> Graph:
    return Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def subsets(universe, max_size=None):
    universe = list(universe)
    top = len(universe) if max_size is None else max_size
    for size in range(top + 1):
        yield from itertools.combinations(universe, size)


def edge_lists(host) -> list[tuple[int, ...]]:
    if isinstance(host, Graph):
        return [tuple(e) for e in host.edges()]
    return [tuple(vs) for vs in host.edge_vertex_lists()]


def oracle_is_independent(host, vertices) -> bool:
    chosen = set(vertices)
    return all(not set(e) <= chosen for e in edge_lists(host))


def oracle_independent_sets(host, size=None, variable_distinct=False):
    """All independent sets by filtering every subset, lexicographic order."""
    n = host.n
    labels = getattr(host, "labels", None)
    found = []
    for sub in subsets(range(n)):
        if size is not None and len(sub) != size:
            continue
        if variable_distinct:
            vs = [labels[v][0] for v in sub]
            if len(set(vs)) != len(vs):
                continue
        if oracle_is_independent(host, sub):
            found.append(tuple(sub))
    return sorted(found)


def oracle_min_falsified(csp: Csp) -> tuple[int, Fraction]:
    import math

    best = None
    for assignment in itertools.product(range(csp.k), repeat=csp.n):
        count = 0
        for c in csp.constraints:
            if tuple(assignment[i] for i in c.scope) in set(c.falsifying):
                count += 1
        best = count if best is None else min(best, count)
    denom = math.comb(csp.n, csp.q)
    return best, (Fraction(best, denom) if denom else Fraction(0))


def oracle_deg_leq_n(h: Hypergraph, container, n_bound: int, v: int) -> int:
    """Naive max over all D <= n_bound with v in D of deg_{H[D]}(v)."""
    container = sorted(set(container))
    others = [w for w in container if w != v]
    best = 0
    for size in range(min(n_bound, len(container))):
        for extra in itertools.combinations(others, size):
            inside = set(extra) | {v}
            deg = sum(1 for e in edge_lists(h) if v in e and set(e) <= inside)
            best = max(best, deg)
    return best


def oracle_max_independent_set(g: Graph) -> int:
    best = 0
    for sub in subsets(range(g.n)):
        if oracle_is_independent(g, sub):
            best = max(best, len(sub))
    return best


def oracle_k_colorable(host, k: int) -> bool:
    """Direct enumeration of all k^n colourings on the (hyper)graph."""
    edges = edge_lists(host)
    if not edges:
        return True
    for coloring in itertools.product(range(k), repeat=host.n):
        if all(len({coloring[v] for v in e}) > 1 for e in edges):
            return True
    return False


def oracle_shpp_member(g: Graph, spec) -> bool:
    """Direct enumeration of all k^n partition assignments on the graph."""
    for parts in itertools.product(range(spec.k), repeat=g.n):
        ok = True
        for a in range(g.n):
            for b in range(a + 1, g.n):
                if not spec.pair_allowed(g.has_edge(a, b), parts[a], parts[b]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return g.n == 0
