"""The testers: canonical satisfiability, colorability and partition-property
testing via reduction to satisfiability, the two-sample independent-set-star
tester, and the canonical independent-set baseline.

Every tester run is a pure function of (instance, params, seed); reports echo
the resolved parameters, the generator name, and exact query accounting.
Graph testers touch the graph only through a counting adapter that
deduplicates repeated pairs, so reported query counts are exact distinct-pair
counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import Graph, Hypergraph, WorkCapExceeded, bits_of, mask_of
from .csp import Csp, is_satisfiable, restrict
from .rng import GENERATOR_NAME, sample_without_replacement

DEFAULT_SEARCH_CAP = 10_000_000


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class SatTesterParams:
    """Sample size for the canonical satisfiability tester.

    When s is not given it is derived as ceil(c * (k q^3 / eps) * ln^2(kq/eps))
    (the theorem-statement form of the sample bound).
    """

    epsilon: Fraction
    s: Optional[int] = None
    c: Fraction = Fraction(1)

    def resolve_s(self, n: int, k: int, q: int) -> int:
        if self.s is not None:
            s = self.s
        else:
            lead = float(self.c) * k * q**3 / float(self.epsilon)
            log_term = math.log(k * q / float(self.epsilon)) ** 2
            s = math.ceil(lead * log_term)
        if not 1 <= s <= n:
            raise ValueError(f"sample size {s} must lie in [1, n={n}]")
        return s


@dataclass(frozen=True)
class StarTesterParams:
    """Core/body sample sizes for the star tester.

    Derived sizes: r = ceil(c1 * (rho^2/eps^{3/2}) ln^2(1/eps)),
    s = ceil(c2 * (rho^3/eps^2) ln^3(1/eps)); r <= s <= n is enforced.
    """

    rho: Fraction
    epsilon: Fraction
    r: Optional[int] = None
    s: Optional[int] = None
    c1: Fraction = Fraction(1)
    c2: Fraction = Fraction(1)
    disjoint: bool = False

    def resolve(self, n: int) -> tuple[int, int]:
        eps = float(self.epsilon)
        rho = float(self.rho)
        r = self.r
        if r is None:
            r = math.ceil(float(self.c1) * rho**2 / eps**1.5 * math.log(1 / eps) ** 2)
        s = self.s
        if s is None:
            s = math.ceil(float(self.c2) * rho**3 / eps**2 * math.log(1 / eps) ** 3)
        if not 1 <= r <= s <= n:
            raise ValueError(f"need 1 <= r <= s <= n, got r={r}, s={s}, n={n}")
        return r, s


@dataclass(frozen=True)
class TesterReport:
    kind: str
    verdict: str  # "accept" | "reject"
    seed: int
    generator: str
    params: dict
    sample: tuple[int, ...] = ()
    core_sample: tuple[int, ...] = ()
    query_count: Optional[int] = None
    witness: Optional[dict] = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


class QueryCountingGraph:
    """Adapter that answers pair queries and counts distinct pairs asked."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self._asked: set[frozenset[int]] = set()

    def query(self, u: int, v: int) -> bool:
        if u == v:
            raise ValueError("pair queries need two distinct vertices")
        self._asked.add(frozenset((u, v)))
        return self.graph.has_edge(u, v)

    @property
    def query_count(self) -> int:
        return len(self._asked)


def canonical_sat_tester(csp: Csp, params: SatTesterParams,
                         rng: np.random.Generator, seed: int = 0) -> TesterReport:
    """Sample s variables without replacement; accept iff the restriction is
    satisfiable.  One-sided: a satisfiable instance is accepted on every seed.
    """
    s = params.resolve_s(csp.n, csp.k, csp.q)
    sample = sample_without_replacement(rng, csp.n, s)
    restriction = restrict(csp, sample)
    result = is_satisfiable(restriction.csp)
    return TesterReport(
        kind="canonical-sat",
        verdict="accept" if result.satisfiable else "reject",
        seed=seed,
        generator=GENERATOR_NAME,
        params={"epsilon": str(params.epsilon), "s": s, "c": str(params.c)},
        sample=sample,
        query_count=None,
    )


def colorability_to_sat(h: Hypergraph, k: int) -> Csp:
    """One variable per vertex over [k]; each edge forbids the k all-equal
    assignments, so satisfiability is exactly k-colorability and the distance
    to satisfiability equals the distance to colorability."""
    if k < 1:
        raise ValueError("need at least one colour")
    all_equal = tuple((a,) * h.q for a in range(k))
    constraints = []
    for e in h.edges:
        constraints.append((bits_of(e), all_equal))
    return Csp.of(h.n, k, h.q, constraints)


@dataclass(frozen=True)
class SHPPSpec:
    """A k-part partition property whose density bounds are all 0 or 1.

    lower/upper are k x k 0/1 matrices; pair (i, j) of parts is forbidden for
    edges unless upper[i][j] = 1 and forced unless lower[i][j] = 0.
    """

    k: int
    lower: tuple[tuple[int, ...], ...]
    upper: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for mat, name in ((self.lower, "lower"), (self.upper, "upper")):
            if len(mat) != self.k or any(len(row) != self.k for row in mat):
                raise ValueError(f"{name} must be a {self.k}x{self.k} matrix")
            if any(x not in (0, 1) for row in mat for x in row):
                raise ValueError(f"{name} bounds must all be 0 or 1 (semi-homogeneous)")
        for i in range(self.k):
            for j in range(self.k):
                if self.lower[i][j] > self.upper[i][j]:
                    raise ValueError(f"lower[{i}][{j}] exceeds upper[{i}][{j}]")

    def pi0(self) -> frozenset[tuple[int, int]]:
        """Part pairs compatible with a non-adjacent vertex pair."""
        return frozenset((i, j) for i in range(self.k) for j in range(self.k)
                         if self.lower[i][j] == 0)

    def pi1(self) -> frozenset[tuple[int, int]]:
        """Part pairs compatible with an adjacent vertex pair."""
        return frozenset((i, j) for i in range(self.k) for j in range(self.k)
                         if self.upper[i][j] == 1)

    def pair_allowed(self, adjacent: bool, a: int, b: int) -> bool:
        allowed = self.pi1() if adjacent else self.pi0()
        return (a, b) in allowed and (b, a) in allowed


def shpp_to_sat(g: Graph, spec: SHPPSpec) -> Csp:
    """One variable per vertex over [k]; each vertex pair constrains its two
    part assignments to the compatible set for its adjacency."""
    pi0, pi1 = spec.pi0(), spec.pi1()
    k = spec.k

    def falsifying(allowed: frozenset[tuple[int, int]]):
        return tuple(sorted(
            (a, b) for a in range(k) for b in range(k)
            if not ((a, b) in allowed and (b, a) in allowed)
        ))

    fals_adjacent = falsifying(pi1)
    fals_nonadjacent = falsifying(pi0)
    constraints = []
    for a in range(g.n):
        for b in range(a + 1, g.n):
            fals = fals_adjacent if g.has_edge(a, b) else fals_nonadjacent
            constraints.append(((a, b), fals))
    return Csp.of(g.n, k, 2, constraints)


def has_independent_set_of_size(adj: tuple[int, ...], candidates: int,
                                target: int) -> bool:
    """Exact branch and bound: does the induced subgraph on the candidate
    mask contain an independent set with `target` vertices?"""
    if target <= 0:
        return True

    def rec(mask: int, need: int) -> bool:
        if need <= 0:
            return True
        if mask.bit_count() < need:
            return False
        # Branch on the max-degree vertex inside the mask.
        best_v, best_d = -1, -1
        m = mask
        while m:
            low = m & -m
            w = low.bit_length() - 1
            m ^= low
            d = (adj[w] & mask).bit_count()
            if d > best_d:
                best_v, best_d = w, d
        if best_d == 0:
            return True  # mask is already independent and large enough
        bit = 1 << best_v
        if rec(mask & ~bit & ~adj[best_v], need - 1):
            return True
        return rec(mask & ~bit, need)

    return rec(candidates, target)


def star_tester(graph: Graph, params: StarTesterParams,
                rng: np.random.Generator, seed: int = 0,
                search_cap: int = DEFAULT_SEARCH_CAP) -> TesterReport:
    """Draw a core sample R and a body sample S; query all pairs inside R and
    all R x S pairs; accept iff some independent core I of size ceil(rho r)
    inside R leaves at least ceil(rho s) vertices of S with no edge into it
    (core members of S count themselves).
    """
    n = graph.n
    r, s = params.resolve(n)
    if params.disjoint and r + s > n:
        raise ValueError(f"disjoint samples need r + s <= n, got {r}+{s} > {n}")
    core = sample_without_replacement(rng, n, r)
    if params.disjoint:
        outside = [v for v in range(n) if v not in set(core)]
        picks = sample_without_replacement(rng, len(outside), s)
        body = tuple(outside[i] for i in picks)
    else:
        body = sample_without_replacement(rng, n, s)

    m_core = _ceil_frac(params.rho * r)
    m_body = _ceil_frac(params.rho * s)
    if math.comb(r, m_core) > search_cap:
        raise WorkCapExceeded(
            f"C({r},{m_core}) core subsets exceed the search cap {search_cap}"
        )

    counted = QueryCountingGraph(graph)
    answers: dict[frozenset[int], bool] = {}
    core_list = sorted(core)
    body_list = sorted(body)
    for i, u in enumerate(core_list):
        for v in core_list[i + 1:]:
            answers[frozenset((u, v))] = counted.query(u, v)
        for v in body_list:
            if v != u:
                answers[frozenset((u, v))] = counted.query(u, v)

    # Sampled adjacency restricted to the answered pairs.
    adj_known = {u: 0 for u in core_list}
    for pair, is_edge in answers.items():
        if not is_edge:
            continue
        a, b = tuple(pair)
        if a in adj_known:
            adj_known[a] |= 1 << b
        if b in adj_known:
            adj_known[b] |= 1 << a

    body_mask = mask_of(body_list)
    witness: Optional[dict] = None

    def compatible_count(core_mask: int) -> int:
        blocked = 0
        for u in bits_of(core_mask):
            blocked |= adj_known[u]
        # Body vertices inside the core count themselves.
        return (body_mask & ~blocked & ~core_mask).bit_count() + (
            body_mask & core_mask).bit_count()

    chosen: list[int] = []

    def search(start: int, core_mask: int) -> bool:
        nonlocal witness
        if len(chosen) == m_core:
            if compatible_count(core_mask) >= m_body:
                witness = {"core": tuple(chosen),
                           "compatible": compatible_count(core_mask)}
                return True
            return False
        for idx in range(start, len(core_list)):
            if len(core_list) - idx < m_core - len(chosen):
                return False
            v = core_list[idx]
            if adj_known[v] & core_mask:
                continue
            chosen.append(v)
            if search(idx + 1, core_mask | (1 << v)):
                return True
            chosen.pop()
        return False

    accepted = search(0, 0)
    return TesterReport(
        kind="star",
        verdict="accept" if accepted else "reject",
        seed=seed,
        generator=GENERATOR_NAME,
        params={"rho": str(params.rho), "epsilon": str(params.epsilon),
                "r": r, "s": s, "c1": str(params.c1), "c2": str(params.c2),
                "disjoint": params.disjoint},
        sample=body,
        core_sample=core,
        query_count=counted.query_count,
        witness=witness,
    )


def canonical_is_tester(graph: Graph, rho: Fraction, sample_size: int,
                        rng: np.random.Generator, seed: int = 0,
                        search_cap: int = DEFAULT_SEARCH_CAP) -> TesterReport:
    """Baseline: sample vertices, query every pair among them, accept iff the
    induced subgraph has an independent set on ceil(rho * |S|) vertices."""
    n = graph.n
    if not 1 <= sample_size <= n:
        raise ValueError(f"sample size {sample_size} must lie in [1, {n}]")
    target_cap = _ceil_frac(Fraction(rho) * sample_size)
    if math.comb(sample_size, target_cap) > search_cap:
        raise WorkCapExceeded(
            f"C({sample_size},{target_cap}) subsets exceed the search cap {search_cap}"
        )
    sample = sample_without_replacement(rng, n, sample_size)
    counted = QueryCountingGraph(graph)
    sample_list = sorted(sample)
    adj_known = {u: 0 for u in sample_list}
    for i, u in enumerate(sample_list):
        for v in sample_list[i + 1:]:
            if counted.query(u, v):
                adj_known[u] |= 1 << v
                adj_known[v] |= 1 << u

    target = _ceil_frac(Fraction(rho) * sample_size)
    adj_full = tuple(adj_known.get(v, 0) for v in range(n))
    accepted = has_independent_set_of_size(adj_full, mask_of(sample_list), target)
    return TesterReport(
        kind="canonical-is",
        verdict="accept" if accepted else "reject",
        seed=seed,
        generator=GENERATOR_NAME,
        params={"rho": str(Fraction(rho)), "s": sample_size},
        sample=sample,
        query_count=counted.query_count,
    )
