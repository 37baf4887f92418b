"""Instance generation and exact farness certification.

Every generator is a pure function of its seed: the variate draw order is
fixed (scopes and pairs in lexicographic order), so outputs are byte-identical
across runs and platforms.  Far instances are obtained by rejection sampling
(generate, certify with the exact distance oracle, keep), and the certificate
is stored beside the instance so verifier runs never re-derive farness.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Graph, Hypergraph
from .csp import Csp, SatDistance, distance_to_sat
from .containers_star import RhoDistance, distance_to_rho_is
from .rationals import ceil_frac, format_rational
from .rng import GENERATOR_NAME, make_rng, substream_seed
from .testers import (
    SatTesterParams,
    StarTesterParams,
    TesterReport,
    canonical_is_tester,
    canonical_sat_tester,
    colorability_to_sat,
    shpp_to_sat,
    star_tester,
)

WILSON_Z = 1.959963984540054  # two-sided 95%


def gen_random_csp(n: int, k: int, q: int, constraint_density: Fraction,
                   falsifying_density: Fraction, seed: int) -> Csp:
    """Each q-scope appears independently with the constraint density; each of
    its k^q tuples falsifies independently with the falsifying density."""
    cd, fd = float(constraint_density), float(falsifying_density)
    if not (0 <= cd <= 1 and 0 <= fd <= 1):
        raise ValueError("densities must lie in [0, 1]")
    rng = make_rng(seed)
    constraints = []
    for scope in itertools.combinations(range(n), q):
        if rng.random() >= cd:
            continue
        falsifying = tuple(
            tup for tup in itertools.product(range(k), repeat=q)
            if rng.random() < fd
        )
        constraints.append((scope, falsifying))
    return Csp.of(n, k, q, constraints)


def gen_planted_sat_csp(n: int, k: int, q: int, density: Fraction,
                        seed: int) -> tuple[Csp, dict[int, int]]:
    """Random constraints whose falsifying sets never include the restriction
    of a planted assignment, so the instance is satisfiable by construction."""
    d = float(density)
    if not 0 <= d <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = make_rng(seed)
    planted = {x: int(rng.integers(0, k)) for x in range(n)}
    constraints = []
    for scope in itertools.combinations(range(n), q):
        if rng.random() >= d:
            continue
        keep = tuple(planted[x] for x in scope)
        falsifying = tuple(
            tup for tup in itertools.product(range(k), repeat=q)
            if tup != keep and rng.random() < d
        )
        constraints.append((scope, falsifying))
    return Csp.of(n, k, q, constraints), planted


def gen_planted_is_graph(n: int, rho: Fraction, p: Fraction, seed: int) -> Graph:
    """Plant an edgeless ceil(rho*n)-set; every other pair appears with
    probability p.  The output always has the independent-set property."""
    pf = float(p)
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = make_rng(seed)
    size = ceil_frac(Fraction(rho) * n)
    order = list(range(n))
    for i in range(size):
        j = i + int(rng.integers(0, n - i))
        order[i], order[j] = order[j], order[i]
    planted = set(order[:size])
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if u in planted and v in planted:
                continue
            if rng.random() < pf:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


def gen_er_graph(n: int, p: Fraction, seed: int) -> Graph:
    """Plain seeded binomial random graph over the lexicographic pair order."""
    pf = float(p)
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = make_rng(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < pf]
    return Graph.from_edges(n, edges)


def gen_random_hypergraph(n: int, q: int, edge_density: Fraction, seed: int,
                          labels=None) -> Hypergraph:
    """Each q-subset of vertices is an edge independently with the density."""
    pf = float(edge_density)
    if not 0 <= pf <= 1:
        raise ValueError("edge density must lie in [0, 1]")
    rng = make_rng(seed)
    edges = [e for e in itertools.combinations(range(n), q)
             if rng.random() < pf]
    return Hypergraph.from_edges(q, n, edges, labels)


def instance_digest(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class FarCertificate:
    """Exact farness certificate; re-running the oracle reproduces it."""

    kind: str  # "csp" | "graph"
    instance_hash: str
    epsilon: Fraction
    achieved: Fraction
    min_edits: int
    witness: tuple[int, ...]
    params: dict


def certify_far(instance, epsilon: Fraction, rho: Optional[Fraction] = None,
                cap: Optional[int] = None) -> Optional[FarCertificate]:
    """Wrap the exact distance oracles; a certificate exists iff the distance
    is at least epsilon.  Returns None when the instance is not that far."""
    from . import serialize  # deferred: serialize imports this module's types

    epsilon = Fraction(epsilon)
    if isinstance(instance, Csp):
        dist = distance_to_sat(instance, **({"cap": cap} if cap else {}))
        if not dist.is_far(epsilon):
            return None
        return FarCertificate(
            kind="csp",
            instance_hash=instance_digest(serialize.csp_to_dict(instance)),
            epsilon=epsilon,
            achieved=dist.distance,
            min_edits=dist.min_falsified,
            witness=dist.witness,
            params={"oracle": "distance_to_sat"},
        )
    if isinstance(instance, Graph):
        if rho is None:
            raise ValueError("graph certification requires rho")
        rho = Fraction(rho)
        dist = distance_to_rho_is(instance, rho, **({"cap": cap} if cap else {}))
        if not dist.is_far(epsilon):
            return None
        return FarCertificate(
            kind="graph",
            instance_hash=instance_digest(serialize.graph_to_dict(instance)),
            epsilon=epsilon,
            achieved=dist.distance,
            min_edits=dist.min_edits,
            witness=dist.witness,
            params={"oracle": "distance_to_rho_is", "rho": format_rational(rho)},
        )
    raise TypeError(f"cannot certify {type(instance).__name__}")


def wilson_interval(successes: int, trials: int,
                    z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval; behaves sensibly at rates near 0 and 1."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials**2)) / denom
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == trials else min(1.0, centre + half)
    return low, high


@dataclass(frozen=True)
class TesterSpec:
    """Names a tester plus its resolved options, for trial harnesses."""

    __test__ = False  # not a pytest class, despite the name

    kind: str  # sat | color | shpp | indepset | canonical-is
    options: dict


def run_tester(spec: TesterSpec, instance, seed: int) -> TesterReport:
    opts = spec.options
    rng = make_rng(seed)
    if spec.kind == "sat":
        params = SatTesterParams(Fraction(opts["epsilon"]),
                                 opts.get("s"), Fraction(opts.get("c", 1)))
        return canonical_sat_tester(instance, params, rng, seed)
    if spec.kind == "color":
        csp = colorability_to_sat(instance, opts["k"])
        params = SatTesterParams(Fraction(opts["epsilon"]),
                                 opts.get("s"), Fraction(opts.get("c", 1)))
        report = canonical_sat_tester(csp, params, rng, seed)
        return TesterReport(kind="color", verdict=report.verdict, seed=seed,
                            generator=report.generator,
                            params={**report.params, "k": opts["k"]},
                            sample=report.sample, query_count=None)
    if spec.kind == "shpp":
        csp = shpp_to_sat(instance, opts["spec"])
        params = SatTesterParams(Fraction(opts["epsilon"]),
                                 opts.get("s"), Fraction(opts.get("c", 1)))
        report = canonical_sat_tester(csp, params, rng, seed)
        return TesterReport(kind="shpp", verdict=report.verdict, seed=seed,
                            generator=report.generator,
                            params={**report.params, "k": opts["spec"].k},
                            sample=report.sample, query_count=None)
    if spec.kind == "indepset":
        params = StarTesterParams(
            rho=Fraction(opts["rho"]), epsilon=Fraction(opts["epsilon"]),
            r=opts.get("r"), s=opts.get("s"),
            c1=Fraction(opts.get("c1", 1)), c2=Fraction(opts.get("c2", 1)),
            disjoint=bool(opts.get("disjoint", False)),
        )
        return star_tester(instance, params, rng, seed)
    if spec.kind == "canonical-is":
        return canonical_is_tester(instance, Fraction(opts["rho"]),
                                   opts["s"], rng, seed)
    raise ValueError(f"unknown tester kind {spec.kind!r}")


def _trial_block(args) -> list[tuple[int, int, str, Optional[int]]]:
    spec, instance, master_seed, lo, hi = args
    rows = []
    for i in range(lo, hi):
        seed = substream_seed(master_seed, i)
        try:
            report = run_tester(spec, instance, seed)
        except Exception as exc:
            raise RuntimeError(f"tester failed at trial {i} (seed {seed}): {exc}") from exc
        rows.append((i, seed, report.verdict, report.query_count))
    return rows


@dataclass(frozen=True)
class EstimateResult:
    accepts: int
    trials: int
    accept_rate: float
    wilson_low: float
    wilson_high: float
    master_seed: int
    generator: str
    rows: tuple[tuple[int, int, str, Optional[int]], ...]


def estimate_acceptance(spec: TesterSpec, instance, trials: int,
                        master_seed: int, workers: int = 1) -> EstimateResult:
    """Monte Carlo acceptance estimate with per-trial derived seeds; results
    are invariant to the worker count."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if workers > 1 and trials >= 4 * workers:
        chunk = -(-trials // workers)
        blocks = [(spec, instance, master_seed, lo, min(lo + chunk, trials))
                  for lo in range(0, trials, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_block, blocks))
        rows = [row for block in results for row in block]
    else:
        rows = _trial_block((spec, instance, master_seed, 0, trials))
    rows.sort(key=lambda row: row[0])
    accepts = sum(1 for row in rows if row[2] == "accept")
    low, high = wilson_interval(accepts, trials)
    return EstimateResult(accepts, trials, accepts / trials, low, high,
                          master_seed, GENERATOR_NAME, tuple(rows))
