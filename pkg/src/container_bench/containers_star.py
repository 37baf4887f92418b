"""The inner/outer container generator for independent-set stars and the
verifiers built on its traces.

An independent-set star is an independent core I plus outer vertices J with
no edge into I.  The generator tracks two containers per iteration: the inner
container C (contains the core) drops neighbours of the two fingerprint
vertices and everything with strictly larger degree than either of them; the
outer container D (contains the whole star) drops only the neighbours, since
a vertex can be evicted from D only by exhibiting an edge into I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Graph, WorkCapExceeded, as_mask, bits_of, is_independent, mask_of
from .containers_sat import NotFarError
from .rationals import le_with_ln, sign_with_ln


@dataclass(frozen=True)
class IndependentSetStar:
    """Core I plus outer vertices J; J is disjoint from I by definition."""

    core: tuple[int, ...]
    outer: tuple[int, ...]


def is_star(g: Graph, core, outer) -> tuple[bool, Optional[str]]:
    """Check the star invariants; returns (ok, diagnostic)."""
    i_mask = as_mask(core, g.n)
    j_mask = as_mask(outer, g.n)
    if i_mask & j_mask:
        return False, f"core and outer overlap on {bits_of(i_mask & j_mask)}"
    if not is_independent(g, i_mask):
        return False, "core is not independent"
    for v in bits_of(i_mask):
        if g.adj[v] & j_mask:
            return False, f"outer vertex adjacent to core vertex {v}"
    return True, None


@dataclass(frozen=True)
class StarIteration:
    t: int
    u: int
    v: Optional[int]
    fingerprint: tuple[int, ...]
    inner: tuple[int, ...]
    outer: tuple[int, ...]


@dataclass(frozen=True)
class StarContainerTrace:
    """Per-iteration fingerprints and container pairs for one core.

    Past the executed loop the extension rule applies: F_t = C_t = I and
    D_t keeps its final value.
    """

    graph: Graph
    independent_set: tuple[int, ...]
    iterations: tuple[StarIteration, ...]

    @property
    def iteration_count(self) -> int:
        return len(self.iterations)

    def fingerprint_at(self, t: int) -> tuple[int, ...]:
        if t <= 0:
            return ()
        if t <= len(self.iterations):
            return self.iterations[t - 1].fingerprint
        return self.independent_set

    def inner_at(self, t: int) -> tuple[int, ...]:
        if t <= 0:
            return tuple(range(self.graph.n))
        if t <= len(self.iterations):
            return self.iterations[t - 1].inner
        return self.independent_set

    def outer_at(self, t: int) -> tuple[int, ...]:
        if t <= 0 or not self.iterations:
            return tuple(range(self.graph.n))
        return self.iterations[min(t, len(self.iterations)) - 1].outer


def run_star_generator(g: Graph, independent_set) -> StarContainerTrace:
    """Run the two-container generator; ties break to the smallest index."""
    i_mask = as_mask(independent_set, g.n)
    if not is_independent(g, i_mask):
        raise ValueError("input vertex set is not independent")

    f_mask = 0
    c_mask = d_mask = (1 << g.n) - 1
    iterations: list[StarIteration] = []
    t = 0
    while i_mask & ~f_mask:
        t += 1
        remaining = i_mask & ~f_mask

        def c_deg(w: int) -> int:
            return (g.adj[w] & c_mask).bit_count()

        def d_deg(w: int) -> int:
            return (g.adj[w] & d_mask).bit_count()

        u = max(bits_of(remaining), key=lambda w: (c_deg(w), -w))
        rest = remaining & ~(1 << u)
        v: Optional[int] = None
        if rest:
            v = max(bits_of(rest), key=lambda w: (d_deg(w), -w))

        neighbours = g.adj[u] | (g.adj[v] if v is not None else 0)
        # The just-selected pair is exempt from the degree exclusion: u may
        # out-degree v in the outer container, but no core vertex may ever
        # leave the inner container (and exempting more than the fingerprint
        # would break closure under rerun-on-fingerprint).
        picked = (1 << u) | (0 if v is None else 1 << v)
        high = 0
        for w in bits_of(c_mask & ~picked):
            if c_deg(w) > c_deg(u) or (v is not None and d_deg(w) > d_deg(v)):
                high |= 1 << w

        f_mask |= (1 << u) | (0 if v is None else 1 << v)
        c_new = c_mask & ~neighbours & ~high
        d_new = d_mask & ~neighbours
        assert i_mask & ~c_new == 0, "core vertex removed from inner container"
        iterations.append(StarIteration(
            t=t, u=u, v=v,
            fingerprint=bits_of(f_mask),
            inner=bits_of(c_new),
            outer=bits_of(d_new),
        ))
        c_mask, d_mask = c_new, d_new

    return StarContainerTrace(g, bits_of(i_mask), tuple(iterations))


@dataclass(frozen=True)
class StarClosureOutcome:
    ok: bool
    first_mismatch_t: Optional[int]
    iteration_count: int


def check_star_closure(g: Graph, independent_set) -> StarClosureOutcome:
    """Rerunning on the t-th fingerprint must reproduce both containers."""
    trace = run_star_generator(g, independent_set)
    for t in range(1, trace.iteration_count + 1):
        sub = run_star_generator(g, trace.fingerprint_at(t))
        if (sub.inner_at(t) != trace.inner_at(t)
                or sub.outer_at(t) != trace.outer_at(t)):
            return StarClosureOutcome(False, t, trace.iteration_count)
    return StarClosureOutcome(True, None, trace.iteration_count)


@dataclass(frozen=True)
class RhoDistance:
    """Exact edit distance to having an independent set on ceil(rho*n)
    vertices: only deletions help, so it is the minimum edge count over all
    subsets of that size, and the instance is eps-far iff min_edits >= eps*n^2.
    """

    min_edits: int
    distance: Fraction
    witness: tuple[int, ...]
    target_size: int

    def is_far(self, epsilon: Fraction) -> bool:
        return self.distance >= epsilon


DEFAULT_SUBSET_CAP = 10_000_000


def distance_to_rho_is(g: Graph, rho: Fraction,
                       cap: int = DEFAULT_SUBSET_CAP) -> RhoDistance:
    rho = Fraction(rho)
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    n = g.n
    target = -((-rho.numerator * n) // rho.denominator)  # ceil(rho * n)
    if target == 0:
        return RhoDistance(0, Fraction(0), (), 0)
    if math.comb(n, target) > cap:
        raise WorkCapExceeded(
            f"C({n},{target}) subsets exceed the enumeration cap {cap}"
        )

    best = math.comb(target, 2) + 1
    best_set: tuple[int, ...] = ()
    chosen: list[int] = []

    def rec(start: int, count: int) -> None:
        nonlocal best, best_set
        if count >= best:
            return
        if len(chosen) == target:
            best, best_set = count, tuple(chosen)
            return
        # Not enough vertices left to finish the subset.
        for v in range(start, n - (target - len(chosen)) + 1):
            add = 0
            av = g.adj[v]
            for u in chosen:
                add += (av >> u) & 1
            chosen.append(v)
            rec(v + 1, count + add)
            chosen.pop()
            if best == 0:
                return

    rec(0, 0)
    denom = n * n
    return RhoDistance(best, Fraction(best, denom), best_set, target)


@dataclass(frozen=True)
class ShrinkingOutcome:
    """One sampled instance of the outer-container shrinking step.

    A (premises_hold=True, conclusion_holds=False) outcome is a
    counterexample; everything else is a pass (possibly vacuous).
    """

    premises_hold: bool
    conclusion_holds: bool
    premise_flags: tuple[tuple[str, bool], ...]
    near_miss: bool
    shrink_lhs: int
    shrink_rhs: Fraction


def check_shrinking(g: Graph, rho: Fraction, epsilon: Fraction,
                    trace: StarContainerTrace, t: int, d_set, alpha: Fraction,
                    distance: Optional[RhoDistance] = None) -> ShrinkingOutcome:
    rho, epsilon, alpha = Fraction(rho), Fraction(epsilon), Fraction(alpha)
    if distance is None:
        distance = distance_to_rho_is(g, rho)
    if not distance.is_far(epsilon):
        raise NotFarError(
            f"graph distance {distance.distance} is below epsilon {epsilon}"
        )
    size_i = len(trace.independent_set)
    if t < 0 or not 2 * t < size_i:
        raise ValueError(f"t={t} must satisfy 0 <= t < |I|/2 = {size_i}/2")

    n = g.n
    d_mask = as_mask(d_set, n)
    dt_mask = mask_of(trace.outer_at(t))
    dt1_mask = mask_of(trace.outer_at(t + 1))
    ct1_mask = mask_of(trace.inner_at(t + 1))
    d_size = d_mask.bit_count()

    # ceil((rho - alpha) * n), the required exact size of D
    want = (rho - alpha) * n
    want_ceil = -((-want.numerator) // want.denominator)

    def sqrt_le(value: Fraction, bound_sq: Fraction) -> bool:
        # value <= sqrt(bound_sq), both nonnegative
        if value <= 0:
            return True
        return value * value <= bound_sq

    # |D cap C_{t+1}| >= (rho - sqrt(eps)/2) n  <=>  rho - x/n <= sqrt(eps)/2
    inter = (d_mask & ct1_mask).bit_count()
    full_iteration = (t + 1 <= trace.iteration_count
                      and trace.iterations[t].v is not None)
    flags = (
        ("outer_container_large", Fraction(dt_mask.bit_count()) >= rho * n),
        ("alpha_positive", alpha > 0),
        ("alpha_small", alpha > 0 and sqrt_le(alpha, epsilon / 4)),
        ("d_inside_next_outer", d_mask & ~dt1_mask == 0),
        ("d_exact_size", d_size == want_ceil),
        ("d_sparse", Fraction(g.edges_inside(d_mask)) <= Fraction(3, 8) * epsilon * n * n),
        ("d_meets_inner", sqrt_le(rho - Fraction(inter, n), epsilon / 4)),
        ("full_iteration", full_iteration),
    )
    premises = all(ok for _, ok in flags)
    near_miss = (not premises and abs(d_size - want_ceil) == 1
                 and all(ok for name, ok in flags if name != "d_exact_size"))

    lhs = (dt1_mask & ~d_mask).bit_count()
    m = (dt_mask & ~d_mask).bit_count()
    if alpha > 0:
        rhs = (1 - epsilon / (4 * rho * alpha)) * m
    else:
        rhs = Fraction(m)
    return ShrinkingOutcome(premises, Fraction(lhs) <= rhs, flags, near_miss,
                            lhs, rhs)


@dataclass(frozen=True)
class GclStarCheck:
    t: int
    inner_size: int
    outer_size: int
    inner_branch: bool
    ok: bool


@dataclass(frozen=True)
class GclStarOutcome:
    """Witness search for the two-bullet container lemma plus the restated
    inner-container bound (size bound together with at most eps*n^2/4 edges).
    """

    ok: bool
    witness_t: Optional[int]
    witness_branch: Optional[str]
    restated_ok: bool
    restated_t: Optional[int]
    epsilon: Fraction
    rho: Fraction
    t_max: int
    threshold_t: int
    loop_iterations: int
    checks: tuple[GclStarCheck, ...]


def _bullet_threshold(rho: Fraction, epsilon: Fraction) -> int:
    """Smallest integer t with t >= 4 rho ln(2 rho / eps) / sqrt(eps)."""
    x = 2 * rho / epsilon
    est = math.floor(4 * float(rho) * math.log(float(x)) / math.sqrt(float(epsilon)))
    est = max(est, 0)
    # t >= threshold  <=>  t^2 eps - 16 rho^2 ln(x)^2 >= 0   (t >= 0, x > 1)
    def at_least(t: int) -> bool:
        return sign_with_ln(Fraction(t * t) * epsilon, Fraction(0),
                            -16 * rho * rho, x) >= 0
    while est > 0 and at_least(est - 1):
        est -= 1
    while not at_least(est):
        est += 1
    return est


def verify_gcl_star(g: Graph, rho: Fraction, epsilon: Fraction, independent_set,
                    distance: Optional[RhoDistance] = None) -> GclStarOutcome:
    rho, epsilon = Fraction(rho), Fraction(epsilon)
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if not 0 < epsilon < 2 * rho:
        raise ValueError("epsilon must lie in (0, 2*rho) for the bound to make sense")
    if distance is None:
        distance = distance_to_rho_is(g, rho)
    if not distance.is_far(epsilon):
        raise NotFarError(
            f"graph distance {distance.distance} is below epsilon {epsilon}"
        )

    n = g.n
    x = 2 * rho / epsilon
    trace = run_star_generator(g, independent_set)
    T = trace.iteration_count
    # t_max = floor((8 rho^2 / eps) ln(2 rho / eps))
    est = math.floor(8 * float(rho) ** 2 / float(epsilon) * math.log(float(x)))
    while not le_with_ln(Fraction(est), 8 * rho * rho / epsilon, x):
        est -= 1
    while le_with_ln(Fraction(est + 1), 8 * rho * rho / epsilon, x):
        est += 1
    t_max = est
    threshold = _bullet_threshold(rho, epsilon)

    def size_bound_ok(size: int, t: int) -> bool:
        # size <= (rho - t eps / (8 rho L)) n  <=>  L >= t eps n / (8 rho (rho n - size))
        gap = rho * n - size
        if gap <= 0:
            return False
        lhs = Fraction(t) * epsilon * n / (8 * rho * gap)
        return le_with_ln(lhs, Fraction(1), x)

    def inner_size(t: int) -> int:
        return len(trace.inner_at(t))

    def outer_size(t: int) -> int:
        return len(trace.outer_at(t))

    checks: list[GclStarCheck] = []
    witness: Optional[int] = None
    branch: Optional[str] = None

    def bullet_ok(t: int) -> tuple[bool, bool]:
        inner_branch = t >= threshold
        if inner_branch:
            return True, size_bound_ok(inner_size(t), t)
        return False, size_bound_ok(outer_size(t), t)

    # Exhaustive over the loop region plus the first extension step; past that
    # both container sizes are constant while the bound right side strictly
    # decreases, so only the first t of each bullet region can newly succeed.
    scan_upto = min(T + 1, t_max)
    for t in range(1, scan_upto + 1):
        inner_branch, ok = bullet_ok(t)
        checks.append(GclStarCheck(t, inner_size(t), outer_size(t), inner_branch, ok))
        if ok:
            witness, branch = t, "inner" if inner_branch else "outer"
            break
    if witness is None and threshold > scan_upto and threshold <= t_max:
        t = threshold
        ok = size_bound_ok(inner_size(t), t)
        checks.append(GclStarCheck(t, inner_size(t), outer_size(t), True, ok))
        if ok:
            witness, branch = t, "inner"

    # Restated inner-container lemma: some t <= t_max with the size bound and
    # at most eps n^2 / 4 edges inside C_t.  Past the loop C_t = I (edgeless),
    # so t = T+1 dominates the whole extension region.
    restated_t: Optional[int] = None
    edge_cap = epsilon * n * n / 4
    for t in range(1, min(T + 1, t_max) + 1):
        c_mask = mask_of(trace.inner_at(t))
        if size_bound_ok(c_mask.bit_count(), t) and g.edges_inside(c_mask) <= edge_cap:
            restated_t = t
            break

    return GclStarOutcome(
        ok=witness is not None,
        witness_t=witness,
        witness_branch=branch,
        restated_ok=restated_t is not None,
        restated_t=restated_t,
        epsilon=epsilon,
        rho=rho,
        t_max=t_max,
        threshold_t=threshold,
        loop_iterations=T,
        checks=tuple(checks),
    )
