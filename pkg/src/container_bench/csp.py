"""Uniform CSP representation, restriction, brute-force oracles, and the
labelled-hypergraph encoding of an instance.

Constraints store their *falsifying* tuples: the hypergraph encoding adds one
edge per falsifying tuple, so this is the primal representation.  Builders
merge multiple predicates on the same scope by unioning falsifying sets,
keeping the one-constraint-per-scope normal form.  Satisfiability and
distance are decided by exhaustive search (backtracking with early exit and a
full assignment sweep respectively) so they can serve as trusted oracles;
both enforce an explicit work cap with a hard error, never silent truncation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .core import Hypergraph, WorkCapExceeded, bits_of, mask_of

DEFAULT_ASSIGNMENT_CAP = 1 << 24

# Assignments are plain mappings variable -> value; partial or total.
Assignment = dict[int, int]


@dataclass(frozen=True)
class Constraint:
    """A predicate on a sorted scope of q distinct variables.

    falsifying holds the assignments (tuples over the alphabet, aligned with
    the sorted scope) on which the predicate evaluates to false.
    """

    scope: tuple[int, ...]
    falsifying: tuple[tuple[int, ...], ...]

    @cached_property
    def falsifying_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.falsifying)

    @cached_property
    def scope_mask(self) -> int:
        return mask_of(self.scope)


@dataclass(frozen=True)
class Csp:
    """A q-uniform CSP over n variables with alphabet {0..k-1}."""

    n: int
    k: int
    q: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.n < 0 or self.k < 1 or self.q < 1:
            raise ValueError("need n >= 0, k >= 1, q >= 1")
        seen_scopes = set()
        for c in self.constraints:
            if tuple(sorted(c.scope)) != c.scope or len(set(c.scope)) != self.q:
                raise ValueError(f"scope {c.scope} must be sorted and {self.q} distinct variables")
            if c.scope and not (0 <= c.scope[0] and c.scope[-1] < self.n):
                raise ValueError(f"scope {c.scope} out of range for n={self.n}")
            if c.scope in seen_scopes:
                raise ValueError(f"more than one constraint on scope {c.scope}")
            seen_scopes.add(c.scope)
            for tup in c.falsifying:
                if len(tup) != self.q or any(not 0 <= a < self.k for a in tup):
                    raise ValueError(f"bad falsifying tuple {tup} on scope {c.scope}")
        if [c.scope for c in self.constraints] != sorted(c.scope for c in self.constraints):
            raise ValueError("constraints must be sorted by scope")

    @classmethod
    def of(
        cls, n: int, k: int, q: int, constraints: Iterable[tuple[Iterable[int], Iterable[tuple[int, ...]]]]
    ) -> "Csp":
        """Build an instance, merging same-scope predicates by falsifying-set union."""
        merged: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
        for scope, falsifying in constraints:
            scope_t = tuple(scope)
            scope_sorted = tuple(sorted(scope_t))
            order = sorted(range(q), key=lambda i: scope_t[i])
            reordered = {tuple(tup[i] for i in order) for tup in falsifying}
            merged.setdefault(scope_sorted, set()).update(reordered)
        built = tuple(
            Constraint(scope, tuple(sorted(falsifying)))
            for scope, falsifying in sorted(merged.items())
        )
        return cls(n, k, q, built)

    def falsified_count(self, assignment: tuple[int, ...]) -> int:
        """Number of constraints falsified by a total assignment."""
        count = 0
        for c in self.constraints:
            if tuple(assignment[i] for i in c.scope) in c.falsifying_set:
                count += 1
        return count


@dataclass(frozen=True)
class Restriction:
    """phi[S]: the constraints whose variables all lie in S, reindexed.

    variables[i] is the original index of restricted variable i.
    """

    csp: Csp
    variables: tuple[int, ...]


def restrict(csp: Csp, variables: Iterable[int]) -> Restriction:
    kept = tuple(sorted(set(variables)))
    if kept and not (0 <= kept[0] and kept[-1] < csp.n):
        raise ValueError(f"variables {kept} out of range for n={csp.n}")
    s_mask = mask_of(kept)
    new_index = {v: i for i, v in enumerate(kept)}
    constraints = []
    for c in csp.constraints:
        if c.scope_mask & ~s_mask == 0:
            constraints.append(
                Constraint(tuple(new_index[v] for v in c.scope), c.falsifying)
            )
    return Restriction(Csp(len(kept), csp.k, csp.q, tuple(constraints)), kept)


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: Optional[dict[int, int]]


def is_satisfiable(csp: Csp, cap: int = DEFAULT_ASSIGNMENT_CAP) -> SatResult:
    """Exhaustive satisfiability with a satisfying witness when one exists."""
    if csp.k**csp.n > cap:
        raise WorkCapExceeded(
            f"k^n = {csp.k}^{csp.n} exceeds the assignment cap {cap}"
        )
    by_last: list[list[Constraint]] = [[] for _ in range(csp.n)]
    for c in csp.constraints:
        by_last[c.scope[-1]].append(c)
    values = [0] * csp.n

    def backtrack(depth: int) -> bool:
        if depth == csp.n:
            return True
        for a in range(csp.k):
            values[depth] = a
            ok = True
            for c in by_last[depth]:
                if tuple(values[i] for i in c.scope) in c.falsifying_set:
                    ok = False
                    break
            if ok and backtrack(depth + 1):
                return True
        return False

    if csp.n == 0:
        return SatResult(True, {})
    if backtrack(0):
        return SatResult(True, {i: values[i] for i in range(csp.n)})
    return SatResult(False, None)


@dataclass(frozen=True)
class SatDistance:
    """Exact distance of an instance from satisfiability.

    min_falsified is the minimum number of falsified constraints over all
    total assignments; distance = min_falsified / C(n, q).  The instance is
    eps-far exactly when min_falsified >= eps * C(n, q).
    """

    min_falsified: int
    distance: Fraction
    witness: tuple[int, ...]

    def is_far(self, epsilon: Fraction) -> bool:
        return self.distance >= epsilon


def distance_to_sat(csp: Csp, cap: int = DEFAULT_ASSIGNMENT_CAP) -> SatDistance:
    if csp.k**csp.n > cap:
        raise WorkCapExceeded(
            f"k^n = {csp.k}^{csp.n} exceeds the assignment cap {cap}"
        )
    best = None
    best_assignment: tuple[int, ...] = ()
    for assignment in itertools.product(range(csp.k), repeat=csp.n):
        count = csp.falsified_count(assignment)
        if best is None or count < best:
            best = count
            best_assignment = assignment
            if best == 0:
                break
    if best is None:
        best = 0
    denom = math.comb(csp.n, csp.q)
    distance = Fraction(best, denom) if denom else Fraction(0)
    return SatDistance(best, distance, best_assignment)


def build_hypergraph(csp: Csp) -> Hypergraph:
    """The labelled k*n-vertex encoding of an instance.

    Vertex x*k + a stands for assigning value a to variable x; each
    falsifying tuple of each constraint contributes one q-edge over the
    corresponding labelled vertices.
    """
    k = csp.k
    labels = tuple((v // k, v % k) for v in range(csp.n * k))
    edges = set()
    for c in csp.constraints:
        for tup in c.falsifying:
            edges.add(mask_of(c.scope[i] * k + tup[i] for i in range(csp.q)))
    return Hypergraph(csp.q, csp.n * k, tuple(sorted(edges)), labels)


def vars_of(hypergraph: Hypergraph, vertices) -> int:
    """Number of distinct variables labelling the given vertex set."""
    if hypergraph.labels is None:
        raise ValueError("vars_of requires a labelled hypergraph")
    if isinstance(vertices, int):
        vertices = bits_of(vertices)
    return len({hypergraph.labels[v][0] for v in vertices})


def assignment_vertex_set(csp: Csp, assignment: Mapping[int, int]) -> tuple[int, ...]:
    """The labelled vertices {(x, A(x)) : x in dom(A)} of a partial assignment."""
    for x, a in assignment.items():
        if not (0 <= x < csp.n and 0 <= a < csp.k):
            raise ValueError(f"assignment entry {x}={a} out of range")
    return tuple(sorted(x * csp.k + a for x, a in assignment.items()))


def assignment_of_vertex_set(csp: Csp, vertices) -> dict[int, int]:
    """Inverse of assignment_vertex_set; rejects sets repeating a variable."""
    if isinstance(vertices, int):
        vertices = bits_of(vertices)
    assignment: dict[int, int] = {}
    for v in vertices:
        if not 0 <= v < csp.n * csp.k:
            raise ValueError(f"vertex {v} out of range")
        x, a = divmod(v, csp.k)
        if x in assignment:
            raise ValueError(f"vertex set assigns variable {x} twice")
        assignment[x] = a
    return assignment
