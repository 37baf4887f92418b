"""Deterministic graph/hypergraph representations and enumeration utilities.

Vertices are dense integer indices 0..n-1, totally ordered by index; every
tie anywhere in the package breaks toward the smallest index.  Vertex sets
are handled as Python int bitmasks internally and exposed as sorted tuples.
All types are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

DEFAULT_ENUMERATION_CAP = 30


class WorkCapExceeded(RuntimeError):
    """An exhaustive operation was asked to exceed its configured work cap."""


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def bits_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def as_mask(vertices: Union[int, Iterable[int]], n: int) -> int:
    """Normalize a vertex set (bitmask or iterable of indices) to a bitmask."""
    if isinstance(vertices, int):
        mask = vertices
    else:
        mask = mask_of(vertices)
    if mask < 0 or mask >> n:
        raise ValueError(f"vertex set {bin(mask)} out of range for n={n}")
    return mask


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; adj[v] is the neighbour bitmask of v."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal vertex count")
        for v, row in enumerate(self.adj):
            if row >> self.n:
                raise ValueError(f"edge endpoint out of range at vertex {v}")
            if (row >> v) & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in bits_of(row):
                if not (self.adj[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Graph":
        adj = [0] * n
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop ({u},{v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def edges(self) -> tuple[tuple[int, int], ...]:
        out = []
        for u in range(self.n):
            higher = self.adj[u] >> (u + 1)
            for off in bits_of(higher):
                out.append((u, u + 1 + off))
        return tuple(out)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges_inside(self, mask: int) -> int:
        """Number of edges with both endpoints in the vertex mask."""
        total = 0
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            total += (self.adj[v] & m).bit_count()
        return total


@dataclass(frozen=True)
class Hypergraph:
    """q-uniform hypergraph; edges are vertex bitmasks of popcount q.

    labels, when present, assign a (variable, value) pair to every vertex and
    no edge may contain two vertices labelled with the same variable.
    """

    q: int
    n: int
    edges: tuple[int, ...]
    labels: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("edge arity must be at least 2")
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        for e in self.edges:
            if e >> self.n or e < 0:
                raise ValueError("edge endpoint out of range")
            if e.bit_count() != self.q:
                raise ValueError(f"edge {bits_of(e)} is not {self.q}-uniform")
            if e in seen:
                raise ValueError(f"duplicate edge {bits_of(e)}")
            seen.add(e)
        if list(self.edges) != sorted(self.edges):
            raise ValueError("edges must be in canonical (sorted-mask) order")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("labels must cover every vertex")
            for e in self.edges:
                vars_seen = set()
                for v in bits_of(e):
                    var = self.labels[v][0]
                    if var in vars_seen:
                        raise ValueError(
                            f"edge {bits_of(e)} repeats variable {var}"
                        )
                    vars_seen.add(var)

    @classmethod
    def from_edges(
        cls,
        q: int,
        n: int,
        edges: Iterable[Iterable[int]],
        labels: Optional[Iterable[tuple[int, int]]] = None,
    ) -> "Hypergraph":
        masks = []
        for e in edges:
            vs = tuple(e)
            if len(set(vs)) != len(vs):
                raise ValueError(f"edge {vs} has repeated vertices")
            masks.append(mask_of(vs))
        lab = tuple((int(a), int(b)) for a, b in labels) if labels is not None else None
        return cls(q, n, tuple(sorted(set(masks))), lab)

    def edge_vertex_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(bits_of(e) for e in self.edges)

    def edges_inside(self, mask: int) -> int:
        return sum(1 for e in self.edges if e & ~mask == 0)


Host = Union[Graph, Hypergraph]


def _host_n(host: Host) -> int:
    return host.n


def induced_subgraph(host: Host, vertices: Union[int, Iterable[int]]):
    """Restrict a (hyper)graph to a vertex set.

    Returns (sub, index_map) where index_map[i] is the original index of the
    i-th vertex of the restriction, so vertex identities are recoverable.
    """
    n = _host_n(host)
    mask = as_mask(vertices, n)
    kept = bits_of(mask)
    new_index = {v: i for i, v in enumerate(kept)}
    if isinstance(host, Graph):
        adj = [0] * len(kept)
        for i, v in enumerate(kept):
            for u in bits_of(host.adj[v] & mask):
                adj[i] |= 1 << new_index[u]
        return Graph(len(kept), tuple(adj)), kept
    edges = []
    for e in host.edges:
        if e & ~mask == 0:
            edges.append(mask_of(new_index[v] for v in bits_of(e)))
    labels = None
    if host.labels is not None:
        labels = tuple(host.labels[v] for v in kept)
    return Hypergraph(host.q, len(kept), tuple(sorted(edges)), labels), kept


def is_independent(host: Host, vertices: Union[int, Iterable[int]]) -> bool:
    """True iff no edge of the host has all endpoints inside the set."""
    mask = as_mask(vertices, _host_n(host))
    if isinstance(host, Graph):
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if host.adj[v] & m:
                return False
        return True
    return all(e & ~mask for e in host.edges)


def degree(host: Host, vertices: Union[int, Iterable[int]], v: int) -> int:
    """Number of edges of host fully inside the set that contain v."""
    mask = as_mask(vertices, _host_n(host))
    if not (mask >> v) & 1:
        raise ValueError(f"vertex {v} is not in the given set")
    if isinstance(host, Graph):
        return (host.adj[v] & mask).bit_count()
    bit = 1 << v
    return sum(1 for e in host.edges if (e & bit) and e & ~mask == 0)


def enumerate_independent_sets(
    host: Host,
    size: Optional[int] = None,
    variable_distinct: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[tuple[int, ...]]:
    """Yield independent sets as sorted tuples, in lexicographic order.

    size filters to sets of exactly that cardinality; variable_distinct
    (labelled hypergraphs only) keeps sets whose vertices label pairwise
    distinct variables.  Enumeration refuses hosts above the vertex cap.
    """
    n = _host_n(host)
    if n > cap:
        raise WorkCapExceeded(
            f"independent-set enumeration refused: {n} vertices exceeds cap {cap}"
        )
    labels = None
    if variable_distinct:
        if isinstance(host, Graph) or host.labels is None:
            raise ValueError("variable_distinct requires a labelled hypergraph")
        labels = host.labels

    edges_by_vertex: tuple[tuple[int, ...], ...]
    if isinstance(host, Graph):
        edges_by_vertex = ()
    else:
        by_v = [[] for _ in range(n)]
        for e in host.edges:
            for v in bits_of(e):
                by_v[v].append(e)
        edges_by_vertex = tuple(tuple(es) for es in by_v)

    def candidate_ok(cur_mask: int, v: int) -> bool:
        if isinstance(host, Graph):
            return not (host.adj[v] & cur_mask)
        new_mask = cur_mask | (1 << v)
        return all(e & ~new_mask for e in edges_by_vertex[v])

    def rec(current: list[int], cur_mask: int, used_vars: int) -> Iterator[tuple[int, ...]]:
        if size is None or len(current) == size:
            yield tuple(current)
        if size is not None and len(current) >= size:
            return
        start = current[-1] + 1 if current else 0
        for v in range(start, n):
            if labels is not None:
                var_bit = 1 << labels[v][0]
                if used_vars & var_bit:
                    continue
            else:
                var_bit = 0
            if candidate_ok(cur_mask, v):
                current.append(v)
                yield from rec(current, cur_mask | (1 << v), used_vars | var_bit)
                current.pop()

    yield from rec([], 0, 0)
