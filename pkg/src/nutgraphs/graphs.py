"""Multigraph carrier (0/1 adjacency, loops allowed) and building-block constructors.

The carrier is a symmetric 0/1 numpy matrix whose diagonal marks loops; a loop
contributes exactly 1 to its vertex's valence, so the n-vertex all-loops graph
is 1-regular and acts as the identity of the Kronecker product.  All
constructors return immutable values (the adjacency buffer is write-locked).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .primes import is_prime, primitive_root


class MultiGraph:
    """Undirected graph with optional loops; no parallel edges, no weights."""

    __slots__ = ("adjacency", "labels")

    def __init__(self, adjacency, labels: tuple[str, ...] | None = None):
        adj = np.asarray(adjacency, dtype=np.uint8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if adj.size and adj.max() > 1:
            raise ValueError("adjacency entries must be 0 or 1")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if labels is not None and len(labels) != adj.shape[0]:
            raise ValueError("label count must match order")
        adj = adj.copy()
        adj.setflags(write=False)
        self.adjacency = adj
        self.labels = tuple(labels) if labels is not None else None

    @property
    def order(self) -> int:
        return self.adjacency.shape[0]

    def valences(self) -> np.ndarray:
        """Row sums; a loop counts once."""
        return self.adjacency.sum(axis=1, dtype=np.int64)

    def has_loops(self) -> bool:
        return bool(np.any(np.diagonal(self.adjacency)))

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list with u <= v; a loop appears as (u, u)."""
        iu, ju = np.nonzero(np.triu(self.adjacency))
        return [(int(u), int(v)) for u, v in zip(iu, ju)]

    def num_edges(self) -> int:
        a = self.adjacency
        return int((a.sum() + np.diagonal(a).sum()) // 2)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiGraph) and np.array_equal(
            self.adjacency, other.adjacency
        )

    def __repr__(self) -> str:
        return f"MultiGraph(order={self.order}, edges={self.num_edges()})"


@dataclass(frozen=True)
class GraphStats:
    connected: bool
    bipartite: bool
    regular: bool
    valence_multiset: dict[int, int]


def cycle(n: int) -> MultiGraph:
    """The cycle C_n, n >= 3."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    adj = np.zeros((n, n), dtype=np.uint8)
    idx = np.arange(n)
    adj[idx, (idx + 1) % n] = 1
    adj[(idx + 1) % n, idx] = 1
    return MultiGraph(adj)


def complete(n: int) -> MultiGraph:
    """The complete graph K_n, n >= 1 (K_1 is a single loopless vertex)."""
    if n < 1:
        raise ValueError("complete needs n >= 1")
    adj = np.ones((n, n), dtype=np.uint8) - np.eye(n, dtype=np.uint8)
    return MultiGraph(adj)


def loops(n: int) -> MultiGraph:
    """n isolated vertices, each with a loop: adjacency is the identity."""
    if n < 1:
        raise ValueError("loops needs n >= 1")
    return MultiGraph(np.eye(n, dtype=np.uint8))


def circulant(n: int, connection: set[int] | list[int] | tuple[int, ...]) -> MultiGraph:
    """Circulant on Z_n: i ~ j iff j - i lies in the connection set.

    Requires 0 not in S and S = -S (mod n).
    """
    s = {x % n for x in connection}
    if 0 in s:
        raise ValueError("connection set must not contain 0")
    if {(-x) % n for x in s} != s:
        raise ValueError("connection set must be symmetric (S = -S)")
    adj = np.zeros((n, n), dtype=np.uint8)
    idx = np.arange(n)
    for x in s:
        adj[idx, (idx + x) % n] = 1
    return MultiGraph(adj)


def subgroup_circulant(p: int, d: int) -> MultiGraph:
    """Connected arc-transitive circulant of prime order p and even valence d.

    The connection set is the unique order-d subgroup of the multiplicative
    group mod p; d even guarantees -1 is in it, so the set is symmetric.
    This graph is non-singular for every admissible (p, d): a p x p circulant
    0/1 matrix of prime order is singular only when it is all-zero or all-one.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if d < 2 or d % 2 != 0:
        raise ValueError(f"valence {d} must be even and >= 2")
    if (p - 1) % d != 0:
        raise ValueError(f"{d} does not divide {p - 1}")
    g = primitive_root(p)
    gen = pow(g, (p - 1) // d, p)
    s = {pow(gen, k, p) for k in range(d)}
    return circulant(p, s)


def kronecker(g1: MultiGraph, g2: MultiGraph) -> MultiGraph:
    """Direct product: vertex (u, v) ordered u-major; adjacency is the
    Kronecker product of the factor adjacencies."""
    return MultiGraph(np.kron(g1.adjacency, g2.adjacency))


def disjoint_union(g1: MultiGraph, g2: MultiGraph) -> MultiGraph:
    n1, n2 = g1.order, g2.order
    adj = np.zeros((n1 + n2, n1 + n2), dtype=np.uint8)
    adj[:n1, :n1] = g1.adjacency
    adj[n1:, n1:] = g2.adjacency
    return MultiGraph(adj)


def union_graph(g1: MultiGraph, g2: MultiGraph) -> MultiGraph:
    """Edge-set union on a common vertex set (orders must match)."""
    if g1.order != g2.order:
        raise ValueError("union_graph needs equal orders")
    return MultiGraph(np.bitwise_or(g1.adjacency, g2.adjacency))


def _components(adj: np.ndarray) -> list[int]:
    """Component id per vertex (BFS over the undirected adjacency)."""
    n = adj.shape[0]
    comp = [-1] * n
    cid = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        comp[start] = cid
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in np.nonzero(adj[u])[0]:
                v = int(v)
                if comp[v] == -1:
                    comp[v] = cid
                    queue.append(v)
        cid += 1
    return comp


def is_connected(g: MultiGraph) -> bool:
    if g.order == 0:
        return True
    return max(_components(g.adjacency)) == 0


def is_bipartite(g: MultiGraph) -> bool:
    """No odd closed walk; a loop is an odd closed walk of length 1."""
    adj = g.adjacency
    if np.any(np.diagonal(adj)):
        return False
    n = g.order
    color = [-1] * n
    for start in range(n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in np.nonzero(adj[u])[0]:
                v = int(v)
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def stats(g: MultiGraph) -> GraphStats:
    vals = g.valences()
    multiset = dict(sorted(Counter(int(v) for v in vals).items()))
    return GraphStats(
        connected=is_connected(g),
        bipartite=is_bipartite(g),
        regular=len(multiset) <= 1,
        valence_multiset=multiset,
    )


def product_irreducible(g1: MultiGraph, g2: MultiGraph) -> bool:
    """True iff the digraph underlying A(G1)*A(G2) is strongly connected.

    For self-paired orbital pairs of a common transitive group this is
    equivalent to the union graph being connected with an odd closed walk.
    """
    if g1.order != g2.order:
        raise ValueError("product_irreducible needs equal orders")
    n = g1.order
    prod = g1.adjacency.astype(np.int64) @ g2.adjacency.astype(np.int64)
    arcs = prod > 0
    if n == 1:
        return bool(arcs[0, 0])
    return _all_reachable(arcs, 0) and _all_reachable(arcs.T, 0)


def _all_reachable(arcs: np.ndarray, start: int) -> bool:
    n = arcs.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in np.nonzero(arcs[u])[0]:
            v = int(v)
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return bool(seen.all())


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def write_edge_list(g: MultiGraph) -> str:
    """Canonical edge-list text: header "order N", then one "u v" line per
    edge with u <= v; a loop is written "u u"."""
    lines = [f"order {g.order}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> MultiGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("order "):
        raise ValueError('edge list must start with an "order N" header')
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ValueError("malformed order header") from exc
    if n < 0:
        raise ValueError("negative order")
    adj = np.zeros((n, n), dtype=np.uint8)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"vertex out of range in line: {ln!r}")
        adj[u, v] = 1
        adj[v, u] = 1
    return MultiGraph(adj)


def to_graph6(g: MultiGraph) -> str:
    """graph6 encoding; defined for loopless graphs only."""
    if g.has_loops():
        raise ValueError("graph6 cannot encode loops")
    n = g.order
    if n <= 62:
        head = [n + 63]
    elif n <= 258047:
        head = [126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
    else:
        head = [126, 126] + [((n >> (6 * k)) & 63) + 63 for k in range(5, -1, -1)]
    bits = []
    adj = g.adjacency
    for j in range(1, n):
        for i in range(j):
            bits.append(int(adj[i, j]))
    while len(bits) % 6:
        bits.append(0)
    body = [
        (bits[k] << 5 | bits[k + 1] << 4 | bits[k + 2] << 3
         | bits[k + 3] << 2 | bits[k + 4] << 1 | bits[k + 5]) + 63
        for k in range(0, len(bits), 6)
    ]
    return "".join(chr(c) for c in head + body)
