"""Block factorizations, the two-class merge construction, and the order-35 gallery.

A block factorization ``z0 | p1^(d1),... | z'1,...`` describes an
arc-transitive non-singular building block as a Kronecker product of an
all-loops graph, prime-order subgroup circulants, and complete graphs.  The
merge construction glues two such product blocks over a shared index set of
size n: class V carries n*m vertices (lambda1 x lambda4), class U carries n*t
vertices (delta2-block x lambda5), and every v with index i is joined to every
u whose index is matched by the cross pattern.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .graphs import (
    MultiGraph,
    circulant,
    complete,
    cycle,
    kronecker,
    loops,
    subgroup_circulant,
)
from .primes import is_prime

DIAGONAL = "diag"
SAME_AS_FIRST = "same"


class FactorizationError(ValueError):
    """Malformed or inconsistent block factorization."""


class MergeError(ValueError):
    """Merge specification that cannot produce a simple graph."""


class NotBiRegularError(ValueError):
    """Partition whose induced or cross degrees are not constant."""


@dataclass(frozen=True)
class BlockFactorization:
    """Structured form z0 * (primes p with even valence d) * (completes z')."""

    z0: int = 1
    primes: tuple[tuple[int, int], ...] = ()
    completes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.z0 < 1:
            raise FactorizationError(f"loop factor {self.z0} must be >= 1")
        for p, d in self.primes:
            if p < 3 or p % 2 == 0 or not is_prime(p):
                raise FactorizationError(f"{p} is not an odd prime")
            if d < 2 or d % 2 != 0:
                raise FactorizationError(f"valence {d} must be even and >= 2")
            if (p - 1) % d != 0:
                raise FactorizationError(f"{d} does not divide {p} - 1")
        for z in self.completes:
            if z < 2:
                raise FactorizationError(f"complete factor {z} must be >= 2")

    @property
    def product(self) -> int:
        out = self.z0
        for p, _ in self.primes:
            out *= p
        for z in self.completes:
            out *= z
        return out

    @property
    def valence(self) -> int:
        out = 1
        for _, d in self.primes:
            out *= d
        for z in self.completes:
            out *= z - 1
        return out

    def __str__(self) -> str:
        mid = ",".join(f"{p}^({d})" for p, d in self.primes)
        right = ",".join(str(z) for z in self.completes)
        return f"{self.z0}|{mid}|{right}"


_PRIME_FACTOR_RE = re.compile(r"(\d+)\^\((\d+)\)")


def parse_factorization(text: str, z: int | None = None) -> BlockFactorization:
    """Parse ``z0 | p^(d),... | z',...`` notation; validate the product is z."""
    parts = text.strip().split("|")
    if len(parts) != 3:
        raise FactorizationError(f"expected two '|' separators in {text!r}")
    try:
        z0 = int(parts[0])
    except ValueError as exc:
        raise FactorizationError(f"bad loop factor in {text!r}") from exc
    primes = []
    if parts[1].strip():
        for item in parts[1].split(","):
            m = _PRIME_FACTOR_RE.fullmatch(item.strip())
            if not m:
                raise FactorizationError(f"bad prime factor {item!r} in {text!r}")
            primes.append((int(m.group(1)), int(m.group(2))))
    completes = []
    if parts[2].strip():
        for item in parts[2].split(","):
            try:
                completes.append(int(item))
            except ValueError as exc:
                raise FactorizationError(f"bad complete factor {item!r}") from exc
    fact = BlockFactorization(z0, tuple(primes), tuple(completes))
    if z is not None and fact.product != z:
        raise FactorizationError(
            f"factorization {text!r} has product {fact.product}, expected {z}"
        )
    return fact


def build_block(fact: BlockFactorization) -> MultiGraph:
    """Realize a factorization as loops(z0) x circulants x completes."""
    g = loops(fact.z0)
    for p, d in fact.primes:
        g = kronecker(g, subgroup_circulant(p, d))
    for z in fact.completes:
        g = kronecker(g, complete(z))
    return g


@dataclass(frozen=True)
class ParameterTuple:
    """Bi-regular bi-decomposition parameters <n1,k1,d1,n2,k2,d2>."""

    n1: int
    k1: int
    d1: int
    n2: int
    k2: int
    d2: int

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.n1, self.k1, self.d1, self.n2, self.k2, self.d2)

    def __str__(self) -> str:
        return "<{},{},{},{},{},{}>".format(*self.as_tuple())


def valence_condition(t: ParameterTuple) -> bool:
    """k1*k2 = d1*d2; with both induced blocks regular this forces singularity."""
    return t.k1 * t.k2 == t.d1 * t.d2


@dataclass(frozen=True)
class MergeSpec:
    """Input to the merge construction.

    delta2 is "diag" (second base block is all loops), "same" (reuse lambda1),
    or an explicit MultiGraph of the same order as lambda1.  delta3 is "diag"
    (v and u classes joined exactly at equal indices) or an explicit arc set
    over the shared index range.
    """

    lambda1: MultiGraph
    delta2: str | MultiGraph
    delta3: str | tuple[tuple[int, int], ...]
    lambda4: MultiGraph
    lambda5: MultiGraph

    def delta2_graph(self) -> MultiGraph:
        if isinstance(self.delta2, MultiGraph):
            if self.delta2.order != self.lambda1.order:
                raise MergeError("explicit second base block has wrong order")
            return self.delta2
        if self.delta2 == DIAGONAL:
            return loops(self.lambda1.order)
        if self.delta2 == SAME_AS_FIRST:
            return self.lambda1
        raise MergeError(f"unknown delta2 mode {self.delta2!r}")

    def effective_lambda5(self) -> tuple[MultiGraph, bool]:
        """Apply the loops-to-matching substitution when both the second base
        block and lambda5 would be all loops: halve the loop count and append
        a complete factor of size 2.  Conditions elsewhere are unchanged
        because the block keeps order t and valence 1."""
        lam5 = self.lambda5
        if self.delta2 == DIAGONAL and np.array_equal(
            lam5.adjacency, np.eye(lam5.order, dtype=np.uint8)
        ):
            t = lam5.order
            if t % 2:
                raise MergeError(
                    "all-loops lambda5 with diagonal delta2 needs even order "
                    "to substitute a perfect matching"
                )
            return kronecker(loops(t // 2), complete(2)), True
        return lam5, False


def merge(spec: MergeSpec) -> tuple[MultiGraph, tuple[tuple[int, ...], tuple[int, ...]], ParameterTuple]:
    """Build the merged graph of order n*(m+t), its class partition, and its
    parameter tuple.  Rejects any specification that would produce loops."""
    lam1, lam4 = spec.lambda1, spec.lambda4
    n, m = lam1.order, lam4.order
    d2g = spec.delta2_graph()
    lam5, _ = spec.effective_lambda5()
    t = lam5.order

    gamma1 = kronecker(lam1, lam4)
    if gamma1.has_loops():
        raise MergeError("lambda1 and lambda4 both carry loops; merged graph would not be simple")
    gamma2 = kronecker(d2g, lam5)
    if gamma2.has_loops():
        raise MergeError("second base block and lambda5 both carry loops; merged graph would not be simple")

    if spec.delta3 == DIAGONAL:
        d3 = np.eye(n, dtype=np.uint8)
    else:
        d3 = np.zeros((n, n), dtype=np.uint8)
        for arc in spec.delta3:
            i, j = arc
            if not (0 <= i < n and 0 <= j < n):
                raise MergeError(f"cross arc {arc} out of range for index set of size {n}")
            d3[i, j] = 1
    cross = np.kron(d3, np.ones((m, t), dtype=np.uint8))

    nm, nt = n * m, n * t
    adj = np.zeros((nm + nt, nm + nt), dtype=np.uint8)
    adj[:nm, :nm] = gamma1.adjacency
    adj[nm:, nm:] = gamma2.adjacency
    adj[:nm, nm:] = cross
    adj[nm:, :nm] = cross.T
    graph = MultiGraph(adj)
    partition = (tuple(range(nm)), tuple(range(nm, nm + nt)))
    return graph, partition, extract_tuple(graph, partition)


def extract_tuple(graph: MultiGraph, partition) -> ParameterTuple:
    """Read off <n1,k1,d1,n2,k2,d2> from a vertex partition, verifying that
    both induced subgraphs are regular and both cross-degree maps constant."""
    v_idx = np.asarray(partition[0], dtype=np.intp)
    u_idx = np.asarray(partition[1], dtype=np.intp)
    n = graph.order
    if len(v_idx) == 0 or len(u_idx) == 0:
        raise NotBiRegularError("both classes must be nonempty")
    marks = np.zeros(n, dtype=np.int64)
    marks[v_idx] += 1
    marks[u_idx] += 1
    if not np.all(marks == 1):
        raise NotBiRegularError("partition must cover every vertex exactly once")
    adj = graph.adjacency
    deg = []
    for rows, cols in ((v_idx, v_idx), (v_idx, u_idx), (u_idx, u_idx), (u_idx, v_idx)):
        sums = adj[np.ix_(rows, cols)].sum(axis=1, dtype=np.int64)
        if np.any(sums != sums[0]):
            raise NotBiRegularError("not bi-regular: degree is not constant on a class")
        deg.append(int(sums[0]))
    k1, d1, k2, d2 = deg
    n1, n2 = len(v_idx), len(u_idx)
    if n1 * d1 != n2 * d2:
        raise AssertionError("cross-edge double count failed; partition data corrupt")
    return ParameterTuple(n1, k1, d1, n2, k2, d2)


# ---------------------------------------------------------------------------
# gallery: three order-35 graphs outside the merge family
# ---------------------------------------------------------------------------

PETERSEN_K3 = "petersen_k3"
FOUR_K7_UNIFORM = "four_k7_uniform"
FOUR_K7_SPLIT = "four_k7_split"

GALLERY_IDS = (PETERSEN_K3, FOUR_K7_UNIFORM, FOUR_K7_SPLIT)


def _petersen() -> MultiGraph:
    adj = np.zeros((10, 10), dtype=np.uint8)
    for i in range(5):
        for j in (i + 1) % 5, i + 5:
            adj[i, j] = adj[j, i] = 1
        j = 5 + (i + 2) % 5
        adj[5 + i, j] = adj[j, 5 + i] = 1
    return MultiGraph(adj)


def gallery(name: str) -> tuple[MultiGraph, tuple[tuple[int, ...], tuple[int, ...]], ParameterTuple]:
    """Hand-coded order-35 examples whose second class is a product block but
    whose cross pattern does not come from the merge construction."""
    if name == PETERSEN_K3:
        # class V: K_5 on 0..4; class U: Petersen x K_3, vertex (pv, c) at
        # 5 + 3*pv + c.  v_i meets every copy above outer positions i+-1 and
        # inner positions i+-2.
        n = 35
        adj = np.zeros((n, n), dtype=np.uint8)
        adj[:5, :5] = complete(5).adjacency
        adj[5:, 5:] = kronecker(_petersen(), complete(3)).adjacency
        for i in range(5):
            targets = [(i - 1) % 5, (i + 1) % 5, 5 + (i - 2) % 5, 5 + (i + 2) % 5]
            for pv in targets:
                for c in range(3):
                    u = 5 + 3 * pv + c
                    adj[i, u] = adj[u, i] = 1
        split = 5
    elif name in (FOUR_K7_UNIFORM, FOUR_K7_SPLIT):
        # class V: K_7 on 0..6; class U: four disjoint K_7 copies, vertex
        # (copy, pos) at 7 + 7*copy + pos.
        n = 35
        adj = np.zeros((n, n), dtype=np.uint8)
        adj[:7, :7] = complete(7).adjacency
        adj[7:, 7:] = kronecker(loops(4), complete(7)).adjacency
        if name == FOUR_K7_UNIFORM:
            offsets = {0: (-1, 0, 2), 1: (-1, 0, 2), 2: (-1, 0, 2), 3: (-1, 0, 2)}
        else:
            offsets = {0: (1, -1, -2), 1: (1, -1, -2), 2: (1, 2, -1), 3: (1, 2, -1)}
        for i in range(7):
            for copy, offs in offsets.items():
                for off in offs:
                    u = 7 + 7 * copy + (i + off) % 7
                    adj[i, u] = adj[u, i] = 1
        split = 7
    else:
        raise ValueError(f"unknown gallery id {name!r}; choose from {GALLERY_IDS}")
    graph = MultiGraph(adj)
    partition = (tuple(range(split)), tuple(range(split, n)))
    return graph, partition, extract_tuple(graph, partition)


# ---------------------------------------------------------------------------
# merge-spec text files
# ---------------------------------------------------------------------------

_FIXED_ARITY = {"cycle": 1, "complete": 1, "loops": 1, "subgroup_circulant": 2, "circulant": 2}


def _parse_builder(tokens: list[str]) -> MultiGraph:
    if not tokens:
        raise ValueError("empty builder expression")
    head = tokens.pop(0)
    if head == "kron":
        left = _parse_builder(tokens)
        right = _parse_builder(tokens)
        return kronecker(left, right)
    if head not in _FIXED_ARITY:
        raise ValueError(f"unknown builder {head!r}")
    arity = _FIXED_ARITY[head]
    if len(tokens) < arity:
        raise ValueError(f"builder {head!r} needs {arity} arguments")
    args = [tokens.pop(0) for _ in range(arity)]
    if head == "cycle":
        return cycle(int(args[0]))
    if head == "complete":
        return complete(int(args[0]))
    if head == "loops":
        return loops(int(args[0]))
    if head == "subgroup_circulant":
        return subgroup_circulant(int(args[0]), int(args[1]))
    # circulant N s1,s2,...  (comma-separated residues, no spaces)
    return circulant(int(args[0]), [int(x) for x in args[1].split(",")])


def parse_builder_expression(text: str) -> MultiGraph:
    """Prefix expressions like "cycle 3", "subgroup_circulant 19 6",
    "kron cycle 3 cycle 5", "circulant 9 3,6"."""
    tokens = text.split()
    g = _parse_builder(tokens)
    if tokens:
        raise ValueError(f"trailing tokens {tokens!r} in builder expression")
    return g


def _parse_block_value(value: str) -> MultiGraph:
    if "|" in value:
        return build_block(parse_factorization(value))
    return parse_builder_expression(value)


def parse_spec_text(text: str, base_dir=None) -> MergeSpec:
    """Line-oriented merge spec: keys lambda1, delta2, delta3, lambda4, lambda5.

    lambda values are builder expressions or factorization strings; delta2 is
    diag | same | file PATH; delta3 is diag | arclist PATH.  Paths resolve
    relative to base_dir.
    """
    from pathlib import Path

    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(" ")
        if key in fields:
            raise ValueError(f"duplicate key {key!r} in spec")
        fields[key] = value.strip()
    missing = {"lambda1", "delta2", "delta3", "lambda4", "lambda5"} - fields.keys()
    if missing:
        raise ValueError(f"spec is missing keys: {sorted(missing)}")
    extra = fields.keys() - {"lambda1", "delta2", "delta3", "lambda4", "lambda5"}
    if extra:
        raise ValueError(f"spec has unknown keys: {sorted(extra)}")

    def resolve(path_str: str) -> Path:
        path = Path(path_str)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return path

    lam1 = _parse_block_value(fields["lambda1"])
    lam4 = _parse_block_value(fields["lambda4"])
    lam5 = _parse_block_value(fields["lambda5"])

    d2_value = fields["delta2"]
    delta2: str | MultiGraph
    if d2_value == DIAGONAL or d2_value == SAME_AS_FIRST:
        delta2 = d2_value
    elif d2_value.startswith("file "):
        from .graphs import read_edge_list

        delta2 = read_edge_list(resolve(d2_value[5:].strip()).read_text())
    else:
        raise ValueError(f"delta2 must be diag, same, or 'file PATH', got {d2_value!r}")

    d3_value = fields["delta3"]
    delta3: str | tuple[tuple[int, int], ...]
    if d3_value == DIAGONAL:
        delta3 = DIAGONAL
    elif d3_value.startswith("arclist "):
        arcs = []
        for ln in resolve(d3_value[8:].strip()).read_text().splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            a, b = ln.split()
            arcs.append((int(a), int(b)))
        delta3 = tuple(arcs)
    else:
        raise ValueError(f"delta3 must be diag or 'arclist PATH', got {d3_value!r}")

    return MergeSpec(lam1, delta2, delta3, lam4, lam5)
