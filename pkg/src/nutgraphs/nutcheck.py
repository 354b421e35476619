"""Nut-graph certification and the spectral/structural prediction for merges.

A nut graph is connected with nullity exactly 1 and a kernel vector free of
zeros.  For graphs carrying a bi-regular bi-decomposition that satisfies the
valence condition, the canonical two-valued labeling (1 on the first class,
-k1/d1 on the second) is a kernel vector, which makes the modular-plus-kernel
certificate available; everything else falls back to exact elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .construction import DIAGONAL, MergeSpec, ParameterTuple
from .graphs import MultiGraph, is_connected, union_graph

NUT = "nut"
NOT_NUT = "not_nut"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class NutCertificate:
    order: int
    connected: bool
    nullity: int
    kernel: tuple[Fraction, ...] | None
    min_abs_entry: Fraction | None
    is_nut: bool
    method: str

    def to_text(self) -> str:
        kernel = " ".join(str(x) for x in self.kernel) if self.kernel else "-"
        min_abs = str(self.min_abs_entry) if self.min_abs_entry is not None else "-"
        return (
            "schema: nutgraphs.nut-certificate/1\n"
            f"order: {self.order}\n"
            f"connected: {str(self.connected).lower()}\n"
            f"nullity: {self.nullity}\n"
            f"method: {self.method}\n"
            f"kernel: {kernel}\n"
            f"min_abs_entry: {min_abs}\n"
            f"is_nut: {str(self.is_nut).lower()}\n"
        )


@dataclass(frozen=True)
class SymmetryCertificate:
    deg_v: int
    deg_u: int
    constructed_orbits: bool
    certified_2_3: bool
    reason: str

    def to_text(self) -> str:
        return (
            "schema: nutgraphs.symmetry-certificate/1\n"
            f"deg_v: {self.deg_v}\n"
            f"deg_u: {self.deg_u}\n"
            f"constructed_orbits: {str(self.constructed_orbits).lower()}\n"
            f"certified_2_3: {str(self.certified_2_3).lower()}\n"
            f"reason: {self.reason}\n"
        )


@dataclass(frozen=True)
class Prediction:
    verdict: str
    reasons: tuple[str, ...] = ()


def canonical_kernel(ptuple: ParameterTuple) -> tuple[Fraction, ...]:
    """The two-valued labeling: 1 on the first class, -k1/d1 on the second.

    It satisfies every local condition exactly when the valence condition
    k1*k2 = d1*d2 holds; callers verify membership with kernel_check.
    """
    if ptuple.d1 < 1:
        raise ValueError("cross valence d1 must be >= 1")
    label = Fraction(-ptuple.k1, ptuple.d1)
    return (Fraction(1),) * ptuple.n1 + (label,) * ptuple.n2


def is_nut(
    graph: MultiGraph,
    ptuple: ParameterTuple | None = None,
    prime: int = linalg.DEFAULT_PRIME,
) -> NutCertificate:
    """Certify or refute nut-ness with exact arithmetic.

    With a parameter tuple the canonical kernel candidate enables the
    modular-plus-kernel shortcut; a full modular rank soundly certifies
    nullity 0; everything else is decided by exact elimination.
    """
    if graph.has_loops():
        raise ValueError("nut certification is defined for loopless graphs")
    adj = graph.adjacency
    n = graph.order
    connected = is_connected(graph)
    result = None
    if ptuple is not None:
        candidate = canonical_kernel(ptuple)
        try:
            result = linalg.certify_nullity_one(adj, candidate, prime)
        except linalg.CandidateNotInKernel:
            result = None
    if result is None:
        # rank mod p == n forces full rational rank: sound nullity-0 shortcut
        if linalg.rank_mod_p(adj, prime) == n:
            result = linalg.NullityResult(0, (), linalg.MODULAR_RANK_FULL)
        else:
            result = linalg.nullspace_rational(adj)
    kernel = result.basis[0] if result.nullity == 1 else None
    min_abs = min(abs(x) for x in kernel) if kernel is not None else None
    nut = connected and result.nullity == 1 and min_abs > 0
    return NutCertificate(
        order=n,
        connected=connected,
        nullity=result.nullity,
        kernel=kernel,
        min_abs_entry=min_abs,
        is_nut=nut,
        method=result.method,
    )


def _regular_valence(g: MultiGraph) -> int | None:
    vals = g.valences()
    if len(vals) == 0:
        return None
    v0 = int(vals[0])
    return v0 if bool((vals == v0).all()) else None


def _nonsingular(g: MultiGraph, prime: int) -> bool:
    if linalg.rank_mod_p(g.adjacency, prime) == g.order:
        return True
    return linalg.nullspace_rational(g.adjacency).nullity == 0


def predict_nut(spec: MergeSpec, prime: int = linalg.DEFAULT_PRIME) -> Prediction:
    """Predict nut-ness of merge(spec) without building the merged graph.

    Applicable when the cross pattern is diagonal, the total order is odd,
    both base blocks are regular and non-singular.  Then the merge is a nut
    graph if and only if both inner blocks are non-singular, the union of the
    base blocks is connected, and the valence condition holds.
    """
    if spec.delta3 != DIAGONAL:
        return Prediction(INAPPLICABLE, ("cross pattern is not diagonal",))
    lam1 = spec.lambda1
    lam4 = spec.lambda4
    lam5, _ = spec.effective_lambda5()
    d2g = spec.delta2_graph()
    n, m, t = lam1.order, lam4.order, lam5.order
    if (n * (m + t)) % 2 == 0:
        return Prediction(INAPPLICABLE, ("total order is even",))
    a1 = _regular_valence(lam1)
    a2 = _regular_valence(d2g)
    a4 = _regular_valence(lam4)
    a5 = _regular_valence(lam5)
    if None in (a1, a2, a4, a5):
        return Prediction(INAPPLICABLE, ("a block is not regular",))
    if not _nonsingular(lam1, prime):
        return Prediction(INAPPLICABLE, ("first base block is singular",))
    if isinstance(spec.delta2, MultiGraph) and not _nonsingular(d2g, prime):
        return Prediction(INAPPLICABLE, ("second base block is singular",))

    reasons = []
    if not _nonsingular(lam4, prime):
        reasons.append("lambda4 singular")
    if not _nonsingular(lam5, prime):
        reasons.append("lambda5 singular")
    if not is_connected(union_graph(lam1, d2g)):
        reasons.append("base-block union disconnected")
    k1 = a1 * a4
    k2 = a2 * a5
    if k1 * k2 != m * t:
        reasons.append("valence condition fails")
    if reasons:
        return Prediction(NOT_NUT, tuple(reasons))
    return Prediction(NUT)


def certify_2_3(
    spec: MergeSpec | None,
    ptuple: ParameterTuple,
    assume_constructed: bool = False,
) -> SymmetryCertificate:
    """One-sided orbit-count certificate for merged graphs.

    The construction supplies a symmetry group with two vertex and three edge
    orbits; if the two degree classes differ, no automorphism can swap them,
    so the counts are exactly (2, 3).  Equal degrees are reported as
    inconclusive, and graphs of unknown provenance are never certified unless
    the caller explicitly asserts construction provenance.
    """
    deg_v = ptuple.k1 + ptuple.d1
    deg_u = ptuple.k2 + ptuple.d2
    constructed = spec is not None or assume_constructed
    if not constructed:
        return SymmetryCertificate(
            deg_v, deg_u, False, False,
            "not certified: graph was not produced by the merge constructor",
        )
    if deg_v != deg_u:
        return SymmetryCertificate(
            deg_v, deg_u, True, True,
            "degree classes differ, so no automorphism maps one class to the other",
        )
    return SymmetryCertificate(deg_v, deg_u, True, False, "inconclusive: graph regular")
