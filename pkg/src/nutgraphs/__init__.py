"""Nut graphs with two vertex and three edge orbits: construction, exact
certification, and coverage search over odd non-prime orders."""

from .construction import (
    DIAGONAL,
    SAME_AS_FIRST,
    BlockFactorization,
    MergeSpec,
    ParameterTuple,
    build_block,
    extract_tuple,
    gallery,
    merge,
    parse_factorization,
    valence_condition,
)
from .coverage import (
    CoverageReport,
    OrderWitness,
    SearchCache,
    SplitWitness,
    ValenceSet,
    classify_order,
    coverage_report,
    covers_cycle,
    covers_prime_circulant,
    covers_tetravalent,
    find_split,
    valence_set,
    witness_to_spec,
)
from .graphs import (
    MultiGraph,
    circulant,
    complete,
    cycle,
    disjoint_union,
    kronecker,
    loops,
    product_irreducible,
    stats,
    subgroup_circulant,
    union_graph,
)
from .linalg import (
    NullityResult,
    certify_nullity_one,
    kernel_check,
    nullspace_rational,
    rank_mod_p,
)
from .nutcheck import (
    NutCertificate,
    Prediction,
    SymmetryCertificate,
    canonical_kernel,
    certify_2_3,
    is_nut,
    predict_nut,
)

__version__ = "0.1.0"
