import numpy as np
import pytest

from nutgraphs.construction import (
    DIAGONAL,
    SAME_AS_FIRST,
    BlockFactorization,
    FactorizationError,
    MergeError,
    MergeSpec,
    NotBiRegularError,
    ParameterTuple,
    build_block,
    extract_tuple,
    gallery,
    merge,
    parse_builder_expression,
    parse_factorization,
    parse_spec_text,
    valence_condition,
    GALLERY_IDS,
    PETERSEN_K3,
    FOUR_K7_UNIFORM,
    FOUR_K7_SPLIT,
)
from nutgraphs.graphs import (
    circulant,
    complete,
    cycle,
    is_connected,
    kronecker,
    loops,
    stats,
    subgroup_circulant,
    union_graph,
)


def test_parse_factorization_examples():
    f = parse_factorization("1|5^(2)|9", 45)
    assert (f.z0, f.primes, f.completes) == (1, ((5, 2),), (9,))
    f = parse_factorization("3||", 3)
    assert (f.z0, f.primes, f.completes) == (3, (), ())
    with pytest.raises(FactorizationError):
        parse_factorization("1|4^(2)|", 4)  # 4 is not an odd prime
    with pytest.raises(FactorizationError):
        parse_factorization("1||3", 4)  # product mismatch
    with pytest.raises(FactorizationError):
        parse_factorization("1|5^(3)|", 5)  # odd circulant valence
    with pytest.raises(FactorizationError):
        parse_factorization("1|7^(4)|", 7)  # 4 does not divide 6
    with pytest.raises(FactorizationError):
        parse_factorization("1||1", 1)  # complete factor < 2
    with pytest.raises(FactorizationError):
        parse_factorization("0||", 0)


def test_format_parse_identity_on_family_strings():
    from nutgraphs.tables import FAMILIES

    for rows in FAMILIES.values():
        for row in rows:
            for text, z in ((row.fm, row.m), (row.ft, row.t)):
                assert str(parse_factorization(text, z)) == text


def test_build_block_examples():
    assert build_block(parse_factorization("1||3", 3)) == complete(3)
    g = build_block(parse_factorization("1|5^(2)|9", 45))
    st = stats(g)
    assert g.order == 45 and st.valence_multiset == {16: 45}
    assert build_block(parse_factorization("4||", 4)) == loops(4)


def test_build_block_random_factorizations():
    rng = np.random.default_rng(4451)
    from nutgraphs.primes import divisors

    primes = [3, 5, 7, 11, 13]
    count = 0
    while count < 200:
        z0 = int(rng.integers(1, 5))
        prime_part = []
        for p in primes:
            if rng.random() < 0.25:
                even_divs = [d for d in divisors(p - 1) if d % 2 == 0]
                prime_part.append((p, int(rng.choice(even_divs))))
        completes = tuple(int(x) for x in rng.integers(2, 10, size=rng.integers(0, 3)))
        fact = BlockFactorization(z0, tuple(prime_part), completes)
        if fact.product > 120:
            continue
        count += 1
        g = build_block(fact)
        assert g.order == fact.product
        st = stats(g)
        assert st.regular and st.valence_multiset == {fact.valence: fact.product}


def test_merge_order_9():
    spec = MergeSpec(cycle(3), DIAGONAL, DIAGONAL, loops(1), complete(2))
    g, partition, pt = merge(spec)
    assert g.order == 9 and not g.has_loops()
    assert pt.as_tuple() == (3, 2, 2, 6, 1, 1)
    degrees = g.valences()
    assert list(degrees[:3]) == [4, 4, 4] and list(degrees[3:]) == [2] * 6
    assert g.num_edges() == 12
    assert partition == (tuple(range(3)), tuple(range(3, 9)))


def test_merge_same_mode_order_55():
    spec = MergeSpec(cycle(11), SAME_AS_FIRST, DIAGONAL, loops(1), loops(4))
    g, partition, pt = merge(spec)
    assert g.order == 55
    assert pt.as_tuple() == (11, 2, 4, 44, 2, 1)
    # the second class induces four disjoint 11-cycles
    sub = g.adjacency[np.ix_(partition[1], partition[1])]
    from nutgraphs.graphs import MultiGraph

    st = stats(MultiGraph(sub))
    assert not st.connected and st.valence_multiset == {2: 44}


def test_merge_rejects_double_diagonal():
    spec = MergeSpec(loops(3), DIAGONAL, DIAGONAL, loops(1), complete(2))
    with pytest.raises(MergeError):
        merge(spec)


def test_merge_applies_matching_substitution():
    direct = MergeSpec(cycle(3), DIAGONAL, DIAGONAL, loops(1), complete(2))
    adjusted = MergeSpec(cycle(3), DIAGONAL, DIAGONAL, loops(1), loops(2))
    g1, _, _ = merge(direct)
    g2, _, _ = merge(adjusted)
    assert g1 == g2
    # odd all-loops block cannot be halved
    bad = MergeSpec(cycle(3), DIAGONAL, DIAGONAL, loops(1), loops(3))
    with pytest.raises(MergeError):
        merge(bad)


def test_merge_explicit_delta3():
    # shifted cross pattern: i joined to i and i+1
    arcs = tuple((i, j) for i in range(3) for j in (i, (i + 1) % 3))
    spec = MergeSpec(cycle(3), DIAGONAL, arcs, loops(1), complete(2))
    g, partition, pt = merge(spec)
    assert pt.as_tuple() == (3, 2, 4, 6, 1, 2)
    with pytest.raises(MergeError):
        merge(MergeSpec(cycle(3), DIAGONAL, ((0, 5),), loops(1), complete(2)))


def test_merge_connectivity_iff_union_connected():
    cases = [
        (MergeSpec(cycle(5), DIAGONAL, DIAGONAL, loops(1), complete(2)), None),
        (MergeSpec(circulant(9, {3, -3}), DIAGONAL, DIAGONAL, loops(1), complete(2)), None),
        (MergeSpec(cycle(9), SAME_AS_FIRST, DIAGONAL, loops(1), loops(2)), None),
    ]
    for spec, _ in cases:
        g, _, _ = merge(spec)
        u = union_graph(spec.lambda1, spec.delta2_graph())
        assert is_connected(g) == is_connected(u), spec


def test_merge_tuple_shape_random():
    rng = np.random.default_rng(99)
    lam1s = [cycle(3), cycle(5), complete(5), subgroup_circulant(7, 2)]
    blocks = [loops(1), loops(2), complete(2), complete(3), cycle(3), complete(4)]
    for _ in range(40):
        lam1 = lam1s[rng.integers(len(lam1s))]
        lam4 = blocks[rng.integers(len(blocks))]
        lam5 = blocks[rng.integers(len(blocks))]
        mode = (DIAGONAL, SAME_AS_FIRST)[rng.integers(2)]
        spec = MergeSpec(lam1, mode, DIAGONAL, lam4, lam5)
        try:
            g, partition, pt = merge(spec)
        except MergeError:
            continue
        n, m = lam1.order, lam4.order
        t = spec.effective_lambda5()[0].order
        a1 = int(lam1.valences()[0])
        a2 = 1 if mode == DIAGONAL else a1
        expect = (
            n * m,
            a1 * int(lam4.valences()[0]),
            t,
            n * t,
            a2 * int(spec.effective_lambda5()[0].valences()[0]),
            m,
        )
        assert pt.as_tuple() == expect, (spec, pt)
        assert pt.n1 * pt.d1 == pt.n2 * pt.d2


def test_extract_tuple_errors():
    g = cycle(5)
    with pytest.raises(NotBiRegularError):
        extract_tuple(g, ((0, 1), (2, 3, 4)))  # uneven cross degrees
    with pytest.raises(NotBiRegularError):
        extract_tuple(g, ((0, 1), (2, 3)))  # does not cover
    with pytest.raises(NotBiRegularError):
        extract_tuple(g, ((0, 1, 2, 3, 4), ()))  # empty side


def test_valence_condition():
    assert valence_condition(ParameterTuple(5, 4, 12, 30, 6, 2))
    assert valence_condition(ParameterTuple(3, 2, 2, 6, 1, 1))
    assert not valence_condition(ParameterTuple(3, 1, 2, 6, 1, 1))


def test_gallery_tuples():
    expected = {
        PETERSEN_K3: (5, 4, 12, 30, 6, 2),
        FOUR_K7_UNIFORM: (7, 6, 12, 28, 6, 3),
        FOUR_K7_SPLIT: (7, 6, 12, 28, 6, 3),
    }
    for name in GALLERY_IDS:
        g, partition, pt = gallery(name)
        assert g.order == 35 and not g.has_loops()
        assert pt.as_tuple() == expected[name]
        assert valence_condition(pt)
    with pytest.raises(ValueError):
        gallery("nope")


def test_builder_expressions():
    assert parse_builder_expression("cycle 3") == cycle(3)
    assert parse_builder_expression("subgroup_circulant 19 6") == subgroup_circulant(19, 6)
    assert parse_builder_expression("kron cycle 3 complete 2") == kronecker(cycle(3), complete(2))
    assert parse_builder_expression("circulant 9 3,-3") == circulant(9, {3, -3})
    with pytest.raises(ValueError):
        parse_builder_expression("cycle 3 extra")
    with pytest.raises(ValueError):
        parse_builder_expression("donut 4")


def test_parse_spec_text():
    text = """
# order-9 sample
lambda1 cycle 3
delta2 diag
delta3 diag
lambda4 1||
lambda5 1||2
"""
    spec = parse_spec_text(text)
    g, _, pt = merge(spec)
    assert g.order == 9 and pt.as_tuple() == (3, 2, 2, 6, 1, 1)

    with pytest.raises(ValueError):
        parse_spec_text("lambda1 cycle 3\ndelta2 diag\ndelta3 diag\nlambda4 1||\n")
    with pytest.raises(ValueError):
        parse_spec_text(text + "\nlambda1 cycle 5")
    with pytest.raises(ValueError):
        parse_spec_text(text + "\nbogus 1")


def test_parse_spec_text_files(tmp_path):
    (tmp_path / "d2.edges").write_text("order 3\n0 1\n1 2\n0 2\n")
    (tmp_path / "d3.arcs").write_text("0 0\n1 1\n2 2\n")
    text = (
        "lambda1 cycle 3\n"
        "delta2 file d2.edges\n"
        "delta3 arclist d3.arcs\n"
        "lambda4 1||\n"
        "lambda5 1||2\n"
    )
    spec = parse_spec_text(text, base_dir=tmp_path)
    assert spec.delta2 == complete(3)
    assert spec.delta3 == ((0, 0), (1, 1), (2, 2))
    g, _, pt = merge(spec)
    assert g.order == 9
