import pytest

from nutgraphs.construction import merge
from nutgraphs.coverage import (
    RULE_CYCLE,
    RULE_PRIME_CIRCULANT,
    RULE_TETRAVALENT,
    SearchCache,
    classify_order,
    coverage_report,
    covers_cycle,
    covers_prime_circulant,
    covers_tetravalent,
    find_split,
    valence_set,
    witness_to_spec,
)
from nutgraphs.nutcheck import certify_2_3, is_nut
from nutgraphs.primes import divisors, is_prime

# ---------------------------------------------------------------------------
# independent oracle: enumerate every structured factorization directly
# ---------------------------------------------------------------------------


def brute_valences(z):
    out = set()

    def recurse(rest, valence):
        out.add(valence)  # whatever remains goes into the loop factor
        for f in divisors(rest):
            if f < 2:
                continue
            recurse(rest // f, valence * (f - 1))
            if f % 2 == 1 and is_prime(f):
                for d in divisors(f - 1):
                    if d % 2 == 0:
                        recurse(rest // f, valence * d)

    recurse(z, 1)
    return out


def brute_splits(s, a, kappas):
    found = []
    for m in range(1, s - 1, 2):
        t = s - m
        for kappa in kappas:
            for v_m in brute_valences(m):
                for v_t in brute_valences(t):
                    if kappa * v_m * v_t != m * t:
                        continue
                    if t + a * v_m == m + (kappa // a) * v_t:
                        continue
                    found.append((m, t, v_m, v_t, kappa))
    return found


def test_valence_set_examples():
    assert sorted(valence_set(1).entries) == [1]
    assert sorted(valence_set(3).entries) == [1, 2]
    assert sorted(valence_set(4).entries) == [1, 3]
    assert sorted(valence_set(12).entries) == [1, 2, 3, 5, 6, 11]
    with pytest.raises(ValueError):
        valence_set(0)


def test_valence_set_matches_brute_force():
    cache = SearchCache()
    for z in range(1, 61):
        vs = valence_set(z, cache)
        assert set(vs.entries) == brute_valences(z), z
        # witness validity: product and valence recompute exactly
        for v, fact in vs.entries.items():
            assert fact.product == z and fact.valence == v
        assert str(vs.entries[1]) == f"{z}||"


def test_find_split_examples():
    w = find_split(7, 2, (2, 4))
    assert (w.m, w.t, w.v_m, w.v_t, w.kappa) == (3, 4, 2, 3, 2)
    w = find_split(5, 4, (4, 16))
    assert (w.m, w.t, w.v_m, w.v_t, w.kappa) == (1, 4, 1, 1, 4)
    assert find_split(3, 4, (4, 16)) is None
    with pytest.raises(ValueError):
        find_split(4, 2)
    with pytest.raises(ValueError):
        find_split(9, 2, (3,))


def test_find_split_matches_brute_force():
    cache = SearchCache()
    for s in range(3, 40, 2):
        for a in (2, 4, 6):
            hits = brute_splits(s, a, (a, a * a))
            w = find_split(s, a, cache=cache)
            assert (w is not None) == bool(hits), (s, a)
            if w is not None:
                assert (w.m, w.t, w.v_m, w.v_t, w.kappa) in hits
                assert w.m + w.t == s and w.m % 2 == 1 and w.t % 2 == 0
                assert w.kappa * w.v_m * w.v_t == w.m * w.t
                assert w.t + a * w.v_m != w.m + (w.kappa // a) * w.v_t
                assert w.m_factorization.product == w.m
                assert w.m_factorization.valence == w.v_m
                assert w.t_factorization.product == w.t
                assert w.t_factorization.valence == w.v_t


def test_covers_examples():
    w = covers_cycle(9)
    assert w and w.n == 3 and (w.split.m, w.split.t) == (1, 2)
    assert covers_cycle(2839) is None
    assert covers_tetravalent(2839) is None
    assert covers_prime_circulant(2839) is None
    w = covers_cycle(417)
    assert w and w.n == 3 and w.split.m + w.split.t == 139

    w = covers_tetravalent(85)
    assert w and w.n == 5 and w.split.m + w.split.t == 17
    w = covers_tetravalent(95)
    assert w and w.n == 5 and w.split.m + w.split.t == 19

    w = covers_prime_circulant(361)
    assert w and w.n == 19 and (w.split.m, w.split.t, w.split.a) == (1, 18, 18)
    w = covers_prime_circulant(2033)
    assert w and w.n == 19
    assert covers_cycle(15) is not None
    with pytest.raises(ValueError):
        covers_cycle(17)  # prime
    with pytest.raises(ValueError):
        covers_cycle(10)  # even
    with pytest.raises(ValueError):
        covers_cycle(1)  # below the defined range


def test_classify_respects_rule_order():
    # 323 = 17*19 fails the cycle rule but the tetravalent rule covers it
    assert covers_cycle(323) is None
    w = classify_order(323)
    assert w and w.rule == RULE_TETRAVALENT
    # multiples of 3 are covered by the first rule already
    assert classify_order(9).rule == RULE_CYCLE
    # 361 = 19^2 needs the prime-circulant rule
    assert classify_order(361).rule == RULE_PRIME_CIRCULANT


def test_witness_to_spec_end_to_end_to_600():
    cache = SearchCache()
    orders = [n for n in range(9, 601, 2) if not is_prime(n)]
    for order in orders:
        witness = classify_order(order, cache)
        assert witness is not None, order
        spec = witness_to_spec(witness.split, witness.n)
        graph, _, ptuple = merge(spec)
        assert graph.order == order
        cert = is_nut(graph, ptuple)
        sym = certify_2_3(spec, ptuple)
        assert cert.is_nut and sym.certified_2_3, (order, witness)


def test_kappa_restriction():
    assert covers_cycle(9, kappa="a") is not None
    assert covers_cycle(9, kappa="a2") is None  # needs kappa = a at s = 3
    assert classify_order(15, kappa="a2") is not None  # s = 5 row uses kappa = a^2
    with pytest.raises(ValueError):
        covers_cycle(9, kappa="huge")


def test_coverage_report_counts():
    report = coverage_report(2500)
    assert report.counts_at(1000) == (332, 9, 6, 0)
    assert report.counts_at(2500) == (883, 36, 17, 0)
    # monotone inclusion of the survivor sets
    for _, x, x1, x2, x3 in report.checkpoints:
        assert x >= x1 >= x2 >= x3
    # |X| cross-checked against naive trial division
    def naive_prime(k):
        return k >= 2 and all(k % d for d in range(2, int(k**0.5) + 1))

    assert report.counts_at(1000)[0] == sum(
        1 for k in range(9, 1001, 2) if not naive_prime(k)
    )
    # every covered order has a witness, every uncovered one is listed
    listed = set(report.remaining) | set(report.witnesses)
    assert len(listed) == report.counts_at(2500)[0]


def test_coverage_report_custom_checkpoints():
    report = coverage_report(100, checkpoints=[50, 100])
    assert report.counts_at(100)[0] == len(
        [n for n in range(9, 101, 2) if not is_prime(n)]
    )
    with pytest.raises(ValueError):
        coverage_report(5)


def test_coverage_report_parallel_matches_sequential():
    seq = coverage_report(3000)
    par = coverage_report(3000, jobs=2)
    assert seq.checkpoints == par.checkpoints
    assert seq.remaining == par.remaining


def test_cache_round_trip(tmp_path):
    cache = SearchCache()
    find_split(109, 2, cache=cache)
    find_split(17, 2, cache=cache)  # a failing scan is cached too
    path = tmp_path / "cache.json"
    cache.save(path)
    loaded = SearchCache.load(path)
    assert loaded.valence_values == cache.valence_values
    assert loaded.splits == cache.splits
    # version guard
    path.write_text('{"version": 99}')
    with pytest.raises(ValueError):
        SearchCache.load(path)


def test_report_serialization():
    report = coverage_report(1000)
    csv = report.to_csv()
    assert csv.splitlines()[0] == "bound,X,X1,X2,X3"
    assert "1000,332,9,6,0" in csv
    doc = report.to_json()
    assert '"schema": "nutgraphs.coverage-report/1"' in doc
