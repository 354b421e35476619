"""Coverage search: which odd non-prime orders get a certified nut graph with
two vertex and three edge orbits from the three block-merge families.

The core quantity is the achievable-valence set V(z): the valences of product
blocks (loops x prime circulants x completes) of order z.  A split of an odd
block sum s = m + t (m odd, t even) is admissible for base valence a and cross
multiplier kappa in {a, a^2} when kappa * v_m * v_t = m * t for achievable
valences v_m, v_t, and the two vertex classes get different degrees:
t + a*v_m != m + (kappa/a)*v_t.  The three coverage rules then try base blocks
that are cycles (a = 2), tetravalent blocks (a = 4), or prime-order subgroup
circulants (any even a dividing n - 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .construction import (
    DIAGONAL,
    SAME_AS_FIRST,
    BlockFactorization,
    MergeSpec,
    build_block,
    parse_factorization,
)
from .graphs import cycle, subgroup_circulant
from .primes import divisors, is_prime, smallest_prime_factor_table
from .tables import tetravalent_block

CACHE_VERSION = 1

RULE_CYCLE = "cycle"
RULE_TETRAVALENT = "tetravalent"
RULE_PRIME_CIRCULANT = "prime_circulant"

# Counting checkpoints used by default in coverage reports.
DEFAULT_CHECKPOINTS = (
    1_000, 2_500, 5_000, 10_000, 20_000, 30_000, 40_000, 50_000,
    100_000, 200_000, 300_000, 400_000, 500_000, 600_000, 700_000,
    800_000, 900_000, 1_000_000,
)


@dataclass(frozen=True)
class SplitWitness:
    """An admissible split m + t = s with its achieving factorizations."""

    m: int
    t: int
    v_m: int
    v_t: int
    kappa: int
    a: int
    m_factorization: BlockFactorization
    t_factorization: BlockFactorization


@dataclass(frozen=True)
class ValenceSet:
    z: int
    entries: dict[int, BlockFactorization]


@dataclass(frozen=True)
class OrderWitness:
    order: int
    rule: str
    n: int
    split: SplitWitness


class SearchCache:
    """Memo for valence-value sets and split searches, persistable to JSON."""

    def __init__(self):
        self.valence_values: dict[int, frozenset[int]] = {}
        self.splits: dict[tuple[int, int, tuple[int, ...]], SplitWitness | None] = {}
        # derived, not persisted: ascending tuple per order for ordered scans
        self.valence_sorted: dict[int, tuple[int, ...]] = {}

    def sorted_values(self, z: int) -> tuple[int, ...]:
        vals = self.valence_sorted.get(z)
        if vals is None:
            vals = tuple(sorted(_valence_values(z, self)))
            self.valence_sorted[z] = vals
        return vals

    def save(self, path):
        splits = {}
        for (s, a, kappas), w in self.splits.items():
            key = f"{s}|{a}|{','.join(map(str, kappas))}"
            if w is None:
                splits[key] = None
            else:
                splits[key] = {
                    "m": w.m, "t": w.t, "v_m": w.v_m, "v_t": w.v_t,
                    "kappa": w.kappa, "a": w.a,
                    "fm": str(w.m_factorization), "ft": str(w.t_factorization),
                }
        doc = {
            "version": CACHE_VERSION,
            "valence_values": {str(z): sorted(v) for z, v in self.valence_values.items()},
            "splits": splits,
        }
        Path(path).write_text(json.dumps(doc))

    @classmethod
    def load(cls, path) -> "SearchCache":
        doc = json.loads(Path(path).read_text())
        if doc.get("version") != CACHE_VERSION:
            raise ValueError(
                f"cache version {doc.get('version')!r} not supported "
                f"(expected {CACHE_VERSION})"
            )
        cache = cls()
        for z, vals in doc.get("valence_values", {}).items():
            cache.valence_values[int(z)] = frozenset(vals)
        for key, w in doc.get("splits", {}).items():
            s, a, kappas = key.split("|")
            tkey = (int(s), int(a), tuple(int(x) for x in kappas.split(",")))
            if w is None:
                cache.splits[tkey] = None
            else:
                cache.splits[tkey] = SplitWitness(
                    w["m"], w["t"], w["v_m"], w["v_t"], w["kappa"], w["a"],
                    parse_factorization(w["fm"], w["m"]),
                    parse_factorization(w["ft"], w["t"]),
                )
        return cache


_DEFAULT_CACHE = SearchCache()


def _even_divisors(n: int) -> list[int]:
    return [d for d in divisors(n) if d % 2 == 0]


def _valence_values(z: int, cache: SearchCache) -> frozenset[int]:
    """Achievable valences of product blocks of order z (memoized).

    V(1) = {1}; V(z) adds c * V(z/f) for every factor f >= 2 of z, where c is
    f - 1 (a complete factor) or, for odd prime f, any even divisor of f - 1
    (a circulant factor).  The trailing {1} models the loop factor absorbing
    any residual divisor.
    """
    known = cache.valence_values.get(z)
    if known is not None:
        return known
    vals = {1}
    for f in divisors(z):
        if f < 2:
            continue
        sub = _valence_values(z // f, cache)
        contribs = {f - 1}
        if f > 2 and f % 2 == 1 and is_prime(f):
            contribs.update(_even_divisors(f - 1))
        for c in contribs:
            vals.update(c * v for v in sub)
    result = frozenset(vals)
    cache.valence_values[z] = result
    return result


def _valence_witness(z: int, v: int, cache: SearchCache) -> BlockFactorization:
    """One factorization of z achieving valence v (deterministic scan order)."""
    if v == 1:
        return BlockFactorization(z0=z)
    for f in divisors(z):
        if f < 2:
            continue
        rest = z // f
        sub = _valence_values(rest, cache)
        if v % (f - 1) == 0 and v // (f - 1) in sub:
            inner = _valence_witness(rest, v // (f - 1), cache)
            return BlockFactorization(
                inner.z0, inner.primes, tuple(sorted(inner.completes + (f,)))
            )
        if f > 2 and f % 2 == 1 and is_prime(f):
            for d in _even_divisors(f - 1):
                if v % d == 0 and v // d in sub:
                    inner = _valence_witness(rest, v // d, cache)
                    return BlockFactorization(
                        inner.z0, tuple(sorted(inner.primes + ((f, d),))), inner.completes
                    )
    raise KeyError(f"valence {v} is not achievable for order {z}")


def valence_set(z: int, cache: SearchCache | None = None) -> ValenceSet:
    """All achievable valences of order-z product blocks, with one witness each."""
    if z < 1:
        raise ValueError("order must be >= 1")
    cache = cache if cache is not None else _DEFAULT_CACHE
    values = _valence_values(z, cache)
    return ValenceSet(z, {v: _valence_witness(z, v, cache) for v in sorted(values)})


def find_split(
    s: int,
    a: int,
    kappas: tuple[int, ...] | None = None,
    cache: SearchCache | None = None,
) -> SplitWitness | None:
    """First admissible split of the odd block sum s for base valence a.

    Scans m = 1, 3, 5, ... < s, then the allowed kappa values ascending, then
    achievable v_m ascending; returns the first split satisfying both the
    product condition and the degree-difference condition, or None.
    """
    if s < 3 or s % 2 == 0:
        raise ValueError("block sum must be odd and >= 3")
    if a < 2 or a % 2:
        raise ValueError("base valence must be even and >= 2")
    kappas = tuple(sorted(set(kappas))) if kappas is not None else tuple(sorted({a, a * a}))
    if any(k not in (a, a * a) for k in kappas):
        raise ValueError(f"kappa values must lie in {{{a}, {a * a}}}")
    cache = cache if cache is not None else _DEFAULT_CACHE
    key = (s, a, kappas)
    if key in cache.splits:
        return cache.splits[key]
    vv = cache.valence_values
    result = None
    for m in range(1, s - 1, 2):
        t = s - m
        mt = m * t
        vm_set = vv.get(m)
        if vm_set is None:
            vm_set = _valence_values(m, cache)
        vt_set = vv.get(t)
        if vt_set is None:
            vt_set = _valence_values(t, cache)
        for kappa in kappas:
            q0, r0 = divmod(mt, kappa)
            if r0:
                continue
            ka = kappa // a
            base = t - m  # hit must avoid t + a*v_m == m + ka*v_t
            hit = False
            # detection: iterate whichever side is smaller
            if len(vm_set) <= len(vt_set):
                for v_m in vm_set:
                    v_t, rem = divmod(q0, v_m)
                    if not rem and v_t in vt_set and base + a * v_m != ka * v_t:
                        hit = True
                        break
            else:
                for v_t in vt_set:
                    v_m, rem = divmod(q0, v_t)
                    if not rem and v_m in vm_set and base + a * v_m != ka * v_t:
                        hit = True
                        break
            if not hit:
                continue
            # canonical witness within the cell: smallest admissible v_m
            for v_m in cache.sorted_values(m):
                v_t, rem = divmod(q0, v_m)
                if not rem and v_t in vt_set and base + a * v_m != ka * v_t:
                    result = SplitWitness(
                        m, t, v_m, v_t, kappa, a,
                        _valence_witness(m, v_m, cache),
                        _valence_witness(t, v_t, cache),
                    )
                    break
            break
        if result:
            break
    cache.splits[key] = result
    return result


def _validate_order(n: int):
    if n < 9 or n % 2 == 0 or is_prime(n):
        raise ValueError(f"{n} is not an odd non-prime order >= 9")


def _kappa_set(a: int, choice: str) -> tuple[int, ...]:
    if choice == "both":
        return tuple(sorted({a, a * a}))
    if choice == "a":
        return (a,)
    if choice == "a2":
        return (a * a,)
    raise ValueError(f"kappa choice must be a, a2 or both, got {choice!r}")


def covers_cycle(
    n: int, cache: SearchCache | None = None, divs=None, kappa: str = "both"
) -> OrderWitness | None:
    """Coverage via cycle base blocks (a = 2, kappa in {2, 4}); any divisor
    n0 >= 3 of n with cofactor >= 3 may carry the construction."""
    _validate_order(n)
    kappas = _kappa_set(2, kappa)
    for n0 in divs if divs is not None else divisors(n):
        if n0 < 3 or n // n0 < 3:
            continue
        split = find_split(n // n0, 2, kappas, cache)
        if split:
            return OrderWitness(n, RULE_CYCLE, n0, split)
    return None


def covers_tetravalent(
    n: int, cache: SearchCache | None = None, divs=None, kappa: str = "both"
) -> OrderWitness | None:
    """Coverage via tetravalent base blocks (a = 4, kappa in {4, 16});
    admissible divisors are n0 >= 5 that are composite or primes = 1 (mod 4)."""
    _validate_order(n)
    kappas = _kappa_set(4, kappa)
    for n0 in divs if divs is not None else divisors(n):
        if n0 < 5 or n // n0 < 3:
            continue
        if is_prime(n0) and n0 % 4 != 1:
            continue
        split = find_split(n // n0, 4, kappas, cache)
        if split:
            return OrderWitness(n, RULE_TETRAVALENT, n0, split)
    return None


def covers_prime_circulant(
    n: int, cache: SearchCache | None = None, divs=None, kappa: str = "both"
) -> OrderWitness | None:
    """Coverage via prime-order subgroup circulants: any prime divisor n0 and
    any even a | n0 - 1, kappa in {a, a^2}."""
    _validate_order(n)
    for n0 in divs if divs is not None else divisors(n):
        if n0 < 3 or n // n0 < 3 or not is_prime(n0):
            continue
        for a in _even_divisors(n0 - 1):
            split = find_split(n // n0, a, _kappa_set(a, kappa), cache)
            if split:
                return OrderWitness(n, RULE_PRIME_CIRCULANT, n0, split)
    return None


_RULE_SEQUENCE = (
    (RULE_CYCLE, covers_cycle),
    (RULE_TETRAVALENT, covers_tetravalent),
    (RULE_PRIME_CIRCULANT, covers_prime_circulant),
)


def classify_order(
    n: int, cache: SearchCache | None = None, divs=None, kappa: str = "both"
) -> OrderWitness | None:
    """Apply the three rules in sequence; None means the order stays uncovered."""
    for _, rule in _RULE_SEQUENCE:
        witness = rule(n, cache, divs, kappa)
        if witness:
            return witness
    return None


def witness_to_spec(witness: SplitWitness, n: int) -> MergeSpec:
    """Build the merge specification realizing a split over base order n."""
    a = witness.a
    if a == 2:
        if n < 3 or n % 2 == 0:
            raise ValueError(f"cycle base block needs odd n >= 3, got {n}")
        lam1 = cycle(n)
    elif is_prime(n) and (n - 1) % a == 0:
        lam1 = subgroup_circulant(n, a)
    elif a == 4:
        lam1 = tetravalent_block(n)
    else:
        raise ValueError(f"no admissible base block of order {n} and valence {a}")
    delta2 = DIAGONAL if witness.kappa == a else SAME_AS_FIRST
    lam4 = build_block(witness.m_factorization)
    lam5 = build_block(witness.t_factorization)
    return MergeSpec(lam1, delta2, DIAGONAL, lam4, lam5)


# ---------------------------------------------------------------------------
# bulk reports
# ---------------------------------------------------------------------------


@dataclass
class CoverageReport:
    bound: int
    checkpoints: list[tuple[int, int, int, int, int]] = field(default_factory=list)
    remaining: list[int] = field(default_factory=list)
    witnesses: dict[int, OrderWitness] = field(default_factory=dict)

    def counts_at(self, bound: int) -> tuple[int, int, int, int]:
        for b, x, x1, x2, x3 in self.checkpoints:
            if b == bound:
                return (x, x1, x2, x3)
        raise KeyError(f"no checkpoint at {bound}")

    def to_csv(self) -> str:
        lines = ["bound,X,X1,X2,X3"]
        lines.extend(f"{b},{x},{x1},{x2},{x3}" for b, x, x1, x2, x3 in self.checkpoints)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "schema": "nutgraphs.coverage-report/1",
            "bound": self.bound,
            "checkpoints": [
                {"bound": b, "X": x, "X1": x1, "X2": x2, "X3": x3}
                for b, x, x1, x2, x3 in self.checkpoints
            ],
            "remaining": self.remaining,
            "witnesses": {
                str(n): {
                    "rule": w.rule, "n": w.n,
                    "m": w.split.m, "t": w.split.t,
                    "kappa": w.split.kappa, "a": w.split.a,
                    "fm": str(w.split.m_factorization),
                    "ft": str(w.split.t_factorization),
                }
                for n, w in sorted(self.witnesses.items())
            },
        }
        return json.dumps(doc, indent=1)


def _divisors_from_spf(n: int, spf) -> list[int]:
    divs = [1]
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _worker_classify(orders: list[int]) -> list[tuple[int, OrderWitness | None]]:
    # each worker process keeps its own module-level cache
    return [(n, classify_order(n, _DEFAULT_CACHE)) for n in orders]


def coverage_report(
    n_max: int,
    checkpoints=None,
    cache: SearchCache | None = None,
    jobs: int = 1,
) -> CoverageReport:
    """Sieve odd non-primes in [9, n_max], apply the three rules in sequence,
    and tabulate survivor counts at every checkpoint bound.

    X counts all odd non-primes up to the bound; X1 those the cycle rule
    leaves; X2 those the tetravalent rule also leaves; X3 those left by all
    three rules.
    """
    if n_max < 9:
        raise ValueError("bound must be >= 9")
    bounds = sorted({b for b in (checkpoints or DEFAULT_CHECKPOINTS) if 9 <= b <= n_max} | {n_max})
    spf = smallest_prime_factor_table(n_max)
    orders = [n for n in range(9, n_max + 1, 2) if spf[n] != n]

    report = CoverageReport(bound=n_max)
    if jobs > 1 and len(orders) > 1000:
        from multiprocessing import Pool

        chunk = max(500, len(orders) // (jobs * 8))
        chunks = [orders[i : i + chunk] for i in range(0, len(orders), chunk)]
        with Pool(jobs) as pool:
            parts = pool.map(_worker_classify, chunks)
        classified = [item for part in parts for item in part]
    else:
        local = cache if cache is not None else _DEFAULT_CACHE
        classified = []
        for n in orders:
            witness = None
            for _, rule in _RULE_SEQUENCE:
                witness = rule(n, local, _divisors_from_spf(n, spf))
                if witness:
                    break
            classified.append((n, witness))

    x = x1 = x2 = x3 = 0
    bound_iter = iter(bounds)
    next_bound = next(bound_iter)
    rows = []
    for n, witness in classified:
        while n > next_bound:
            rows.append((next_bound, x, x1, x2, x3))
            next_bound = next(bound_iter)
        x += 1
        rule = witness.rule if witness else None
        if rule != RULE_CYCLE:
            x1 += 1
        if rule not in (RULE_CYCLE, RULE_TETRAVALENT):
            x2 += 1
        if rule is None:
            x3 += 1
            report.remaining.append(n)
        else:
            report.witnesses[n] = witness
    rows.append((next_bound, x, x1, x2, x3))
    for b in bound_iter:
        rows.append((b, x, x1, x2, x3))
    report.checkpoints = rows
    return report
