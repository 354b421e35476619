"""Known-good parameter rows for the three infinite merge families.

Each row fixes a block sum s = m + t together with factorizations [m], [t]
and a cross multiplier kappa, such that the resulting merge over any
admissible base block of the family is a certified nut graph with two vertex
and three edge orbits.  Family 1 uses cycles (valence 2), family 2 uses
tetravalent base blocks, family 3 uses prime-order subgroup circulants of
valence a with the order n fixed per row.
"""

from __future__ import annotations

from dataclasses import dataclass

from .construction import (
    DIAGONAL,
    SAME_AS_FIRST,
    MergeSpec,
    build_block,
    parse_factorization,
)
from .graphs import MultiGraph, cycle, kronecker, subgroup_circulant
from .primes import divisors, is_prime


@dataclass(frozen=True)
class FamilyRow:
    s: int
    m: int
    t: int
    a: int
    kappa: int
    fm: str
    ft: str
    k1: int
    k2: int
    n: int | None = None  # fixed base order (family 3 only)


def _rows(a, entries, with_n=False):
    out = []
    for e in entries:
        if with_n:
            n, m, t, aa, kappa, fm, ft, k1, k2 = e
            out.append(FamilyRow(m + t, m, t, aa, kappa, fm, ft, k1, k2, n))
        else:
            s, m, t, kappa, fm, ft, k1, k2 = e
            out.append(FamilyRow(s, m, t, a, kappa, fm, ft, k1, k2))
    return tuple(out)


CYCLE_FAMILY = _rows(2, [
    (3, 1, 2, 2, "1||", "1||2", 2, 1),
    (5, 1, 4, 4, "1||", "4||", 2, 2),
    (7, 3, 4, 2, "1||3", "1||4", 4, 3),
    (11, 3, 8, 4, "1||3", "2||4", 4, 6),
    (13, 1, 12, 4, "1||", "3||4", 2, 6),
    (29, 21, 8, 4, "3||7", "1||8", 12, 14),
    (31, 15, 16, 4, "3||5", "1||16", 8, 30),
    (37, 21, 16, 4, "1||3,7", "2||8", 24, 14),
    (41, 9, 32, 4, "1||9", "2||4,4", 16, 18),
    (47, 15, 32, 4, "1||3,5", "2||16", 16, 30),
    (53, 5, 48, 4, "1||5", "3||16", 8, 30),
    (59, 3, 56, 4, "3||", "1||7,8", 2, 84),
    (83, 3, 80, 2, "1||3", "1||5,16", 4, 60),
    (101, 5, 96, 4, "1||5", "2||3,16", 8, 60),
    (103, 55, 48, 2, "1||5,11", "1||4,12", 80, 33),
    (109, 45, 64, 4, "1|5^(2)|9", "1||4,16", 32, 90),
    (127, 63, 64, 4, "1|7^(2)|9", "1||64", 32, 126),
    (131, 35, 96, 4, "1||5,7", "2||6,8", 48, 70),
    (137, 105, 32, 2, "1||5,21", "1||4,8", 160, 21),
    (139, 19, 120, 4, "1|19^(6)|", "1||6,20", 12, 190),
])

TETRAVALENT_FAMILY = _rows(4, [
    (17, 1, 16, 16, "1||", "16||", 4, 4),
    (19, 3, 16, 16, "3||", "4||4", 4, 12),
    (23, 7, 16, 16, "7||", "2||8", 4, 28),
    (73, 9, 64, 16, "1||3,3", "4||4,4", 16, 36),
    (79, 15, 64, 16, "3||5", "4||16", 16, 60),
    (97, 1, 96, 16, "1||", "8||3,4", 4, 24),
    (107, 11, 96, 16, "1|11^(2)|", "2||4,12", 8, 132),
    (113, 49, 64, 16, "1|7^(2),7^(2)|", "1||8,8", 16, 196),
])

PRIME_CIRCULANT_FAMILY = _rows(None, [
    (19, 1, 18, 18, 18, "1||", "9||2", 18, 1),
    (19, 5, 18, 18, 18, "5||", "3||6", 18, 5),
    (23, 1, 22, 22, 22, "1||", "11||2", 22, 1),
    (43, 3, 14, 42, 42, "3||", "7||2", 42, 1),
    (43, 7, 12, 42, 42, "1|7^(2)|", "6||2", 84, 1),
    (43, 21, 2, 42, 42, "21||", "1||2", 42, 1),
    (67, 11, 6, 66, 66, "11||", "3||2", 66, 1),
    (71, 7, 10, 70, 70, "7||", "5||2", 70, 1),
    (19, 55, 12, 6, 6, "5||11", "1||12", 60, 11),
    (71, 5, 14, 70, 70, "5||", "7||2", 70, 1),
    (79, 13, 6, 78, 78, "13||", "3||2", 78, 1),
    (23, 55, 12, 22, 22, "5||11", "3||4", 220, 3),
    (23, 55, 16, 22, 22, "1||5,11", "8||2", 880, 1),
    (23, 55, 24, 22, 22, "11||5", "1||4,6", 88, 15),
    (43, 1, 42, 42, 42, "1||", "21||2", 42, 1),
    (19, 27, 80, 18, 18, "3||3,3", "1|5^(2)|16", 72, 30),
    (23, 63, 44, 22, 22, "9||7", "2||22", 132, 21),
], with_n=True)

FAMILIES = {1: CYCLE_FAMILY, 2: TETRAVALENT_FAMILY, 3: PRIME_CIRCULANT_FAMILY}


def tetravalent_block(n: int) -> MultiGraph:
    """Connected, arc-transitive, non-singular block of valence 4 and odd
    order n: a subgroup circulant for primes n = 1 (mod 4), a product of two
    odd cycles otherwise."""
    if n < 5 or n % 2 == 0:
        raise ValueError(f"no tetravalent base block of order {n}")
    if is_prime(n):
        if n % 4 != 1:
            raise ValueError(f"prime order {n} needs n = 1 (mod 4) for valence 4")
        return subgroup_circulant(n, 4)
    d = next(d for d in divisors(n) if d > 1)
    if n // d < 3:
        raise ValueError(f"no tetravalent base block of order {n}")
    return kronecker(cycle(d), cycle(n // d))


def base_block(family: int, row: FamilyRow, n: int) -> MultiGraph:
    if family == 1:
        if n < 3 or n % 2 == 0:
            raise ValueError(f"family 1 needs odd base order n >= 3, got {n}")
        return cycle(n)
    if family == 2:
        return tetravalent_block(n)
    if family == 3:
        return subgroup_circulant(n, row.a)
    raise ValueError(f"unknown family {family}")


def row_to_spec(family: int, row: FamilyRow, n: int | None = None) -> MergeSpec:
    """Instantiate a table row over a base block of order n.

    Family 1 defaults to n = 3, family 2 to n = 5; family 3 fixes n per row.
    """
    if family == 3:
        if n is not None and n != row.n:
            raise ValueError(f"family 3 row fixes n = {row.n}")
        n = row.n
    elif n is None:
        n = 3 if family == 1 else 5
    lam1 = base_block(family, row, n)
    if row.kappa == row.a:
        delta2 = DIAGONAL
    elif row.kappa == row.a * row.a:
        delta2 = SAME_AS_FIRST
    else:
        raise ValueError(f"kappa {row.kappa} is neither a nor a^2 for a = {row.a}")
    lam4 = build_block(parse_factorization(row.fm, row.m))
    lam5 = build_block(parse_factorization(row.ft, row.t))
    return MergeSpec(lam1, delta2, DIAGONAL, lam4, lam5)
