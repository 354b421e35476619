"""Small deterministic number-theory utilities shared across the package.

Everything here is exact integer arithmetic; the only numpy use is the
smallest-prime-factor sieve, which is the workhorse of the coverage search.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

# Witness set that makes Miller-Rabin deterministic for all n < 3.3 * 10**24,
# far beyond anything this package touches.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witnesses)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: multiplicity}."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted ascending."""
    divs = [1]
    for p, e in prime_factors(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def smallest_prime_factor_table(limit: int) -> np.ndarray:
    """Sieve of smallest prime factors for 0..limit (spf[0] = spf[1] = 0).

    spf[n] == n exactly when n is prime.
    """
    spf = np.arange(limit + 1, dtype=np.int64)
    spf[:2] = 0
    for i in range(2, isqrt(limit) + 1):
        if spf[i] == i:
            sl = spf[i * i :: i]
            np.minimum(sl, i, out=sl)
    return spf


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo an odd prime p."""
    if p == 2:
        return 1
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    qs = list(prime_factors(p - 1))
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
        g += 1
