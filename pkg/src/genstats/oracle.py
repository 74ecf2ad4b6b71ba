"""Cohomology fixtures for small groups, used to cross-check computed groups.

The formulas are test data, not something this package derives: for
G = prod Z_{N_i}, each entry lists factors indexed by subsets of the N_i.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce
from typing import Sequence

# (d, p) -> list of (subset size, multiplicity, kind)
#   kind "gcd":   Z_{gcd of the subset}
#   kind "even":  Z_{gcd(N_i, 2)}
#   kind "twice": Z_{gcd(N_i, 2) * N_i}
COHOMOLOGY_TABLE: dict[tuple[int, int], list[tuple[int, int, str]]] = {
    (1, 0): [(1, 1, "gcd"), (2, 1, "gcd"), (3, 1, "gcd")],
    (2, 0): [(1, 1, "twice"), (2, 1, "gcd")],
    (2, 1): [(2, 2, "gcd"), (3, 2, "gcd"), (4, 1, "gcd")],
    (3, 0): [(1, 1, "even")],
    (3, 1): [(1, 1, "even"), (2, 1, "gcd")],
    (3, 2): [(1, 1, "gcd"), (2, 2, "gcd"), (3, 4, "gcd"), (4, 3, "gcd"), (5, 1, "gcd")],
}


def expected_factors(d: int, p: int, orders: Sequence[int]) -> list[int]:
    """Cyclic factor orders (>1) predicted for p-excitations in d dimensions."""
    try:
        terms = COHOMOLOGY_TABLE[(d, p)]
    except KeyError:
        raise KeyError(f"no fixture for d={d}, p={p}") from None
    out = []
    for size, mult, kind in terms:
        for sub in itertools.combinations(orders, size):
            if kind == "gcd":
                n = reduce(math.gcd, sub)
            elif kind == "even":
                n = math.gcd(sub[0], 2)
            else:
                n = math.gcd(sub[0], 2) * sub[0]
            out.extend([n] * mult)
    return invariant_factors(out)


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            k = 1
            while n % q == 0:
                n //= q
                k *= q
            out.append((q, k))
        q += 1
    if n > 1:
        out.append((n, n))
    return out


def invariant_factors(orders: Sequence[int]) -> list[int]:
    """Canonical form d_1 | d_2 | ... (all > 1) of a product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n == 0:
            raise ValueError("free factors have no finite invariant form")
        for q, k in _prime_powers(n):
            by_prime.setdefault(q, []).append(k)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, k in enumerate(powers):
            factors[length - 1 - i] *= k
    return factors


def same_group(a: Sequence[int], b: Sequence[int]) -> bool:
    return invariant_factors([x for x in a if x != 1]) == invariant_factors([x for x in b if x != 1])
