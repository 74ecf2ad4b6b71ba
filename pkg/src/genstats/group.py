"""Finite Abelian groups written as products of cyclic factors."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Sequence


class InvalidGroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    residues: tuple[int, ...]

    def __iter__(self):
        return iter(self.residues)

    def __len__(self):
        return len(self.residues)

    def is_zero(self) -> bool:
        return not any(self.residues)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """G = Z_{N_0} x Z_{N_1} x ...; factor order is kept exactly as given."""

    orders: tuple[int, ...]

    def __post_init__(self):
        if not self.orders:
            raise InvalidGroupError("a group needs at least one cyclic factor")
        for n in self.orders:
            if not isinstance(n, int) or n < 2:
                raise InvalidGroupError(f"cyclic factor order must be an integer >= 2, got {n!r}")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders, 1)

    def element(self, residues: Sequence[int]) -> GroupElement:
        if len(residues) != self.rank:
            raise InvalidGroupError(
                f"element has {len(residues)} residues, group has {self.rank} factors")
        return GroupElement(tuple(r % n for r, n in zip(residues, self.orders)))

    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.rank)

    def generator(self, i: int) -> GroupElement:
        """Unit vector e_i; these form the canonical generating set."""
        if not 0 <= i < self.rank:
            raise IndexError(f"no generator {i} in a group with {self.rank} factors")
        return GroupElement(tuple(int(j == i) for j in range(self.rank)))

    def generators(self) -> list[GroupElement]:
        return [self.generator(i) for i in range(self.rank)]

    def add(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(tuple((a + b) % n for a, b, n in zip(g, h, self.orders)))

    def neg(self, g: GroupElement) -> GroupElement:
        return GroupElement(tuple(-a % n for a, n in zip(g, self.orders)))

    def scale(self, k: int, g: GroupElement) -> GroupElement:
        return GroupElement(tuple(k * a % n for a, n in zip(g, self.orders)))

    def elements(self) -> Iterator[GroupElement]:
        def rec(prefix, i):
            if i == self.rank:
                yield GroupElement(tuple(prefix))
                return
            for r in range(self.orders[i]):
                yield from rec(prefix + [r], i + 1)
        yield from rec([], 0)

    def __str__(self):
        return "x".join(f"Z{n}" for n in self.orders)


def make_group(orders: Sequence[int]) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(int(n) for n in orders))


def element_order(G: FiniteAbelianGroup, g: GroupElement) -> int:
    """Smallest k >= 1 with k*g = 0."""
    return reduce(math.lcm, (n // math.gcd(n, r) for r, n in zip(g, G.orders)), 1)


_FACTOR = re.compile(r"z(\d+)")


def parse_group(text: str) -> FiniteAbelianGroup:
    """Parse strings such as ``"Z2"``, ``"Z2xZ3"`` or ``"z4 x z4"``."""
    parts = [p.strip() for p in text.strip().lower().split("x")]
    orders = []
    for part in parts:
        m = _FACTOR.fullmatch(part)
        if m is None:
            raise InvalidGroupError(f"cannot parse group factor {part!r} in {text!r}")
        orders.append(int(m.group(1)))
    return make_group(orders)
