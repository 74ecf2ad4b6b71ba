"""Abstract simplicial complexes and G-valued chains.

Simplices are sorted tuples of integer vertex ids. Orientation is the global
vertex order, so the i-th face of ``(v0, ..., vk)`` drops ``vi`` and carries
sign ``(-1)**i`` in the boundary.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .group import FiniteAbelianGroup, GroupElement

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    pass


class UnsupportedComplexError(ComplexError):
    """Two supports meet in a vertex set that is not itself a simplex."""


def simplex(vertices: Iterable[int]) -> Simplex:
    vs = [int(v) for v in vertices]
    if not vs:
        raise ComplexError("a simplex needs at least one vertex")
    if len(set(vs)) != len(vs):
        raise ComplexError(f"duplicate vertex in simplex {vs}")
    return tuple(sorted(vs))


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces in boundary order (face i omits vertex i)."""
    return [s[:i] + s[i + 1:] for i in range(len(s))]


@dataclass(frozen=True)
class SimplicialComplex:
    simplices: tuple[tuple[Simplex, ...], ...]
    _index: tuple[dict, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        index = tuple({s: i for i, s in enumerate(level)} for level in self.simplices)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_maximal(cls, maximal: Iterable[Iterable[int]]) -> "SimplicialComplex":
        tops = [simplex(s) for s in maximal]
        if not tops:
            raise ComplexError("empty complex")
        dim = max(len(s) for s in tops) - 1
        levels: list[set[Simplex]] = [set() for _ in range(dim + 1)]
        for s in tops:
            for k in range(1, len(s) + 1):
                levels[k - 1].update(itertools.combinations(s, k))
        return cls(tuple(tuple(sorted(level)) for level in levels))

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices[0])

    def __getitem__(self, k: int) -> tuple[Simplex, ...]:
        if 0 <= k < len(self.simplices):
            return self.simplices[k]
        return ()

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def __contains__(self, s) -> bool:
        k = len(s) - 1
        return 0 <= k < len(self._index) and tuple(s) in self._index[k]

    def count(self, k: int) -> int:
        return len(self[k])

    def check(self) -> None:
        """Raise unless every face of every simplex is present."""
        for level in self.simplices[1:]:
            for s in level:
                for f in faces(s):
                    if f not in self:
                        raise ComplexError(f"face {f} of {s} missing from complex")


def minimal_sphere_triangulation(d: int) -> SimplicialComplex:
    """Boundary of the (d+1)-simplex on vertices 0..d+1, a triangulated S^d."""
    if d < 1:
        raise ComplexError(f"sphere dimension must be >= 1, got {d}")
    full = range(d + 2)
    return SimplicialComplex.from_maximal(itertools.combinations(full, d + 1))


_DIM_LINE = re.compile(r"(?i)dim(?:ension)?\s*:?\s*(-?\d+)")


def parse_complex(text: str) -> SimplicialComplex:
    """Read one maximal simplex per line.

    Lines may carry a ``label:`` prefix and ``#`` comments. An optional
    ``dim N`` (or ``dimension: N``) line declares the expected dimension.
    """
    declared = None
    tops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _DIM_LINE.fullmatch(line)
        if m:
            d = int(m.group(1))
            if declared is not None and declared != d:
                raise ComplexError(f"line {lineno}: dimension declared as both {declared} and {d}")
            declared = d
            continue
        body = line.split(":", 1)[1] if ":" in line else line
        try:
            vs = [int(t) for t in body.replace(",", " ").split()]
        except ValueError:
            raise ComplexError(f"line {lineno}: vertex ids must be integers: {raw!r}") from None
        try:
            tops.append(simplex(vs))
        except ComplexError as exc:
            raise ComplexError(f"line {lineno}: {exc}") from None
    X = SimplicialComplex.from_maximal(tops)
    if declared is not None and declared != X.dimension:
        raise ComplexError(f"declared dimension {declared} but simplices have dimension {X.dimension}")
    X.check()
    return X


def format_complex(X: SimplicialComplex) -> str:
    """Serialise X by its maximal simplices (inverse of parse_complex)."""
    maximal = []
    for k in range(X.dimension, -1, -1):
        for s in X[k]:
            if not any(set(s) < set(t) for t in maximal):
                maximal.append(s)
    lines = [f"dim {X.dimension}"] + [" ".join(map(str, s)) for s in sorted(maximal)]
    return "\n".join(lines) + "\n"


def support_intersection(simplices: Sequence[Simplex], X: SimplicialComplex | None = None) -> Simplex | None:
    """Common closed support of the given simplices, or None if disjoint."""
    if not simplices:
        raise ComplexError("support_intersection needs at least one simplex")
    common = set(simplices[0])
    for s in simplices[1:]:
        common &= set(s)
    if not common:
        return None
    result = tuple(sorted(common))
    if X is not None and result not in X:
        raise UnsupportedComplexError(
            f"common vertex set {result} of {list(simplices)} is not a simplex of the complex")
    return result


class Chain:
    """Sparse G-valued k-chain; zero coefficients are never stored."""

    __slots__ = ("degree", "group", "coeffs")

    def __init__(self, degree: int, group: FiniteAbelianGroup,
                 coeffs: Mapping[Simplex, GroupElement | Sequence[int]] | None = None):
        self.degree = degree
        self.group = group
        self.coeffs: dict[Simplex, GroupElement] = {}
        for s, g in (coeffs or {}).items():
            if len(s) != degree + 1:
                raise ComplexError(f"simplex {s} does not have dimension {degree}")
            g = g if isinstance(g, GroupElement) else group.element(g)
            g = group.element(g.residues)
            if not g.is_zero():
                self.coeffs[tuple(s)] = g

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.degree == other.degree
                and self.group == other.group and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        terms = " + ".join(f"{list(g.residues)}<{''.join(map(str, s))}>"
                           for s, g in sorted(self.coeffs.items()))
        return f"Chain({self.degree}: {terms or '0'})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Chain") -> "Chain":
        out = dict(self.coeffs)
        for s, g in other.coeffs.items():
            out[s] = self.group.add(out[s], g) if s in out else g
        return Chain(self.degree, self.group, out)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, self.group, {s: self.group.neg(g) for s, g in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scaled(self, k: int) -> "Chain":
        return Chain(self.degree, self.group, {s: self.group.scale(k, g) for s, g in self.coeffs.items()})


def boundary(c: Chain) -> Chain:
    if c.degree < 1:
        raise ComplexError("the boundary of a 0-chain is not defined")
    G = c.group
    out: dict[Simplex, GroupElement] = {}
    for s, g in c.coeffs.items():
        for i, f in enumerate(faces(s)):
            term = g if i % 2 == 0 else G.neg(g)
            out[f] = G.add(out[f], term) if f in out else term
    return Chain(c.degree - 1, G, out)
