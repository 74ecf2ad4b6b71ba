"""Excitation models on simplicial complexes and symbolic word evaluation.

A configuration is a G-valued p-chain reachable from the vacuum by the
generators U(s); configurations are stored by index into ``model.configs``.
The phase variables theta(s, a) are indexed by column ``s * |A| + a``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .complex import Chain, ComplexError, Simplex, SimplicialComplex, faces
from .group import FiniteAbelianGroup, GroupElement

DEFAULT_CONFIG_CAP = 2 ** 20


class ResourceLimitError(RuntimeError):
    pass


class WordError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GeneratorLabel:
    """U(s) for s = e_gen_index * simplex."""

    simplex: Simplex
    gen_index: int = 0

    def __str__(self):
        return f"U[{self.gen_index};{_fmt_simplex(self.simplex)}]"


def _fmt_simplex(s: Simplex) -> str:
    if all(v < 10 for v in s):
        return "".join(map(str, s))
    return ",".join(map(str, s))


@dataclass(frozen=True)
class Word:
    """Product of signed generators, written left to right, applied right to left.

    ``start`` optionally pins the configuration index the word acts on.
    """

    letters: tuple[tuple[GeneratorLabel, int], ...] = ()
    start: int | None = None

    def __post_init__(self):
        for label, e in self.letters:
            if e not in (1, -1):
                raise WordError(f"exponent must be +1 or -1, got {e}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, self.start)

    def inverse(self) -> "Word":
        return Word(tuple((lab, -e) for lab, e in reversed(self.letters)))

    def power(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def at(self, start: int | None) -> "Word":
        return Word(self.letters, start)

    def __str__(self):
        return " ".join(str(lab) + ("^-1" if e < 0 else "") for lab, e in self.letters)


def letter(simplex: Iterable[int], exponent: int = 1, gen_index: int = 0) -> Word:
    return Word(((GeneratorLabel(tuple(sorted(simplex)), gen_index), exponent),))


def commutator(a: Word, b: Word) -> Word:
    """[A, B] = A^-1 B^-1 A B."""
    return a.inverse() * b.inverse() * a * b


def commutator_word(words: Sequence[Word], exponents: Sequence[int] | None = None) -> Word:
    """Left-nested commutator [[[w1, w2], w3], ...] of the signed arguments."""
    if len(words) < 2:
        raise WordError("a commutator needs at least two arguments")
    exponents = exponents if exponents is not None else [1] * len(words)
    if len(exponents) != len(words):
        raise WordError("one exponent per argument is required")
    signed = [w if e == 1 else w.inverse() for w, e in zip(words, exponents)]
    acc = signed[0]
    for w in signed[1:]:
        acc = commutator(acc, w)
    return acc


_TOKEN = re.compile(r"U\[(?:([A-Za-z]|\d+)\s*;)?\s*([\d,\s]+)\](?:\^(-?\d+))?")


def parse_simplex(text: str) -> Simplex:
    """``013`` or ``0,1,13`` to a sorted vertex tuple."""
    text = text.strip()
    if "," in text or " " in text:
        verts = [int(v) for v in re.split(r"[,\s]+", text) if v]
    else:
        verts = [int(c) for c in text]
    if len(set(verts)) != len(verts):
        raise WordError(f"duplicate vertex in {text!r}")
    return tuple(sorted(verts))


def parse_word(text: str) -> Word:
    """Parse tokens like ``U[0;02]``, ``U[b;013]^-1`` or ``U[01]^2``.

    The generator may be an index or a letter (a=0, b=1, ...); it defaults to 0.
    Comma-separated vertex lists are needed once ids exceed 9.
    """
    text = text.split("#", 1)[0] if "\n" not in text else "\n".join(
        line.split("#", 1)[0] for line in text.splitlines())
    pos = 0
    letters: list[tuple[GeneratorLabel, int]] = []
    for m in _TOKEN.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip():
            raise WordError(f"unexpected text {gap.strip()!r} in word")
        pos = m.end()
        g_raw, verts_raw, exp_raw = m.groups()
        if g_raw is None:
            gen = 0
        elif g_raw.isdigit():
            gen = int(g_raw)
        else:
            gen = ord(g_raw.lower()) - ord("a")
        label = GeneratorLabel(parse_simplex(verts_raw), gen)
        n = int(exp_raw) if exp_raw is not None else 1
        e = 1 if n > 0 else -1
        letters.extend([(label, e)] * abs(n))
    if text[pos:].strip():
        raise WordError(f"unexpected text {text[pos:].strip()!r} in word")
    return Word(tuple(letters))


class ThetaVector:
    """Integer formal sum of theta(s, a), keyed by model column ``s*|A| + a``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        out: dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for c, v in items:
                v = out.get(c, 0) + int(v)
                if v:
                    out[c] = v
                else:
                    out.pop(c, None)
        self.terms = out

    def __eq__(self, other):
        return isinstance(other, ThetaVector) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"ThetaVector({dict(sorted(self.terms.items()))})"

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def get(self, col: int) -> int:
        return self.terms.get(col, 0)

    def __add__(self, other: "ThetaVector") -> "ThetaVector":
        return ThetaVector(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "ThetaVector":
        return ThetaVector({c: -v for c, v in self.terms.items()})

    def __sub__(self, other: "ThetaVector") -> "ThetaVector":
        return self + (-other)

    def __rmul__(self, k: int) -> "ThetaVector":
        return ThetaVector({c: k * v for c, v in self.terms.items()}) if k else ThetaVector()

    __mul__ = __rmul__

    def l1(self) -> int:
        return sum(abs(v) for v in self.terms.values())

    def sorted_items(self) -> list[tuple[int, int]]:
        return sorted(self.terms.items())

    def dense(self, n: int) -> list[int]:
        out = [0] * n
        for c, v in self.terms.items():
            out[c] = v
        return out


class ExcitationModel:
    """The data (S, A, boundary) for p-dimensional excitations on X with fusion group G."""

    def __init__(self, X: SimplicialComplex, G: FiniteAbelianGroup, p: int,
                 cap: int = DEFAULT_CONFIG_CAP):
        if not 0 <= p <= X.dimension - 1:
            raise ComplexError(f"excitation degree p={p} needs 0 <= p <= dim(X)-1 = {X.dimension - 1}")
        if not X[p + 1]:
            raise ComplexError(f"complex has no {p + 1}-simplices")
        self.X = X
        self.G = G
        self.p = p
        self.cap = cap
        self.p_simplices: tuple[Simplex, ...] = X[p]
        self.generators: tuple[GeneratorLabel, ...] = tuple(
            GeneratorLabel(s, i) for s in X[p + 1] for i in range(G.rank))
        self._label_index = {lab: i for i, lab in enumerate(self.generators)}

        k = G.rank
        self._moduli = np.array([G.orders[j % k] for j in range(len(self.p_simplices) * k)],
                                dtype=np.int64)
        self._radix = np.ones(len(self._moduli), dtype=object)
        for j in range(len(self._moduli) - 2, -1, -1):
            self._radix[j] = self._radix[j + 1] * int(self._moduli[j + 1])
        if int(np.prod(self._moduli.astype(object))) >= 2 ** 62:
            raise ResourceLimitError("configuration codes do not fit in 63 bits")
        self._radix = self._radix.astype(np.int64)

        self.boundaries = np.array([self._boundary_vector(lab) for lab in self.generators],
                                   dtype=np.int64).reshape(len(self.generators), len(self._moduli))
        self.configs = self._enumerate_configs()
        self.codes = self._encode(self.configs)
        n = len(self.codes)
        self.step = np.empty((len(self.generators), n), dtype=np.int64)
        self.back = np.empty((len(self.generators), n), dtype=np.int64)
        for s, db in enumerate(self.boundaries):
            self.step[s] = self._lookup(self.configs + db)
            self.back[s] = self._lookup(self.configs - db)

    # -- construction helpers -------------------------------------------------

    def _boundary_vector(self, lab: GeneratorLabel) -> list[int]:
        G, k = self.G, self.G.rank
        index = {s: i for i, s in enumerate(self.p_simplices)}
        vec = [0] * (len(self.p_simplices) * k)
        for i, f in enumerate(faces(lab.simplex)):
            sign = 1 if i % 2 == 0 else -1
            j = index[f] * k + lab.gen_index
            vec[j] = (vec[j] + sign) % G.orders[lab.gen_index]
        return vec

    def _encode(self, vecs: np.ndarray) -> np.ndarray:
        return (np.mod(vecs, self._moduli) * self._radix).sum(axis=1)

    def _decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[:, None] // self._radix) % self._moduli

    def _lookup(self, vecs: np.ndarray) -> np.ndarray:
        codes = self._encode(vecs)
        idx = np.searchsorted(self.codes, codes)
        if np.any(idx >= len(self.codes)) or np.any(self.codes[np.minimum(idx, len(self.codes) - 1)] != codes):
            raise AssertionError("configuration set is not closed under the generators")
        return idx

    def _enumerate_configs(self) -> np.ndarray:
        seen = np.zeros(1, dtype=np.int64)
        frontier = np.zeros((1, len(self._moduli)), dtype=np.int64)
        moves = np.concatenate([self.boundaries, -self.boundaries])
        while len(frontier):
            cand = (frontier[:, None, :] + moves[None, :, :]).reshape(-1, len(self._moduli))
            codes = np.unique(self._encode(cand))
            new = np.setdiff1d(codes, seen, assume_unique=True)
            if len(seen) + len(new) > self.cap:
                raise ResourceLimitError(
                    f"configuration space exceeds the cap of {self.cap} configurations")
            seen = np.union1d(seen, new)
            frontier = self._decode(new)
        return self._decode(seen)

    # -- lookups --------------------------------------------------------------

    @property
    def n_configs(self) -> int:
        return len(self.codes)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_columns(self) -> int:
        return self.n_generators * self.n_configs

    def column(self, s: int, a: int) -> int:
        return s * self.n_configs + a

    def split(self, col: int) -> tuple[int, int]:
        return divmod(col, self.n_configs)

    def label_index(self, label: GeneratorLabel) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise WordError(f"{label} is not a generator of this model") from None

    def config_chain(self, a: int) -> Chain:
        k = self.G.rank
        vec = self.configs[a]
        coeffs = {}
        for i, s in enumerate(self.p_simplices):
            coeffs[s] = [int(x) for x in vec[i * k:(i + 1) * k]]
        return Chain(self.p, self.G, coeffs)

    def config_index(self, a: Chain | Mapping[Simplex, Sequence[int]] | int) -> int:
        if isinstance(a, (int, np.integer)):
            if not 0 <= a < self.n_configs:
                raise IndexError(f"configuration index {a} out of range")
            return int(a)
        if not isinstance(a, Chain):
            a = Chain(self.p, self.G, a)
        k = self.G.rank
        index = {s: i for i, s in enumerate(self.p_simplices)}
        vec = np.zeros(len(self._moduli), dtype=np.int64)
        for s, g in a.coeffs.items():
            vec[index[s] * k:(index[s] + 1) * k] = g.residues
        code = int(self._encode(vec[None, :])[0])
        i = int(np.searchsorted(self.codes, code))
        if i >= len(self.codes) or self.codes[i] != code:
            raise ValueError(f"{a} is not a configuration of this model")
        return i

    def shift_table(self, a_shift: int) -> np.ndarray:
        """Index of a + a_shift for every configuration a."""
        return self._lookup(self.configs + self.configs[a_shift])

    def describe_column(self, col: int) -> str:
        s, a = self.split(col)
        lab = self.generators[s]
        return f"({lab.gen_index};{_fmt_simplex(lab.simplex)};{a})"

    @cached_property
    def vertex_restriction_keys(self) -> dict[int, dict[int, np.ndarray]]:
        """For each generator s and vertex v of supp(s): a key per configuration
        identifying the restriction a|_v (values of a on p-simplices containing v)."""
        k = self.G.rank
        out: dict[int, dict[int, np.ndarray]] = {}
        by_vertex: dict[int, np.ndarray] = {}
        for v in self.X.vertices:
            cols = [i * k + j for i, s in enumerate(self.p_simplices) if v in s for j in range(k)]
            sub = self.configs[:, cols]
            _, key = np.unique(sub, axis=0, return_inverse=True)
            by_vertex[v] = key.reshape(-1)
        for s, lab in enumerate(self.generators):
            out[s] = {v: by_vertex[v] for v in lab.simplex}
        return out

    # -- words ----------------------------------------------------------------

    def letters(self, w: Word) -> list[tuple[int, int]]:
        return [(self.label_index(lab), e) for lab, e in w.letters]


def build_model(X: SimplicialComplex, G: FiniteAbelianGroup, p: int,
                cap: int = DEFAULT_CONFIG_CAP) -> ExcitationModel:
    return ExcitationModel(X, G, p, cap)


def walk(m: ExcitationModel, letters: Sequence[tuple[int, int]], a0: int) -> tuple[dict[int, int], int]:
    """Accumulate theta coefficients along integer-coded letters (right to left)."""
    nA = m.n_configs
    step, back = m.step, m.back
    acc: dict[int, int] = {}
    a = a0
    for s, e in reversed(letters):
        if e > 0:
            col = s * nA + a
            acc[col] = acc.get(col, 0) + 1
            a = int(step[s, a])
        else:
            a = int(back[s, a])
            col = s * nA + a
            acc[col] = acc.get(col, 0) - 1
    return acc, a


def evaluate_word(m: ExcitationModel, w: Word, a0: Chain | int | None = None) -> tuple[ThetaVector, int]:
    """Theta vector of <a_final| w |a0> and the final configuration index."""
    if a0 is None:
        a0 = w.start if w.start is not None else 0
    acc, a = walk(m, m.letters(w), m.config_index(a0))
    return ThetaVector(acc), a


def restrict_configuration(m: ExcitationModel, a: Chain | int, v: int) -> Chain:
    """a restricted to the p-simplices that contain vertex v."""
    chain = m.config_chain(m.config_index(a)) if isinstance(a, (int, np.integer)) else a
    return Chain(chain.degree, chain.group, {s: g for s, g in chain.coeffs.items() if v in s})


def shift_vector(m: ExcitationModel, v: ThetaVector, a_shift: int) -> ThetaVector:
    """Re-root every term theta(s, a) to theta(s, a + a_shift)."""
    table = m.shift_table(a_shift)
    out = {}
    for col, c in v.items():
        s, a = m.split(col)
        out[m.column(s, int(table[a]))] = c
    return ThetaVector(out)
