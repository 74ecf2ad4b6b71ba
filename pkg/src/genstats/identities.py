"""Locality identities: theta-rows of nested commutators with disjoint support.

A nested commutator of unitaries whose supports have no common simplex is the
identity operator, so its expectation in every configuration is 1 and the
theta-sum it produces is a relation that holds in every model.

Two enumeration modes exist. ``reduced=False`` walks every label tuple and
every exponent pattern. ``reduced=True`` (the default) skips tuples whose
rows are already integer combinations of other emitted rows:

* a tuple whose proper prefix (length >= 2) already has empty common support
  only adds differences of re-rooted lower rows;
* the last exponent can be fixed to +1 since [P, C^-1] = C [C, P] C^-1;
* for pairs and triples the first two labels can be ordered, since
  [W^-1, C] = W [W, C]^-1 W^-1 and every initial configuration is used.

Rows are sign-normalised (first coefficient positive) and deduplicated.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .complex import support_intersection
from .linalg import HermiteBasis, Row
from .model import ExcitationModel, GeneratorLabel, ThetaVector, Word, commutator_word, parse_simplex, walk


@dataclass(frozen=True)
class IdentitySpec:
    labels: tuple[GeneratorLabel, ...]
    exponents: tuple[int, ...]
    a0: int = 0

    def __post_init__(self):
        if len(self.labels) < 2 or len(self.labels) != len(self.exponents):
            raise ValueError("an identity needs at least two labels with matching exponents")
        if support_intersection([lab.simplex for lab in self.labels]) is not None:
            raise ValueError("argument supports share a common simplex")

    def word(self) -> Word:
        return commutator_word([Word(((lab, 1),)) for lab in self.labels], self.exponents).at(self.a0)

    def row(self, m: ExcitationModel) -> ThetaVector:
        acc, a = walk(m, m.letters(self.word()), self.a0)
        if a != self.a0:
            raise AssertionError("nested commutator did not return to its start")
        return ThetaVector(acc)


class IdentityRows(list):
    """A list of identity rows plus the generation metadata."""

    def __init__(self, rows: Iterable[ThetaVector] = (), partial: bool = False, max_args: int = 0,
                 n_words: int = 0):
        super().__init__(rows)
        self.partial = partial
        self.max_args = max_args
        self.n_words = n_words


def min_empty_tuple(d: int, p: int) -> int:
    """Fewest (p+1)-simplices of the boundary of a (d+1)-simplex with no common vertex."""
    return math.ceil((d + 2) / (d - p))


def default_depth(d: int, p: int) -> int:
    n_min = min_empty_tuple(d, p)
    return max(n_min, min(n_min + 1, d + 1))


def _commutator_letters(idx: Sequence[int], exps: Sequence[int]) -> list[tuple[int, int]]:
    word = [(idx[0], exps[0])]
    for s, e in zip(idx[1:], exps[1:]):
        inv = [(t, -f) for t, f in reversed(word)]
        word = inv + [(s, -e)] + word + [(s, e)]
    return word


def iter_tuples(m: ExcitationModel, max_args: int, reduced: bool = True
                ) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield (generator indices, exponents) for every commutator to evaluate."""
    if max_args < 2:
        raise ValueError("max_args must be at least 2")
    gens = m.generators
    simplices = [set(g.simplex) for g in gens]
    n = len(gens)
    for depth in range(2, max_args + 1):
        if reduced:
            yield from _reduced_tuples(simplices, n, depth)
            continue
        for idx in itertools.product(range(n), repeat=depth):
            if set.intersection(*(simplices[i] for i in idx)):
                continue
            for exps in itertools.product((1, -1), repeat=depth):
                yield idx, exps


def _reduced_tuples(simplices: list[set], n: int, depth: int):
    def extend(prefix, common):
        if len(prefix) == depth - 1:
            for s in range(n):
                if not (common & simplices[s]):
                    yield prefix + (s,)
            return
        for s in range(n):
            if len(prefix) == 1 and depth <= 3 and s <= prefix[0]:
                continue
            c = common & simplices[s]
            if c:
                yield from extend(prefix + (s,), c)

    for first in range(n):
        for idx in extend((first,), simplices[first]):
            if depth == 2:
                if idx[0] < idx[1]:
                    yield idx, (1, 1)
                continue
            if idx[0] == idx[1]:
                continue
            for head in itertools.product((1, -1), repeat=depth - 1):
                yield idx, head + (1,)


def _word_row_arrays(m: ExcitationModel, letters: Sequence[tuple[int, int]]):
    """Sign-normalised rows of a closed word at every start, as flat arrays.

    Returns (cols, vals, bounds) with row j occupying cols[bounds[j]:bounds[j+1]].
    """
    nA = m.n_configs
    a = np.arange(nA, dtype=np.int64)
    cols, signs = [], []
    for s, e in reversed(letters):
        if e > 0:
            cols.append(s * nA + a)
            a = m.step[s, a]
        else:
            a = m.back[s, a]
            cols.append(s * nA + a)
        signs.append(1 if e > 0 else -1)
    if not np.array_equal(a, np.arange(nA)):
        raise AssertionError("word is not closed")
    C = np.stack(cols, axis=1)
    order = np.argsort(C, axis=1, kind="stable")
    flat_c = np.take_along_axis(C, order, axis=1).ravel()
    flat_s = np.asarray(signs, dtype=np.int64)[order].ravel()
    row_id = np.repeat(np.arange(nA), len(letters))
    head = np.ones(len(flat_c), dtype=bool)
    head[1:] = (flat_c[1:] != flat_c[:-1]) | (row_id[1:] != row_id[:-1])
    idx = np.flatnonzero(head)
    vals = np.add.reduceat(flat_s, idx) if len(idx) else flat_s[:0]
    keep = vals != 0
    gcols, vals, grow = flat_c[idx][keep], vals[keep], row_id[idx][keep]
    bounds = np.searchsorted(grow, np.arange(nA + 1))
    first = bounds[:-1]
    nonempty = first < bounds[1:]
    flip = np.ones(nA, dtype=np.int64)
    flip[nonempty] = np.sign(vals[first[nonempty]])
    vals = vals * flip[grow]
    return gcols, vals, bounds


def word_rows(m: ExcitationModel, letters: Sequence[tuple[int, int]]) -> list[Row]:
    """Sign-normalised theta-rows of a closed word started at every configuration."""
    cols, vals, bounds = _word_row_arrays(m, letters)
    cl, vl = cols.tolist(), vals.tolist()
    return [dict(zip(cl[b:e], vl[b:e])) for b, e in zip(bounds[:-1].tolist(), bounds[1:].tolist())]


def normalise_sign(r: Row) -> Row:
    if r and r[min(r)] < 0:
        return {c: -x for c, x in r.items()}
    return r


def iter_identity_rows(m: ExcitationModel, max_args: int, reduced: bool = True
                       ) -> Iterator[Row]:
    """Deduplicated, sign-normalised identity rows in deterministic order."""
    seen: set[bytes] = set()
    for idx, exps in iter_tuples(m, max_args, reduced):
        cols, vals, bounds = _word_row_arrays(m, _commutator_letters(idx, exps))
        packed = np.stack([cols, vals], axis=1)
        for b, e in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
            if b == e:
                continue
            key = packed[b:e].tobytes()
            if key in seen:
                continue
            seen.add(key)
            yield dict(zip(cols[b:e].tolist(), vals[b:e].tolist()))


def generate_identities(m: ExcitationModel, max_args: int | None = None,
                        budget: int | None = None, reduced: bool = True) -> IdentityRows:
    if max_args is None:
        max_args = default_depth(m.X.dimension, m.p)
    out = IdentityRows(max_args=max_args)
    for r in iter_identity_rows(m, max_args, reduced):
        if budget is not None and len(out) >= budget:
            out.partial = True
            break
        out.append(ThetaVector(r))
    return out


def saturation_check(rows_so_far: Iterable, new_rows: Iterable, ncols: int) -> bool:
    """True iff adding new_rows leaves the integer row span unchanged."""
    base = HermiteBasis(ncols)
    for r in rows_so_far:
        base.add(_as_row(r))
    before = base.matrix()
    for r in new_rows:
        base.add(_as_row(r))
    return base.matrix() == before


def _as_row(r) -> Row:
    if isinstance(r, ThetaVector):
        return dict(r.items())
    if isinstance(r, dict):
        return r
    return {i: x for i, x in enumerate(r) if x}


def format_row(m: ExcitationModel, r) -> str:
    return " ".join(f"{c}*{m.describe_column(col)}" for col, c in sorted(_as_row(r).items()))


def dump_rows(m: ExcitationModel, rows: Iterable) -> str:
    return "".join(format_row(m, r) + "\n" for r in rows)


_TERM = re.compile(r"(-?\d+)\*\((\d+);([\d,]+);(\d+)\)")


def parse_rows(m: ExcitationModel, text: str) -> list[ThetaVector]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        terms: dict[int, int] = {}
        if _TERM.sub("", line).strip():
            raise ValueError(f"unreadable identity row {line.strip()!r}")
        for c, g, simp, a in _TERM.findall(line):
            lab = GeneratorLabel(parse_simplex(simp), int(g))
            col = m.column(m.label_index(lab), int(a))
            terms[col] = terms.get(col, 0) + int(c)
        out.append(ThetaVector(terms))
    return out
