"""Known operator sequences and the loop-flip orientation search.

Simplices are written on the minimal sphere triangulation with vertex 0 as
the apex shared by the named operators. ``gen`` picks the factor of G whose
unit the operator creates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .linalg import HermiteBasis
from .model import ExcitationModel, ThetaVector, Word, commutator, letter, walk


def _u(verts: str, e: int = 1, gen: int = 0) -> Word:
    return letter(tuple(int(c) for c in verts), e, gen)


def _seq(*parts: tuple[str, int], gen: int = 0) -> Word:
    w = Word(())
    for verts, e in parts:
        w = w * _u(verts, e, gen)
    return w


def particle_fusion_1d(order: int, gen: int = 0) -> Word:
    """[U_01^order, U_02] on the circle."""
    return commutator(_u("01", 1, gen).power(order), _u("02", 1, gen))


def t_junction(gen: int = 0) -> Word:
    """Exchange of two identical particles meeting at vertex 0."""
    return _seq(("02", 1), ("03", -1), ("01", 1), ("02", -1), ("03", 1), ("01", -1), gen=gen)


def loop_fusion_2d(N: int, a: int = 0, b: int = 1) -> Word:
    """Loop fusion statistic on the sphere for generators a, b of Z_N x Z_N."""
    pair = _u("023", 1, a) * _u("013", 1, a)
    around = _u("012", 1, b) * _u("013", 1, b) * _u("023", 1, b) * _u("123", 1, b)
    inner = commutator(_u("013", 1, a), commutator(_u("012", 1, a), around))
    return pair.power(-N) * (pair * inner).power(N)


def loop_flip_24() -> Word:
    """24-step loop-flipping sequence for Z_2 loops in three dimensions."""
    line = [("014", 1), ("034", 1), ("023", 1), ("014", -1),
            ("024", -1), ("012", 1), ("023", -1), ("013", -1)]
    rot = str.maketrans("123", "231")
    out = []
    for _ in range(3):
        out.extend(line)
        line = [("".join(sorted(v.translate(rot))), e) for v, e in line]
    return _seq(*out)


def membrane_fusion_3d(N: int, gen: int = 0) -> Word:
    """Membrane fusion statistic for Z_N membranes on the 3-sphere."""
    pair = _u("0234", 1, gen) * _u("0124", 1, gen)
    inner = commutator(_u("0134", 1, gen), _u("0123", 1, gen).power(N))
    body = _u("0234", 1, gen) * inner.inverse() * _u("0124", 1, gen) * inner
    return pair.power(-N) * body.power(N)


def closed_starts(m: ExcitationModel, w: Word) -> list[int]:
    """Configurations from which w returns to its start."""
    letters = m.letters(w)
    return [a for a in range(m.n_configs) if walk(m, letters, a)[1] == a]


# ---------------------------------------------------------------------------
# loop flips on the space of single-loop configurations


def _is_simple_cycle(edges: list[tuple[int, int]]) -> bool:
    if len(edges) < 3:
        return False
    deg: dict[int, list[int]] = {}
    for i, j in edges:
        deg.setdefault(i, []).append(j)
        deg.setdefault(j, []).append(i)
    if any(len(n) != 2 for n in deg.values()):
        return False
    start = next(iter(deg))
    seen, stack = {start}, [start]
    while stack:
        for n in deg[stack.pop()]:
            if n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(deg)


@dataclass
class LoopFlipSearch:
    loop_configs: list[int]
    plaquettes: list[ThetaVector]
    groups: list[list[tuple[int, int]]]          # (plaquette index, sign)
    group_rows: list[ThetaVector]
    lengths: dict[tuple[int, ...], int]          # orientation -> L1 of candidate
    candidates: dict[tuple[int, ...], ThetaVector]

    @property
    def minimum(self) -> int:
        return min(self.lengths.values())

    def orientations_of_length(self, n: int) -> list[tuple[int, ...]]:
        return [o for o, l in self.lengths.items() if l == n]

    def flip_rows(self, base: tuple[int, ...]) -> list[ThetaVector]:
        """Rows whose subset sums move the candidate of ``base`` to every other orientation."""
        return [(-s) * r for s, r in zip(base, self.group_rows)]


def single_loop_configurations(m: ExcitationModel) -> list[int]:
    out = []
    for a in range(m.n_configs):
        edges = [s for s, g in m.config_chain(a).coeffs.items() if not g.is_zero()]
        if _is_simple_cycle(edges):
            out.append(a)
    return out


def plaquette_rows(m: ExcitationModel, loops: list[int]) -> list[ThetaVector]:
    """Commuting squares U_x U_y between single-loop configurations, started at the
    corner where neither x nor y has acted."""
    loop_set = set(loops)
    gens = [i for i, g in enumerate(m.generators) if 0 in g.simplex]
    rows = []
    for x, y in itertools.combinations(gens, 2):
        ex = set(itertools.combinations(m.generators[x].simplex[1:], 2))
        ey = set(itertools.combinations(m.generators[y].simplex[1:], 2))
        for a in loops:
            chain = m.config_chain(a)
            has = {s for s, g in chain.coeffs.items() if not g.is_zero()}
            if ex & has or ey & has:
                continue
            corners = [a, int(m.step[x, a]), int(m.step[y, a]), int(m.step[y, m.step[x, a]])]
            if all(c in loop_set for c in corners):
                acc, fin = walk(m, [(x, -1), (y, -1), (x, 1), (y, 1)], a)
                if fin == a:
                    rows.append(ThetaVector(acc))
    return rows


def group_plaquettes(plaquettes: list[ThetaVector], basis: HermiteBasis,
                     max_size: int = 4) -> list[list[tuple[int, int]]]:
    """Partition plaquettes into minimal signed subsets whose sum is a locality relation."""
    remaining = list(range(len(plaquettes)))
    groups = []
    for size in range(1, max_size + 1):
        changed = True
        while changed:
            changed = False
            for combo in itertools.combinations(remaining, size):
                for signs in itertools.product((1, -1), repeat=size - 1):
                    sg = (1,) + signs
                    total = ThetaVector()
                    for i, s in zip(combo, sg):
                        total = total + s * plaquettes[i]
                    if basis.contains(dict(total.items())):
                        groups.append(list(zip(combo, sg)))
                        remaining = [i for i in remaining if i not in combo]
                        changed = True
                        break
                if changed:
                    break
    if remaining:
        raise ValueError(f"{len(remaining)} plaquettes could not be grouped")
    return groups


def loop_flip_search(m: ExcitationModel, basis: HermiteBasis) -> LoopFlipSearch:
    """Enumerate every orientation of the plaquette groups and record candidate lengths.

    The candidate for orientation s is half the signed sum of group rows; it is an
    integral closed-walk vector on the single-loop configuration graph.
    """
    loops = single_loop_configurations(m)
    plaq = plaquette_rows(m, loops)
    groups = group_plaquettes(plaq, basis)
    rows = []
    for g in groups:
        r = ThetaVector()
        for i, s in g:
            r = r + s * plaq[i]
        rows.append(r)
    lengths, cands = {}, {}
    for orient in itertools.product((1, -1), repeat=len(rows)):
        total: dict[int, int] = {}
        for s, r in zip(orient, rows):
            for c, x in r.items():
                total[c] = total.get(c, 0) + s * x
        if any(x % 2 for x in total.values()):
            continue
        half = ThetaVector({c: x // 2 for c, x in total.items()})
        lengths[orient] = half.l1()
        cands[orient] = half
    return LoopFlipSearch(loops, plaq, groups, rows, lengths, cands)
