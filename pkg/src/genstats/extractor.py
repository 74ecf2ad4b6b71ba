"""Statistics group, invariance checks and operator-sequence witnesses."""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .linalg import (ClassCoordinates, HermiteBasis, Row, SmithDecomposition, classify,
                     rank_mod_p, smith_from_basis)
from .model import ExcitationModel, ThetaVector, Word, WordError


class OpenWalkError(WordError):
    """The vector is not the theta-sum of any closed walk."""


# ---------------------------------------------------------------------------
# invariance


@dataclass
class Violation:
    condition: str      # "state", "unitary" or "local"
    where: str
    residual: int


@dataclass
class InvarianceReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}


def coefficient_array(m: ExcitationModel, v: ThetaVector) -> np.ndarray:
    eps = np.zeros((m.n_generators, m.n_configs), dtype=np.int64)
    for col, c in v.items():
        s, a = m.split(col)
        eps[s, a] = c
    return eps


def verify_invariance(m: ExcitationModel, v: ThetaVector, limit: int = 20) -> InvarianceReport:
    """Check the three shift-invariance conditions; report up to ``limit`` violations each."""
    eps = coefficient_array(m, v)
    report = InvarianceReport()
    nA = m.n_configs

    # rephasing of states: net flow into every configuration vanishes
    flow = eps.sum(axis=0).copy()
    for s in range(m.n_generators):
        np.subtract.at(flow, m.step[s], eps[s])
    for a in np.flatnonzero(flow)[:limit]:
        report.violations.append(Violation("state", f"configuration {a}", int(flow[a])))

    # rephasing of unitaries
    sums = eps.sum(axis=1)
    for s in np.flatnonzero(sums)[:limit]:
        report.violations.append(Violation("unitary", str(m.generators[s]), int(sums[s])))

    # local rephasing around each vertex of the support
    found = 0
    for s, by_vertex in m.vertex_restriction_keys.items():
        row = eps[s]
        if not row.any():
            continue
        for vert, key in by_vertex.items():
            tot = np.bincount(key, weights=row, minlength=int(key.max()) + 1 if nA else 0)
            bad = np.flatnonzero(np.rint(tot).astype(np.int64))
            for k in bad:
                if found < limit:
                    report.violations.append(Violation(
                        "local", f"{m.generators[s]} at vertex {vert}, restriction class {k}",
                        int(round(tot[k]))))
                found += 1
    return report


def invariance_constraints(m: ExcitationModel) -> list[Row]:
    """Integer rows C with E_inv = ker C."""
    nA = m.n_configs
    rows: list[Row] = []
    for a in range(nA):
        r: Row = {}
        for s in range(m.n_generators):
            c = s * nA + a
            r[c] = r.get(c, 0) + 1
            b = int(m.back[s, a])
            c = s * nA + b
            r[c] = r.get(c, 0) - 1
        rows.append({k: x for k, x in r.items() if x})
    for s in range(m.n_generators):
        rows.append({s * nA + a: 1 for a in range(nA)})
    for s, by_vertex in m.vertex_restriction_keys.items():
        for key in by_vertex.values():
            groups: dict[int, Row] = {}
            for a, k in enumerate(key.tolist()):
                groups.setdefault(k, {})[s * nA + a] = 1
            rows.extend(groups.values())
    return rows


def invariant_rank(m: ExcitationModel) -> int:
    return m.n_columns - rank_mod_p(invariance_constraints(m))


# ---------------------------------------------------------------------------
# statistics group


@dataclass
class StatisticsFactor:
    order: int
    position: int
    representative: ThetaVector
    witness: Word | None = None


@dataclass
class StatisticsGroup:
    factors: list[StatisticsFactor]
    decomposition: SmithDecomposition
    basis: HermiteBasis
    n_rows: int
    saturated: bool = True
    free_rank_diagnostic: int | None = None
    seconds: float = 0.0

    @property
    def orders(self) -> list[int]:
        return [f.order for f in self.factors]

    def classify(self, v: ThetaVector) -> ClassCoordinates:
        return classify(self.decomposition, dict(v.items()))

    def in_span(self, v: ThetaVector) -> bool:
        return self.basis.contains(dict(v.items()))

    def to_json(self, m: ExcitationModel) -> dict:
        return {
            "group": [
                {
                    "order": f.order,
                    "representative_terms": [[m.describe_column(c), x] for c, x in f.representative.sorted_items()],
                    "witness_word": None if f.witness is None else str(f.witness),
                    "witness_start": None if f.witness is None else f.witness.start,
                    "witness_length": None if f.witness is None else len(f.witness),
                }
                for f in self.factors
            ],
            "free_rank_diagnostic": self.free_rank_diagnostic,
            "saturated": self.saturated,
            "identity_rows": self.n_rows,
            "rank": self.basis.rank,
        }


def compute_statistics(m: ExcitationModel, rows: Iterable, saturated: bool | None = None,
                       witnesses: bool = True, diagnose: bool = True) -> StatisticsGroup:
    """T = E_inv / E_id from identity rows, with representatives from the rows of R.

    ``saturated`` defaults to ``not rows.partial`` when rows carry that flag.
    """
    t0 = time.perf_counter()
    basis = HermiteBasis(m.n_columns)
    n = 0
    for r in rows:
        basis.add(r if isinstance(r, dict) else dict(r.items()))
        n += 1
    if saturated is None:
        saturated = not getattr(rows, "partial", False)
    decomp = smith_from_basis(basis)
    factors = []
    for i in decomp.torsion_positions:
        decomp.normalise_sign(i)
        rep = ThetaVector(decomp.R_row(i))
        factors.append(StatisticsFactor(decomp.diag[i], i, rep))
    if witnesses:
        for f in factors:
            f.witness = extract_sequence(m, f.representative)
    diag = invariant_rank(m) - basis.rank if diagnose else None
    return StatisticsGroup(factors, decomp, basis, n, saturated, diag, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# witnesses


def _edges(m: ExcitationModel, v: ThetaVector) -> dict[int, list[tuple[int, int, int]]]:
    """Outgoing edges per configuration as (generator, exponent, target)."""
    out: dict[int, list[tuple[int, int, int]]] = {}
    for col, c in v.sorted_items():
        s, a = m.split(col)
        b = int(m.step[s, a])
        if c > 0:
            out.setdefault(a, []).extend([(s, 1, b)] * c)
        else:
            out.setdefault(b, []).extend([(s, -1, a)] * -c)
    return out


def _circuit(adj: dict[int, list[tuple[int, int, int]]], start: int) -> list[tuple[int, int, int]]:
    """Hierholzer on a balanced multigraph; returns (generator, exponent, source) in order."""
    stack = [(start, None)]
    path: list[tuple[int, int, int]] = []
    ptr = {k: 0 for k in adj}
    while stack:
        vtx, via = stack[-1]
        edges = adj.get(vtx, ())
        i = ptr.get(vtx, 0)
        if i < len(edges):
            ptr[vtx] = i + 1
            s, e, tgt = edges[i]
            stack.append((tgt, (s, e, vtx)))
        else:
            stack.pop()
            if via is not None:
                path.append(via)
    path.reverse()
    return path


def _bfs_path(m: ExcitationModel, sources: set[int], targets: set[int]) -> tuple[int, list[tuple[int, int]], int]:
    """Shortest generator path from some source to some target: (source, steps, target)."""
    prev: dict[int, tuple[int, int, int] | None] = {a: None for a in sorted(sources)}
    queue = deque(sorted(sources))
    while queue:
        a = queue.popleft()
        if a in targets:
            steps = []
            cur = a
            while prev[cur] is not None:
                pa, s, e = prev[cur]
                steps.append((s, e))
                cur = pa
            steps.reverse()
            return cur, steps, a
        for s in range(m.n_generators):
            for e, b in ((1, int(m.step[s, a])), (-1, int(m.back[s, a]))):
                if b not in prev:
                    prev[b] = (a, s, e)
                    queue.append(b)
    raise OpenWalkError("configuration graph is disconnected")


def extract_sequence(m: ExcitationModel, v: ThetaVector) -> Word:
    """A closed word whose theta-sum is exactly v (Eulerian circuit reconstruction)."""
    if not v:
        return Word((), 0)
    adj = _edges(m, v)
    indeg: dict[int, int] = {}
    for edges in adj.values():
        for _, _, t in edges:
            indeg[t] = indeg.get(t, 0) + 1
    for x in set(adj) | set(indeg):
        if len(adj.get(x, ())) != indeg.get(x, 0):
            raise OpenWalkError(f"vector is unbalanced at configuration {x}; no closed walk")
    # connected components of the edge graph
    verts = sorted(set(adj) | set(indeg))
    parent = {x: x for x in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, edges in adj.items():
        for _, _, t in edges:
            parent[find(x)] = find(t)
    comps: dict[int, list[int]] = {}
    for x in verts:
        comps.setdefault(find(x), []).append(x)
    ordered = sorted(comps.values(), key=min)
    start = ordered[0][0]
    # application-order steps: (generator, exponent, source)
    steps = _circuit(adj, start)
    for comp in ordered[1:]:
        on_path = {start} | {src for _, _, src in steps}
        src, path, tgt = _bfs_path(m, on_path, set(comp))
        sub = _circuit(adj, tgt)
        fwd = []
        cur = src
        for s, e in path:
            fwd.append((s, e, cur))
            cur = int(m.step[s, cur]) if e > 0 else int(m.back[s, cur])
        back = []
        for s, e in reversed(path):
            nxt = int(m.back[s, cur]) if e > 0 else int(m.step[s, cur])
            back.append((s, -e, cur))
            cur = nxt
        splice = fwd + sub + back
        if src == start and not any(x == start for _, _, x in steps):
            steps = splice + steps
        else:
            k = next(i for i, (_, _, x) in enumerate(steps) if x == src)
            steps = steps[:k] + splice + steps[k:]
    letters = tuple((m.generators[s], e) for s, e, _ in reversed(steps))
    return Word(letters, start)


# ---------------------------------------------------------------------------
# minimisation


@dataclass
class Minimization:
    vector: ThetaVector
    word: Word
    l1: int
    exhaustive: bool
    budget_exhausted: bool = False
    evaluated: int = 0


def _l1_delta(cur: dict[int, int], r: Row, sign: int) -> int:
    d = 0
    for c, x in r.items():
        old = cur.get(c, 0)
        d += abs(old + sign * x) - abs(old)
    return d


def _apply(cur: dict[int, int], r: Row, sign: int) -> None:
    for c, x in r.items():
        nv = cur.get(c, 0) + sign * x
        if nv:
            cur[c] = nv
        else:
            cur.pop(c, None)


def minimize_sequence(m: ExcitationModel, v: ThetaVector, identity_rows: Sequence,
                      budget: int = 1_000_000, max_exact: int = 20) -> Minimization:
    """Search v + (combinations of identity rows) for a small L1 norm, then extract.

    Rows whose support meets v form the contributing set. If there are at most
    ``max_exact`` of them, every 0/1 combination (orientation flip) is
    enumerated in Gray-code order; otherwise a greedy +-row descent runs.
    """
    rows = [r if isinstance(r, dict) else dict(r.items()) for r in identity_rows]
    support = set(c for c, _ in v.items())
    contributing = rows if len(rows) <= max_exact else [r for r in rows if support & r.keys()]
    cur = dict(v.items())
    best_l1 = sum(abs(x) for x in cur.values())
    best = dict(cur)
    evaluated = 0
    exhausted = False
    exact = len(contributing) <= max_exact
    if exact:
        k = len(contributing)
        l1 = best_l1
        chosen = [False] * k
        for g in range(1, 2 ** k):
            if evaluated >= budget:
                exhausted = True
                break
            bit = (g & -g).bit_length() - 1
            sign = -1 if chosen[bit] else 1
            l1 += _l1_delta(cur, contributing[bit], sign)
            _apply(cur, contributing[bit], sign)
            chosen[bit] = not chosen[bit]
            evaluated += 1
            if l1 < best_l1 or (l1 == best_l1 and sorted(cur.items()) < sorted(best.items())):
                best_l1, best = l1, dict(cur)
    else:
        improved = True
        while improved and not exhausted:
            improved = False
            for r in contributing:
                for sign in (1, -1):
                    if evaluated >= budget:
                        exhausted = True
                        break
                    evaluated += 1
                    dl = _l1_delta(cur, r, sign)
                    if dl < 0:
                        _apply(cur, r, sign)
                        best_l1 += dl
                        improved = True
                if exhausted:
                    break
        best = cur
    vec = ThetaVector(best)
    return Minimization(vec, extract_sequence(m, vec), best_l1, exact and not exhausted,
                        exhausted, evaluated)
