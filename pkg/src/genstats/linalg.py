"""Exact sparse integer lattices: Hermite and Smith normal forms.

Rows are ``dict[int, int]`` (column -> nonzero Python int). Arithmetic is
always exact; nothing here touches floating point.

The Smith decomposition ``M = L A R`` is assembled from a reduced row HNF:
rows whose pivot is 1 are absorbed by a unimodular change of column basis,
and only the few remaining rows (pivot > 1) go through a full Smith
reduction. R and R^-1 are therefore kept in factored form; ``R()`` and
``R_inv()`` materialise them when a caller needs explicit matrices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Row = dict[int, int]


class DimensionError(ValueError):
    pass


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def axpy(target: Row, q: int, src: Row) -> None:
    """target += q * src, in place, dropping zeros."""
    if not q:
        return
    get = target.get
    for k, v in src.items():
        nv = get(k, 0) + q * v
        if nv:
            target[k] = nv
        else:
            del target[k]


def combine(x: int, p: Row, y: int, v: Row) -> Row:
    out = {k: x * val for k, val in p.items()} if x else {}
    axpy(out, y, v)
    return out


class SparseIntMatrix:
    """Row-sparse integer matrix with no stored zeros."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Row] = (), ncols: int = 0):
        self.rows: list[Row] = [{c: int(v) for c, v in r.items() if v} for r in rows]
        self.ncols = ncols
        for r in self.rows:
            if r and max(r) >= ncols:
                raise DimensionError(f"column {max(r)} outside a matrix with {ncols} columns")

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], ncols: int | None = None) -> "SparseIntMatrix":
        if ncols is None:
            ncols = len(dense[0]) if len(dense) else 0
        return cls(({j: v for j, v in enumerate(row) if v} for row in dense), ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(({i: 1} for i in range(n)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def to_dense(self) -> list[list[int]]:
        out = []
        for r in self.rows:
            d = [0] * self.ncols
            for c, v in r.items():
                d[c] = v
            out.append(d)
        return out

    def __eq__(self, other):
        return isinstance(other, SparseIntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"SparseIntMatrix({self.shape[0]}x{self.shape[1]}, nnz={self.nnz})"

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def transpose(self) -> "SparseIntMatrix":
        cols: list[Row] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                cols[c][i] = v
        return SparseIntMatrix(cols, len(self.rows))

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != len(other.rows):
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self.rows:
            acc: Row = {}
            for k, v in r.items():
                axpy(acc, v, other.rows[k])
            out.append(acc)
        return SparseIntMatrix(out, other.ncols)

    def dumps(self) -> str:
        lines = [f"{len(self.rows)} {self.ncols}"]
        for i, r in enumerate(self.rows):
            lines.extend(f"{i} {c} {v}" for c, v in sorted(r.items()))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SparseIntMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or len(lines[0]) != 2:
            raise ValueError("matrix text must start with a 'rows cols' header")
        nrows, ncols = map(int, lines[0])
        rows: list[Row] = [{} for _ in range(nrows)]
        for parts in lines[1:]:
            if len(parts) != 3:
                raise ValueError(f"expected 'r c value', got {' '.join(parts)!r}")
            r, c, v = map(int, parts)
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise DimensionError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            if v:
                rows[r][c] = rows[r].get(c, 0) + v
        return cls(rows, ncols)


# ---------------------------------------------------------------------------
# Hermite normal form


class HermiteBasis:
    """Incrementally maintained echelon basis of an integer row lattice.

    ``add`` keeps an echelon form (positive pivots); ``reduce`` brings it to
    the reduced HNF, in which every entry above a pivot p lies in [0, p).
    With ``track=True`` a unimodular transform T with T @ M = H is recorded,
    together with its inverse; only sensible for small matrices.
    """

    GROWTH_BITS = 48
    GROWN_EVERY = 30

    def __init__(self, ncols: int, track: bool = False, reduce_every: int = 100):
        self.ncols = ncols
        self.pivots: dict[int, Row] = {}
        self.reduced = True
        # re-reducing from time to time keeps pivot rows short, which makes
        # reducing incoming rows much cheaper
        self.reduce_every = reduce_every
        self._since_reduce = 0
        self.track = track
        self.n_added = 0
        # transform bookkeeping: slot -> row of T / column of T^-1 (over input rows)
        self._slot_of_pivot: dict[int, int] = {}
        self._zero_slots: list[int] = []
        self._T: dict[int, Row] = {}
        self._Tinv: dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _check(self, v: Row) -> None:
        if v and (max(v) >= self.ncols or min(v) < 0):
            raise DimensionError(f"row has a column outside [0, {self.ncols})")

    def add(self, row: Row) -> bool:
        """Insert a row; return True iff the lattice grew."""
        grew = self._insert(row)
        self._since_reduce += 1
        if not self.reduced and self.reduce_every and self._since_reduce >= self.reduce_every:
            self.reduce()
        return grew

    def _insert(self, row: Row) -> bool:
        self._check(row)
        v = {c: x for c, x in row.items() if x}
        slot = self.n_added
        self.n_added += 1
        if self.track:
            self._T[slot] = {slot: 1}
            self._Tinv[slot] = {slot: 1}
        changed = False
        pivots = self.pivots
        heap = list(v)
        heapq.heapify(heap)
        while v:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            p = pivots.get(c)
            if p is None:
                if a < 0:
                    for k in v:
                        v[k] = -v[k]
                    if self.track:
                        self._scale_slot(slot, -1)
                pivots[c] = v
                if self.track:
                    self._slot_of_pivot[c] = slot
                self._note_size(c)
                self.reduced = False
                return True
            b = p[c]
            if a % b == 0:
                q = a // b
                axpy(v, -q, p)
                for k in p:
                    if k > c:
                        heapq.heappush(heap, k)
                if self.track:
                    self._elim(slot, q, self._slot_of_pivot[c])
            else:
                g, x, y = xgcd(b, a)
                new_p = combine(x, p, y, v)
                v_next = combine(a // g, p, -(b // g), v)
                if self.track:
                    self._gcd_step(self._slot_of_pivot[c], slot, x, y, a // g, -(b // g))
                for k in p:
                    if k > c:
                        heapq.heappush(heap, k)
                pivots[c] = new_p
                self._note_size(c)
                v = v_next
                changed = True
                self.reduced = False
        if self.track:
            self._zero_slots.append(slot)
        return changed

    def _note_size(self, c: int) -> None:
        # unreduced echelon rows can grow without bound; size-reduce a row
        # against the pivots to its right once its entries get large
        r = self.pivots[c]
        if max(map(abs, r.values())).bit_length() <= self.GROWTH_BITS:
            return
        for k in sorted(k for k in r if k > c):
            x = r.get(k)
            p = self.pivots.get(k)
            if x is None or p is None:
                continue
            q = x // p[k]
            if q:
                axpy(r, -q, p)
                if self.track:
                    self._elim(self._slot_of_pivot[c], q, self._slot_of_pivot[k])

    def add_rows(self, rows: Iterable[Row]) -> bool:
        grew = False
        for r in rows:
            grew |= self.add(r)
        return grew

    # transform tracking -------------------------------------------------

    def _scale_slot(self, slot: int, s: int) -> None:
        self._T[slot] = {k: s * v for k, v in self._T[slot].items()}
        self._Tinv[slot] = {k: s * v for k, v in self._Tinv[slot].items()}

    def _elim(self, slot_v: int, q: int, slot_p: int) -> None:
        # row_v -= q row_p ; inverse: col_p += q col_v
        axpy(self._T[slot_v], -q, self._T[slot_p])
        axpy(self._Tinv[slot_p], q, self._Tinv[slot_v])

    def _gcd_step(self, slot_p: int, slot_v: int, x: int, y: int, al: int, be: int) -> None:
        # [p'; v'] = [[x, y], [al, be]] [p; v], determinant x*be - y*al = -1
        T, Ti = self._T, self._Tinv
        tp, tv = T[slot_p], T[slot_v]
        T[slot_p] = combine(x, tp, y, tv)
        T[slot_v] = combine(al, tp, be, tv)
        det = x * be - y * al
        cp, cv = Ti[slot_p], Ti[slot_v]
        Ti[slot_p] = combine(det * be, cp, -det * al, cv)
        Ti[slot_v] = combine(-det * y, cp, det * x, cv)

    # ------------------------------------------------------------------

    def reduce(self) -> None:
        """Bring the basis to reduced HNF (entries above pivots in [0, pivot))."""
        if self.reduced:
            return
        cols = sorted(self.pivots)
        rows = [self.pivots[c] for c in cols]
        for j, c in enumerate(cols):
            p = rows[j]
            piv = p[c]
            for i in range(j):
                r = rows[i]
                x = r.get(c)
                if x is None:
                    continue
                q = x // piv
                if q:
                    axpy(r, -q, p)
                    if self.track:
                        self._elim(self._slot_of_pivot[cols[i]], q, self._slot_of_pivot[c])
        self.reduced = True
        self._since_reduce = 0

    def contains(self, v: Row) -> bool:
        """Exact membership test by greedy pivot reduction."""
        self._check(v)
        self.reduce()
        v = {c: x for c, x in v.items() if x}
        heap = list(v)
        heapq.heapify(heap)
        while v:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            p = self.pivots.get(c)
            if p is None or a % p[c]:
                return False
            q = a // p[c]
            for k, val in p.items():
                nv = v.get(k, 0) - q * val
                if nv:
                    if k not in v:
                        heapq.heappush(heap, k)
                    v[k] = nv
                else:
                    v.pop(k, None)
        return True

    def matrix(self) -> SparseIntMatrix:
        self.reduce()
        return SparseIntMatrix((dict(self.pivots[c]) for c in sorted(self.pivots)), self.ncols)

    def rows_sorted(self) -> list[tuple[int, Row]]:
        self.reduce()
        return [(c, self.pivots[c]) for c in sorted(self.pivots)]

    def transform(self) -> tuple[SparseIntMatrix, SparseIntMatrix, list[int]]:
        """Return (T, T^-1, slot order) with rows of T ordered [pivot rows by column, zero rows]."""
        if not self.track:
            raise RuntimeError("basis was built without transform tracking")
        self.reduce()
        order = [self._slot_of_pivot[c] for c in sorted(self.pivots)] + list(self._zero_slots)
        k = self.n_added
        T = SparseIntMatrix((self._T[s] for s in order), k)
        # column j of T^-1 is stored under slot order[j]
        cols = [self._Tinv[s] for s in order]
        Tinv = SparseIntMatrix(cols, k).transpose()
        return T, Tinv, order

    def same_lattice(self, other: "HermiteBasis") -> bool:
        return self.matrix() == other.matrix()


def hnf(M: SparseIntMatrix, transform: bool = False) -> tuple[SparseIntMatrix, SparseIntMatrix | None]:
    """Reduced row Hermite normal form H (zero rows last) and T with T @ M = H."""
    basis = HermiteBasis(M.ncols, track=transform)
    basis.add_rows(M.rows)
    H = basis.matrix()
    H = SparseIntMatrix(H.rows + [{} for _ in range(len(M.rows) - len(H.rows))], M.ncols)
    if not transform:
        return H, None
    T, _, _ = basis.transform()
    return H, T


def in_row_span(H: SparseIntMatrix | HermiteBasis, v: Sequence[int] | Row) -> bool:
    """True iff v is an integer combination of the rows behind H."""
    if not isinstance(v, dict):
        if len(v) != (H.ncols):
            raise DimensionError(f"vector of length {len(v)} against {H.ncols} columns")
        v = {i: x for i, x in enumerate(v) if x}
    if isinstance(H, HermiteBasis):
        return H.contains(v)
    basis = HermiteBasis(H.ncols)
    for r in H.rows:
        if r:
            c = min(r)
            basis.pivots[c] = dict(r)
    basis.reduced = True
    return basis.contains(v)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class ClassCoordinates:
    torsion: tuple[int, ...]          # c_i mod a_ii for every torsion index
    orders: tuple[int, ...]           # the matching a_ii
    positions: tuple[int, ...]        # theta' indices of the torsion factors
    free: dict[int, int] = field(default_factory=dict)  # c_i at a_ii = 0 (nonzero only)

    def is_zero(self) -> bool:
        return not any(self.torsion)


class SmithDecomposition:
    """M = L A R with A diagonal (a_11 | a_22 | ...) and R unimodular.

    The theta' basis is ordered as: unit pivots, the Smith block, free columns.
    """

    def __init__(self, ncols: int, nrows: int, unit_cols: list[int], B: list[Row],
                 W_cols: list[int], Q: dict[int, Row], Qinv: dict[int, Row],
                 block_diag: list[int], L: SparseIntMatrix | None = None):
        self.ncols = ncols
        self.nrows = nrows
        self.unit_cols = unit_cols
        self.B = B                # W-position entries of each unit pivot row
        self.W_cols = W_cols
        self._Q = Q               # sparse columns of Q over W positions (identity default)
        self._Qinv = Qinv         # sparse rows of Q^-1
        self.block_diag = block_diag
        self.L = L
        u = len(unit_cols)
        self.diag: list[int] = [1] * u + list(block_diag) + [0] * (len(W_cols) - len(block_diag))
        self._u = u
        self._torsion_cache: dict[int, Row] = {}
        self._sign: dict[int, int] = {}

    # ---- structure ------------------------------------------------------

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    @property
    def torsion_positions(self) -> list[int]:
        return [i for i, d in enumerate(self.diag) if d not in (0, 1)]

    @property
    def torsion_orders(self) -> list[int]:
        return [self.diag[i] for i in self.torsion_positions]

    @property
    def free_positions(self) -> list[int]:
        return [i for i, d in enumerate(self.diag) if d == 0]

    def Qcol(self, j: int) -> Row:
        return self._Q.get(j) or {j: 1}

    def Qinv_row(self, j: int) -> Row:
        return self._Qinv.get(j) or {j: 1}

    # ---- rows of R / columns of R^-1 -------------------------------------

    def normalise_sign(self, i: int) -> None:
        """Flip row i of R (and column i of R^-1) so its first nonzero entry is positive."""
        row = self.R_row(i)
        if row and row[min(row)] < 0:
            self._sign[i] = -self._sign.get(i, 1)

    def R_row(self, i: int) -> Row:
        """Row i of R over original columns: the theta-combination theta'_i."""
        sg = self._sign.get(i, 1)
        row = self._R_row(i)
        return row if sg == 1 else {c: -x for c, x in row.items()}

    def _R_row(self, i: int) -> Row:
        if i < self._u:
            row = {self.unit_cols[i]: 1}
            for w, x in self.B[i].items():
                row[self.W_cols[w]] = x
            return row
        j = i - self._u
        return {self.W_cols[w]: x for w, x in self.Qinv_row(j).items()}

    def R_inv_col(self, i: int) -> Row:
        """Column i of R^-1 over original columns."""
        sg = self._sign.get(i, 1)
        col = self._R_inv_col(i)
        return col if sg == 1 else {c: -x for c, x in col.items()}

    def _R_inv_col(self, i: int) -> Row:
        if i < self._u:
            return {self.unit_cols[i]: 1}
        cached = self._torsion_cache.get(i)
        if cached is not None:
            return cached
        q = self.Qcol(i - self._u)
        col = {self.W_cols[w]: x for w, x in q.items()}
        for r, Brow in enumerate(self.B):
            s = 0
            for w, x in q.items():
                y = Brow.get(w)
                if y:
                    s += y * x
            if s:
                col[self.unit_cols[r]] = -s
        if self.diag[i] not in (0, 1):
            self._torsion_cache[i] = col
        return col

    def R(self) -> SparseIntMatrix:
        return SparseIntMatrix((self.R_row(i) for i in range(self.ncols)), self.ncols)

    def R_inv(self) -> SparseIntMatrix:
        cols = [self.R_inv_col(i) for i in range(self.ncols)]
        return SparseIntMatrix(cols, self.ncols).transpose()

    def A(self) -> SparseIntMatrix:
        rows = [{i: self.diag[i]} if i < self.ncols and self.diag[i] else {} for i in range(self.nrows)]
        return SparseIntMatrix(rows, self.ncols)

    # ---- coordinates ------------------------------------------------------

    def coordinates(self, v: Row, positions: Iterable[int] | None = None) -> dict[int, int]:
        """c = v R^-1 at the requested theta' positions (all if None)."""
        if positions is None:
            positions = range(self.ncols)
        return {i: c for i in positions if (c := _dot(v, self.R_inv_col(i)))}

    def apply_R_inv(self, phi: Sequence[float]) -> list[float]:
        """theta = R^-1 phi (column convention), phi indexed by theta' position."""
        u = self._u
        nW = len(self.W_cols)
        if self._sign:
            phi = list(phi)
            for i, sg in self._sign.items():
                phi[i] *= sg
        psi = [0.0] * nW
        for j in range(nW):
            f = phi[u + j]
            if f:
                for w, x in self.Qcol(j).items():
                    psi[w] += x * f
        theta = [0.0] * self.ncols
        for w, val in enumerate(psi):
            theta[self.W_cols[w]] = val
        for r, c in enumerate(self.unit_cols):
            s = phi[r]
            for w, x in self.B[r].items():
                s -= x * psi[w]
            theta[c] = s
        return theta


def _dot(v: Row, w: Row) -> int:
    if len(v) > len(w):
        v, w = w, v
    s = 0
    for k, x in v.items():
        y = w.get(k)
        if y:
            s += x * y
    return s


def classify(decomp: SmithDecomposition, v: Sequence[int] | Row, with_free: bool = False) -> ClassCoordinates:
    """Class of v in coker(M): torsion coordinates (c R^-1)_i mod a_ii."""
    if not isinstance(v, dict):
        if len(v) != decomp.ncols:
            raise DimensionError(f"vector of length {len(v)} against {decomp.ncols} columns")
        v = {i: x for i, x in enumerate(v) if x}
    pos = decomp.torsion_positions
    coords = decomp.coordinates(v, pos)
    torsion = tuple(coords.get(i, 0) % decomp.diag[i] for i in pos)
    free = decomp.coordinates(v, decomp.free_positions) if with_free else {}
    return ClassCoordinates(torsion, tuple(decomp.diag[i] for i in pos), tuple(pos), free)


def _smith_block(K: list[Row], nW: int, P: list[Row] | None):
    """In-place Smith reduction of the small block K (rows over W positions).

    Column operations are recorded in (Q columns, Q^-1 rows); row operations
    in P (list of rows over K's row indices) when given.
    """
    Q: dict[int, Row] = {}
    Qinv: dict[int, Row] = {}

    def qcol(j):
        if j not in Q:
            Q[j] = {j: 1}
        return Q[j]

    def qinv(j):
        if j not in Qinv:
            Qinv[j] = {j: 1}
        return Qinv[j]

    def col_op(j, q, k):
        # col_j -= q * col_k
        for r in K:
            x = r.get(k)
            if x:
                nv = r.get(j, 0) - q * x
                if nv:
                    r[j] = nv
                else:
                    del r[j]
        axpy(qcol(j), -q, qcol(k))
        axpy(qinv(k), q, qinv(j))

    def col_swap(j, k):
        if j == k:
            return
        for r in K:
            xj, xk = r.pop(j, None), r.pop(k, None)
            if xj is not None:
                r[k] = xj
            if xk is not None:
                r[j] = xk
        Q[j], Q[k] = qcol(k), qcol(j)
        Qinv[j], Qinv[k] = qinv(k), qinv(j)

    def col_neg(j):
        for r in K:
            if j in r:
                r[j] = -r[j]
        Q[j] = {k: -x for k, x in qcol(j).items()}
        Qinv[j] = {k: -x for k, x in qinv(j).items()}

    def row_op(i, q, k):
        # row_i -= q * row_k
        axpy(K[i], -q, K[k])
        if P is not None:
            axpy(P[i], -q, P[k])

    def row_swap(i, k):
        K[i], K[k] = K[k], K[i]
        if P is not None:
            P[i], P[k] = P[k], P[i]

    diag: list[int] = []
    nK = len(K)
    for t in range(min(nK, nW)):
        # pivot: smallest |entry| in the trailing block
        best = None
        for i in range(t, nK):
            for j, x in K[i].items():
                if j >= t and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            piv = K[t][t]
            done = True
            for i in range(t + 1, nK):
                x = K[i].get(t)
                if x:
                    row_op(i, x // piv, t)
                    if K[i].get(t):
                        row_swap(t, i)
                        done = False
                        break
            if not done:
                continue
            piv = K[t][t]
            for j in sorted(k for k in K[t] if k > t):
                x = K[t].get(j)
                if x:
                    col_op(j, x // piv, t)
                    if K[t].get(j):
                        col_swap(t, j)
                        done = False
                        break
            if not done:
                continue
            piv = K[t][t]
            bad = None
            for i in range(t + 1, nK):
                if any(x % piv for x in K[i].values()):
                    bad = i
                    break
            if bad is None:
                break
            row_op(t, -1, bad)
        if K[t][t] < 0:
            col_neg(t)
        diag.append(K[t][t])
    return diag, Q, Qinv


def smith_from_basis(basis: HermiteBasis, nrows: int | None = None, left: bool = False) -> SmithDecomposition:
    basis.reduce()
    n = basis.ncols
    pivot_items = sorted(basis.pivots.items())
    unit_cols = [c for c, r in pivot_items if r[c] == 1]
    unit_set = set(unit_cols)
    W_cols = [c for c in range(n) if c not in unit_set]
    wpos = {c: w for w, c in enumerate(W_cols)}
    B = []
    for c, r in pivot_items:
        if r[c] == 1:
            B.append({wpos[k]: x for k, x in r.items() if k != c})
    K_src = [(c, r) for c, r in pivot_items if r[c] != 1]
    K = []
    for c, r in K_src:
        K.append({wpos[k]: x for k, x in r.items()})
    P = [{i: 1} for i in range(len(K))] if left else None
    block_diag, Q, Qinv = _smith_block(K, len(W_cols), P)
    nrows = basis.n_added if nrows is None else nrows
    L = None
    if left:
        L = _left_factor(basis, P, unit_cols, K_src, nrows)
    return SmithDecomposition(n, nrows, unit_cols, B, W_cols, Q, Qinv, block_diag, L)


def _left_factor(basis, P, unit_cols, K_src, nrows) -> SparseIntMatrix:
    T, Tinv, order = basis.transform()
    # rows of H in T order: pivot rows by column, then zero rows.
    pivot_cols = sorted(basis.pivots)
    pos_in_T = {c: i for i, c in enumerate(pivot_cols)}
    # Lambda maps A's rows to H's rows: unit row -> e_pos, K row rho -> sum_t Pinv[rho, t] e_{u+t}
    u = len(unit_cols)
    Pinv = _invert_unimodular(P)
    k = nrows
    lam_rows: dict[int, Row] = {}
    for a_pos, c in enumerate(unit_cols):
        lam_rows[pos_in_T[c]] = {a_pos: 1}
    for rho, (c, _) in enumerate(K_src):
        lam_rows[pos_in_T[c]] = {u + t: x for t, x in Pinv[rho].items()}
    next_free = u + len(K_src)
    for i in range(len(pivot_cols), k):
        lam_rows[i] = {next_free: 1}
        next_free += 1
    Lam = SparseIntMatrix((lam_rows[i] for i in range(k)), k)
    return Tinv @ Lam


def _invert_unimodular(P: list[Row]) -> list[Row]:
    """Exact inverse of a small unimodular matrix via tracked HNF."""
    n = len(P)
    if n == 0:
        return []
    basis = HermiteBasis(n, track=True)
    basis.add_rows(P)
    T, _, _ = basis.transform()
    H = basis.matrix()
    # T P = H with H upper triangular unimodular (identity after reduction)
    if any(H.rows[i] != {i: 1} for i in range(n)):
        raise ArithmeticError("matrix is not unimodular")
    return T.rows


def snf(M: SparseIntMatrix, left: bool = False) -> SmithDecomposition:
    """Smith decomposition of M; ``left=True`` also materialises L."""
    basis = HermiteBasis(M.ncols, track=left)
    basis.add_rows(M.rows)
    return smith_from_basis(basis, nrows=len(M.rows), left=left)


RANK_PRIME = 2_147_483_629


def rank_mod_p(rows: Iterable[Row], prime: int = RANK_PRIME) -> int:
    """Rank over GF(prime); equals the rational rank unless prime divides a minor."""
    pivots: dict[int, Row] = {}
    for row in rows:
        v = {c: x % prime for c, x in row.items() if x % prime}
        while v:
            c = min(v)
            p = pivots.get(c)
            if p is None:
                inv = pow(v[c], -1, prime)
                pivots[c] = {k: x * inv % prime for k, x in v.items()}
                break
            f = v[c]
            for k, x in p.items():
                nv = (v.get(k, 0) - f * x) % prime
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return len(pivots)
