"""Exact sparse linear algebra over Q and Q(t).

Vectors are dicts ``index -> scalar`` with no stored zeros.  Matrices are
stored column-major (a column is the image of a basis vector), which is how
every chain map in this package is assembled.

Rank uses sparse elimination with a Markowitz-style pivot choice.  Over Q the
elimination is fraction-free on integer rows: rational input is scaled to
primitive integer rows first, and every updated row is divided by its content.
Over Q(t) ordinary field elimination is used.
"""
from __future__ import annotations

import heapq
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, Sequence

from .errors import CompositionNonzero, NotContained

Vector = dict


# -- vectors -----------------------------------------------------------------

def add_into(target: dict, source: dict, coeff=1) -> dict:
    """target += coeff * source, dropping zeros. Returns target."""
    for k, v in source.items():
        nv = target.get(k, 0) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)
    return target


def scale(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def _integral_row(v: dict) -> dict | None:
    """Primitive integer multiple of ``v``, or None if ``v`` is not rational."""
    den = 1
    for x in v.values():
        if isinstance(x, Fraction):
            den = den * x.denominator // math.gcd(den, x.denominator)
        elif not isinstance(x, int):
            return None
    if den == 1 and all(isinstance(x, int) for x in v.values()):
        row = dict(v)
    else:
        row = {k: int(x * den) for k, x in v.items()}
    g = 0
    for x in row.values():
        g = math.gcd(g, x)
        if g == 1:
            break
    if g > 1:
        row = {k: x // g for k, x in row.items()}
    return row


# -- matrices ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Column-major sparse matrix; ``columns[j]`` maps row index to entry."""

    rows: int
    cols: int
    columns: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count does not match cols")

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[dict]) -> "SparseMatrix":
        cols = tuple({r: v for r, v in c.items() if v} for c in columns)
        for c in cols:
            for r in c:
                if not 0 <= r < rows:
                    raise IndexError(f"row index {r} out of range for {rows} rows")
        return cls(rows, len(cols), cols)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, Any]]) -> "SparseMatrix":
        columns = [dict() for _ in range(cols)]
        for r, c, v in entries:
            if r in columns[c]:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            columns[c][r] = v
        return cls.from_columns(rows, columns)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        return cls.from_columns(nrows, ({i: data[i][j] for i in range(nrows) if data[i][j]}
                                        for j in range(ncols)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, tuple({} for _ in range(cols)))

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, tuple({i: 1} for i in range(n)))

    def entries(self) -> Iterator[tuple[int, int, Any]]:
        for j, col in enumerate(self.columns):
            for i, v in sorted(col.items()):
                yield i, j, v

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def row_dicts(self) -> list[dict]:
        rows = [dict() for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, tuple(self.row_dicts()))

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for j, x in v.items():
            add_into(out, self.columns[j], x)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseMatrix(self.rows, other.cols, tuple(self.apply(c) for c in other.columns))

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SparseMatrix(self.rows, self.cols,
                            tuple(add_into(dict(a), b) for a, b in zip(self.columns, other.columns)))

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scaled(-1)

    def scaled(self, c) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, tuple(scale(col, c) for col in self.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.columns, other.columns))

    __hash__ = None


def block_diagonal(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    columns = []
    r0 = 0
    for m in blocks:
        columns.extend({r + r0: v for r, v in c.items()} for c in m.columns)
        r0 += m.rows
    return SparseMatrix(r0, len(columns), tuple(columns))


# -- elimination -------------------------------------------------------------

def _prepare(vectors: Iterable[dict]) -> tuple[dict[int, dict], bool]:
    rows: dict[int, dict] = {}
    integral = True
    raw = [v for v in vectors if v]
    converted = []
    for v in raw:
        iv = _integral_row(v)
        if iv is None:
            integral = False
            break
        converted.append(iv)
    if integral:
        rows = dict(enumerate(converted))
    else:
        rows = {i: dict(v) for i, v in enumerate(raw)}
    return rows, integral


def _eliminate(rows: dict[int, dict], integral: bool, keep: bool = False):
    """Sparse elimination with Markowitz-style pivoting.

    Consumes ``rows``. Returns the rank, and with ``keep`` also the pivot
    sequence ``[(pivot_col, pivot_row), ...]`` in elimination order; each
    pivot row is free of the pivot columns chosen before it.
    """
    colmap: dict[Any, set] = defaultdict(set)
    for r, row in rows.items():
        for c in row:
            colmap[c].add(r)
    heap = [(len(row), r) for r, row in rows.items()]
    heapq.heapify(heap)
    pivots = []
    rank = 0
    while heap:
        ln, r = heapq.heappop(heap)
        row = rows.get(r)
        if row is None or len(row) != ln:
            continue
        best = None
        best_key = None
        for c, v in row.items():
            key = (len(colmap[c]), not (v == 1 or v == -1))
            if best_key is None or key < best_key:
                best, best_key = c, key
                if key == (1, False):
                    break
        c = best
        pv = row[c]
        del rows[r]
        for cc in row:
            colmap[cc].discard(r)
        others = colmap.pop(c, set())
        for s in others:
            srow = rows[s]
            sv = srow.pop(c)
            if integral:
                if pv == 1 or pv == -1:
                    f = sv * pv
                    for cc, x in row.items():
                        if cc == c:
                            continue
                        nv = srow.get(cc, 0) - f * x
                        if nv:
                            if cc not in srow:
                                colmap[cc].add(s)
                            srow[cc] = nv
                        else:
                            if cc in srow:
                                del srow[cc]
                                colmap[cc].discard(s)
                else:
                    g = math.gcd(pv, sv)
                    a, b = pv // g, sv // g
                    if a != 1:
                        for cc in srow:
                            srow[cc] *= a
                    for cc, x in row.items():
                        if cc == c:
                            continue
                        nv = srow.get(cc, 0) - b * x
                        if nv:
                            if cc not in srow:
                                colmap[cc].add(s)
                            srow[cc] = nv
                        else:
                            if cc in srow:
                                del srow[cc]
                                colmap[cc].discard(s)
                    cont = 0
                    for x in srow.values():
                        cont = math.gcd(cont, x)
                        if cont == 1:
                            break
                    if cont > 1:
                        for cc in srow:
                            srow[cc] //= cont
            else:
                f = sv / pv
                for cc, x in row.items():
                    if cc == c:
                        continue
                    nv = srow.get(cc, 0) - f * x
                    if nv:
                        if cc not in srow:
                            colmap[cc].add(s)
                        srow[cc] = nv
                    else:
                        if cc in srow:
                            del srow[cc]
                            colmap[cc].discard(s)
            if srow:
                heapq.heappush(heap, (len(srow), s))
            else:
                del rows[s]
        rank += 1
        if keep:
            pivots.append((c, row))
    if keep:
        return rank, pivots
    return rank


def rank_of_vectors(vectors: Iterable[dict]) -> int:
    """Dimension of the span of a collection of sparse vectors."""
    rows, integral = _prepare(vectors)
    return _eliminate(rows, integral)


def rank(M: SparseMatrix) -> int:
    """Exact rank of ``M``."""
    return rank_of_vectors(M.columns)


def _rank_job(M):
    return rank(M)


def block_rank(blocks: Sequence[SparseMatrix], workers: int = 1) -> int:
    """Rank of a block-diagonal matrix given by its blocks (summed per block)."""
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_rank_job, blocks, chunksize=1))
    return sum(rank(b) for b in blocks)


def _nullspace(equations: Sequence[dict], ncols: int) -> list[dict]:
    rows, integral = _prepare(equations)
    _, pivots = _eliminate(rows, integral, keep=True)
    pivot_cols = {c for c, _ in pivots}
    free = [j for j in range(ncols) if j not in pivot_cols]
    # express each pivot variable through free variables, back to front
    expr: dict[int, dict] = {}
    for c, row in reversed(pivots):
        pv = row[c]
        acc: dict = {}
        for cc, x in row.items():
            if cc == c:
                continue
            if cc in expr:
                add_into(acc, expr[cc], x)
            else:
                add_into(acc, {cc: 1}, x)
        if integral:
            expr[c] = {f: Fraction(-v, pv) for f, v in acc.items()}
        else:
            expr[c] = {f: -v / pv for f, v in acc.items()}
    basis = []
    by_free: dict[int, dict] = defaultdict(dict)
    for c, e in expr.items():
        for f, v in e.items():
            by_free[f][c] = v
    for f in free:
        vec = dict(by_free.get(f, {}))
        vec[f] = 1
        if integral:
            vec = _integral_row(vec)
        basis.append(vec)
    return basis


@dataclass
class Subspace:
    """A subspace of coordinate space given by a linearly independent basis."""

    ambient_dim: int
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[dict]) -> "Subspace":
        """Subspace spanned by ``vectors`` (an independent subset is kept)."""
        eb = EchelonBasis()
        kept = [dict(v) for v in vectors if eb.add(v)]
        return cls(ambient_dim, kept)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [{i: 1} for i in range(n)])

    def contains(self, v: dict) -> bool:
        eb = EchelonBasis(self.basis)
        return not eb.add(v)

    def is_independent(self) -> bool:
        return rank_of_vectors(self.basis) == len(self.basis)

    def dense_basis(self) -> list[list]:
        return [[v.get(i, 0) for i in range(self.ambient_dim)] for v in self.basis]


def kernel_basis(M: SparseMatrix) -> Subspace:
    """Basis of the null space of ``M``."""
    return Subspace(M.cols, _nullspace(M.row_dicts(), M.cols))


def image_basis(M: SparseMatrix) -> Subspace:
    return Subspace.span(M.rows, M.columns)


def check_composition(d_out: SparseMatrix, d_in: SparseMatrix) -> None:
    if d_out.cols != d_in.rows:
        raise ValueError(f"incompatible shapes {d_out.shape} and {d_in.shape}")
    for j, col in enumerate(d_in.columns):
        img = d_out.apply(col)
        if img:
            raise CompositionNonzero(f"d_out * d_in has nonzero column {j}: {img}")


def homology_dim(d_in: SparseMatrix, d_out: SparseMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for the two-step complex d_in then d_out."""
    check_composition(d_out, d_in)
    return d_out.cols - rank(d_out) - rank(d_in)


def quotient_dim(ambient: Subspace, sub: Subspace) -> int:
    eb = EchelonBasis(ambient.basis)
    for v in sub.basis:
        if eb.add(v):
            raise NotContained(f"vector {v} does not lie in the ambient subspace")
    return ambient.dim - sub.dim


class EchelonBasis:
    """Incrementally maintained echelon basis supporting span-membership tests.

    Vectors are reduced by leading key (the largest index present); with
    integer input the reduction stays fraction-free.
    """

    def __init__(self, vectors: Iterable[dict] = ()):
        self._pivots: dict[Any, dict] = {}
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self._pivots)

    def reduce(self, v: dict) -> dict:
        w = _integral_row(v) if v else {}
        integral = w is not None
        if not integral:
            w = dict(v)
        while w:
            lead = max(w)
            p = self._pivots.get(lead)
            if p is None:
                return w
            a, b = p[lead], w[lead]
            if integral and all(isinstance(x, int) for x in p.values()):
                g = math.gcd(a, b)
                a, b = a // g, b // g
                w = add_into(scale(w, a), p, -b)
                w = _integral_row(w) if w else w
            else:
                integral = False
                f = Fraction(-b, a) if isinstance(a, int) and isinstance(b, int) else -b / a
                w = add_into(dict(w), p, f)
        return w

    def add(self, v: dict) -> bool:
        """Insert ``v``; return True if it was independent of the current span."""
        w = self.reduce(v)
        if not w:
            return False
        self._pivots[max(w)] = w
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)
