"""Hochschild complex, cyclic bicomplex and the normalized mixed complex.

Chains are sparse dicts keyed by basis elements.  A Hochschild chain of
degree n is a tuple ``(a_0, ..., a_n)`` of algebra basis indices.  Elements of
the total complex of the cyclic bicomplex are ``(q, tensor)`` with ``q`` the
column; elements of the total complex of the mixed complex are ``(p, tensor)``
with the tensor in degree ``n - 2p``.

Every complex is split into blocks by the grading key of the algebra (the sum
of the keys of the tensor factors).  All operators preserve the key, so ranks
and homology are computed block by block.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .algebra import FinCommAlgebra
from .errors import BudgetExceeded, CompositionNonzero, FieldMismatch, OracleMismatch
from .linalg import SparseMatrix, rank

#: largest number of columns allowed in a single block
DEFAULT_BLOCK_BUDGET = 8 ** 5
#: largest number of basis chains enumerated for one complex
DEFAULT_TOTAL_BUDGET = 400_000


# -- operators on tensors ----------------------------------------------------

def _acc(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def hochschild_b(A: FinCommAlgebra, a: tuple) -> dict:
    """b(a_0 (x) ... (x) a_n) with the last term a_n a_0 (x) a_1 ... a_{n-1}."""
    n = len(a) - 1
    out: dict = {}
    if n == 0:
        return out
    mult = A.mult
    for i in range(n):
        for p, c in mult[a[i]][a[i + 1]].items():
            _acc(out, a[:i] + (p,) + a[i + 2:], -c if i & 1 else c)
    for p, c in mult[a[n]][a[0]].items():
        _acc(out, (p,) + a[1:n], -c if n & 1 else c)
    return out


def hochschild_bprime(A: FinCommAlgebra, a: tuple) -> dict:
    """b' : the first n face maps of b (no wrap-around term)."""
    n = len(a) - 1
    out: dict = {}
    mult = A.mult
    for i in range(n):
        for p, c in mult[a[i]][a[i + 1]].items():
            _acc(out, a[:i] + (p,) + a[i + 2:], -c if i & 1 else c)
    return out


def cyclic_t(a: tuple) -> dict:
    """t(a_0, ..., a_n) = (-1)^n (a_n, a_0, ..., a_{n-1})."""
    n = len(a) - 1
    return {(a[n],) + a[:n]: -1 if n & 1 else 1}


def norm_N(a: tuple) -> dict:
    """N = 1 + t + ... + t^n."""
    n = len(a) - 1
    out: dict = {}
    cur, c = a, 1
    for _ in range(n + 1):
        _acc(out, cur, c)
        cur = (cur[n],) + cur[:n]
        if n & 1:
            c = -c
    return out


def extra_degeneracy(A: FinCommAlgebra, a: tuple) -> dict:
    """s(a_0, ..., a_n) = (1, a_0, ..., a_n), a contracting homotopy for b'."""
    return {(A.unit_index,) + a: 1}


def connes_B(A: FinCommAlgebra, a: tuple) -> dict:
    """Connes' operator on normalized chains.

    B(a_0, ..., a_n) = sum_i (-1)^{ni} (1, a_i, ..., a_n, a_0, ..., a_{i-1}),
    with degenerate terms (a unit in positions >= 1) dropped.
    """
    n = len(a) - 1
    u = A.unit_index
    out: dict = {}
    if a[0] == u:
        return out
    for i in range(n + 1):
        tail = a[i:] + a[:i]
        _acc(out, (u,) + tail, -1 if (n * i) & 1 else 1)
    return out


def normalize(A: FinCommAlgebra, chain: dict) -> dict:
    """Project onto normalized chains (drop tensors with a unit in a slot >= 1)."""
    u = A.unit_index
    return {t: c for t, c in chain.items() if u not in t[1:]}


def apply_op(op: Callable[[tuple], dict], chain: dict) -> dict:
    out: dict = {}
    for t, c in chain.items():
        for s, d in op(t).items():
            _acc(out, s, c * d)
    return out


# -- generic blocked chain complex ---------------------------------------------

@dataclass
class ChainComplex:
    """A finite chain complex with bases split into blocks.

    ``bases[n][key]`` lists the basis elements of degree n in block ``key``;
    ``diff(n, element)`` returns the boundary as a dict in degree n-1.
    Boundary matrices are assembled lazily per (degree, block) and cached.
    """

    bases: dict
    diff: Callable
    top: int
    name: str = ""
    _index: dict = field(default_factory=dict, repr=False)
    _mats: dict = field(default_factory=dict, repr=False)
    _ranks: dict = field(default_factory=dict, repr=False)

    def degrees(self) -> range:
        return range(0, self.top + 1)

    def dim(self, n: int) -> int:
        return sum(len(v) for v in self.bases.get(n, {}).values())

    def dims(self) -> list[int]:
        return [self.dim(n) for n in self.degrees()]

    def keys(self, n: int | None = None) -> list:
        if n is None:
            ks = set()
            for blocks in self.bases.values():
                ks.update(blocks)
            return sorted(ks)
        return sorted(self.bases.get(n, {}))

    def basis(self, n: int, key) -> list:
        return self.bases.get(n, {}).get(key, [])

    def index(self, n: int, key) -> dict:
        ix = self._index.get((n, key))
        if ix is None:
            ix = {e: i for i, e in enumerate(self.basis(n, key))}
            self._index[(n, key)] = ix
        return ix

    def vector(self, n: int, key, chain: dict) -> dict:
        """Coordinates of a chain in the block basis."""
        ix = self.index(n, key)
        out = {}
        for e, c in chain.items():
            i = ix.get(e)
            if i is None:
                raise KeyError(f"{e!r} is not a basis element of degree {n}, block {key}")
            out[i] = c
        return out

    def chain(self, n: int, key, vec: dict) -> dict:
        basis = self.basis(n, key)
        return {basis[i]: c for i, c in vec.items()}

    def matrix_of(self, src_n: int, tgt_n: int, key, op: Callable) -> SparseMatrix:
        """Matrix of a block-preserving linear map given on basis elements."""
        tgt = self.index(tgt_n, key)
        cols = []
        for e in self.basis(src_n, key):
            col = {}
            for t, c in op(e).items():
                i = tgt.get(t)
                if i is None:
                    raise CompositionNonzero(f"{t!r} leaves the complex (block {key}, degree {tgt_n})")
                col[i] = c
            cols.append(col)
        return SparseMatrix(len(tgt), len(cols), tuple(cols))

    def boundary(self, n: int, key) -> SparseMatrix:
        """d_n : C_n -> C_{n-1} on one block."""
        if (n, key) not in self._mats:
            if n <= 0 or n > self.top:
                rows = len(self.basis(n - 1, key)) if n > 0 else 0
                self._mats[(n, key)] = SparseMatrix.zero(rows, len(self.basis(n, key)))
            else:
                self._mats[(n, key)] = self.matrix_of(n, n - 1, key, lambda e: self.diff(n, e))
        return self._mats[(n, key)]

    def full_boundary(self, n: int) -> SparseMatrix:
        """d_n assembled over all blocks (block-diagonal, blocks in sorted key order)."""
        from .linalg import block_diagonal
        keys = sorted(set(self.bases.get(n, {})) | set(self.bases.get(n - 1, {})))
        return block_diagonal([self.boundary(n, k) for k in keys])

    def boundary_rank(self, n: int, key) -> int:
        r = self._ranks.get((n, key))
        if r is None:
            r = rank(self.boundary(n, key))
            self._ranks[(n, key)] = r
        return r

    def check_squares_zero(self) -> None:
        for n in range(2, self.top + 1):
            for key in self.keys(n):
                d2 = self.boundary(n - 1, key) @ self.boundary(n, key)
                if not d2.is_zero():
                    raise CompositionNonzero(f"{self.name}: d^2 != 0 in degree {n}, block {key}")

    def homology_dim(self, n: int, key=None, workers: int = 1) -> int:
        """dim H_n (one block, or all blocks); needs degree n+1 to be present."""
        if n + 1 > self.top:
            raise ValueError(f"{self.name}: degree {n + 1} not built (top = {self.top})")
        keys = [key] if key is not None else self.keys(n)
        if workers > 1:
            self._prefetch_ranks([(m, k) for k in keys for m in (n, n + 1)], workers)
        total = 0
        for k in keys:
            total += len(self.basis(n, k)) - self.boundary_rank(n, k) - self.boundary_rank(n + 1, k)
        return total

    def homology_dims(self, n_max: int | None = None, workers: int = 1) -> list[int]:
        n_max = self.top - 1 if n_max is None else n_max
        if workers > 1:
            jobs = [(m, k) for m in range(1, n_max + 2) for k in self.keys(m)]
            self._prefetch_ranks(jobs, workers)
        return [self.homology_dim(n) for n in range(n_max + 1)]

    def _prefetch_ranks(self, jobs, workers):
        todo = [(n, k) for n, k in jobs if (n, k) not in self._ranks and 0 < n <= self.top]
        if not todo:
            return
        mats = [self.boundary(n, k) for n, k in todo]
        from concurrent.futures import ProcessPoolExecutor
        from .linalg import _rank_job
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, r in zip(todo, pool.map(_rank_job, mats, chunksize=1)):
                self._ranks[job] = r


def _tensor_key(A: FinCommAlgebra):
    if not A.degrees:
        return lambda t: ()
    degs = A.degrees
    width = len(degs[0])
    if width == 0:
        return lambda t: ()
    if width == 1:
        return lambda t: (sum(degs[i][0] for i in t),)

    def key(t):
        acc = [0] * width
        for i in t:
            d = degs[i]
            for j in range(width):
                acc[j] += d[j]
        return tuple(acc)
    return key


def enumerate_tensors(A: FinCommAlgebra, n: int, normalized: bool,
                      select: Callable[[tuple], bool] | None = None,
                      budget: int = DEFAULT_BLOCK_BUDGET,
                      total_budget: int = DEFAULT_TOTAL_BUDGET,
                      max_weight: int | None = None) -> dict:
    """Basis tensors of degree n grouped by block key.

    ``max_weight`` keeps only tensors of total weight at most that bound
    (each weight is a union of blocks, so this is a subcomplex); the
    generation is pruned instead of filtered.
    """
    if A.field.transcendental:
        raise FieldMismatch("chain complexes are built over Q only (the Q-linear complex over Q(t) is infinite)")
    tail = A.nonunit if normalized else tuple(range(A.dim))
    if max_weight is None:
        count = A.dim * len(tail) ** n
        if count > total_budget:
            raise BudgetExceeded(f"degree {n} has {count} chains, above the budget of {total_budget}")
        it = product(range(A.dim), *([tail] * n))
    else:
        it = _weight_bounded(A, n, tail, max_weight, total_budget)
    keyf = _tensor_key(A)
    blocks: dict = defaultdict(list)
    for t in it:
        if select is not None and not select(t):
            continue
        blocks[keyf(t)].append(t)
    for k, v in blocks.items():
        if len(v) > budget:
            raise BudgetExceeded(f"block {k} in degree {n} has {len(v)} chains (budget {budget})")
    return dict(blocks)


def _weight_bounded(A: FinCommAlgebra, n: int, tail: tuple, bound: int, total_budget: int):
    w = A.weights
    head = sorted(range(A.dim), key=lambda i: (w[i], i))
    tail = sorted(tail, key=lambda i: (w[i], i))
    out = []

    def rec(prefix, left, slots):
        if slots == 0:
            out.append(tuple(prefix))
            if len(out) > total_budget:
                raise BudgetExceeded(f"degree {n} exceeds the budget of {total_budget} chains")
            return
        for i in tail:
            if w[i] > left:
                break
            prefix.append(i)
            rec(prefix, left - w[i], slots - 1)
            prefix.pop()

    for i in head:
        if w[i] > bound:
            break
        rec([i], bound - w[i], n)
    out.sort()
    return out


def bar_complex(A: FinCommAlgebra, n_max: int, normalized: bool = False,
                select: Callable[[tuple], bool] | None = None,
                budget: int = DEFAULT_BLOCK_BUDGET,
                max_weight: int | None = None) -> ChainComplex:
    """Hochschild complex C(A) in degrees 0..n_max.

    ``normalized`` passes to the quotient by degenerate chains (same homology).
    ``select`` restricts to the span of the tensors it accepts, which must be a
    subcomplex (a boundary leaving it raises).
    """
    bases = {n: enumerate_tensors(A, n, normalized, select, budget, max_weight=max_weight)
             for n in range(n_max + 1)}
    if normalized:
        def diff(n, t):
            return normalize(A, hochschild_b(A, t))
    else:
        def diff(n, t):
            return hochschild_b(A, t)
    cx = ChainComplex(bases, diff, n_max, name="normalized Hochschild" if normalized else "Hochschild")
    cx.algebra = A
    cx.normalized = normalized
    return cx


# -- cyclic bicomplex ----------------------------------------------------------

class CyclicBicomplex:
    """The first-quadrant bicomplex CC(A) and its total complex.

    Column q holds A^{(x)(n+1)} in row n.  Even columns carry b, odd columns
    carry -b'; the horizontal map leaving an odd column is 1 - t and the one
    leaving an even column q >= 2 is N.
    """

    def __init__(self, A: FinCommAlgebra, n_max: int,
                 select: Callable[[tuple], bool] | None = None,
                 budget: int = DEFAULT_BLOCK_BUDGET,
                 max_weight: int | None = None):
        self.algebra = A
        self.n_max = n_max
        self.rows = {m: enumerate_tensors(A, m, False, select, budget, max_weight=max_weight)
                     for m in range(n_max + 1)}
        bases: dict = {}
        for n in range(n_max + 1):
            blocks: dict = defaultdict(list)
            for q in range(n + 1):
                for key, tensors in self.rows[n - q].items():
                    blocks[key].extend((q, t) for t in tensors)
            for key, v in blocks.items():
                if len(v) > budget:
                    raise BudgetExceeded(f"Tot CC block {key} in degree {n} has {len(v)} chains")
            bases[n] = dict(blocks)
        self.tot = ChainComplex(bases, self._tot_diff, n_max, name="Tot CC")

    def vertical(self, q: int, t: tuple) -> dict:
        A = self.algebra
        if q % 2 == 0:
            return hochschild_b(A, t)
        return {s: -c for s, c in hochschild_bprime(A, t).items()}

    def horizontal(self, q: int, t: tuple) -> dict:
        if q == 0:
            return {}
        if q % 2 == 1:
            out = {t: 1}
            for s, c in cyclic_t(t).items():
                _acc(out, s, -c)
            return out
        return norm_N(t)

    def _tot_diff(self, n: int, e) -> dict:
        q, t = e
        out: dict = {}
        if len(t) > 1:
            for s, c in self.vertical(q, t).items():
                _acc(out, (q, s), c)
        for s, c in self.horizontal(q, t).items():
            _acc(out, (q - 1, s), c)
        return out

    # operator matrices on a single row (all blocks assembled)
    def _row_matrix(self, m_src: int, m_tgt: int, op) -> SparseMatrix:
        src = [t for k in sorted(self.rows[m_src]) for t in self.rows[m_src][k]]
        tgt = [t for k in sorted(self.rows[m_tgt]) for t in self.rows[m_tgt][k]]
        ix = {t: i for i, t in enumerate(tgt)}
        cols = [{ix[s]: c for s, c in op(t).items()} for t in src]
        return SparseMatrix(len(tgt), len(src), tuple(cols))

    def b(self, m: int) -> SparseMatrix:
        return self._row_matrix(m, m - 1, lambda t: hochschild_b(self.algebra, t))

    def bprime(self, m: int) -> SparseMatrix:
        return self._row_matrix(m, m - 1, lambda t: hochschild_bprime(self.algebra, t))

    def t(self, m: int) -> SparseMatrix:
        return self._row_matrix(m, m, cyclic_t)

    def one_minus_t(self, m: int) -> SparseMatrix:
        return SparseMatrix.identity(self.t(m).rows) - self.t(m)

    def N(self, m: int) -> SparseMatrix:
        return self._row_matrix(m, m, norm_N)

    def check_invariants(self) -> None:
        """b^2 = 0, b'^2 = 0, the two commutation rules, and Tot^2 = 0."""
        for m in range(2, self.n_max + 1):
            if not (self.b(m - 1) @ self.b(m)).is_zero():
                raise CompositionNonzero(f"b^2 != 0 in row {m}")
            if not (self.bprime(m - 1) @ self.bprime(m)).is_zero():
                raise CompositionNonzero(f"b'^2 != 0 in row {m}")
        for m in range(1, self.n_max + 1):
            if not (self.b(m) @ self.one_minus_t(m) - self.one_minus_t(m - 1) @ self.bprime(m)).is_zero():
                raise CompositionNonzero(f"b(1-t) != (1-t)b' in row {m}")
            if not (self.bprime(m) @ self.N(m) - self.N(m - 1) @ self.b(m)).is_zero():
                raise CompositionNonzero(f"b'N != Nb in row {m}")
        self.tot.check_squares_zero()

    def homology_dims(self, n_max: int | None = None, workers: int = 1) -> list[int]:
        return self.tot.homology_dims(n_max if n_max is not None else self.n_max - 1, workers)


def cyclic_bicomplex(A: FinCommAlgebra, n_max: int, **kw) -> CyclicBicomplex:
    return CyclicBicomplex(A, n_max, **kw)


# -- mixed complex -------------------------------------------------------------

class MixedComplex:
    """Normalized Hochschild chains with b and Connes' B, and the total complex.

    The total complex in degree n is the sum over p >= 0 of the normalized
    chains of degree n - 2p, with differential b + B.
    """

    def __init__(self, A: FinCommAlgebra, n_max: int,
                 select: Callable[[tuple], bool] | None = None,
                 budget: int = DEFAULT_BLOCK_BUDGET,
                 max_weight: int | None = None):
        self.algebra = A
        self.n_max = n_max
        self.hochschild = bar_complex(A, n_max, normalized=True, select=select, budget=budget,
                                      max_weight=max_weight)
        bases: dict = {}
        for n in range(n_max + 1):
            blocks: dict = defaultdict(list)
            for p in range(n // 2 + 1):
                for key, tensors in self.hochschild.bases[n - 2 * p].items():
                    blocks[key].extend((p, t) for t in tensors)
            bases[n] = dict(blocks)
        self.tot = ChainComplex(bases, self._tot_diff, n_max, name="Tot (b, B)")

    def b_chain(self, t: tuple) -> dict:
        return normalize(self.algebra, hochschild_b(self.algebra, t))

    def B_chain(self, t: tuple) -> dict:
        return connes_B(self.algebra, t)

    def _tot_diff(self, n: int, e) -> dict:
        p, t = e
        out: dict = {}
        for s, c in self.b_chain(t).items():
            _acc(out, (p, s), c)
        if p >= 1:
            for s, c in self.B_chain(t).items():
                _acc(out, (p - 1, s), c)
        return out

    def B_matrix(self, m: int, key) -> SparseMatrix:
        """B : C̄_m -> C̄_{m+1} on one block."""
        return self.hochschild.matrix_of(m, m + 1, key, self.B_chain)

    def check_invariants(self) -> None:
        """b^2 = 0, B^2 = 0, bB + Bb = 0 blockwise, and the total differential squares to zero."""
        H = self.hochschild
        H.check_squares_zero()
        for m in range(0, self.n_max - 1):
            for key in H.keys(m):
                B1 = self.B_matrix(m, key)
                B2 = self.B_matrix(m + 1, key)
                if not (B2 @ B1).is_zero():
                    raise CompositionNonzero(f"B^2 != 0 from degree {m}")
        for m in range(1, self.n_max):
            for key in H.keys(m):
                lhs = H.boundary(m + 1, key) @ self.B_matrix(m, key)
                rhs = self.B_matrix(m - 1, key) @ H.boundary(m, key)
                if not (lhs + rhs).is_zero():
                    raise CompositionNonzero(f"bB + Bb != 0 in degree {m}")
        self.tot.check_squares_zero()

    def homology_dims(self, n_max: int | None = None, workers: int = 1) -> list[int]:
        return self.tot.homology_dims(n_max if n_max is not None else self.n_max - 1, workers)


def mixed_complex(A: FinCommAlgebra, n_max: int, **kw) -> MixedComplex:
    return MixedComplex(A, n_max, **kw)


# -- homology front ends -------------------------------------------------------

@dataclass
class HomologyGroup:
    degree: int
    dim: int
    representatives: list | None = None


def _representatives(cx: ChainComplex, n: int) -> list[dict]:
    from .linalg import EchelonBasis, kernel_basis
    reps = []
    for key in cx.keys(n):
        Z = kernel_basis(cx.boundary(n, key)).basis
        eb = EchelonBasis(cx.boundary(n + 1, key).columns)
        for z in Z:
            if eb.add(z):
                reps.append(cx.chain(n, key, z))
    return reps


def hochschild_homology(A: FinCommAlgebra, n: int, normalized: bool = False,
                        representatives: bool = False, workers: int = 1) -> HomologyGroup:
    """HH_n(A) from the bar complex, with optional cycle representatives."""
    cx = bar_complex(A, n + 1, normalized=normalized)
    dim = cx.homology_dim(n, workers=workers)
    reps = _representatives(cx, n) if representatives else None
    return HomologyGroup(n, dim, reps)


def hochschild_dims(A: FinCommAlgebra, n_max: int, normalized: bool = False,
                    workers: int = 1) -> list[int]:
    return bar_complex(A, n_max + 1, normalized=normalized).homology_dims(n_max, workers)


def cyclic_homology(A: FinCommAlgebra, n: int, representatives: bool = False,
                    check_oracle: bool = True, workers: int = 1) -> HomologyGroup:
    """HC_n(A) from Tot CC(A), cross-checked against the (b, B) total complex."""
    cc = CyclicBicomplex(A, n + 1)
    dim = cc.tot.homology_dim(n, workers=workers)
    if check_oracle:
        other = MixedComplex(A, n + 1).tot.homology_dim(n, workers=workers)
        if other != dim:
            raise OracleMismatch(f"HC_{n}: Tot CC gives {dim}, mixed complex gives {other}")
    reps = _representatives(cc.tot, n) if representatives else None
    return HomologyGroup(n, dim, reps)


def cyclic_dims(A: FinCommAlgebra, n_max: int, check_oracle: bool = True,
                workers: int = 1) -> list[int]:
    dims = CyclicBicomplex(A, n_max + 1).homology_dims(n_max, workers)
    if check_oracle:
        other = MixedComplex(A, n_max + 1).homology_dims(n_max, workers)
        if other != dims:
            raise OracleMismatch(f"Tot CC gives {dims}, mixed complex gives {other}")
    return dims
