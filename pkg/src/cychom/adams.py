"""Adams operations, Eulerian idempotents and the Hodge decomposition.

The symmetric group S_n acts on Hochschild n-chains by permuting the last n
tensor factors with a sign: ``sigma . (a_0, a_1..a_n)`` puts ``a_j`` in slot
``sigma(j)`` and multiplies by ``sgn(sigma)``.  The Adams element ``s_m`` of
Q[S_n] is the signed sum of all m-block shuffles; on chains it is the
operator psi^m.  It decomposes as ``s_m = sum_i m^i e^(i)`` with orthogonal
idempotents e^(i) (i = 1..n), recovered here by Vandermonde interpolation.

Which of the two candidate conventions (shuffles, or their inverses) commutes
with b, and which written eigenvalue ladder matches the top-degree
identification with differential forms, is decided at runtime by
:func:`shuffle_convention` and :func:`pin_ladder`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .algebra import FinCommAlgebra, GradedPolySlice, builtin_algebra
from .complexes import ChainComplex, MixedComplex, _acc, bar_complex
from .errors import CompositionNonzero, SpectrumMismatch
from .linalg import EchelonBasis, SparseMatrix, kernel_basis, rank

#: written eigenvalue conventions: name -> exponent offset (psi^m = m^(l + offset))
LADDERS = {"m^l": 0, "m^(l+1)": 1}


# -- the group algebra Q[S_n] ------------------------------------------------

def perm_sign(p: tuple) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def perm_inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_compose(p: tuple, q: tuple) -> tuple:
    """p after q."""
    return tuple(p[q[i]] for i in range(len(q)))


def group_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for p, a in x.items():
        for q, b in y.items():
            _acc(out, perm_compose(p, q), a * b)
    return out


@lru_cache(maxsize=None)
def shuffle_element(n: int, m: int, inverse: bool = False) -> tuple:
    """s_m in Q[S_n] as a tuple of (permutation, coefficient) pairs.

    A function f from the n positions to m labels determines the m-block
    shuffle sending the consecutive blocks of sizes |f^-1(1)|, |f^-1(2)|, ...
    onto the positions f^-1(1), f^-1(2), ... in increasing order.  Summing
    over all f counts every shuffle of every composition once.
    """
    acc: dict = {}
    for f in product(range(m), repeat=n):
        targets = [j for c in range(m) for j in range(n) if f[j] == c]
        p = tuple(targets)  # block element number k goes to slot targets[k]
        if inverse:
            p = perm_inverse(p)
        _acc(acc, p, 1)
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def eulerian_idempotents(n: int, inverse: bool = False) -> tuple:
    """(e^(1), ..., e^(n)) in Q[S_n] from s_m = sum_i m^i e^(i), m = 1..n."""
    if n == 0:
        return ()
    # invert the Vandermonde matrix V[m-1][i-1] = m^i by Gauss-Jordan over Q
    V = [[Fraction(m) ** i for i in range(1, n + 1)] + [Fraction(int(r == m - 1)) for r in range(n)]
         for m in range(1, n + 1)]
    for c in range(n):
        piv = next(r for r in range(c, n) if V[r][c])
        V[c], V[piv] = V[piv], V[c]
        pv = V[c][c]
        V[c] = [x / pv for x in V[c]]
        for r in range(n):
            if r != c and V[r][c]:
                f = V[r][c]
                V[r] = [x - f * y for x, y in zip(V[r], V[c])]
    W = [row[n:] for row in V]  # W[i-1][m-1]: e^(i) = sum_m W * s_m
    elements = [dict(shuffle_element(n, m, inverse)) for m in range(1, n + 1)]
    out = []
    for i in range(n):
        e: dict = {}
        for m in range(n):
            c = W[i][m]
            if c:
                for p, a in elements[m].items():
                    _acc(e, p, c * a)
        out.append(tuple(sorted((p, _norm(v)) for p, v in e.items())))
    return tuple(out)


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


# -- action on chains ------------------------------------------------------

def act(element, a: tuple) -> dict:
    """Action of a group-algebra element (iterable of (perm, coeff)) on a tensor."""
    n = len(a) - 1
    out: dict = {}
    for p, c in element:
        new = [None] * n
        for j in range(n):
            new[p[j]] = a[j + 1]
        _acc(out, (a[0],) + tuple(new), c * perm_sign(p))
    return out


def diagonal_trace(element, a: tuple):
    """Coefficient of ``a`` in element . a (used for traces)."""
    return act(element, a).get(a, 0)


def adams_element(n: int, m: int) -> tuple:
    return shuffle_element(n, m, shuffle_convention())


def adams_operator(A: FinCommAlgebra, n: int, m: int, normalized: bool = False,
                   cx: ChainComplex | None = None) -> dict:
    """psi^m on the degree-n chains, as {block key: SparseMatrix}."""
    if n < 1:
        raise ValueError("Adams operations are defined on degrees n >= 1")
    cx = cx or bar_complex(A, n, normalized=normalized)
    el = adams_element(n, m)
    return {k: cx.matrix_of(n, n, k, lambda a: act(el, a)) for k in cx.keys(n)}


# -- runtime convention checks ----------------------------------------------

@lru_cache(maxsize=None)
def shuffle_convention() -> bool:
    """Return ``inverse`` flag of the shuffle convention whose s_2 commutes with b.

    Tested on Q[x]/x^3 in degrees 2..3.  Raises SpectrumMismatch if neither does.
    """
    A = builtin_algebra("x3")
    cx = bar_complex(A, 3)
    ok = []
    for inverse in (False, True):
        good = True
        for n in (2, 3):
            el = shuffle_element(n, 2, inverse)
            el_low = shuffle_element(n - 1, 2, inverse)
            for k in cx.keys(n):
                P = cx.matrix_of(n, n, k, lambda a: act(el, a))
                Q = cx.matrix_of(n - 1, n - 1, k, lambda a: act(el_low, a))
                if not (cx.boundary(n, k) @ P - Q @ cx.boundary(n, k)).is_zero():
                    good = False
        ok.append(good)
    if ok[0]:
        return False
    if ok[1]:
        return True
    raise SpectrumMismatch("no shuffle convention commutes with the Hochschild boundary")


@dataclass(frozen=True)
class LadderPin:
    convention: str
    offset: int
    observed: dict       # (n, w) -> scalar by which psi^2 acts on HH_n of the slice
    rejected: tuple      # conventions that failed


@lru_cache(maxsize=None)
def pin_ladder() -> LadderPin:
    """Fix the eigenvalue ladder against HH_n = Omega^n for a smooth slice.

    For R = Q[x,y] (weight slice W = 3) and n = 1, 2 the top piece HH^(n)_n
    is all of HH_n, so psi^2 must act on the weight-w block of HH_n by
    2^(n + offset).  The offset that matches every observation wins.
    """
    R = GradedPolySlice(2, (1, 1), 3).algebra()
    cx = bar_complex(R, 3, normalized=True)
    observed = {}
    for n in (1, 2):
        el = shuffle_element(n, 2, shuffle_convention())
        for k in cx.keys(n):
            w = sum(k)
            if w == 0 or w > 3:
                continue
            lam = _homology_scalar(cx, n, k, lambda a: act(el, a),
                                   [2 ** (n + off) for off in LADDERS.values()])
            if lam is not None:
                observed[(n, w)] = lam
    good, bad = [], []
    for name, off in LADDERS.items():
        if observed and all(lam == 2 ** (n + off) for (n, _), lam in observed.items()):
            good.append((name, off))
        else:
            bad.append(name)
    if len(good) != 1:
        raise SpectrumMismatch(f"eigenvalue ladder not pinned: observations {observed}")
    return LadderPin(good[0][0], good[0][1], observed, tuple(bad))


def acts_as_scalar(cx: ChainComplex, n: int, key, op, lam) -> bool:
    """True if ``op`` acts on H_n of one block as multiplication by ``lam``."""
    Z = kernel_basis(cx.boundary(n, key)).basis
    base = EchelonBasis(c for c in cx.boundary(n + 1, key).columns if c)
    M = cx.matrix_of(n, n, key, op)
    for z in Z:
        diff = dict(M.apply(z))
        for i, c in z.items():
            _acc(diff, i, -lam * c)
        if diff and base.reduce(diff):
            return False
    return True


def _homology_scalar(cx: ChainComplex, n: int, key, op, candidates):
    """The candidate scalar by which ``op`` acts on a nonzero block of H_n, if any."""
    if cx.homology_dim(n, key) == 0:
        return None
    for lam in candidates:
        if acts_as_scalar(cx, n, key, op, lam):
            return lam
    return "none"


# -- Hodge projectors -------------------------------------------------------

def projector_element(n: int, l: int) -> tuple:
    """Group-algebra element projecting onto the label-l eigenspace in degree n.

    Degree 0 carries only label 0 (the identity).  Labels follow the pinned
    ladder, so label l is e^(l + offset).
    """
    if n == 0:
        return (((), 1),) if l == 0 else ()
    i = l + pin_ladder().offset
    if 1 <= i <= n:
        return eulerian_idempotents(n, shuffle_convention())[i - 1]
    return ()


def labels(n: int) -> range:
    off = pin_ladder().offset
    if n == 0:
        return range(0, 1)
    return range(1 - off, n + 1 - off)


@dataclass
class HodgeProjectors:
    """Projector matrices P^(l) on degree-n chains, one dict of blocks per label."""

    degree: int
    matrices: dict          # label -> {block key: SparseMatrix}
    complex: ChainComplex

    def verify(self) -> None:
        """Idempotent, orthogonal, summing to the identity, commuting with b."""
        cx, n = self.complex, self.degree
        labs = list(self.matrices)
        for k in cx.keys(n):
            dim = len(cx.basis(n, k))
            total = SparseMatrix.zero(dim, dim)
            for l in labs:
                P = self.matrices[l][k]
                if not (P @ P - P).is_zero():
                    raise SpectrumMismatch(f"P^({l}) is not idempotent in degree {n}, block {k}")
                for l2 in labs:
                    if l2 != l and not (P @ self.matrices[l2][k]).is_zero():
                        raise SpectrumMismatch(f"P^({l}) P^({l2}) != 0 in degree {n}")
                total = total + P
            if not (total - SparseMatrix.identity(dim)).is_zero():
                raise SpectrumMismatch(f"projectors do not sum to the identity in degree {n}")
            if n >= 1:
                for l in labs:
                    low = projector_element(n - 1, l)
                    Q = cx.matrix_of(n - 1, n - 1, k, lambda a: act(low, a))
                    if not (cx.boundary(n, k) @ self.matrices[l][k] - Q @ cx.boundary(n, k)).is_zero():
                        raise CompositionNonzero(f"P^({l}) does not commute with b in degree {n}")


def hodge_projectors(A: FinCommAlgebra, n: int, normalized: bool = False,
                     verify: bool = True, cx: ChainComplex | None = None) -> HodgeProjectors:
    if n < 1:
        raise ValueError("Hodge projectors are built for degrees n >= 1")
    cx = cx or bar_complex(A, n, normalized=normalized)
    mats = {}
    for l in labels(n):
        el = projector_element(n, l)
        mats[l] = {k: cx.matrix_of(n, n, k, lambda a, el=el: act(el, a)) for k in cx.keys(n)}
    hp = HodgeProjectors(n, mats, cx)
    if verify:
        hp.verify()
    return hp


# -- eigenspace homology ----------------------------------------------------

def _trace(cx: ChainComplex, n: int, key, el) -> int:
    t = 0
    for a in cx.basis(n, key):
        t += diagonal_trace(el, a)
    if isinstance(t, Fraction):
        if t.denominator != 1:
            raise SpectrumMismatch(f"non-integral projector trace {t}")
        t = int(t)
    return t


def _eigen_dim(cx: ChainComplex, n: int, proj, trace) -> int:
    """dim H_n of the image of a chain-map projector.

    ``proj(m, key)`` gives the projector matrix in degree m on a block and
    ``trace(m, key)`` its trace (= rank, as it is idempotent).  The image of
    d_{n+1} restricted to the eigenspace equals P_n d_{n+1}, so only the
    projectors in degrees n-1 and n are needed.
    """
    total = 0
    for k in cx.keys(n):
        Pn = proj(n, k)
        tr = trace(n, k)
        r_out = rank(proj(n - 1, k) @ cx.boundary(n, k)) if n >= 1 else 0
        r_in = rank(Pn @ cx.boundary(n + 1, k)) if n + 1 <= cx.top else 0
        total += tr - r_out - r_in
    return total


def hh_eigen_dims(A: FinCommAlgebra, n: int, normalized: bool = True,
                  cx: ChainComplex | None = None) -> dict:
    """{label: dim HH^(label)_n(A)}."""
    cx = cx or bar_complex(A, n + 1, normalized=normalized)
    out = {}
    for l in labels(n):
        def proj(m, k, l=l):
            el = projector_element(m, l)
            return cx.matrix_of(m, m, k, lambda a: act(el, a))

        def trace(m, k, l=l):
            return _trace(cx, m, k, projector_element(m, l))
        out[l] = _eigen_dim(cx, n, proj, trace)
    return out


def mixed_projector_chain(mc: MixedComplex, l: int, e) -> dict:
    """Weight-l projector on the (b, B) total complex, applied to (p, tensor)."""
    p, a = e
    el = projector_element(len(a) - 1, l - p)
    return {(p, s): c for s, c in act(el, a).items()}


def hc_eigen_dims(A: FinCommAlgebra, n: int, mc: MixedComplex | None = None) -> dict:
    """{label: dim HC^(label)_n(A)} computed on the normalized mixed complex.

    The weight-l part of the total complex in degree n is the sum over p of
    e^(l - p) applied to normalized chains of degree n - 2p.
    """
    mc = mc or MixedComplex(A, n + 1)
    tot = mc.tot
    out = {}
    for l in range(0, n + 1):
        if l - pin_ladder().offset > n:
            continue

        def proj(m, k, l=l):
            return tot.matrix_of(m, m, k, lambda e: mixed_projector_chain(mc, l, e))

        def trace(m, k, l=l):
            t = 0
            for e in tot.basis(m, k):
                t += mixed_projector_chain(mc, l, e).get(e, 0)
            return int(t)
        out[l] = _eigen_dim(tot, n, proj, trace)
    return out


def eigenspace_homology(A: FinCommAlgebra, n: int, i: int, theory: str = "HH") -> int:
    """dim HH^(i)_n(A) or HC^(i)_n(A)."""
    theory = theory.upper()
    if theory == "HH":
        return hh_eigen_dims(A, n).get(i, 0)
    if theory == "HC":
        return hc_eigen_dims(A, n).get(i, 0)
    raise ValueError(f"theory must be HH or HC, not {theory!r}")


def check_mixed_compatibility(mc: MixedComplex, n_max: int) -> None:
    """B e^(j) = e^(j+1) B on normalized chains through degree n_max - 1."""
    H = mc.hochschild
    off = pin_ladder().offset
    for m in range(0, n_max):
        for k in H.keys(m):
            Bm = mc.B_matrix(m, k)
            for l in (labels(m) if m else [0]):
                lo = projector_element(m, l)
                hi = projector_element(m + 1, l + 1)
                Pl = H.matrix_of(m, m, k, lambda a: act(lo, a))
                Ph = H.matrix_of(m + 1, m + 1, k, lambda a: act(hi, a))
                if not (Bm @ Pl - Ph @ Bm).is_zero():
                    raise SpectrumMismatch(f"B does not raise the weight by one in degree {m} (offset {off})")
