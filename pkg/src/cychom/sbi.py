"""Connes' periodicity sequence realized on chains and checked for exactness.

Two realizations are provided.

On the total complex of the cyclic bicomplex: I includes a Hochschild chain
into column 0, S deletes columns 0 and 1 and shifts the rest two columns to
the left, and B sends a cycle z of degree n-1 to ``(1 - t) s N z_0``, where
z_0 is its column-0 part and s the extra degeneracy.  This is the connecting
map of the column filtration made explicit through the contraction of the
acyclic b' column.

On the normalized mixed complex (used for eigenspace refinements): I is the
inclusion at p = 0, S drops the p = 0 part and lowers p by one, and B is
Connes' operator applied to the p = 0 part.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .algebra import FinCommAlgebra
from .complexes import (ChainComplex, CyclicBicomplex, MixedComplex, _acc, bar_complex,
                        connes_B, cyclic_t, extra_degeneracy, norm_N)
from .errors import ExactnessFailure
from .linalg import kernel_basis, rank_of_vectors


@dataclass
class NodeVerdict:
    node: str
    composite_zero: bool
    dim_image_in: int
    dim_kernel_out: int
    dim_homology: int

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.dim_image_in == self.dim_kernel_out

    def as_dict(self) -> dict:
        return {"node": self.node, "exact": self.exact, "composite_zero": self.composite_zero,
                "dim_image_in": self.dim_image_in, "dim_kernel_out": self.dim_kernel_out,
                "dim_homology": self.dim_homology}


@dataclass
class SBIWitness:
    """Exactness verdicts of the realized sequence through degree ``n_max``."""

    n_max: int
    eigen: int | None
    nodes: list = field(default_factory=list)
    hh: dict = field(default_factory=dict)   # degree -> dim (of the eigenpiece if eigen)
    hc: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(v.exact for v in self.nodes)

    def first_failure(self) -> NodeVerdict | None:
        return next((v for v in self.nodes if not v.exact), None)


# -- a complex restricted to (possibly) a projector image ---------------------

class _Piece:
    """Cycles and boundaries of one complex in one degree and block, as spanning sets.

    ``proj`` (optional) is a chain-map projector given on basis elements; the
    piece is then the homology of its image.
    """

    def __init__(self, cx: ChainComplex, n: int, key, proj: Callable | None = None):
        self.cx, self.n, self.key = cx, n, key
        basis = cx.basis(n, key)
        Z = [cx.chain(n, key, z) for z in kernel_basis(cx.boundary(n, key)).basis] if basis else []
        Bd = [cx.chain(n, key, c) for c in cx.boundary(n + 1, key).columns if c] if basis else []
        if proj is not None:
            Z = [_apply(proj, z) for z in Z]
            Bd = [_apply(proj, b) for b in Bd]
        self.cycles = [z for z in Z if z]
        self.boundaries = [b for b in Bd if b]
        self._rb = None

    def coords(self, chain: dict) -> dict:
        return self.cx.vector(self.n, self.key, chain)

    @property
    def rank_boundaries(self) -> int:
        if self._rb is None:
            self._rb = rank_of_vectors(self.coords(b) for b in self.boundaries)
        return self._rb

    def image_dim(self, chains: list) -> int:
        """dim of the span of the classes of ``chains`` (cycles) in homology."""
        chains = [c for c in chains if c]
        if not chains:
            return 0
        vs = [self.coords(b) for b in self.boundaries] + [self.coords(c) for c in chains]
        return rank_of_vectors(vs) - self.rank_boundaries

    @property
    def homology_dim(self) -> int:
        return self.image_dim(self.cycles)


def _apply(op: Callable, chain: dict) -> dict:
    out: dict = {}
    for e, c in chain.items():
        for f, d in op(e).items():
            _acc(out, f, c * d)
    return out


def _node(name: str, X: _Piece | None, Y: _Piece, Z: _Piece | None, f: Callable, g: Callable) -> NodeVerdict:
    """Exactness of H(X) -f-> H(Y) -g-> H(Z) at H(Y)."""
    fx = [_apply(f, z) for z in X.cycles] if X is not None else []
    hy = Y.homology_dim
    if Z is None:
        im_g = 0
        comp = True
    else:
        gy = [_apply(g, y) for y in Y.cycles]
        im_g = Z.image_dim(gy)
        comp = Z.image_dim([_apply(g, c) for c in fx]) == 0
    im_f = Y.image_dim(fx)
    return NodeVerdict(name, comp, im_f, hy - im_g, hy)


# -- bicomplex realization ---------------------------------------------------

class _TotMaps:
    def __init__(self, A: FinCommAlgebra, cc: CyclicBicomplex):
        self.A, self.cc = A, cc

    def I(self, t: tuple) -> dict:
        return {(0, t): 1}

    def S(self, e) -> dict:
        q, t = e
        return {(q - 2, t): 1} if q >= 2 else {}

    def B(self, e) -> dict:
        q, t = e
        if q != 0:
            return {}
        out: dict = {}
        for s, c in norm_N(t).items():
            for u, d in extra_degeneracy(self.A, s).items():
                _acc(out, u, c * d)
                for v, e2 in cyclic_t(u).items():
                    _acc(out, v, -c * d * e2)
        return out


def sbi_sequence(A: FinCommAlgebra, n_max: int, eigen: int | None = None,
                 raise_on_failure: bool = True) -> SBIWitness:
    """Realize ... -> HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1} -> ... through degree n_max.

    With ``eigen = i`` the weight-refined ladder
    HH^(i)_n -> HC^(i)_n -> HC^(i-1)_{n-2} -> HH^(i)_{n-1} is checked instead,
    on the normalized mixed complex.
    """
    if eigen is None:
        w = _sbi_bicomplex(A, n_max)
    else:
        w = _sbi_mixed(A, n_max, eigen)
    bad = w.first_failure()
    if bad is not None and raise_on_failure:
        raise ExactnessFailure(f"SBI sequence not exact at {bad.node}: {bad.as_dict()}", node=bad.node)
    return w


def _sbi_bicomplex(A: FinCommAlgebra, n_max: int) -> SBIWitness:
    H = bar_complex(A, n_max + 1)
    cc = CyclicBicomplex(A, n_max + 1)
    T = cc.tot
    maps = _TotMaps(A, cc)
    w = SBIWitness(n_max, None)
    keys = sorted(set(H.keys()) | set(T.keys()))
    for n in range(0, n_max + 1):
        w.hh[n] = H.homology_dim(n)
        w.hc[n] = T.homology_dim(n)
    for key in keys:
        hh = {n: _Piece(H, n, key) for n in range(n_max + 1)}
        hc = {n: _Piece(T, n, key) for n in range(n_max + 1)}
        for n in range(0, n_max + 1):
            # at HH_n: HC_{n-1} -B-> HH_n -I-> HC_n
            _collect(w, f"HH_{n}", key, _node(f"HH_{n}", hc.get(n - 1), hh[n], hc[n], maps.B, maps.I))
            # at HC_n: HH_n -I-> HC_n -S-> HC_{n-2}
            _collect(w, f"HC_{n}", key, _node(f"HC_{n}", hh[n], hc[n], hc.get(n - 2), maps.I, maps.S))
            # at HC_{n-2} as the target of S: HC_n -S-> HC_{n-2} -B-> HH_{n-1}
            if n >= 2:
                _collect(w, f"HC_{n - 2}<-S", key,
                         _node(f"HC_{n - 2}<-S", hc[n], hc[n - 2], hh[n - 1], maps.S, maps.B))
    return w


def _collect(w: SBIWitness, name: str, key, v: NodeVerdict) -> None:
    """Merge per-block verdicts into one verdict per node."""
    for old in w.nodes:
        if old.node == name:
            old.composite_zero = old.composite_zero and v.composite_zero
            old.dim_image_in += v.dim_image_in
            old.dim_kernel_out += v.dim_kernel_out
            old.dim_homology += v.dim_homology
            return
    w.nodes.append(v)


def _sbi_mixed(A: FinCommAlgebra, n_max: int, i: int) -> SBIWitness:
    from .adams import act, projector_element

    mc = MixedComplex(A, n_max + 1)
    H, T = mc.hochschild, mc.tot

    def p_hh(l):
        def op(a):
            return act(projector_element(len(a) - 1, l), a)
        return op

    def p_hc(l):
        def op(e):
            p, a = e
            return {(p, s): c for s, c in act(projector_element(len(a) - 1, l - p), a).items()}
        return op

    def I(a):
        return {(0, a): 1}

    def S(e):
        p, a = e
        return {(p - 1, a): 1} if p >= 1 else {}

    def B(e):
        p, a = e
        return connes_B(A, a) if p == 0 else {}

    w = SBIWitness(n_max, i)
    keys = sorted(set(H.keys()) | set(T.keys()))
    for key in keys:
        hh_i = {n: _Piece(H, n, key, p_hh(i)) for n in range(n_max + 1)}
        hc_i = {n: _Piece(T, n, key, p_hc(i)) for n in range(n_max + 1)}
        hc_im1 = {n: _Piece(T, n, key, p_hc(i - 1)) for n in range(n_max + 1)}
        for n in range(n_max + 1):
            _collect(w, f"HH^({i})_{n}", key,
                     _node(f"HH^({i})_{n}", hc_im1.get(n - 1), hh_i[n], hc_i[n], B, I))
            _collect(w, f"HC^({i})_{n}", key,
                     _node(f"HC^({i})_{n}", hh_i[n], hc_i[n], hc_im1.get(n - 2), I, S))
            if n >= 2:
                _collect(w, f"HC^({i - 1})_{n - 2}<-S", key,
                         _node(f"HC^({i - 1})_{n - 2}<-S", hc_i[n], hc_im1[n - 2], hh_i[n - 1], S, B))
            w.hh[n] = w.hh.get(n, 0) + hh_i[n].homology_dim
            w.hc[n] = w.hc.get(n, 0) + hc_i[n].homology_dim
    return w
