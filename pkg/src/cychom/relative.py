"""Relative Hochschild and cyclic homology of T = R (x) A over R.

The map T -> R induced by the augmentation of A sends a basis tensor of
C(T) to zero as soon as one factor has a non-unit A-part, and is the
identity on tensors whose A-parts are all units.  With an adapted basis of A
(unit first, remaining basis vectors in m_A) the kernel complex is therefore
spanned by basis tensors, and C(T) = C(R) (+) kernel as complexes.  The
same holds for the cyclic bicomplex, the mixed complex and every Hodge
projector, since they only permute, multiply or insert units.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .adams import hc_eigen_dims, hh_eigen_dims, labels, projector_element, act
from .algebra import FinCommAlgebra, augmentation_ideal, ground_algebra, tensor
from .complexes import CyclicBicomplex, MixedComplex, bar_complex, connes_B
from .errors import InputError, SplittingFailure
from .sbi import _Piece, _node


@dataclass
class AugmentedPair:
    """R, A and T = R (x) A with the projection T -> R."""

    R: FinCommAlgebra
    A: FinCommAlgebra
    T: FinCommAlgebra = field(init=False)

    def __post_init__(self):
        if not self.A.is_adapted():
            raise InputError("A needs an adapted basis (augmentation = coefficient of the unit)")
        self.T = tensor(self.R, self.A)
        self._a_unit = self.A.unit_index
        self._a_part = tuple(a for (_, a) in self.T.factor_index)

    @classmethod
    def over_ground(cls, A: FinCommAlgebra) -> "AugmentedPair":
        return cls(ground_algebra(A.field), A)

    @property
    def dim_mA(self) -> int:
        return augmentation_ideal(self.A).dim

    def in_kernel(self, t: tuple) -> bool:
        """A basis tensor of C(T) lies in the relative subcomplex."""
        u, ap = self._a_unit, self._a_part
        return any(ap[i] != u for i in t)

    def projection_basis(self, i: int):
        """Image in R of the T-basis element i (an R-basis index or None)."""
        r, a = self.T.factor_index[i]
        return r if a == self._a_unit else None


@dataclass
class RelativeReport:
    n: int
    i: int | None
    theory: str
    relative: int
    absolute_T: int
    absolute_R: int

    @property
    def split_ok(self) -> bool:
        return self.absolute_T == self.relative + self.absolute_R

    def as_dict(self) -> dict:
        return {"n": self.n, "i": self.i, "theory": self.theory, "relative": self.relative,
                "absolute_T": self.absolute_T, "absolute_R": self.absolute_R, "split_ok": self.split_ok}


def relative_bar(pair: AugmentedPair, n_max: int, normalized: bool = True):
    return bar_complex(pair.T, n_max, normalized=normalized, select=pair.in_kernel)


def relative_mixed(pair: AugmentedPair, n_max: int) -> MixedComplex:
    return MixedComplex(pair.T, n_max, select=pair.in_kernel)


def relative_bicomplex(pair: AugmentedPair, n_max: int) -> CyclicBicomplex:
    return CyclicBicomplex(pair.T, n_max, select=pair.in_kernel)


def _dims(A: FinCommAlgebra, n: int, i: int | None, theory: str, select=None) -> int:
    if theory == "HH":
        if i is None:
            return bar_complex(A, n + 1, normalized=True, select=select).homology_dim(n)
        return hh_eigen_dims(A, n, cx=bar_complex(A, n + 1, normalized=True, select=select)).get(i, 0)
    if i is None:
        return CyclicBicomplex(A, n + 1, select=select).tot.homology_dim(n)
    return hc_eigen_dims(A, n, mc=MixedComplex(A, n + 1, select=select)).get(i, 0)


def relative_homology(pair: AugmentedPair, n: int, i: int | None = None,
                      theory: str = "HC") -> RelativeReport:
    """Relative (eigen)homology of T over R, with the split identity checked."""
    theory = theory.upper()
    if theory not in ("HH", "HC"):
        raise ValueError("theory must be HH or HC")
    rel = _dims(pair.T, n, i, theory, select=pair.in_kernel)
    absT = _dims(pair.T, n, i, theory)
    absR = _dims(pair.R, n, i, theory)
    rep = RelativeReport(n, i, theory, rel, absT, absR)
    if not rep.split_ok:
        raise SplittingFailure(f"{theory}_{n}^({i}): {absT} != {rel} + {absR}", node=f"{theory}_{n}")
    return rep


def relative_dims(pair: AugmentedPair, n_max: int, theory: str = "HC") -> list[int]:
    """Relative dims for n = 0..n_max (total, not eigen-split)."""
    if theory.upper() == "HH":
        return relative_bar(pair, n_max + 1).homology_dims(n_max)
    return relative_bicomplex(pair, n_max + 1).homology_dims(n_max)


@dataclass
class GoodwillieVerdict:
    n: int
    hc_low: int           # dim HC-bar^(n-1)_{n-1}
    hh_top: int           # dim HH-bar^(n)_n
    hc_top: int           # dim HC-bar^(n)_n
    b_injective: bool
    i_surjective: bool
    exact_middle: bool

    @property
    def dimension_identity(self) -> bool:
        return self.hh_top == self.hc_low + self.hc_top

    @property
    def ok(self) -> bool:
        return self.b_injective and self.i_surjective and self.exact_middle and self.dimension_identity

    def as_dict(self) -> dict:
        return {"n": self.n, "HC_low": self.hc_low, "HH_top": self.hh_top, "HC_top": self.hc_top,
                "B_injective": self.b_injective, "I_surjective": self.i_surjective,
                "exact_middle": self.exact_middle, "dimension_identity": self.dimension_identity}


def goodwillie_splitting_check(pair: AugmentedPair, n: int, raise_on_failure: bool = True) -> GoodwillieVerdict:
    """0 -> HC-bar^(n-1)_{n-1} -B-> HH-bar^(n)_n -I-> HC-bar^(n)_n -> 0 on the relative mixed complex."""
    if not pair.A.graded:
        raise InputError("the splitting is only asserted for graded A")
    if n < 1:
        raise ValueError("n >= 1 is required")
    T = pair.T
    mc = relative_mixed(pair, n + 1)
    H, Tot = mc.hochschild, mc.tot

    def p_hh(l):
        return lambda a: act(projector_element(len(a) - 1, l), a)

    def p_hc(l):
        def op(e):
            p, a = e
            return {(p, s): c for s, c in act(projector_element(len(a) - 1, l - p), a).items()}
        return op

    def I(a):
        return {(0, a): 1}

    def B(e):
        p, a = e
        return connes_B(T, a) if p == 0 else {}

    hc_low = hh_top = hc_top = 0
    inj = surj = mid = True
    for key in sorted(set(H.keys()) | set(Tot.keys())):
        X = _Piece(Tot, n - 1, key, p_hc(n - 1))
        Y = _Piece(H, n, key, p_hh(n))
        Z = _Piece(Tot, n, key, p_hc(n))
        hx, hy, hz = X.homology_dim, Y.homology_dim, Z.homology_dim
        hc_low, hh_top, hc_top = hc_low + hx, hh_top + hy, hc_top + hz
        bx = [B_apply(B, z) for z in X.cycles]
        if Y.image_dim(bx) != hx:
            inj = False
        iy = [B_apply(I, y) for y in Y.cycles]
        if Z.image_dim(iy) != hz:
            surj = False
        if not _node("HH", X, Y, Z, B, I).exact:
            mid = False
    v = GoodwillieVerdict(n, hc_low, hh_top, hc_top, inj, surj, mid)
    if raise_on_failure and not v.ok:
        bad = ("B injective" if not inj else "I surjective" if not surj
               else "middle exactness" if not mid else "dimension identity")
        raise SplittingFailure(f"Goodwillie sequence fails at {bad} (n = {n})", node=bad)
    return v


def B_apply(op, chain: dict) -> dict:
    from .sbi import _apply
    return _apply(op, chain)


@dataclass
class AffineChowReport:
    p: int
    hc_top: int                 # HC-bar^(p-1)_{p-1}
    hh_top: int                 # HH-bar^(p-1)_{p-1}
    hc_low: int | None          # HC-bar^(p-2)_{p-2}, p >= 2
    expected_p1: int | None     # dim R * dim m_A for p = 1

    @property
    def identity_holds(self) -> bool:
        if self.p == 1:
            return self.hc_top == self.hh_top == self.expected_p1
        return self.hh_top == self.hc_low + self.hc_top

    def as_dict(self) -> dict:
        return {"p": self.p, "HC_top": self.hc_top, "HH_top": self.hh_top, "HC_low": self.hc_low,
                "expected_p1": self.expected_p1, "identity_holds": self.identity_holds}


def formal_chow_affine(pair: AugmentedPair, p: int) -> AffineChowReport:
    """Affine-level dims of HC-bar^(p-1)_{p-1}, HH-bar^(p-1)_{p-1}, HC-bar^(p-2)_{p-2}."""
    if p < 1:
        raise ValueError("p >= 1 is required")
    m = p - 1
    hc_top = relative_homology(pair, m, m, "HC").relative
    hh_top = relative_homology(pair, m, m, "HH").relative
    hc_low = relative_homology(pair, m - 1, m - 1, "HC").relative if p >= 2 else None
    exp = pair.R.dim * pair.dim_mA if p == 1 else None
    return AffineChowReport(p, hc_top, hh_top, hc_low, exp)


__all__ = ["AugmentedPair", "RelativeReport", "relative_homology", "relative_dims",
           "goodwillie_splitting_check", "GoodwillieVerdict", "formal_chow_affine",
           "AffineChowReport", "labels"]
