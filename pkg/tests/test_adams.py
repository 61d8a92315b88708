import pytest

from cychom import adams
from cychom.adams import (LADDERS, acts_as_scalar, adams_element, adams_operator, act,
                          check_mixed_compatibility, eulerian_idempotents, group_mul,
                          hc_eigen_dims, hh_eigen_dims, hodge_projectors, labels, perm_compose,
                          perm_inverse, perm_sign, pin_ladder, shuffle_convention, shuffle_element)
from cychom.algebra import TEST_ALGEBRAS, GradedPolySlice, builtin_algebra, ground_algebra
from cychom.complexes import MixedComplex, bar_complex, cyclic_dims, hochschild_dims
from cychom.differentials import de_rham_complex, kaehler
from cychom.errors import SpectrumMismatch
from cychom.linalg import EchelonBasis, SparseMatrix


def as_dict(el):
    return {p: c for p, c in el if c}


def identity_perm(n):
    return tuple(range(n))


# -- the group algebra ------------------------------------------------------------

def test_perm_helpers():
    p = (1, 2, 0)
    assert perm_compose(p, perm_inverse(p)) == identity_perm(3)
    assert perm_sign(p) == 1 and perm_sign((1, 0, 2)) == -1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eulerian_idempotents_in_group_algebra(n):
    for inverse in (False, True):
        es = [as_dict(e) for e in eulerian_idempotents(n, inverse)]
        total: dict = {}
        for i, e in enumerate(es):
            for j, f in enumerate(es):
                prod = {p: c for p, c in group_mul(e, f).items() if c}
                assert prod == (e if i == j else {}), (n, i, j)
            for p, c in e.items():
                total[p] = total.get(p, 0) + c
        assert {p: c for p, c in total.items() if c} == {identity_perm(n): 1}
        for m in range(1, n + 2):
            s = as_dict(shuffle_element(n, m, inverse))
            comb: dict = {}
            for i, e in enumerate(es, start=1):
                for p, c in e.items():
                    comb[p] = comb.get(p, 0) + m ** i * c
            assert {p: c for p, c in comb.items() if c} == s


@pytest.mark.parametrize("n", [1, 2, 3])
def test_shuffles_multiply(n):
    inv = shuffle_convention()
    s2, s3, s6 = (as_dict(shuffle_element(n, m, inv)) for m in (2, 3, 6))
    assert {p: c for p, c in group_mul(s2, s3).items() if c} == s6


# -- operators on chains -----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_psi_one_is_identity(n):
    A = builtin_algebra("x3")
    for key, M in adams_operator(A, n, 1).items():
        assert M == SparseMatrix.identity(M.rows)


@pytest.mark.parametrize("name", TEST_ALGEBRAS)
def test_psi_m_is_m_on_hh1(name):
    A = builtin_algebra(name)
    cx = bar_complex(A, 2)
    for m in (2, 3):
        el = adams_element(1, m)
        for k in cx.keys(1):
            assert acts_as_scalar(cx, 1, k, lambda a: act(el, a), m)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi2_psi3_is_psi6_on_homology(n):
    A = builtin_algebra("dual_numbers")
    cx = bar_complex(A, n + 1)
    e2, e3, e6 = (adams_element(n, m) for m in (2, 3, 6))
    for k in cx.keys(n):
        P2 = cx.matrix_of(n, n, k, lambda a: act(e2, a))
        P3 = cx.matrix_of(n, n, k, lambda a: act(e3, a))
        P6 = cx.matrix_of(n, n, k, lambda a: act(e6, a))
        boundaries = EchelonBasis(c for c in cx.boundary(n + 1, k).columns if c)
        from cychom.linalg import kernel_basis
        for z in kernel_basis(cx.boundary(n, k)).basis:
            diff = P2.apply(P3.apply(z))
            for i, c in P6.apply(z).items():
                diff[i] = diff.get(i, 0) - c
            diff = {i: c for i, c in diff.items() if c}
            assert not diff or boundaries.contains(diff)


def test_ladder_is_pinned():
    pin = pin_ladder()
    assert pin.convention == "m^l" and pin.offset == LADDERS["m^l"]
    assert "m^(l+1)" in pin.rejected
    # psi^2 acts on HH_n of the smooth slice by 2^n
    assert all(lam == 2 ** n for (n, _), lam in pin.observed.items())
    assert list(labels(3)) == [1, 2, 3]


def test_degree_one_projector_is_identity():
    hp = hodge_projectors(builtin_algebra("xy3"), 1)
    assert list(hp.matrices) == [1]
    for M in hp.matrices[1].values():
        assert M == SparseMatrix.identity(M.rows)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projectors_over_Q(n):
    hp = hodge_projectors(ground_algebra(), n)
    ranks = {l: sum(M.nnz for M in blocks.values()) for l, blocks in hp.matrices.items()}
    fixing = [l for l, r in ranks.items() if r]
    assert len(fixing) == 1
    assert fixing == ([n // 2] if n % 2 == 0 else [(n + 1) // 2])
    M = hp.matrices[fixing[0]]
    assert all(m == SparseMatrix.identity(1) for m in M.values())


@pytest.mark.parametrize("name", TEST_ALGEBRAS)
def test_projector_identities(name):
    A = builtin_algebra(name)
    for n in range(1, 4):
        hodge_projectors(A, n, verify=True)
        hodge_projectors(A, n, normalized=True, verify=True)


def test_wrong_projectors_are_rejected(monkeypatch):
    real = adams.projector_element

    def broken(n, l):
        return shuffle_element(n, 2) if n >= 2 else real(n, l)
    monkeypatch.setattr(adams, "projector_element", broken)
    with pytest.raises(SpectrumMismatch):
        hodge_projectors(builtin_algebra("dual_numbers"), 2)


@pytest.mark.parametrize("name", TEST_ALGEBRAS)
def test_eigen_dims_sum_to_totals(name):
    A = builtin_algebra(name)
    top = 4 if A.dim <= 3 else 3
    hh = hochschild_dims(A, top, normalized=True)
    hc = cyclic_dims(A, top)
    for n in range(1, top + 1):
        assert sum(hh_eigen_dims(A, n).values()) == hh[n]
        assert sum(hc_eigen_dims(A, n).values()) == hc[n]


@pytest.mark.parametrize("name", ["dual_numbers", "x3", "xy3"])
def test_top_pieces_are_forms(name):
    A = builtin_algebra(name)
    dr = de_rham_complex(A, 3)
    for n in range(1, 4):
        assert hh_eigen_dims(A, n)[n] == kaehler(A, n).dim
        assert hc_eigen_dims(A, n)[n] == dr.exact_quotient_dim(n)


def test_dual_numbers_top_pieces():
    A = builtin_algebra("dual_numbers")
    assert [hh_eigen_dims(A, n)[n] for n in (1, 2, 3)] == [1, 0, 0]
    assert hc_eigen_dims(A, 1)[1] == 0


def test_top_projector_on_smooth_slice():
    P = GradedPolySlice(2, (1, 1), 4)
    A = P.algebra()
    cx = bar_complex(A, 3, normalized=True, max_weight=4)
    top = hh_eigen_dims(A, 2, cx=cx)[2]
    omega2 = sum(kaehler(P, 2).weight_dim(w) for w in range(5))
    assert top == omega2 == 1 + 2 + 3          # dx^dy times monomials of weight 0..2


@pytest.mark.parametrize("name", TEST_ALGEBRAS)
def test_B_raises_weight(name):
    A = builtin_algebra(name)
    check_mixed_compatibility(MixedComplex(A, 4 if A.dim <= 3 else 3), 3 if A.dim <= 3 else 2)


def test_hc_eigenspaces_of_Q():
    Q = ground_algebra()
    for n in range(3):
        dims = hc_eigen_dims(Q, 2 * n)
        assert {l: d for l, d in dims.items() if d} == {n: 1}
