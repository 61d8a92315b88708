import pytest

from cychom import sbi
from cychom.algebra import builtin_algebra, ground_algebra
from cychom.errors import ExactnessFailure
from cychom.sbi import sbi_sequence

from oracles import periodic_hh_dims


def node(w, name):
    return next(v for v in w.nodes if v.node == name)


@pytest.mark.parametrize("name", ["Q", "dual_numbers", "x3"])
def test_plain_sequence_exact(name):
    w = sbi_sequence(builtin_algebra(name), 4)
    assert w.exact and w.first_failure() is None
    assert len({v.node for v in w.nodes}) == len(w.nodes)


def test_sequence_over_Q_alternates():
    w = sbi_sequence(ground_algebra(), 4)
    assert [w.hh[n] for n in range(5)] == [1, 0, 0, 0, 0]
    assert [w.hc[n] for n in range(5)] == [1, 0, 1, 0, 1]
    # S: HC_2n -> HC_2n-2 is onto a one-dimensional space of the same dimension
    for n in (2, 4):
        v = node(w, f"HC_{n - 2}<-S")
        assert v.dim_image_in == w.hc[n] == w.hc[n - 2] == 1


def test_dual_numbers_dimension_chase():
    w = sbi_sequence(builtin_algebra("dual_numbers"), 4)
    assert [w.hh[n] for n in range(5)] == periodic_hh_dims(2, 4)
    # exactness of ... -> HC_{n-1} -B-> HH_n -I-> HC_n -S-> HC_{n-2} -> ... forces the
    # alternating sum over each window; check the rank bookkeeping node by node
    for v in w.nodes:
        assert v.dim_image_in == v.dim_kernel_out
        assert v.dim_kernel_out <= v.dim_homology


@pytest.mark.parametrize("name", ["Q", "dual_numbers", "x3"])
@pytest.mark.parametrize("i", [0, 1, 2, 3])
def test_eigen_sequence_exact(name, i):
    assert sbi_sequence(builtin_algebra(name), 4, eigen=i).exact


def test_eigen_ladder_over_Q():
    Q = ground_algebra()
    for i in range(0, 3):
        w = sbi_sequence(Q, 4, eigen=i)
        assert {n: d for n, d in w.hc.items() if d} == {2 * i: 1}
        assert {n: d for n, d in w.hh.items() if d} == ({0: 1} if i == 0 else {})


def test_sabotaged_B_is_caught(monkeypatch):
    monkeypatch.setattr(sbi._TotMaps, "B", lambda self, z: {})
    with pytest.raises(ExactnessFailure) as exc:
        sbi_sequence(builtin_algebra("dual_numbers"), 3)
    assert exc.value.node


def test_sabotaged_eigen_B_is_caught(monkeypatch):
    monkeypatch.setattr(sbi, "connes_B", lambda A, a: {})
    w = sbi_sequence(builtin_algebra("dual_numbers"), 3, eigen=1, raise_on_failure=False)
    assert not w.exact
    assert w.first_failure() is not None
