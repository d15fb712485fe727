from fractions import Fraction as F

import pytest

from sktnil.exactnum import Subspace, unit
from sktnil.liealg import LieAlgebra, direct_sum
from helpers import cat, random_triples


def e(n, i):
    return unit(n, i - 1)


def test_bracket_examples():
    L4 = cat("n4_abelian").L
    assert L4.bracket(e(4, 1), e(4, 2)) == e(4, 3)
    assert L4.bracket(e(4, 2), e(4, 1)) == tuple(-x for x in e(4, 3))
    L8 = cat("n8_nonabelian").L
    assert L8.bracket(e(8, 1), e(8, 2)) == tuple(2 * a + b for a, b in zip(e(8, 5), e(8, 7)))
    x = (F(1), F(-2), F(1, 3), F(0), F(5), F(0), F(1), F(2))
    assert not any(L8.bracket(x, x))
    with pytest.raises(ValueError):
        L8.bracket(e(4, 1), e(8, 1))


def test_jacobi_examples():
    assert cat("n8_nonabelian").L.jacobi_check() == []
    assert LieAlgebra.abelian(5).jacobi_check() == []
    bad = LieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {1: 1}})
    violations = bad.jacobi_check()
    assert [v.triple for v in violations] == [(1, 2, 3)]
    # cyclic sum [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = [-e1, e2] = -e3
    assert violations[0].defect == tuple(-x for x in e(3, 3))


def test_central_series_examples():
    assert LieAlgebra.abelian(3).nilpotency_step() == 1
    assert LieAlgebra.abelian(0).nilpotency_step() == 0
    L4 = cat("n4_abelian").L
    assert L4.central_series() == [Subspace.whole(4), Subspace.coordinate(4, [3]), Subspace.zero(4)]
    assert L4.nilpotency_step() == 2
    filiform = LieAlgebra(4, {(1, 2): {3: 1}, (1, 3): {4: 1}})
    assert filiform.nilpotency_step() == 3
    assert filiform.central_series()[1] == Subspace.coordinate(4, [3, 4])
    assert filiform.central_series()[2] == Subspace.coordinate(4, [4])


def test_not_nilpotent():
    L = LieAlgebra(2, {(1, 2): {2: 1}})
    assert L.nilpotency_step() is None and not L.is_nilpotent()


def test_center_examples():
    assert LieAlgebra.abelian(4).center() == Subspace.whole(4)
    assert cat("n4_abelian").L.center() == Subspace.coordinate(4, [3, 4])
    # the printed 2-form f^12 - f^14 + f^23 + f^34 is degenerate: f1+f3 and f2+f4 are central too
    z6 = cat("n6_abelian").L.center()
    assert z6 == Subspace(6, [(1, 0, 1, 0, 0, 0), (0, 1, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)])
    assert Subspace.coordinate(6, [5, 6]).is_subspace_of(z6)
    assert cat("n8_nonabelian").L.center() == Subspace.coordinate(8, [5, 6, 7, 8])


def test_derived_examples():
    assert LieAlgebra.abelian(4).derived().dim == 0
    assert cat("n4_abelian").L.derived() == Subspace.coordinate(4, [3])
    assert cat("n8_nonabelian").L.derived() == Subspace.coordinate(8, [5, 6, 7])


def test_is_ideal_examples():
    L = cat("n4_abelian").L
    assert L.is_ideal(Subspace.whole(4))
    assert L.is_ideal(Subspace.coordinate(4, [3, 4]))
    assert not L.is_ideal(Subspace.coordinate(4, [1]))
    with pytest.raises(ValueError):
        L.is_ideal(Subspace.whole(3))


def test_catalog_steps_and_center_commutes():
    for name in ("n4_abelian", "n6_abelian", "n8_nonabelian", "n6_nonabelian", "n10_nonabelian", "n12_nonabelian"):
        L = cat(name).L
        assert L.nilpotency_step() == 2
        assert L.derived() == L.central_series()[1]
        assert L.derived().is_subspace_of(L.center())
        for z in L.center().basis:
            assert not any(L.ad(z)[r][c] for r in range(L.dim) for c in range(L.dim))


def test_step_two_iff_derived_in_center():
    for T in random_triples(20, seed=7):
        L = T.L
        step = L.nilpotency_step()
        assert (step is not None and step <= 2) == L.derived().is_subspace_of(L.center())


def test_change_basis_and_direct_sum():
    L = cat("n4_abelian").L
    assert L.permuted([3, 1, 2, 4]).brackets == {(2, 3): {1: F(1)}}
    D = direct_sum(L, L)
    assert D.dim == 8 and D.brackets == {(1, 2): {3: F(1)}, (5, 6): {7: F(1)}}
