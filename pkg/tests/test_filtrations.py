from fractions import Fraction

import pytest

from heightlab.errors import FiltrationNotPreserved, NotCommuting, NotNilpotent
from heightlab.exact import Matrix, Subspace
from heightlab.families import shift_block
from heightlab.filtrations import (
    Filtration,
    check_cone_constancy,
    induced_weight_on_koszul,
    is_monodromy_filtration,
    jordan_chains,
    monodromy_weight_filtration,
    relative_weight_filtration,
    relative_weight_filtration_report,
)

JORDAN = Matrix([[0, 0], [1, 0]])


def test_jordan_block_weight_filtration():
    W = monodromy_weight_filtration(JORDAN, 0)
    v = Subspace.span([(0, 1)], 2)
    assert W[-2].dim == 0
    assert W[-1] == v and W[0] == v
    assert W[1] == Subspace.full(2)
    assert is_monodromy_filtration(JORDAN, W, 0)


@pytest.mark.parametrize("k", [-3, 0, 2])
def test_zero_operator_is_pure(k):
    W = monodromy_weight_filtration(Matrix.zeros(3, 3), k)
    assert W.graded_dims() == {k: 3}


def test_size_three_block():
    W = monodromy_weight_filtration(shift_block(3), 0)
    assert W.graded_dims() == {-2: 1, 0: 1, 2: 1}
    assert is_monodromy_filtration(shift_block(3), W, 0)


def test_not_nilpotent():
    with pytest.raises(NotNilpotent):
        monodromy_weight_filtration(Matrix.identity(2))


def test_scaling_does_not_change_filtration():
    N = Matrix([[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [2, 0, 1, 0]])
    assert monodromy_weight_filtration(N, 1) == monodromy_weight_filtration(N.scale(Fraction(5, 3)), 1)


def test_perturbed_filtration_is_rejected():
    W = monodromy_weight_filtration(shift_block(3), 0)
    wrong = Filtration.from_dict(3, {-2: W[-2], 0: Subspace.span([(0, 1, 0), (0, 0, 1), (1, 0, 0)], 3)})
    assert not is_monodromy_filtration(shift_block(3), wrong, 0)


def test_cone_constancy_jordan():
    assert check_cone_constancy([JORDAN, JORDAN], [(1, 1), (1, 2), (3, 5)])


def test_cone_constancy_one_block_and_zero():
    assert check_cone_constancy([shift_block(3), Matrix.zeros(3, 3)], [(1, 1), (2, 7), (Fraction(1, 3), 4)])


def test_cone_constancy_needs_commuting():
    with pytest.raises(NotCommuting) as info:
        check_cone_constancy([JORDAN, JORDAN.T], [(1, 1)])
    assert info.value.pair == (1, 2)


def test_relative_filtration_for_zero_operator():
    W = Filtration.from_dict(2, {-1: Subspace.span([(0, 1)], 2), 0: Subspace.full(2)})
    assert relative_weight_filtration(Matrix.zeros(2, 2), W) == W


def test_relative_over_pure_is_shifted_monodromy():
    W = Filtration.trivial(3, 4)
    assert relative_weight_filtration(shift_block(3), W) == monodromy_weight_filtration(shift_block(3), 4)


def test_relative_filtration_absent():
    # N e1 = e2, W_{-1} = span{e2}
    W = Filtration.from_dict(2, {-1: Subspace.span([(0, 1)], 2), 0: Subspace.full(2)})
    report = relative_weight_filtration_report(JORDAN, W)
    assert report.filtration is None
    assert report.failing_weight == 0


def test_relative_filtration_restricts_to_graded_pieces():
    # V = span(e1,e2) of weight 0 with a Jordan block, plus e3 of weight -2
    N = Matrix([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    W = Filtration.from_dict(3, {-2: Subspace.span([(0, 0, 1)], 3), 0: Subspace.full(3)})
    M = relative_weight_filtration(N, W)
    assert M is not None
    assert M.graded_dims() == {-2: 1, -1: 1, 1: 1}


def test_relative_needs_preserved_filtration():
    W = Filtration.from_dict(2, {0: Subspace.span([(1, 0)], 2), 1: Subspace.full(2)})
    with pytest.raises(FiltrationNotPreserved):
        relative_weight_filtration(JORDAN, W)


def test_jordan_chains_give_a_basis():
    N = Matrix([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]])
    chains = jordan_chains(N)
    assert sorted(length for _, length in chains) == [1, 3]
    vecs = []
    for head, length in chains:
        v = head
        for _ in range(length):
            vecs.append(v)
            v = N @ v
    assert Subspace.span(vecs, 4).dim == 4


def test_induced_on_koszul_degree_zero():
    W = monodromy_weight_filtration(JORDAN, -1)
    assert induced_weight_on_koszul(W, 0, 2) == W


def test_induced_on_koszul_pure():
    W = Filtration.trivial(2, -1)
    assert induced_weight_on_koszul(W, 1, 1).graded_dims() == {1: 2}


def test_induced_on_koszul_jordan_limit():
    W = monodromy_weight_filtration(JORDAN, -1)
    assert W.weights() == [-2, 0]
    assert induced_weight_on_koszul(W, 1, 2).weights() == [0, 2]
