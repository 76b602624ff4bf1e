import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heightlab.ceresa import bounding_pair_rep
from heightlab.errors import NotCommuting, NotNilpotent, ValidationError
from heightlab.exact import Matrix, Subspace
from heightlab.families import jordan_alpha, jordan_rep, random_commuting_rep
from heightlab.koszul import (
    Cochain,
    KoszulComplex,
    MonodromyRep,
    apply_componentwise,
    degree_one,
    delta_t,
    laplace_t,
    restrict_test_curve,
    symbolic_point,
)

JORDAN = Matrix([[0, 0], [1, 0]])


def test_rank_one_complex_is_N():
    K = KoszulComplex(MonodromyRep((JORDAN,), 2))
    assert K.d(0) == JORDAN
    assert K.dim(0) == K.dim(1) == 2 and K.dim(2) == 0


def test_zero_logs():
    rep = MonodromyRep((Matrix.zeros(2, 2),) * 3, 2)
    K = KoszulComplex(rep)
    for p in range(3):
        assert K.d(p).is_zero()
    for p in (1, 2, 3):
        assert K.B(p).dim == 0
    assert K.intersection_cohomology(1).dim == 0


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_jordan_ih1_has_dimension_r_minus_1(r):
    assert KoszulComplex(jordan_rep(r)).intersection_cohomology(1).dim == r - 1


@given(st.integers(0, 10_000))
def test_d_squared_and_B_closure(seed):
    rep = random_commuting_rep(random.Random(seed), max_n=4, max_r=3)
    K = KoszulComplex(rep)
    for p in range(rep.r - 1):
        assert (K.d(p + 1) @ K.d(p)).is_zero()
    for p in range(rep.r):
        assert K.B(p).image(K.d(p)) <= K.B(p + 1)


@given(st.integers(0, 10_000))
def test_ih_injects_into_h(seed):
    rep = random_commuting_rep(random.Random(seed), max_n=4, max_r=3)
    K = KoszulComplex(rep)
    for p in (0, 1):
        IH = K.intersection_cohomology(p)
        H = K.cohomology(p)
        reps = Subspace.span(list(IH.transversal), K.dim(p))
        assert (reps + H.coboundaries).dim == IH.dim + H.coboundaries.dim


def test_validation_errors():
    with pytest.raises(NotCommuting) as info:
        MonodromyRep((JORDAN, JORDAN.T), 2).check()
    assert info.value.pair == (1, 2)
    with pytest.raises(NotNilpotent):
        MonodromyRep((Matrix.identity(2),), 2).check()
    bad_T = MonodromyRep((JORDAN,), 2, T=(Matrix([[1, 0], [2, 1]]),))
    with pytest.raises(ValidationError):
        bad_T.check()
    assert MonodromyRep.from_unipotent([Matrix([[1, 0], [2, 1]])]).check().N[0] == JORDAN.scale(2)


def test_dual_rep():
    rep = jordan_rep(2)
    D = rep.dual()
    assert D.N[0] == -JORDAN.T
    assert D.T[0] @ rep.T[0].T == Matrix.identity(2)
    assert D.weight == 1


def test_delta_at_unit_vector():
    alpha = degree_one([(1, 2), (3, 4), (5, 6)])
    assert delta_t(alpha, (0, 1, 0)).data == (3, 4)


def test_delta_jordan():
    assert delta_t(jordan_alpha((0, 1)), (1, 1)).data == (0, 1)


@given(st.integers(0, 10_000))
def test_delta_squared_zero(seed):
    rng = random.Random(seed)
    rep = random_commuting_rep(rng, max_n=3, max_r=3)
    r, n = rep.r, rep.n
    for p in range(2, r + 1):
        K = KoszulComplex(rep)
        x = Cochain(p, r, n, tuple(Fraction(rng.randint(-3, 3)) for _ in range(K.dim(p))))
        t = symbolic_point(r)
        assert delta_t(delta_t(x, t), t).is_zero()


def test_laplacian_is_N_of_t_on_ceresa():
    rep = bounding_pair_rep(3, 1)
    K = KoszulComplex(rep)
    rng = random.Random(7)
    x = Cochain(2, 2, rep.n, tuple(Fraction(rng.randint(-2, 2)) for _ in range(K.dim(2))))
    t = (Fraction(2), Fraction(-5, 3))
    assert laplace_t(K, x, t) == apply_componentwise(rep.N_at(t), x)
    assert laplace_t(K, x, (0, 0)).is_zero()


@given(st.integers(0, 10_000))
def test_laplacian_symbolic(seed):
    rng = random.Random(seed)
    rep = random_commuting_rep(rng, max_n=3, max_r=3)
    K = KoszulComplex(rep)
    t = symbolic_point(rep.r)
    for p in range(rep.r + 1):
        x = Cochain(p, rep.r, rep.n, tuple(Fraction(rng.randint(-3, 3)) for _ in range(K.dim(p))))
        assert laplace_t(K, x, t) == apply_componentwise(rep.N_at(t), x)


def test_restrict_jordan():
    res = restrict_test_curve(jordan_rep(2), jordan_alpha((0, 1)), (1, 1))
    assert res.alpha_t == (0, 1)
    assert res.solvable and res.l == (Fraction(1, 2), 0)


def test_restrict_at_zero():
    res = restrict_test_curve(jordan_rep(2), jordan_alpha((3, 1)), (0, 0))
    assert res.alpha_t == (0, 0) and res.solvable and not any(res.l)


def test_restrict_unsolvable():
    rep = MonodromyRep((Matrix.zeros(1, 1),), 1)
    res = restrict_test_curve(rep, degree_one([(1,)]), (1,))
    assert not res.solvable and res.l is None


def test_membership_in_B_is_checked():
    K = KoszulComplex(jordan_rep(2))
    assert K.in_B(jordan_alpha((1, 2)))
    assert not K.in_B(degree_one([(1, 0), (0, 0)]))
