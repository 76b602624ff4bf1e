import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heightlab.ceresa import bounding_pair_rep, ceresa_height, sing_class
from heightlab.errors import NotAdmissible, NotACocycle
from heightlab.exact import Matrix, ZERO, column_space, rank
from heightlab.families import (
    JORDAN_N,
    jordan_alpha,
    jordan_beta,
    jordan_closed_form,
    jordan_rep,
    random_equal_log_rep,
    random_vector,
)
from heightlab.heights import (
    Lt_space,
    Rt_space,
    complex_of,
    graded_Qbar,
    hQ,
    height_pairing,
    is_positive_definite,
    is_positive_semidefinite,
    ldl_pivots,
    lt_surjects,
    pair_T,
    q_t,
)
from heightlab.koszul import Cochain, MonodromyRep, degree_one, symbolic_point

F = Fraction
ints = st.integers(-5, 5)


def test_pair_T_jordan():
    # N u = v, λ = N* v* = u*
    assert pair_T((0, 1), (1, 0), JORDAN_N) == 1


def test_pair_T_zero_and_identity():
    assert pair_T((0, 0), (1, 0), JORDAN_N) == 0
    assert pair_T((2, 3), (F(1, 2), -1), Matrix.identity(2)) == -2


def test_q_t_rank_one():
    rep = MonodromyRep((JORDAN_N,), 2)
    a = degree_one([(0, 1)])
    b = degree_one([(1, 0)])
    assert q_t(rep, a, b, (F(7, 3),)) == F(7, 3)
    assert q_t(rep, degree_one([(0, 0)]), b, (5,)) == 0


def test_jordan_closed_form_symbolic():
    r = 3
    a, b = (F(1), F(-2), F(4)), (F(3), F(0), F(-1))
    got = height_pairing(jordan_rep(r), jordan_alpha(a), jordan_beta(b)).value
    assert got == jordan_closed_form(a, b, symbolic_point(r))


def test_jordan_half():
    rep = jordan_rep(2)
    assert height_pairing(rep, jordan_alpha((0, 1)), jordan_beta((0, 1)), (1, 1)).value == F(1, 2)
    assert height_pairing(rep, jordan_alpha((0, 1)), jordan_beta((0, 1)), (0, 0)).value == 0


def test_coboundary_pairs_to_zero():
    rep = jordan_rep(3)
    K = complex_of(rep)
    dl = K.apply_d(Cochain(0, 3, 2, (F(2), F(-1))))
    assert height_pairing(rep, dl, jordan_beta((1, 2, 5))).value == 0


def test_non_cocycle_rejected():
    with pytest.raises(NotACocycle):
        height_pairing(jordan_rep(2), degree_one([(1, 0), (0, 0)]), jordan_beta((1, 0)), (1, 1))


def test_supplied_l_is_checked():
    rep = jordan_rep(2)
    with pytest.raises(NotAdmissible):
        height_pairing(rep, jordan_alpha((0, 1)), jordan_beta((0, 1)), (1, 1), l=(0, 0))
    ok = height_pairing(rep, jordan_alpha((0, 1)), jordan_beta((0, 1)), (1, 1), l=(F(1, 2), 7))
    assert ok.value == F(1, 2)


@given(st.lists(ints, min_size=3, max_size=3), st.lists(ints, min_size=3, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3), st.integers(0, 5))
def test_homogeneity_and_closed_form(a, b, t, c):
    rep = jordan_rep(3)
    A, B = jordan_alpha(a), jordan_beta(b)
    h = height_pairing(rep, A, B, t).value
    assert h == jordan_closed_form([F(x) for x in a], [F(x) for x in b], [F(x) for x in t])
    assert height_pairing(rep, A, B, [c * x for x in t]).value == c * h


@given(st.lists(ints, min_size=3, max_size=3), st.lists(ints, min_size=3, max_size=3),
       st.lists(ints, min_size=3, max_size=3))
def test_bilinear(a, a2, b):
    rep = jordan_rep(3)
    t = (1, 2, 3)
    lhs = height_pairing(rep, jordan_alpha([x + y for x, y in zip(a, a2)]), jordan_beta(b), t).value
    rhs = height_pairing(rep, jordan_alpha(a), jordan_beta(b), t).value + \
        height_pairing(rep, jordan_alpha(a2), jordan_beta(b), t).value
    assert lhs == rhs


def test_Lt_jordan():
    rep = jordan_rep(2)
    L = Lt_space(rep, 1, (1, 1))
    assert L.dim == 1
    x = L.basis[0]
    assert x[1] == -x[3] and x[0] == x[2] == 0
    assert lt_surjects(rep, 1, (1, 1))
    assert L <= Rt_space(rep, 1, (1, 1))


def test_Lt_zero_logs():
    rep = MonodromyRep((Matrix.zeros(2, 2),) * 2, 2)
    for p in (1, 2):
        assert Lt_space(rep, p, (1, 2)).dim == 0 and Rt_space(rep, p, (1, 2)).dim == 0


def test_equal_log_beta_lies_in_Lt():
    rng = random.Random(3)
    rep, _ = random_equal_log_rep(rng)
    N = rep.N[0]
    k = random_vector(rep.n, rng)
    # (Nk, -Nk) is killed by δ_t at t = (1, 1)
    beta = tuple(N @ k) + tuple(-x for x in N @ k)
    assert Lt_space(rep, 1, (1, 1)).contains(beta)


@pytest.mark.parametrize("seed", range(5))
def test_equal_log_formula(seed):
    rng = random.Random(seed)
    rep, Q = random_equal_log_rep(rng)
    N = rep.N[0]
    h, k = random_vector(rep.n, rng), random_vector(rep.n, rng)
    zero = (ZERO,) * rep.n
    alpha = Cochain(1, 2, rep.n, zero + N @ h)
    beta = Cochain(1, 2, rep.n, zero + N @ k)
    t1, t2 = symbolic_point(2)
    want = t1 * t2 / (t1 + t2) * sum((x * y for x, y in zip(h, Q @ (N @ k))), ZERO)
    assert hQ(rep, alpha, beta).value == want
    assert hQ(rep, alpha, beta, (0, 0)).value == 0
    assert hQ(rep, alpha, Cochain.zero(1, 2, rep.n), (1, 1)).value == 0
    # symmetry of h_Q
    assert hQ(rep, beta, alpha).value == hQ(rep, alpha, beta).value


@given(st.lists(ints, min_size=3, max_size=3), st.lists(st.integers(1, 6), min_size=3, max_size=3))
def test_jordan_hQ_is_a_square_form(a, t):
    rep = jordan_rep(3)
    A = jordan_alpha(a)
    got = hQ(rep, A, A, t).value
    assert got == jordan_closed_form([F(x) for x in a], [F(x) for x in a], [F(x) for x in t])
    assert got >= 0


def test_ldl():
    assert is_positive_definite(Matrix([[2, 1], [1, 2]]))
    assert is_positive_semidefinite(Matrix([[1, 1], [1, 1]]))
    assert not is_positive_definite(Matrix([[1, 1], [1, 1]]))
    assert not is_positive_semidefinite(Matrix([[0, 1], [1, 0]]))
    assert not is_positive_semidefinite(Matrix([[1, 2], [2, 1]]))
    assert ldl_pivots(Matrix([[0, 1], [2, 0]])) is None


@pytest.mark.parametrize("r", [2, 3, 4])
def test_graded_Qbar_jordan(r):
    t = tuple(F(i + 1, 2) for i in range(r))
    G = graded_Qbar(jordan_rep(r), 1, t)
    assert G.gram.shape == (r - 1, r - 1)
    assert G.positive_definite


def test_graded_Qbar_empty():
    rep = MonodromyRep((Matrix.zeros(2, 2),) * 2, 2, weight=-1, Q=Matrix([[0, 1], [-1, 0]]))
    assert graded_Qbar(rep, 1, (1, 1)).gram.shape == (0, 0)


def test_graded_Qbar_matches_hQ_on_ceresa():
    rep = bounding_pair_rep(3, 1)
    t = (F(1), F(2))
    G = graded_Qbar(rep, 1, t)
    reps = G.representatives
    H = Matrix([[hQ(rep, a, b, t).value for b in reps] for a in reps])
    assert G.gram == H
    # the whole graded piece is indefinite, the singularity class is positive
    assert not G.positive_semidefinite
    s = sing_class(3, 1)
    assert is_positive_definite(Matrix([[hQ(rep, s, s, t).value]]))
    assert hQ(rep, s, s, t).value == ceresa_height(3, 1, t).value


def test_ceresa_ih1_is_N_V():
    rep = bounding_pair_rep(3, 1)
    assert complex_of(rep).intersection_cohomology(1).dim == rank(rep.N[0])
    assert column_space(rep.N[0]).dim == 5
