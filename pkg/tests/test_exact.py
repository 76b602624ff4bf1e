from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heightlab.errors import ParseError, PoleAtPoint
from heightlab.exact import (
    Matrix,
    Subspace,
    determinant,
    exp_nilpotent,
    inverse,
    is_nilpotent,
    kernel_basis,
    log_unipotent,
    multi_indices,
    nilpotency_index,
    parse_rational,
    smith_normal_form,
    solve_linear,
    solve_pencil,
)
from heightlab.param import ParamScalar, eval_param

small = st.integers(-4, 4)


def matrices(m, n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m).map(Matrix)


# --- kernel_basis ------------------------------------------------------------


def test_kernel_of_zero_matrix_is_everything():
    assert kernel_basis(Matrix.zeros(2, 2)) == Subspace.full(2)


def test_kernel_of_jordan_block():
    K = kernel_basis(Matrix([[0, 0], [1, 0]]))
    assert K == Subspace.span([(0, 1)], 2)


def test_kernel_of_identity_is_zero():
    assert kernel_basis(Matrix.identity(3)).dim == 0


@given(matrices(3, 4))
def test_kernel_vectors_are_killed(A):
    K = kernel_basis(A)
    assert K.dim == 4 - len(Subspace.span(A.rows, 4).basis)
    for v in K.basis:
        assert not any(A @ v)


# --- solve_linear ------------------------------------------------------------


def test_solve_jordan():
    assert solve_linear(Matrix([[0, 0], [1, 0]]), (0, 1)) == (1, 0)


def test_solve_identity_returns_b():
    b = (Fraction(3, 7), -2, 5)
    assert solve_linear(Matrix.identity(3), b) == tuple(Fraction(x) for x in b)


def test_solve_inconsistent_is_none():
    assert solve_linear(Matrix([[0, 0], [1, 0]]), (1, 0)) is None


@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_is_exact_when_consistent(A, x):
    b = A @ tuple(Fraction(v) for v in x)
    y = solve_linear(A, b)
    assert y is not None
    assert A @ y == b


def test_solve_is_deterministic():
    A = Matrix([[1, 1, 0], [0, 0, 1]])
    assert solve_linear(A, (2, 3)) == solve_linear(A, (2, 3)) == (2, 0, 3)


def test_symbolic_pencil_solution():
    t1, t2 = ParamScalar.variable(0, 2), ParamScalar.variable(1, 2)
    N = Matrix([[0, 0], [1, 0]])
    l = solve_pencil([N, N], (t1, t2), (0, t2))
    assert l[0] == t2 / (t1 + t2)


# --- smith normal form -------------------------------------------------------


def test_smith_coprime_diagonal():
    U, D, V = smith_normal_form(Matrix([[2, 0], [0, 3]]))
    assert D == Matrix([[1, 0], [0, 6]])


def test_smith_zero_matrix():
    U, D, V = smith_normal_form(Matrix.zeros(2, 2))
    assert D.is_zero() and U == Matrix.identity(2) and V == Matrix.identity(2)


def test_smith_torsion_block():
    _, D, _ = smith_normal_form(Matrix([[0, 0], [2, 0]]))
    assert D == Matrix([[2, 0], [0, 0]])


@given(matrices(3, 3))
def test_smith_is_a_unimodular_factorization(A):
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i, i] for i in range(3)]
    assert all(D[i, j] == 0 for i in range(3) for j in range(3) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


# --- subspaces ---------------------------------------------------------------


@given(matrices(2, 4), st.lists(small, min_size=4, max_size=4))
def test_subspace_canonical_form(A, c):
    rows = list(A.rows)
    S1 = Subspace.span(rows, 4)
    mixed = rows + [tuple(c[0] * x + c[1] * y for x, y in zip(*rows))]
    assert Subspace.span(list(reversed(mixed)), 4) == S1


def test_intersection_and_sum():
    X = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
    Y = Subspace.span([(0, 1, 0), (0, 0, 1)], 3)
    assert X.intersect(Y) == Subspace.span([(0, 1, 0)], 3)
    assert (X + Y) == Subspace.full(3)


def test_extend_from_gives_complement():
    small_ = Subspace.span([(1, 1, 0)], 3)
    extra = Subspace.full(3).extend_from(small_)
    assert len(extra) == 2
    assert Subspace.span(list(extra) + list(small_.basis), 3) == Subspace.full(3)


# --- matrices ----------------------------------------------------------------


@given(matrices(3, 3))
def test_inverse_when_invertible(A):
    if determinant(A) == 0:
        return
    assert A @ inverse(A) == Matrix.identity(3)


def test_nilpotency_and_exp_log():
    N = Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert is_nilpotent(N) and nilpotency_index(N) == 3
    T = exp_nilpotent(N)
    assert T == Matrix([[1, 0, 0], [1, 1, 0], [Fraction(1, 2), 1, 1]])
    assert log_unipotent(T) == N
    assert not is_nilpotent(Matrix.identity(2))


def test_multi_indices_are_lexicographic():
    assert list(multi_indices(3, 2)) == [(0, 1), (0, 2), (1, 2)]


# --- parsing -----------------------------------------------------------------


@pytest.mark.parametrize("text,value", [("3/6", Fraction(1, 2)), ("-2", Fraction(-2)), (" 4 / -8 ", Fraction(-1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", 0.5, None])
def test_parse_rational_rejects(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


def test_pole_is_a_zero_division():
    t1, t2 = ParamScalar.variable(0, 2), ParamScalar.variable(1, 2)
    with pytest.raises(PoleAtPoint):
        eval_param(t1 * t2 / (t1 + t2), (1, -1))
    with pytest.raises(ZeroDivisionError):
        eval_param(t1 * t2 / (t1 + t2), (1, -1))
