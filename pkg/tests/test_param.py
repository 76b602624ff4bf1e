from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from heightlab.param import ParamScalar, eval_param, format_param, limit_at_zero, parse_param

t1, t2, t3 = (ParamScalar.variable(i, 3) for i in range(3))
s1, s2 = ParamScalar.variable(0, 2), ParamScalar.variable(1, 2)

coeff = st.integers(-3, 3)


@st.composite
def polys(draw):
    """Small polynomials in three variables."""
    acc = ParamScalar.constant(draw(coeff), 3)
    for v in (t1, t2, t3):
        acc = acc + draw(coeff) * v
    acc = acc + draw(coeff) * t1 * t2
    return acc


def test_simple_formula_at_one_one():
    assert eval_param(s1 * s2 / (s1 + s2), (1, 1)) == Fraction(1, 2)


def test_constant_zero_evaluates_to_zero():
    assert eval_param(ParamScalar.constant(0, 2), (7, -3)) == 0


def test_canonical_formatting():
    assert format_param(4 * s1 * s2 / (s1 + s2)) == "(4*t1*t2)/(t1+t2)"
    assert format_param(ParamScalar.constant(Fraction(-3, 4), 2)) == "-3/4"
    assert format_param(24 * s1 * s2 / (s1 + s2)) == "(24*t1*t2)/(t1+t2)"


def test_normalization_is_canonical():
    a = (2 * s1 * s2) / (2 * s1 + 2 * s2)
    b = (s1 * s2 * (s1 - s2)) / ((s1 + s2) * (s1 - s2))
    assert a == b
    assert format_param(a) == format_param(b)


@given(polys(), polys())
def test_field_axioms(f, g):
    assume(f and g)
    assert (f / g) * (g / f) == 1
    assert (f + g) - g == f


@given(polys(), polys(), st.tuples(coeff, coeff, coeff))
def test_evaluation_commutes_with_arithmetic(f, g, point):
    assert eval_param(f * g, point) == eval_param(f, point) * eval_param(g, point)
    assert eval_param(f - g, point) == eval_param(f, point) - eval_param(g, point)
    if eval_param(g, point):
        assert eval_param(f / g, point) == eval_param(f, point) / eval_param(g, point)


@given(polys(), polys())
def test_format_parse_round_trip(f, g):
    assume(g)
    h = f / g
    assert parse_param(format_param(h), 3) == h


def test_univariate_limit():
    s = ParamScalar.variable(0, 1)
    assert limit_at_zero((3 * s + s * s) / (s + 2)) == 0
    assert limit_at_zero((3 * s + s * s) / (2 * s)) == Fraction(3, 2)
