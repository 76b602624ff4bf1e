"""Rational functions in t1..tr over Q.

Polynomials are python-flint ``fmpq_mpoly`` objects in a graded-lex context;
the field structure (reduced fractions, normalised denominators, evaluation,
substitution, printing) lives here.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache

import flint

from .errors import ParseError, PoleAtPoint

ORDERING = "deglex"


@lru_cache(maxsize=None)
def param_context(nvars: int, prefix: str = "t"):
    names = tuple(f"{prefix}{i + 1}" for i in range(nvars))
    return flint.fmpq_mpoly_ctx.get(names, ORDERING)


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class ParamScalar:
    """An element of Q(t1, ..., tr) kept in lowest terms.

    The denominator is monic with respect to graded-lex order, so two equal
    functions always have identical numerator and denominator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, normalized: bool = False):
        if den is None:
            den = num.context().constant(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not normalized:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, value, nvars: int) -> "ParamScalar":
        ctx = param_context(nvars)
        return cls(ctx.constant(to_fmpq(value)), ctx.constant(1), normalized=True)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "ParamScalar":
        ctx = param_context(nvars)
        return cls(ctx.gen(index), ctx.constant(1), normalized=True)

    @property
    def context(self):
        return self.num.context()

    @property
    def nvars(self) -> int:
        return self.context.nvars()

    def _coerce(self, other):
        if isinstance(other, ParamScalar):
            if other.nvars != self.nvars:
                raise ValueError("rational functions live in different fields")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            ctx = self.context
            return ParamScalar(ctx.constant(to_fmpq(other)), ctx.constant(1), normalized=True)
        return NotImplemented

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return ParamScalar(self.num + other.num, self.den)
        return ParamScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar(-self.num, self.den, normalized=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            c = to_fmpq(other)
            if c == 0:
                return ParamScalar(self.num * 0, self.den.context().constant(1), normalized=True)
            return ParamScalar(self.num * c, self.den, normalized=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ParamScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return ParamScalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return ParamScalar(self.den, self.num) ** (-k)
        return ParamScalar(self.num**k, self.den**k, normalized=True)

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.den.is_one() and self.num == self.context.constant(to_fmpq(other))
        if isinstance(other, ParamScalar):
            return self.nvars == other.nvars and self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.nvars, str(self.num), str(self.den)))

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return to_fraction(self.num.leading_coefficient() if not self.num.is_zero() else flint.fmpq(0))

    # evaluation -------------------------------------------------------
    def __call__(self, *point) -> Fraction:
        return eval_param(self, point)

    def substitute(self, values) -> "ParamScalar | Fraction":
        """Compose with ``values`` (one Fraction or ParamScalar per variable)."""
        return _eval_poly(self.num, values) / _eval_poly(self.den, values)

    def restrict(self, stratum) -> "ParamScalar":
        """Set t_j = 0 for every j (1-based) outside ``stratum``."""
        keep = set(stratum)
        zeros = {name: 0 for i, name in enumerate(self.context.names()) if i + 1 not in keep}
        if not zeros:
            return self
        den = self.den.subs(zeros)
        if den.is_zero():
            raise PoleAtPoint(f"{self} has a pole along the stratum {sorted(keep)}")
        return ParamScalar(self.num.subs(zeros), den)

    def numerator_terms(self):
        return list(self.num.terms())

    def __str__(self):
        return format_param(self)

    def __repr__(self):
        return f"ParamScalar({format_param(self)!r})"


def _eval_poly(poly, values):
    acc = Fraction(0)
    for exps, coeff in poly.terms():
        term = to_fraction(coeff)
        for v, e in zip(values, exps):
            if e:
                term = term * v**e
        acc = acc + term
    return acc


def eval_param(f, point) -> Fraction:
    """Evaluate ``f`` exactly at a point of Q^r.

    Raises PoleAtPoint when the denominator vanishes there.
    """
    if not isinstance(f, ParamScalar):
        return to_fraction(f)
    if len(point) != f.nvars:
        raise ValueError(f"expected {f.nvars} coordinates, got {len(point)}")
    args = [to_fmpq(Fraction(x)) for x in point]
    den = f.den(*args)
    if den == 0:
        raise PoleAtPoint(f"denominator of {f} vanishes at {tuple(str(x) for x in point)}")
    return to_fraction(f.num(*args) / den)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(poly) -> str:
    names = poly.context().names()
    parts = []
    for exps, coeff in poly.terms():
        c = to_fraction(coeff)
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
        )
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def format_param(f) -> str:
    """Canonical string: ``p/q`` for constants, ``(num)/(den)`` otherwise."""
    if isinstance(f, ParamScalar):
        if f.is_constant():
            return _format_coeff(f.constant_value())
        if f.den.is_one():
            return format_poly(f.num)
        return f"({format_poly(f.num)})/({format_poly(f.den)})"
    return _format_coeff(to_fraction(f))


_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Div,
    ast.Pow, ast.USub, ast.UAdd, ast.Constant, ast.Name, ast.Load,
)


def parse_param(text: str, nvars: int):
    """Parse a rational function written in t1..tr (``^`` or ``**`` for powers).

    Returns a Fraction when the expression has no variables.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ParseError(f"unsupported syntax in {text!r}")
    gens = {f"t{i + 1}": ParamScalar.variable(i, nvars) for i in range(nvars)}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int) or isinstance(node.value, bool):
                raise ParseError(f"only integer literals are allowed in {text!r}")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in gens:
                raise ParseError(f"unknown variable {node.id!r}")
            return gens[node.id]
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        left, right = ev(node.left), ev(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right:
                raise ParseError(f"division by zero in {text!r}")
            return left / right
        if not isinstance(right, Fraction) or right.denominator != 1:
            raise ParseError(f"non-integer exponent in {text!r}")
        return left ** int(right)

    value = ev(tree)
    if isinstance(value, ParamScalar) and value.is_constant():
        return value.constant_value()
    return value


def limit_at_zero(f) -> Fraction:
    """Exact limit s -> 0 of a univariate rational function in s."""
    if not isinstance(f, ParamScalar):
        return to_fraction(f)
    if f.nvars != 1:
        raise ValueError("limit_at_zero expects a function of one variable")

    def low_order(poly):
        terms = list(poly.terms())
        k = min(e[0] for e, _ in terms)
        return k, to_fraction(next(c for e, c in terms if e[0] == k))

    if f.num.is_zero():
        return Fraction(0)
    a, ca = low_order(f.num)
    b, cb = low_order(f.den)
    if a > b:
        return Fraction(0)
    if a < b:
        raise PoleAtPoint(f"{f} diverges as s -> 0")
    return ca / cb
