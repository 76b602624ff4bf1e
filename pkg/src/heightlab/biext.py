"""Mixed extensions of Z by L by Z(1) as block monodromy matrices.

Basis order is (e0, L, e_{-2}).  Over Q a variable contributes the logarithm

    [[0, 0, 0], [α_i, N_i, 0], [γ_i, -β_i, 0]]

and over Z the unipotent matrix

    [[1, 0, 0], [α_i, T_i, 0], [m_i, β_i, 1]].
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import floor

from .errors import BlockMismatch, NotGluable, NotRestricted, NotTorsion
from .exact import (
    Matrix,
    ZERO,
    exp_nilpotent,
    log_unipotent,
    scalar,
    smith_normal_form,
    solve_linear,
)
from .heights import complex_of, height_pairing, resolve_point, solve_at
from .koszul import Cochain, MonodromyRep, degree_one
from .param import ParamScalar


def _vec(v):
    return tuple(scalar(x) for x in v)


@dataclass(frozen=True)
class MixedExtension:
    rep: MonodromyRep
    alpha: tuple
    beta: tuple
    corner: tuple
    ring: str = "Q"

    @property
    def n(self) -> int:
        return self.rep.n

    @property
    def r(self) -> int:
        return self.rep.r

    def alpha_cochain(self) -> Cochain:
        return degree_one(self.alpha, self.n)

    def beta_cochain(self) -> Cochain:
        return degree_one(self.beta, self.n)

    def log_blocks(self) -> list:
        """The matrices Ñ_i (ring Q) or log T̃_i (ring Z)."""
        if self.ring == "Z":
            return [log_unipotent(T) for T in self.unipotent_blocks()]
        n = self.n
        out = []
        for a, Ni, b, g in zip(self.alpha, self.rep.N, self.beta, self.corner):
            rows = [[ZERO] * (n + 2)]
            for k in range(n):
                rows.append([a[k]] + list(Ni.rows[k]) + [ZERO])
            rows.append([g] + [-x for x in b] + [ZERO])
            out.append(Matrix(rows))
        return out

    def unipotent_blocks(self) -> list:
        """The matrices T̃_i (ring Z) or exp(Ñ_i) (ring Q)."""
        if self.ring == "Q":
            return [exp_nilpotent(M) for M in self.log_blocks()]
        n = self.n
        out = []
        for a, Ti, b, m in zip(self.alpha, self.rep.T, self.beta, self.corner):
            rows = [[Fraction(1)] + [ZERO] * (n + 1)]
            for k in range(n):
                rows.append([a[k]] + list(Ti.rows[k]) + [ZERO])
            rows.append([m] + list(b) + [Fraction(1)])
            out.append(Matrix(rows))
        return out

    def obstruction(self) -> Matrix:
        """A_ij = (α_j, β_i) − (α_i, β_j); gluing needs A = 0 (Q form)."""
        r = self.r
        dot = lambda u, v: sum((x * y for x, y in zip(u, v)), ZERO)
        return Matrix(
            [[dot(self.alpha[j], self.beta[i]) - dot(self.alpha[i], self.beta[j]) for j in range(r)] for i in range(r)]
        ) if r else Matrix.zeros(0, 0)

    def validate(self) -> "MixedExtension":
        mats = self.unipotent_blocks() if self.ring == "Z" else self.log_blocks()
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if mats[i] @ mats[j] != mats[j] @ mats[i]:
                    raise NotGluable(self.obstruction() if self.ring == "Q" else f"T~{i + 1}, T~{j + 1} do not commute")
        if self.ring == "Z" and not all(M.is_integral() for M in mats):
            raise NotGluable("integral blocks are not integral")
        return self


def make_mixed_extension(rep: MonodromyRep, alpha, beta, gamma=None, ring: str = "Q") -> MixedExtension:
    """Assemble and validate a mixed extension.

    ``alpha`` is a list of r vectors (a B^1 cocycle of rep), ``beta`` a list
    of r covectors (a B^1 cocycle of the dual).  The corner entries never
    enter the commutation relations, so any γ glues once the antisymmetric
    obstruction matrix vanishes; the default corner is 0.
    """
    r = rep.r
    alpha = tuple(_vec(a) for a in alpha)
    beta = tuple(_vec(b) for b in beta)
    corner = tuple(scalar(g) for g in gamma) if gamma is not None else (ZERO,) * r
    if not (len(alpha) == len(beta) == len(corner) == r):
        raise BlockMismatch("need one α, β and corner entry per variable")
    if ring not in ("Q", "Z"):
        raise ValueError("ring must be 'Q' or 'Z'")
    X = MixedExtension(rep, alpha, beta, corner, ring)
    if ring == "Q" and r:
        complex_of(rep).check_cocycle_in_B(X.alpha_cochain(), "alpha")
        complex_of(rep.dual()).check_cocycle_in_B(X.beta_cochain(), "beta")
        A = X.obstruction()
        if not A.is_zero():
            raise NotGluable(A)
    if ring == "Z" and rep.T is None:
        raise ValueError("an integral mixed extension needs unipotent lifts T_i")
    return X.validate()


def to_integral(X: MixedExtension) -> MixedExtension:
    """The Z-form with T̃_i = exp(Ñ_i); fails unless every block is integral."""
    if X.ring == "Z":
        return X
    mats = X.unipotent_blocks()
    if not all(M.is_integral() for M in mats):
        raise NotGluable("exp of the logarithms is not integral")
    n = X.n
    T = tuple(M.submatrix(range(1, n + 1), range(1, n + 1)) for M in mats)
    alpha = tuple(M.column(0)[1:n + 1] for M in mats)
    beta = tuple(M.rows[n + 1][1:n + 1] for M in mats)
    corner = tuple(M[n + 1, 0] for M in mats)
    rep = MonodromyRep(X.rep.N, n, T=T, weight=X.rep.weight, Q=X.rep.Q)
    return MixedExtension(rep, alpha, beta, corner, "Z").validate()


def act_torsor(q, X: MixedExtension) -> MixedExtension:
    """Shift the corner by q (one entry per variable)."""
    q = tuple(scalar(c) for c in q)
    if len(q) != X.r:
        raise BlockMismatch("torsor data must have one entry per variable")
    return replace(X, corner=tuple(c + d for c, d in zip(X.corner, q))).validate()


def _same_base(X: MixedExtension, Y: MixedExtension) -> None:
    if X.ring != Y.ring or X.rep.N != Y.rep.N or X.rep.T != Y.rep.T:
        raise BlockMismatch("extensions live over different local systems")


def add1(X: MixedExtension, Y: MixedExtension) -> MixedExtension:
    """Sum along the shared β edge: adds α and the corner."""
    _same_base(X, Y)
    if X.beta != Y.beta:
        raise BlockMismatch("+1 needs equal beta blocks")
    alpha = tuple(tuple(a + b for a, b in zip(u, v)) for u, v in zip(X.alpha, Y.alpha))
    corner = tuple(a + b for a, b in zip(X.corner, Y.corner))
    return replace(X, alpha=alpha, corner=corner).validate()


def add2(X: MixedExtension, Y: MixedExtension) -> MixedExtension:
    """Sum along the shared α edge: adds β and the corner."""
    _same_base(X, Y)
    if X.alpha != Y.alpha:
        raise BlockMismatch("+2 needs equal alpha blocks")
    beta = tuple(tuple(a + b for a, b in zip(u, v)) for u, v in zip(X.beta, Y.beta))
    corner = tuple(a + b for a, b in zip(X.corner, Y.corner))
    return replace(X, beta=beta, corner=corner).validate()


def _matrix_power(M: Matrix, k: int) -> Matrix:
    return M ** k


def pullback_test_curve(X: MixedExtension, t) -> MixedExtension:
    """One-variable extension with monodromy prod T̃_i^{t_i} (Z) or logarithm sum t_i Ñ_i (Q)."""
    n = X.n
    if X.ring == "Z":
        if any(int(c) != c or c < 0 for c in t):
            raise ValueError("integral pullback needs t in Z_{>=0}^r")
        M = Matrix.identity(n + 2)
        for Ti, c in zip(X.unipotent_blocks(), t):
            M = M @ _matrix_power(Ti, int(c))
        T = M.submatrix(range(1, n + 1), range(1, n + 1))
        rep = MonodromyRep((log_unipotent(T),), n, T=(T,))
        return MixedExtension(rep, (M.column(0)[1:n + 1],), (M.rows[n + 1][1:n + 1],), (M[n + 1, 0],), "Z")
    t = tuple(scalar(c) for c in t)
    alpha = tuple(sum((c * a[k] for a, c in zip(X.alpha, t)), ZERO) for k in range(n))
    beta = tuple(sum((c * b[k] for b, c in zip(X.beta, t)), ZERO) for k in range(n))
    gamma = sum((c * g for g, c in zip(X.corner, t)), ZERO)
    rep = MonodromyRep((X.rep.N_at(t),), n)
    return MixedExtension(rep, (alpha,), (beta,), (gamma,), "Q")


def tau_tilde_matrix(Tt: Matrix):
    """p_{-2}((T̃ − 1) e0) for e0 over e0-coordinate 1 with (T̃ − 1) e0 in W_{-2}.

    W_{-2} is the last coordinate, W_{-1} everything but the first.
    """
    size = Tt.nrows
    n = size - 2
    D = Tt - Matrix.identity(size)
    if any(D.rows[0]):
        raise NotRestricted("the monodromy does not act trivially on Gr_0")
    middle = D.submatrix(range(1, n + 1), range(1, n + 1))
    a = tuple(D[k, 0] for k in range(1, n + 1))
    b = tuple(D[n + 1, k] for k in range(1, n + 1))
    x = solve_linear(middle, tuple(-c for c in a)) if n else ()
    if x is None:
        raise NotRestricted("X/W_{-2} is not rationally trivial")
    if n and solve_linear(middle.T, b) is None:
        raise NotRestricted("W_{-1}X is not rationally trivial")
    return D[n + 1, 0] + sum((u * v for u, v in zip(b, x)), ZERO)


def tau_tilde(X: MixedExtension):
    if X.r != 1:
        raise ValueError("tau_tilde needs a one-variable extension; pull back first")
    return tau_tilde_matrix(X.unipotent_blocks()[0])


@dataclass(frozen=True)
class TorsionValue:
    value: Fraction

    @classmethod
    def of(cls, x) -> "TorsionValue":
        x = Fraction(x)
        return cls(x - floor(x))

    def __add__(self, other: "TorsionValue") -> "TorsionValue":
        return TorsionValue.of(self.value + other.value)

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _in_rational_image(A: Matrix, x) -> bool:
    """x in A Q^n, decided from the Smith form D = U A V: (U x)_i = 0 wherever d_i = 0."""
    U, D, _ = smith_normal_form(A)
    y = U @ x
    k = min(D.nrows, D.ncols)
    nonzero = {i for i in range(k) if D[i, i]}
    return all(not y[i] for i in range(len(y)) if i not in nonzero)


def torsion_pairing(T: Matrix, alpha, beta) -> TorsionValue:
    """τ([α], [β]) = −(ℓ, β) mod Z with (T − 1) ℓ = α, on the standard lattice Z^n."""
    n = T.nrows
    alpha, beta = _vec(alpha), _vec(beta)
    if not T.is_integral():
        raise NotTorsion("T must be integral")
    for name, v in (("alpha", alpha), ("beta", beta)):
        if any(c.denominator != 1 for c in v):
            raise NotTorsion(f"{name} is not a lattice vector")
    A = T - Matrix.identity(n)
    if not _in_rational_image(A, alpha):
        raise NotTorsion("alpha is not torsion")
    if not _in_rational_image(A.T, beta):
        raise NotTorsion("beta is not torsion")
    ell = solve_linear(A, alpha)
    return TorsionValue.of(-sum((u * v for u, v in zip(ell, beta)), ZERO))


def torsion_order(T: Matrix) -> int:
    """Exponent of the torsion part of Z^n / (T − 1) Z^n (1 when torsion-free)."""
    D = smith_normal_form(T - Matrix.identity(T.nrows))[1]
    out = 1
    for i in range(min(D.shape)):
        d = int(D[i, i])
        if d > 1:
            out = max(out, d)
    return out


# --- μ and the jump identity ------------------------------------------------


def _log_data(X: MixedExtension):
    """(N_i, α_i, β_i, γ_i) read from the logarithms, whatever the ring."""
    if X.ring == "Q":
        return X.rep.N, X.alpha, X.beta, X.corner
    n = X.n
    logs = X.log_blocks()
    N = tuple(M.submatrix(range(1, n + 1), range(1, n + 1)) for M in logs)
    alpha = tuple(M.column(0)[1:n + 1] for M in logs)
    beta = tuple(tuple(-x for x in M.rows[n + 1][1:n + 1]) for M in logs)
    gamma = tuple(M[n + 1, 0] for M in logs)
    return N, alpha, beta, gamma


def mu_of_t(X: MixedExtension, t=None, *, stratum=None):
    """μ(t) = γ(t) + (l(t), β(t)) with N(t) l(t) = α(t)."""
    from .errors import NotAdmissible

    N, alpha, beta, gamma = _log_data(X)
    rep = MonodromyRep(tuple(N), X.n)
    point, strat, symbolic = resolve_point(X.r, t, stratum)
    n = X.n
    a_t = tuple(sum((c * a[k] for a, c in zip(alpha, point) if c), ZERO) for k in range(n))
    b_t = tuple(sum((c * b[k] for b, c in zip(beta, point) if c), ZERO) for k in range(n))
    g_t = sum((c * g for g, c in zip(gamma, point) if c), ZERO)
    l = solve_at(rep, a_t, point)
    if l is None:
        raise NotAdmissible(f"N(t) l = alpha(t) has no solution on stratum {list(strat)}")
    value = g_t + sum((u * v for u, v in zip(l, b_t) if u and v), ZERO)
    if symbolic and not isinstance(value, ParamScalar):
        value = ParamScalar.constant(value, X.r)
    return value


@dataclass(frozen=True)
class JumpReport:
    h: object
    mu: object
    linear: object
    holds: bool

    @property
    def jump(self):
        return -self.h


def jump_identity_check(X: MixedExtension, t=None, *, stratum=None) -> JumpReport:
    """Compare h(t)(α, β) with −μ(t) + sum t_i μ_i."""
    N, alpha, beta, _ = _log_data(X)
    rep = MonodromyRep(tuple(N), X.n)
    point, strat, symbolic = resolve_point(X.r, t, stratum)
    h = height_pairing(rep, degree_one(alpha, X.n), degree_one(beta, X.n), point).value
    mu = mu_of_t(X, point)
    linear = ZERO
    for i, c in enumerate(point):
        if c:
            e = tuple(Fraction(int(j == i)) for j in range(X.r))
            linear = linear + c * mu_of_t(X, e)
    return JumpReport(h, mu, linear, h == -mu + linear)
