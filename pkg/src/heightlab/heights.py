"""The pairings (,)_T, q_t, Q_t and the asymptotic height pairing h(t)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NotAdmissible, NotInImage
from .exact import (
    Matrix,
    Subspace,
    ZERO,
    multi_indices,
    restricted_kernel,
    scalar,
    solution_operator,
    solve_linear,
    solve_pencil,
)
from .filtrations import induced_weight_on_koszul, monodromy_weight_filtration
from .koszul import (
    Cochain,
    KoszulComplex,
    MonodromyRep,
    apply_componentwise,
    delta_t,
    symbolic_point,
)
from .param import ParamScalar


@lru_cache(maxsize=64)
def complex_of(rep: MonodromyRep) -> KoszulComplex:
    return KoszulComplex(rep)


def pair_T(x, lam, T: Matrix):
    """(v, λ) for any v with T v = x; needs x in im T and λ in im T^T."""
    if not solution_operator(T.T).consistent(tuple(scalar(c) for c in lam)):
        raise NotInImage("covector is not in the image of the transpose")
    v = solution_operator(T).solve(tuple(scalar(c) for c in x))
    if v is None:
        raise NotInImage("vector is not in the image")
    acc = ZERO
    for a, b in zip(v, lam):
        if a and b:
            acc = acc + a * b
    return acc


def _t_of(t, I):
    acc = Fraction(1)
    for i in I:
        acc = acc * t[i]
    return acc


def q_t(rep: MonodromyRep, alpha: Cochain, beta: Cochain, t):
    """sum over I of t_I (α_I, β_I)_{N_I}; N_I taken from ``rep`` (the first argument's)."""
    acc = ZERO
    for k, I in enumerate(multi_indices(alpha.r, alpha.p)):
        tI = _t_of(t, I)
        if not tI:
            continue
        a, b = alpha.component_at(k), beta.component_at(k)
        if not any(a) or not any(b):
            continue
        acc = acc + tI * pair_T(a, b, rep.N_product(I))
    return acc


def Q_t(rep: MonodromyRep, alpha: Cochain, beta: Cochain, t, Q: Matrix | None = None):
    """sum over I of t_I Q(u_I, β_I) where N_I u_I = α_I."""
    Q = rep.Q if Q is None else Q
    acc = ZERO
    for k, I in enumerate(multi_indices(alpha.r, alpha.p)):
        tI = _t_of(t, I)
        if not tI:
            continue
        a, b = alpha.component_at(k), beta.component_at(k)
        if not any(a) or not any(b):
            continue
        acc = acc + tI * pair_T(a, Q @ b, rep.N_product(I))
    return acc


def solve_at(rep: MonodromyRep, b, t):
    """A solution of N(t) l = b, or None."""
    return solve_pencil(rep.N, t, b)


def resolve_point(r: int, t=None, stratum=None):
    """Return (point, stratum, symbolic) for a numeric t or a symbolic stratum."""
    if t is None:
        stratum = tuple(range(1, r + 1)) if stratum is None else tuple(sorted(set(stratum)))
        if any(not 1 <= j <= r for j in stratum):
            raise ValueError(f"stratum {stratum} is not a subset of 1..{r}")
        return symbolic_point(r, stratum), stratum, True
    if len(t) != r:
        raise ValueError(f"expected {r} coordinates, got {len(t)}")
    if any(isinstance(x, ParamScalar) for x in t):
        s = tuple(j + 1 for j, x in enumerate(t) if x)
        return tuple(t), s, True
    point = tuple(scalar(x) for x in t)
    return point, tuple(j + 1 for j, x in enumerate(point) if x), False


@dataclass(frozen=True)
class PairingReport:
    value: object
    stratum: tuple
    alpha: Cochain
    beta: Cochain
    l: tuple

    @property
    def symbolic(self) -> bool:
        return isinstance(self.value, ParamScalar)


def _as_param(value, r):
    if isinstance(value, ParamScalar):
        return value
    return ParamScalar.constant(value, r)


def height_pairing(
    rep: MonodromyRep,
    alpha: Cochain,
    beta: Cochain,
    t=None,
    *,
    stratum=None,
    l=None,
    check: bool = True,
) -> PairingReport:
    """h(t)(α, β) = sum t_i (α_i − N_i l(t), β_i)_{N_i} with N(t) l(t) = α(t).

    α is a B^1 cocycle of ``rep``, β one of the dual.  Without ``t`` the
    value is a rational function valid on ``stratum`` (default: all t_j > 0).
    """
    if check:
        complex_of(rep).check_cocycle_in_B(alpha, "alpha")
        complex_of(rep.dual()).check_cocycle_in_B(beta, "beta")
    point, strat, symbolic = resolve_point(rep.r, t, stratum)
    a_t = delta_t(alpha, point).data
    if l is None:
        l = solve_at(rep, a_t, point)
        if l is None:
            raise NotAdmissible(f"N(t) l = alpha(t) has no solution on stratum {list(strat)}")
    else:
        l = tuple(scalar(x) for x in l)
        if any(a - b for a, b in zip(rep.N_at(point) @ l, a_t)):
            raise NotAdmissible("the supplied l does not solve N(t) l = alpha(t)")
    acc = ZERO
    for i in range(rep.r):
        ti = point[i]
        if not ti:
            continue
        b = beta.component_at(i)
        if not any(b):
            continue
        a = alpha.component_at(i)
        resid = tuple(x - y for x, y in zip(a, rep.N[i] @ l))
        acc = acc + ti * pair_T(resid, b, rep.N[i])
    value = _as_param(acc, rep.r) if symbolic else acc
    return PairingReport(value, strat, alpha, beta, tuple(l))


def a_Q(Q: Matrix, alpha: Cochain) -> Cochain:
    """Componentwise h -> Q(h, -), i.e. the covector Q^T h."""
    return apply_componentwise(Q.T, alpha)


def hQ(rep: MonodromyRep, alpha: Cochain, beta: Cochain, t=None, *, Q: Matrix | None = None, stratum=None) -> PairingReport:
    """h_Q(t)(α, β) = h(t)(a_Q α, β) for classes α, β of ``rep``."""
    Q = rep.Q if Q is None else Q
    if Q is None:
        raise ValueError("a polarization is required")
    complex_of(rep).check_cocycle_in_B(alpha, "alpha")
    return height_pairing(rep.dual(), a_Q(Q, alpha), beta, t, stratum=stratum)


# --- subspaces L_t and R_t ---------------------------------------------------


def _operator_columns(f, basis):
    return [f(v) for v in basis]


def delta_matrix(rep: MonodromyRep, p: int, t) -> Matrix:
    K = complex_of(rep)
    dim = K.dim(p)
    cols = []
    for k in range(dim):
        e = tuple(Fraction(1) if i == k else ZERO for i in range(dim))
        cols.append(delta_t(Cochain(p, rep.r, rep.n, e), t).data)
    return Matrix.from_columns(cols, K.dim(p - 1))


def Lt_space(rep: MonodromyRep, p: int, t) -> Subspace:
    """ker δ_t ∩ ker d inside B^p (numeric t)."""
    K = complex_of(rep)
    Z = K.B_cocycles(p)
    if p == 0:
        return Z
    return restricted_kernel(delta_matrix(rep, p, t), Z)


def Rt_space(rep: MonodromyRep, p: int, t) -> Subspace:
    """ker d ∩ ker Δ_t inside B^p; Δ_t acts as N(t) componentwise."""
    K = complex_of(rep)
    Z = K.B_cocycles(p)
    Nt = rep.N_at(t)
    blocks = K.dim(p) // rep.n if rep.n else 0
    entries = {}
    for b in range(blocks):
        for i in range(rep.n):
            for j in range(rep.n):
                if Nt[i, j]:
                    entries[(b * rep.n + i, b * rep.n + j)] = Nt[i, j]
    D = Matrix.from_sparse(entries, K.dim(p), K.dim(p))
    return restricted_kernel(D, Z)


def lt_surjects(rep: MonodromyRep, p: int, t) -> bool:
    K = complex_of(rep)
    IH = K.intersection_cohomology(p)
    return (Lt_space(rep, p, t) + IH.coboundaries) == IH.cocycles


# --- definiteness -------------------------------------------------------------


def ldl_pivots(G: Matrix):
    """Diagonal pivots of an exact symmetric-pivoting LDL^T, or None if not PSD.

    Returns the list of nonzero pivots; the matrix is PSD iff the result is
    not None, and PD iff additionally there are as many pivots as rows.
    """
    n = G.nrows
    A = [list(r) for r in G.rows]
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(i)):
        return None
    remaining = list(range(n))
    pivots = []
    while remaining:
        diag = [(A[i][i], i) for i in remaining]
        if any(d < 0 for d, _ in diag):
            return None
        pos = [(d, i) for d, i in diag if d > 0]
        if not pos:
            if any(A[i][j] for i in remaining for j in remaining):
                return None
            break
        d, k = max(pos)
        remaining.remove(k)
        pivots.append(d)
        for i in remaining:
            f = A[i][k] / d
            if f:
                for j in remaining:
                    A[i][j] -= f * A[k][j]
    return pivots


def is_positive_semidefinite(G: Matrix) -> bool:
    return ldl_pivots(G) is not None


def is_positive_definite(G: Matrix) -> bool:
    piv = ldl_pivots(G)
    return piv is not None and len(piv) == G.nrows


# --- graded polarization ------------------------------------------------------


@dataclass(frozen=True)
class GradedGram:
    gram: Matrix
    representatives: tuple
    positive_definite: bool
    positive_semidefinite: bool


def graded_Qbar(rep: MonodromyRep, p: int, t, Q: Matrix | None = None, weight: int | None = None) -> GradedGram:
    """Gram matrix of the induced polarization on Gr^W_{p+k} IH^p at an interior t.

    Representatives are taken in L_t^p, which is Q_t-orthogonal to the
    lower-weight part of R_t^p.
    """
    Q = rep.Q if Q is None else Q
    k = rep.weight if weight is None else weight
    if Q is None or k is None:
        raise ValueError("a weight and a polarization are required")
    t = tuple(scalar(x) for x in t)
    K = complex_of(rep)
    IH = K.intersection_cohomology(p)
    W = monodromy_weight_filtration(rep.N_at(t), k)
    WK = induced_weight_on_koszul(W, p, rep.r)
    lower = IH.cocycles.intersect(WK[p + k - 1]) + IH.coboundaries
    top = IH.cocycles.extend_from(lower)
    if not top:
        return GradedGram(Matrix.zeros(0, 0), (), True, True)
    L = Lt_space(rep, p, t)
    gens = list(L.basis) + list(lower.basis)
    G = Matrix.from_columns(gens, K.dim(p))
    reps = []
    for x in top:
        y = solve_linear(G, x)
        if y is None:
            raise NotAdmissible("no representative of the class lies in L_t")
        z = [ZERO] * K.dim(p)
        for c, b in zip(y[: L.dim], L.basis):
            if c:
                z = [u + c * w for u, w in zip(z, b)]
        reps.append(Cochain(p, rep.r, rep.n, tuple(z)))
    gram = Matrix([[Q_t(rep, a, b, t, Q) for b in reps] for a in reps])
    return GradedGram(gram, tuple(reps), is_positive_definite(gram), is_positive_semidefinite(gram))
