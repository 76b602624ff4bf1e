"""Koszul complex K = L ⊗ ∧E, the partial complex B, and test-curve restriction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import NotACocycle, NotCommuting, NotNilpotent, ValidationError
from .exact import (
    Matrix,
    Subspace,
    ZERO,
    column_space,
    commutator,
    exp_nilpotent,
    inverse,
    is_nilpotent,
    kernel_basis,
    multi_indices,
    restricted_kernel,
    solve_linear,
    smith_normal_form,
)
from .param import ParamScalar


def wedge_sign(i: int, J) -> int:
    """Sign of e_i ∧ e_J relative to the sorted basis vector (i not in J)."""
    return -1 if sum(1 for j in J if j < i) % 2 else 1


@dataclass(frozen=True)
class MonodromyRep:
    """Commuting nilpotent logarithms N_1..N_r on Q^n.

    ``T`` holds optional integral unipotent lifts with log T_i = N_i.
    ``weight`` and ``Q`` (a polarization, as a Gram matrix) are metadata
    used by the weight and polarization code only.
    """

    N: tuple
    n: int
    T: tuple | None = None
    weight: int | None = None
    Q: Matrix | None = None

    @classmethod
    def from_logs(cls, N_list, n: int | None = None, **kw) -> "MonodromyRep":
        N = tuple(M if isinstance(M, Matrix) else Matrix(M) for M in N_list)
        if n is None:
            n = N[0].nrows if N else 0
        return cls(N, n, **kw)

    @classmethod
    def from_unipotent(cls, T_list, **kw) -> "MonodromyRep":
        from .exact import log_unipotent

        T = tuple(M if isinstance(M, Matrix) else Matrix(M) for M in T_list)
        return cls(tuple(log_unipotent(M) for M in T), T[0].nrows, T=T, **kw)

    @property
    def r(self) -> int:
        return len(self.N)

    def problems(self) -> list:
        """Every violated invariant, as human-readable dicts."""
        out = []
        for i, M in enumerate(self.N):
            if M.shape != (self.n, self.n):
                out.append({"message": f"N{i + 1} has shape {M.shape}, expected {(self.n, self.n)}"})
            elif not is_nilpotent(M):
                out.append({"message": f"N{i + 1} is not nilpotent", "index": i + 1})
        if out:
            return out
        for i in range(self.r):
            for j in range(i + 1, self.r):
                if not commutator(self.N[i], self.N[j]).is_zero():
                    out.append({"message": f"N{i + 1} and N{j + 1} do not commute", "pair": [i + 1, j + 1]})
        if self.T is not None:
            for i, (Ti, Ni) in enumerate(zip(self.T, self.N)):
                if not Ti.is_integral():
                    out.append({"message": f"T{i + 1} is not integral", "index": i + 1})
                    continue
                if exp_nilpotent(Ni) != Ti:
                    out.append({"message": f"T{i + 1} != exp(N{i + 1})", "index": i + 1})
                D = smith_normal_form(Ti)[1]
                if any(D[k, k] != 1 for k in range(self.n)):
                    out.append({"message": f"T{i + 1} is not unimodular", "index": i + 1})
        if self.Q is not None:
            for i, Ni in enumerate(self.N):
                if not (Ni.T @ self.Q + self.Q @ Ni).is_zero():
                    out.append({"message": f"N{i + 1} is not an infinitesimal isometry of Q", "index": i + 1})
        return out

    def check(self) -> "MonodromyRep":
        """Raise on the first violated invariant; returns self for chaining."""
        for i, M in enumerate(self.N):
            if M.shape != (self.n, self.n):
                raise ValidationError([{"message": f"N{i + 1} has the wrong shape"}])
            if not is_nilpotent(M):
                raise NotNilpotent(f"N{i + 1} is not nilpotent")
        for i in range(self.r):
            for j in range(i + 1, self.r):
                if not commutator(self.N[i], self.N[j]).is_zero():
                    raise NotCommuting(i + 1, j + 1)
        rest = self.problems()
        if rest:
            raise ValidationError(rest)
        return self

    def dual(self) -> "MonodromyRep":
        """The contragredient: logarithms -N_i^T, lifts (T_i^T)^{-1}."""
        T = None
        if self.T is not None:
            T = tuple(inverse(M).T for M in self.T)
        weight = None if self.weight is None else -self.weight
        return MonodromyRep(tuple(-M.T for M in self.N), self.n, T=T, weight=weight)

    def N_at(self, t) -> Matrix:
        """N(t) = sum t_i N_i; entries are rational functions when t is symbolic."""
        acc = Matrix.zeros(self.n, self.n)
        for Ni, ti in zip(self.N, t):
            if ti:
                acc = acc + Ni.scale(ti)
        return acc

    def N_product(self, J) -> Matrix:
        """N_J = N_{j1} ... N_{jp} (identity for the empty index)."""
        acc = Matrix.identity(self.n)
        for j in J:
            acc = acc @ self.N[j]
        return acc


@dataclass(frozen=True)
class Cochain:
    """An element of K^p, stored as the concatenation of its components.

    Component J (0-based strictly increasing tuple) occupies the block at the
    position of J in the lexicographic list of p-subsets.
    """

    p: int
    r: int
    n: int
    data: tuple

    @classmethod
    def from_components(cls, p: int, r: int, n: int, components: dict) -> "Cochain":
        data = []
        for J in multi_indices(r, p):
            v = components.get(J)
            data.extend(v if v is not None else (ZERO,) * n)
        return cls(p, r, n, tuple(data))

    @classmethod
    def zero(cls, p: int, r: int, n: int) -> "Cochain":
        return cls(p, r, n, (ZERO,) * (n * comb(r, p)))

    def components(self) -> dict:
        return {J: self.component_at(k) for k, J in enumerate(multi_indices(self.r, self.p))}

    def component_at(self, k: int) -> tuple:
        return self.data[k * self.n:(k + 1) * self.n]

    def component(self, J) -> tuple:
        return self.component_at(multi_indices(self.r, self.p).index(tuple(J)))

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.p, self.r, self.n, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.p, self.r, self.n, tuple(a - b for a, b in zip(self.data, other.data)))

    def scale(self, c) -> "Cochain":
        return Cochain(self.p, self.r, self.n, tuple(c * a for a in self.data))

    def is_zero(self) -> bool:
        return not any(self.data)


def degree_one(components, n: int | None = None) -> Cochain:
    """Build a 1-cochain from the list (alpha_1, ..., alpha_r)."""
    comps = [tuple(Fraction(x) if not isinstance(x, (Fraction, ParamScalar)) else x for x in c) for c in components]
    n = len(comps[0]) if n is None else n
    return Cochain(1, len(comps), n, tuple(x for c in comps for x in c))


@dataclass(frozen=True)
class CohomologyPresentation:
    p: int
    cocycles: Subspace
    coboundaries: Subspace
    transversal: tuple

    @property
    def dim(self) -> int:
        return len(self.transversal)

    def contains_class(self, x) -> bool:
        return self.cocycles.contains(x)

    def is_exact(self, x) -> bool:
        return self.coboundaries.contains(x)

    def class_coordinates(self, x) -> tuple:
        """Coordinates of the class of x in the transversal basis."""
        basis = list(self.transversal) + list(self.coboundaries.basis)
        y = solve_linear(Matrix.from_columns(basis, len(x)), x)
        if y is None:
            raise NotACocycle("vector is not a cocycle")
        return y[: self.dim]


class KoszulComplex:
    """K(L) with its differential and the subcomplex B(L)."""

    def __init__(self, rep: MonodromyRep):
        self.rep = rep
        self.n = rep.n
        self.r = rep.r
        self._d: dict = {}
        self._B: dict = {}

    def dim(self, p: int) -> int:
        return self.n * comb(self.r, p) if 0 <= p <= self.r else 0

    def d(self, p: int) -> Matrix:
        """Matrix of d: K^p -> K^{p+1}."""
        if p in self._d:
            return self._d[p]
        n, r = self.n, self.r
        src, dst = multi_indices(r, p), multi_indices(r, p + 1)
        pos = {J: k for k, J in enumerate(dst)}
        entries = {}
        for k, J in enumerate(src):
            for i in range(r):
                if i in J:
                    continue
                target = pos[tuple(sorted(J + (i,)))]
                s = wedge_sign(i, J)
                Ni = self.rep.N[i]
                for a in range(n):
                    for b in range(n):
                        x = Ni[a, b]
                        if x:
                            key = (target * n + a, k * n + b)
                            entries[key] = entries.get(key, ZERO) + s * x
        M = Matrix.from_sparse(entries, self.dim(p + 1), self.dim(p))
        self._d[p] = M
        return M

    def apply_d(self, x: Cochain) -> Cochain:
        return Cochain(x.p + 1, x.r, x.n, self.d(x.p) @ x.data)

    def B(self, p: int) -> Subspace:
        """B^p = sum over J of N_J L ⊗ e_J."""
        if p in self._B:
            return self._B[p]
        n = self.n
        dim = self.dim(p)
        vecs = []
        for k, J in enumerate(multi_indices(self.r, p)):
            for col in column_space(self.rep.N_product(J)).basis:
                v = [ZERO] * dim
                v[k * n:(k + 1) * n] = col
                vecs.append(tuple(v))
        S = Subspace.span(vecs, dim)
        self._B[p] = S
        return S

    def in_B(self, x: Cochain) -> bool:
        return self.B(x.p).contains(x.data)

    def B_cocycles(self, p: int) -> Subspace:
        if p >= self.r:
            return self.B(p)
        return restricted_kernel(self.d(p), self.B(p))

    def B_coboundaries(self, p: int) -> Subspace:
        if p <= 0:
            return Subspace.zero(self.dim(p))
        return self.B(p - 1).image(self.d(p - 1))

    def intersection_cohomology(self, p: int) -> CohomologyPresentation:
        """IH^p = H^p(B)."""
        Z = self.B_cocycles(p)
        C = self.B_coboundaries(p)
        return CohomologyPresentation(p, Z, C, tuple(Z.extend_from(C)))

    def cohomology(self, p: int) -> CohomologyPresentation:
        """H^p(K)."""
        dim = self.dim(p)
        Z = kernel_basis(self.d(p)) if p < self.r else Subspace.full(dim)
        C = column_space(self.d(p - 1)) if p > 0 else Subspace.zero(dim)
        return CohomologyPresentation(p, Z, C, tuple(Z.extend_from(C)))

    def check_cocycle_in_B(self, x: Cochain, what: str = "cochain") -> None:
        if not self.in_B(x):
            raise NotACocycle(f"{what} does not lie in B^{x.p}")
        if x.p < self.r and any(self.d(x.p) @ x.data):
            raise NotACocycle(f"{what} is not closed")


def build_complexes(rep: MonodromyRep):
    """The Koszul complex; B is available through ``KoszulComplex.B``."""
    K = KoszulComplex(rep)
    return K, K


def delta_t(x: Cochain, t) -> Cochain:
    """Contraction with X(t) = sum t_i e_i^*, from degree p to p - 1."""
    if x.p == 0:
        raise ValueError("delta_t is zero on degree 0; nothing to contract")
    n, r = x.n, x.r
    tgt = multi_indices(r, x.p - 1)
    pos = {J: k for k, J in enumerate(tgt)}
    out = [ZERO] * (n * len(tgt))
    for k, J in enumerate(multi_indices(r, x.p)):
        comp = x.component_at(k)
        if not any(comp):
            continue
        for a, j in enumerate(J):
            c = t[j]
            if not c:
                continue
            if a % 2:
                c = -c
            base = pos[J[:a] + J[a + 1:]] * n
            for b, v in enumerate(comp):
                if v:
                    out[base + b] = out[base + b] + c * v
    return Cochain(x.p - 1, r, n, tuple(out))


def laplace_t(K: KoszulComplex, x: Cochain, t) -> Cochain:
    """d δ_t + δ_t d."""
    total = Cochain.zero(x.p, x.r, x.n)
    if x.p > 0:
        total = total + K.apply_d(delta_t(x, t))
    if x.p < x.r:
        total = total + delta_t(K.apply_d(x), t)
    return total


def apply_componentwise(M: Matrix, x: Cochain) -> Cochain:
    data = []
    for k in range(len(x.data) // x.n if x.n else 0):
        data.extend(M @ x.component_at(k))
    return Cochain(x.p, x.r, x.n, tuple(data))


def symbolic_point(r: int, stratum=None) -> tuple:
    """(t_1, ..., t_r) as rational functions, with t_j = 0 off the stratum (1-based)."""
    keep = set(range(1, r + 1)) if stratum is None else set(stratum)
    return tuple(
        ParamScalar.variable(i, r) if i + 1 in keep else ParamScalar.constant(0, r)
        for i in range(r)
    )


@dataclass(frozen=True)
class CurveRestriction:
    alpha_t: tuple
    solvable: bool
    l: tuple | None = field(default=None)


def restrict_test_curve(rep: MonodromyRep, alpha: Cochain, t) -> CurveRestriction:
    """Pull a 1-cochain back along the test curve: α(t) and a solution of N(t) l = α(t)."""
    from .heights import solve_at

    a_t = delta_t(alpha, t).data
    l = solve_at(rep, a_t, t)
    return CurveRestriction(a_t, l is not None, l)
