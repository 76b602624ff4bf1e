"""Increasing filtrations, monodromy weight filtrations and relative weight filtrations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import FiltrationNotPreserved, NotCommuting, NotNilpotent
from .exact import (
    Matrix,
    Subspace,
    column_space,
    commutator,
    is_nilpotent,
    kernel_basis,
    nilpotency_index,
    solve_linear,
)


@dataclass(frozen=True)
class Filtration:
    """W_lo ⊆ ... ⊆ W_hi with W_{lo-1} = 0 and W_hi = everything.

    ``steps[i]`` is W_{lo+i}.  The constructor trims redundant ends, so
    equal filtrations compare equal.
    """

    ambient_dim: int
    lo: int
    steps: tuple

    def __post_init__(self):
        steps = list(self.steps)
        lo = self.lo
        n = self.ambient_dim
        while steps and steps[0].dim == 0:
            steps.pop(0)
            lo += 1
        while len(steps) > 1 and steps[-2].dim == n:
            steps.pop()
        if not steps:
            steps = [Subspace.full(n)]
            lo = 0 if n == 0 else lo
        if steps[-1].dim != n:
            raise ValueError("a filtration must end with the whole space")
        for a, b in zip(steps, steps[1:]):
            if not a <= b:
                raise ValueError("filtration steps must increase")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "steps", tuple(steps))

    @classmethod
    def from_dict(cls, ambient_dim: int, spaces: dict) -> "Filtration":
        keys = sorted(spaces)
        lo, hi = keys[0], keys[-1]
        steps = []
        current = Subspace.zero(ambient_dim)
        for k in range(lo, hi + 1):
            if k in spaces:
                current = spaces[k]
            steps.append(current)
        return cls(ambient_dim, lo, tuple(steps))

    @classmethod
    def trivial(cls, ambient_dim: int, k: int = 0) -> "Filtration":
        """Pure of weight k: W_{k-1} = 0, W_k = everything."""
        return cls(ambient_dim, k, (Subspace.full(ambient_dim),))

    @property
    def hi(self) -> int:
        return self.lo + len(self.steps) - 1

    def __getitem__(self, k: int) -> Subspace:
        if k < self.lo:
            return Subspace.zero(self.ambient_dim)
        if k >= self.hi:
            return self.steps[-1]
        return self.steps[k - self.lo]

    def graded_dims(self) -> dict:
        return {
            k: self[k].dim - self[k - 1].dim
            for k in range(self.lo, self.hi + 1)
            if self[k].dim != self[k - 1].dim
        }

    def weights(self) -> list:
        return sorted(self.graded_dims())

    def shift(self, c: int) -> "Filtration":
        """The filtration with W'_j = W_{j-c}."""
        return Filtration(self.ambient_dim, self.lo + c, self.steps)

    def restrict(self, S: Subspace) -> dict:
        return {k: self[k].intersect(S) for k in range(self.lo, self.hi + 1)}


def _kernel_power(powers, m: int, n: int) -> Subspace:
    if m <= 0:
        return Subspace.zero(n)
    if m >= len(powers):
        return Subspace.full(n)
    return kernel_basis(powers[m])


def _image_power(powers, a: int, n: int) -> Subspace:
    if a >= len(powers):
        return Subspace.zero(n)
    return column_space(powers[a])


def monodromy_weight_filtration(N: Matrix, center: int = 0) -> Filtration:
    """W(N) shifted so that it is centred at ``center``.

    W_k(N) = sum over a >= 0 of ker N^{k+1+a} ∩ im N^a.
    """
    n = N.nrows
    if not is_nilpotent(N):
        raise NotNilpotent("N is not nilpotent")
    if n == 0:
        return Filtration(0, center, (Subspace.full(0),))
    nu = nilpotency_index(N)
    ell = max(nu - 1, 0)
    powers = [Matrix.identity(n)]
    for _ in range(nu):
        powers.append(powers[-1] @ N)
    # powers[nu] == 0; truncate so that indices >= nu count as the zero map
    powers = powers[:nu]
    kers = {m: _kernel_power(powers, m, n) for m in range(-2 * ell - 2, 2 * ell + 3)}
    ims = {a: _image_power(powers, a, n) for a in range(0, 2 * ell + 3)}
    steps = []
    for k in range(-ell - 1, ell + 1):
        acc = Subspace.zero(n)
        for a in range(0, ell + 1):
            m = k + 1 + a
            if m <= 0:
                continue
            acc = acc + kers.get(m, Subspace.full(n)).intersect(ims[a])
        steps.append(acc)
    return Filtration(n, -ell - 1 + center, tuple(steps))


def is_monodromy_filtration(N: Matrix, F: Filtration, center: int = 0) -> bool:
    """Check N W_j ⊆ W_{j-2} and N^l : Gr_{c+l} ≅ Gr_{c-l} directly."""
    for j in range(F.lo - 2, F.hi + 3):
        if not F[j].image(N) <= F[j - 2]:
            return False
    dims = F.graded_dims()
    for ell in range(0, max(abs(F.lo - center), abs(F.hi - center)) + 2):
        top, bottom = center + ell, center - ell
        if dims.get(top, 0) != dims.get(bottom, 0):
            return False
        if ell == 0:
            continue
        img = F[top].image(N ** ell) + F[bottom - 1]
        if img != F[bottom]:
            return False
    return True


def check_commuting(N_list) -> None:
    for i in range(len(N_list)):
        for j in range(i + 1, len(N_list)):
            if not commutator(N_list[i], N_list[j]).is_zero():
                raise NotCommuting(i + 1, j + 1)


def linear_combination(N_list, t) -> Matrix:
    n = N_list[0].nrows
    acc = Matrix.zeros(n, n)
    for Ni, ti in zip(N_list, t):
        if ti:
            acc = acc + Ni.scale(Fraction(ti))
    return acc


def check_cone_constancy(N_list, samples) -> bool:
    """True iff W(N(t)) is the same filtration at every sample point."""
    check_commuting(N_list)
    seen = None
    for t in samples:
        W = monodromy_weight_filtration(linear_combination(N_list, t))
        if seen is None:
            seen = W
        elif W != seen:
            return False
    return True


def jordan_chains(A: Matrix) -> list:
    """Jordan chains of a nilpotent matrix as (head, length) pairs.

    The vectors A^a head (0 <= a < length) over all chains form a basis.
    Heads of length L span a complement of ker A^{L-1} + A ker A^{L+1} in ker A^L.
    """
    n = A.nrows
    if n == 0:
        return []
    nu = nilpotency_index(A)
    kers = [Subspace.zero(n)]
    P = Matrix.identity(n)
    for _ in range(nu + 1):
        P = P @ A
        kers.append(kernel_basis(P) if not P.is_zero() else Subspace.full(n))
    chains = []
    for L in range(nu, 0, -1):
        lower = kers[L - 1] + kers[L + 1].image(A)
        for head in kers[L].extend_from(lower):
            chains.append((head, L))
    return chains


def _quotient_operator(N: Matrix, big: Subspace, small: Subspace):
    """Complement basis C of small in big and the induced matrix of N on big/small."""
    C = big.extend_from(small)
    basis = list(C) + list(small.basis)
    B = Matrix.from_columns(basis, N.nrows)
    cols = []
    for c in C:
        y = solve_linear(B, N @ c)
        if y is None:
            raise FiltrationNotPreserved("N does not preserve the filtration")
        cols.append(y[: len(C)])
    return C, Matrix.from_columns(cols, len(C)) if C else Matrix.zeros(0, 0)


@dataclass(frozen=True)
class RelativeFiltrationResult:
    filtration: Filtration | None
    failing_weight: int | None = None


def relative_weight_filtration_report(N: Matrix, W: Filtration) -> RelativeFiltrationResult:
    n = N.nrows
    for k in range(W.lo, W.hi + 1):
        if not W[k].image(N) <= W[k]:
            raise FiltrationNotPreserved(f"N does not preserve W_{k}")
    M: dict = {}  # index -> Subspace of the ambient space, for the part built so far

    def M_at(i):
        if not M:
            return Subspace.zero(n)
        if i < min(M):
            return Subspace.zero(n)
        return M[min(i, max(M))]

    for k in range(W.lo, W.hi + 1):
        small, big = W[k - 1], W[k]
        if big.dim == small.dim:
            continue
        C, Nbar = _quotient_operator(N, big, small)
        new_vectors = []  # (vector, weight)
        for head_coords, length in jordan_chains(Nbar):
            j = length - 1
            x = tuple(sum((c * v[i] for c, v in zip(head_coords, C) if c), Fraction(0)) for i in range(n))
            target = (N ** (j + 1)) @ x
            allowed = small.image(N ** (j + 1)) + M_at(k - j - 2)
            if not allowed.contains(target):
                return RelativeFiltrationResult(None, k)
            # write target = N^{j+1} w + m with w in W_{k-1}
            gens_w = [(N ** (j + 1)) @ b for b in small.basis]
            gens_m = list(M_at(k - j - 2).basis)
            if gens_w or gens_m:
                G = Matrix.from_columns(gens_w + gens_m, n)
                coeffs = solve_linear(G, target)
                w = tuple(
                    sum((c * b[i] for c, b in zip(coeffs[: len(gens_w)], small.basis) if c), Fraction(0))
                    for i in range(n)
                )
                x = tuple(a - b for a, b in zip(x, w))
            v = x
            for a in range(length):
                new_vectors.append((v, k + j - 2 * a))
                v = N @ v
        lo_new = min(wt for _, wt in new_vectors)
        hi_new = max(wt for _, wt in new_vectors)
        indices = range(min([lo_new] + list(M)), max([hi_new] + list(M)) + 1)
        updated = {}
        for i in indices:
            extra = [v for v, wt in new_vectors if wt <= i]
            updated[i] = M_at(i) + Subspace.span(extra, n) if extra else M_at(i)
        M = updated
    if not M:
        return RelativeFiltrationResult(Filtration.trivial(n, W.lo))
    return RelativeFiltrationResult(Filtration.from_dict(n, M))


def relative_weight_filtration(N: Matrix, W: Filtration) -> Filtration | None:
    """M(N, W), or None when it does not exist."""
    return relative_weight_filtration_report(N, W).filtration


def induced_weight_on_koszul(W_on_H: Filtration, p: int, r: int, weight_of_E: int = 2) -> Filtration:
    """Weight filtration on K^p = H ⊗ ∧^p E, each e_J contributing weight_of_E * p."""
    n = W_on_H.ambient_dim
    blocks = comb(r, p)
    dim = n * blocks

    def spread(S: Subspace) -> Subspace:
        vecs = []
        for b in range(blocks):
            for v in S.basis:
                full = [Fraction(0)] * dim
                full[b * n:(b + 1) * n] = v
                vecs.append(tuple(full))
        return Subspace.span(vecs, dim)

    shift = weight_of_E * p
    steps = tuple(spread(S) for S in W_on_H.steps)
    return Filtration(dim, W_on_H.lo + shift, steps)
