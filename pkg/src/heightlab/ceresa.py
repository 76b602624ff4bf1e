"""The genus-g Ceresa example: ∧³H, the Johnson maps u, c, I, the quotient V and
the bounding-pair degeneration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import GenusTooSmall, InvalidPair, ValidationError
from .exact import Matrix, ZERO, inverse
from .heights import PairingReport, hQ
from .koszul import Cochain, MonodromyRep, degree_one


@dataclass(frozen=True)
class SymplecticLattice:
    """Basis e_1..e_g, f_1..f_g (indices 0..g-1 and g..2g-1) with Q(e_i, f_j) = δ_ij."""

    g: int

    @property
    def rank(self) -> int:
        return 2 * self.g

    def partner(self, a: int) -> int:
        return a + self.g if a < self.g else a - self.g

    def Q_entry(self, a: int, b: int) -> int:
        g = self.g
        if a < g and b == a + g:
            return 1
        if a >= g and b == a - g:
            return -1
        return 0

    def Q(self) -> Matrix:
        n = self.rank
        return Matrix([[self.Q_entry(a, b) for b in range(n)] for a in range(n)])

    def label(self, a: int) -> str:
        return f"e{a + 1}" if a < self.g else f"f{a - self.g + 1}"


def wedge_index(triple):
    """(sign, sorted triple) for e_a ∧ e_b ∧ e_c, or (0, None) on a repeat."""
    if len(set(triple)) < 3:
        return 0, None
    items = list(triple)
    sign = 1
    for i in range(3):
        for j in range(i + 1, 3):
            if items[i] > items[j]:
                sign = -sign
    return sign, tuple(sorted(items))


@dataclass(frozen=True)
class Wedge3Data:
    lattice: SymplecticLattice
    triples: tuple
    u: Matrix  # H -> ∧³H
    c: Matrix  # ∧³H -> H
    I: Matrix  # ∧³H -> ∧³H
    Q3: Matrix
    L: tuple  # positions (in ``triples``) spanning the complement of u(H)
    R: tuple  # the remaining 2g positions
    quotient: Matrix  # ∧³H -> V, coordinates on L
    section: Matrix  # V -> ∧³H, [ω] -> I(ω)

    @property
    def dim(self) -> int:
        return len(self.triples)

    @property
    def rank_V(self) -> int:
        return len(self.L)


def _check_genus(g: int) -> None:
    if g < 3:
        raise GenusTooSmall(f"the construction needs g >= 3, got {g}")


def complement_positions(lat: SymplecticLattice, triples) -> tuple:
    """Coordinates of the complement L of u(H) in ∧³H.

    L is spanned by v_i∧v_j∧v_k with distinct genus indices and by
    v_i∧e_j∧f_j with i − j not congruent to 0 or 1 mod g (v_i ∈ {e_i, f_i}).
    """
    g = lat.g
    genus = lambda a: a % g
    keep = []
    for pos, T in enumerate(triples):
        idx = [genus(a) for a in T]
        if len(set(idx)) == 3:
            keep.append(pos)
            continue
        # exactly one genus index is repeated: that pair must be e_j, f_j
        j = next(x for x in idx if idx.count(x) == 2)
        i = next(x for x in idx if idx.count(x) == 1)
        if (i - j) % g not in (0, 1):
            keep.append(pos)
    return tuple(keep)


@lru_cache(maxsize=None)
def build_ceresa(g: int):
    """(SymplecticLattice, Wedge3Data, q) with q the polarization on V."""
    _check_genus(g)
    lat = SymplecticLattice(g)
    n = lat.rank
    triples = tuple(combinations(range(n), 3))
    pos = {T: k for k, T in enumerate(triples)}
    D = len(triples)

    # u(v_a) = sum_i e_i ∧ f_i ∧ v_a
    u_entries = {}
    for a in range(n):
        for i in range(g):
            s, T = wedge_index((i, i + g, a))
            if s:
                key = (pos[T], a)
                u_entries[key] = u_entries.get(key, 0) + s
    u = Matrix.from_sparse({k: v for k, v in u_entries.items() if v}, D, n)

    # c(x∧y∧z) = Q(x,y) z + Q(y,z) x + Q(z,x) y
    c_entries = {}
    for k, (x, y, z) in enumerate(triples):
        for (a, b, w) in ((x, y, z), (y, z, x), (z, x, y)):
            q = lat.Q_entry(a, b)
            if q:
                c_entries[(w, k)] = c_entries.get((w, k), 0) + q
    c = Matrix.from_sparse({k: v for k, v in c_entries.items() if v}, n, D)

    I = Matrix.identity(D).scale(Fraction(g - 1)) - u @ c

    # Q3(x1∧x2∧x3, y1∧y2∧y3) = det Q(x_a, y_b); nonzero only for partner triples
    q3 = {}
    for k, T in enumerate(triples):
        partners = [lat.partner(a) for a in T]
        s, P = wedge_index(partners)
        if not s:
            continue
        # det of the diagonal matrix Q(x_a, partner(x_a)) times the reordering sign
        prod = 1
        for a in T:
            prod *= lat.Q_entry(a, lat.partner(a))
        q3[(k, pos[P])] = s * prod
    Q3 = Matrix.from_sparse(q3, D, D)

    L = complement_positions(lat, triples)
    Lset = set(L)
    R = tuple(k for k in range(D) if k not in Lset)
    if len(R) != n:
        raise ValidationError([{"message": "complement has the wrong size"}])
    uR = u.submatrix(R, range(n))
    uR_inv = inverse(uR)
    # quotient(ω) = (ω − u(x))|_L with x = uR^{-1} ω|_R
    correction = u.submatrix(L, range(n)) @ uR_inv  # |L| x |R|
    qrows = []
    for a, k in enumerate(L):
        row = [ZERO] * D
        row[k] = Fraction(1)
        for b, kk in enumerate(R):
            v = correction[a, b]
            if v:
                row[kk] -= v
        qrows.append(row)
    quotient = Matrix(qrows)
    incl = Matrix.from_sparse({(k, a): 1 for a, k in enumerate(L)}, D, len(L))
    section = I @ incl
    data = Wedge3Data(lat, triples, u, c, I, Q3, L, R, quotient, section)
    q = (section.T @ Q3 @ section).scale(Fraction(1, g - 1))
    return lat, data, q


def wedge_operator(A: Matrix, data: Wedge3Data) -> Matrix:
    """A acting on ∧³H as a derivation."""
    pos = {T: k for k, T in enumerate(data.triples)}
    entries = {}
    n = A.nrows
    for k, T in enumerate(data.triples):
        for slot in range(3):
            a = T[slot]
            for b in range(n):
                x = A[b, a]
                if not x:
                    continue
                new = list(T)
                new[slot] = b
                s, S = wedge_index(new)
                if s:
                    key = (pos[S], k)
                    entries[key] = entries.get(key, ZERO) + s * x
    return Matrix.from_sparse({k: v for k, v in entries.items() if v}, data.dim, data.dim)


def _check_pair(g: int, h: int) -> None:
    _check_genus(g)
    if not 1 <= h <= g // 2:
        raise InvalidPair(f"need 1 <= h <= {g // 2}, got h = {h}")


def dehn_log(g: int, h: int) -> Matrix:
    """x -> Q(x, γ) γ with γ = f_{h+1}."""
    lat = SymplecticLattice(g)
    gamma = g + h
    n = lat.rank
    return Matrix([[lat.Q_entry(b, gamma) if a == gamma else 0 for b in range(n)] for a in range(n)])


@lru_cache(maxsize=None)
def bounding_pair_rep(g: int, h: int) -> MonodromyRep:
    """The rep on V with N_1 = N_2 = N descended from the Dehn-twist logarithm."""
    _check_pair(g, h)
    lat, data, q = build_ceresa(g)
    NH = dehn_log(g, h)
    Nw = wedge_operator(NH, data)
    if Nw @ data.u != data.u @ NH:
        raise ValidationError([{"message": "N does not commute with u"}])
    incl = Matrix.from_sparse({(k, a): 1 for a, k in enumerate(data.L)}, data.dim, len(data.L))
    NV = data.quotient @ Nw @ incl
    if not (NV @ NV).is_zero():
        raise ValidationError([{"message": "N^2 != 0 on V"}])
    return MonodromyRep((NV, NV), data.rank_V, weight=-1, Q=q)


def wedge_vector(g: int, terms) -> tuple:
    """Coordinates in ∧³H of sum coeff * (a ∧ b ∧ c) given (coeff, (a, b, c)) terms."""
    _, data, _ = build_ceresa(g)
    pos = {T: k for k, T in enumerate(data.triples)}
    v = [ZERO] * data.dim
    for coeff, T in terms:
        s, S = wedge_index(T)
        if s:
            v[pos[S]] += s * Fraction(coeff)
    return tuple(v)


def sing_wedge(g: int, h: int) -> tuple:
    """2 (sum_{i<=h} e_i ∧ f_i) ∧ f_{h+1} in ∧³H."""
    return wedge_vector(g, [(2, (i, g + i, g + h)) for i in range(h)])


def sing_preimage_wedge(g: int, h: int) -> tuple:
    """2 sum_{i<=h} e_i ∧ f_i ∧ e_{h+1}, mapped onto sing by N."""
    return wedge_vector(g, [(2, (i, g + i, h)) for i in range(h)])


def sing_class(g: int, h: int) -> Cochain:
    """The class of (0, sing) in B^1 of the bounding-pair rep."""
    _check_pair(g, h)
    _, data, _ = build_ceresa(g)
    s = data.quotient @ sing_wedge(g, h)
    zero = (ZERO,) * data.rank_V
    return degree_one([zero, s], data.rank_V)


def ceresa_height(g: int, h: int, t=None, *, stratum=None) -> PairingReport:
    """h_q(t)(sing, sing) through the generic pipeline."""
    rep = bounding_pair_rep(g, h)
    s = sing_class(g, h)
    return hQ(rep, s, s, t, stratum=stratum)


def ceresa_closed_form(g: int, h: int, t):
    t1, t2 = t
    if not (t1 + t2):
        return ZERO
    return 4 * t1 * t2 / (t1 + t2) * (g - h - 1) * h
