"""Built-in example families and random generators for property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import Matrix, ZERO, exp_nilpotent, inverse
from .koszul import Cochain, MonodromyRep, degree_one

JORDAN_N = Matrix([[0, 0], [1, 0]])
JORDAN_Q = Matrix([[0, 1], [-1, 0]])


def jordan_rep(r: int) -> MonodromyRep:
    """One 2x2 Jordan block N (N e1 = e2) for every variable; weight -1, Q(e1, e2) = 1."""
    T = exp_nilpotent(JORDAN_N)
    return MonodromyRep((JORDAN_N,) * r, 2, T=(T,) * r, weight=-1, Q=JORDAN_Q)


def jordan_alpha(a) -> Cochain:
    """sum a_i v ⊗ e_i with v = e2."""
    return degree_one([(0, Fraction(x)) for x in a])


def jordan_beta(b) -> Cochain:
    """sum b_i u* ⊗ e_i, a cocycle of the dual."""
    return degree_one([(Fraction(x), 0) for x in b])


def jordan_closed_form(a, b, t):
    """sum_{i<j} (a_i-a_j)(b_i-b_j) t_i t_j / sum t_i."""
    r = len(a)
    num = ZERO
    for i in range(r):
        for j in range(i + 1, r):
            num = num + (a[i] - a[j]) * (b[i] - b[j]) * t[i] * t[j]
    den = ZERO
    for x in t:
        den = den + x
    if not den:
        return ZERO
    return num / den


# --- random generators ------------------------------------------------------


def shift_block(m: int) -> Matrix:
    return Matrix([[1 if i == j + 1 else 0 for j in range(m)] for i in range(m)])


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> Matrix:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    return Matrix(rows)


def _block_diag(blocks, n):
    rows = [[ZERO] * n for _ in range(n)]
    off = 0
    for B in blocks:
        for i in range(B.nrows):
            for j in range(B.ncols):
                rows[off + i][off + j] = B[i, j]
        off += B.nrows
    return Matrix(rows)


def random_commuting_rep(rng: random.Random, max_n: int = 6, max_r: int = 3, coeff: int = 2) -> MonodromyRep:
    """Commuting nilpotents built as polynomials without constant term in shift blocks,
    conjugated by a random unimodular matrix."""
    n = rng.randint(1, max_n)
    r = rng.randint(1, max_r)
    sizes = []
    left = n
    while left:
        s = rng.randint(1, left)
        sizes.append(s)
        left -= s
    N_list = []
    for _ in range(r):
        blocks = []
        for m in sizes:
            J = shift_block(m)
            B = Matrix.zeros(m, m)
            P = Matrix.identity(m)
            for _k in range(1, m):
                P = P @ J
                c = rng.randint(-coeff, coeff)
                if c:
                    B = B + P.scale(Fraction(c))
            blocks.append(B)
        N_list.append(_block_diag(blocks, n))
    P = random_unimodular(n, rng)
    Pinv = inverse(P)
    return MonodromyRep(tuple(P @ M @ Pinv for M in N_list), n)


def random_symplectic(m: int, rng: random.Random, steps: int = 4) -> Matrix:
    """A product of elementary symplectic matrices for Q0 = [[0, I], [-I, 0]]."""
    n = 2 * m
    P = Matrix.identity(n)
    for _ in range(steps):
        kind = rng.randrange(3)
        S = [[ZERO] * m for _ in range(m)]
        i, j = rng.randrange(m), rng.randrange(m)
        c = Fraction(rng.choice([-2, -1, 1, 2]))
        S[i][j] += c
        if i != j:
            S[j][i] += c
        E = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
        if kind == 0:  # [[I, S], [0, I]]
            for a in range(m):
                for b in range(m):
                    E[a][m + b] = S[a][b]
        elif kind == 1:  # [[I, 0], [S, I]]
            for a in range(m):
                for b in range(m):
                    E[m + a][b] = S[a][b]
        else:  # [[A, 0], [0, A^{-T}]] with A elementary
            if m > 1 and i != j:
                E[i][j] = c
                E[m + j][m + i] = -c
        P = P @ Matrix(E)
    return P


def random_equal_log_rep(rng: random.Random, max_m: int = 3, r: int = 2):
    """Weight -1 rep with N_1 = ... = N_r = N, N^2 = 0, and a compatible symplectic Q.

    Returns (rep, Q).  N = [[0, 0], [S, 0]] with S symmetric in the basis where
    Q0 = [[0, I], [-I, 0]], then conjugated by a random symplectic P.
    """
    m = rng.randint(1, max_m)
    n = 2 * m
    S = [[ZERO] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            c = Fraction(rng.randint(-2, 2))
            S[i][j] = c
            S[j][i] = c
    if all(not x for row in S for x in row):
        S[0][0] = Fraction(1)
    N0 = [[ZERO] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            N0[m + i][j] = S[i][j]
    N0 = Matrix(N0)
    Q0 = Matrix([[Fraction(int(j == i + m)) - Fraction(int(i == j + m)) for j in range(n)] for i in range(n)])
    P = random_symplectic(m, rng)
    Pinv = inverse(P)
    N = P @ N0 @ Pinv
    Q = Pinv.T @ Q0 @ Pinv
    rep = MonodromyRep((N,) * r, n, weight=-1, Q=Q)
    return rep, Q


def random_vector(n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))
