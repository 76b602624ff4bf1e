"""The nine acceptance criteria, shared by the test suite and ``heightlab selftest``.

Every criterion returns a :class:`CriterionResult`; none of them raises on a
mathematical mismatch, so a driver can always print one line per criterion.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .biext import (
    make_mixed_extension,
    mu_of_t,
    jump_identity_check,
    pullback_test_curve,
    tau_tilde,
    tau_tilde_matrix,
    to_integral,
    torsion_pairing,
)
from .ceresa import bounding_pair_rep, ceresa_closed_form, ceresa_height, sing_class
from .errors import NotAdmissible
from .exact import Matrix, ZERO, column_space, kernel_basis, rank
from .families import (
    jordan_alpha,
    jordan_beta,
    jordan_closed_form,
    jordan_rep,
    random_commuting_rep,
    random_equal_log_rep,
    random_vector,
)
from .heights import (
    a_Q,
    complex_of,
    height_pairing,
    hQ,
    is_positive_semidefinite,
    q_t,
)
from .koszul import Cochain, apply_componentwise, delta_t, laplace_t, symbolic_point
from .param import ParamScalar, limit_at_zero

SEED = 20240607


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{verdict}] criterion {self.number}: {self.name} in {self.seconds:.2f}s{extra}"


def _run(number, name, budget, body):
    start = time.perf_counter()
    failures: list = []
    detail = body(failures)
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        failures.append(f"took {elapsed:.2f}s, budget {budget}s")
    return CriterionResult(number, name, not failures, elapsed, detail or "", failures)


# --- 1 -----------------------------------------------------------------------


def criterion_1(seed: int = SEED) -> CriterionResult:
    def body(failures):
        rng = random.Random(seed)
        count = 0
        for r in (2, 3, 4):
            rep = jordan_rep(r)
            t = symbolic_point(r)
            for _ in range(20):
                a = [rng.randint(-5, 5) for _ in range(r)]
                b = [rng.randint(-5, 5) for _ in range(r)]
                got = height_pairing(rep, jordan_alpha(a), jordan_beta(b)).value
                want = jordan_closed_form([Fraction(x) for x in a], [Fraction(x) for x in b], t)
                if got != want:
                    failures.append(f"r={r} a={a} b={b}: {got} != {want}")
                count += 1
        return f"{count} symbolic pairings"

    return _run(1, "Jordan closed form", 1.0, body)


# --- 2 -----------------------------------------------------------------------


def criterion_2(seed: int = SEED) -> CriterionResult:
    def body(failures):
        rng = random.Random(seed)
        t1, t2 = symbolic_point(2)
        for trial in range(20):
            rep, Q = random_equal_log_rep(rng)
            if rep.problems():
                failures.append(f"trial {trial}: generator produced an invalid rep")
                continue
            N = rep.N[0]
            h = random_vector(rep.n, rng)
            k = random_vector(rep.n, rng)
            zero = (ZERO,) * rep.n
            alpha = Cochain(1, 2, rep.n, zero + N @ h)
            beta = Cochain(1, 2, rep.n, zero + N @ k)
            got = hQ(rep, alpha, beta).value
            want = t1 * t2 / (t1 + t2) * sum((x * y for x, y in zip(h, Q @ (N @ k))), ZERO)
            if got != want:
                failures.append(f"trial {trial}: {got} != {want}")
            if hQ(rep, alpha, beta, (0, 0)).value != 0:
                failures.append(f"trial {trial}: nonzero at t = (0,0)")
        return "20 random symplectic reps"

    return _run(2, "Equal-logarithm formula", 1.0, body)


# --- 3 -----------------------------------------------------------------------


def criterion_3() -> CriterionResult:
    def body(failures):
        t = symbolic_point(2)
        cases = 0
        for g in (3, 4, 5, 6):
            for h in range(1, g // 2 + 1):
                got = ceresa_height(g, h).value
                want = ceresa_closed_form(g, h, t)
                if got != want:
                    failures.append(f"g={g} h={h}: {got} != {want}")
                cases += 1
        return f"{cases} (g, h) cases"

    return _run(3, "Ceresa closed form", 30.0, body)


# --- 4 -----------------------------------------------------------------------


def criterion_4(seed: int = SEED) -> CriterionResult:
    def body(failures):
        for r in range(1, 6):
            dim = complex_of(jordan_rep(r)).intersection_cohomology(1).dim
            if dim != r - 1:
                failures.append(f"Jordan r={r}: dim IH^1 = {dim}")
        rng = random.Random(seed)
        reps = [random_equal_log_rep(rng)[0] for _ in range(10)]
        reps += [bounding_pair_rep(3, 1), bounding_pair_rep(4, 1), bounding_pair_rep(4, 2)]
        for idx, rep in enumerate(reps):
            N = rep.N[0]
            IH = complex_of(rep).intersection_cohomology(1)
            rk = rank(N)
            if IH.dim != rk:
                failures.append(f"equal-log rep {idx}: dim IH^1 = {IH.dim}, rank N = {rk}")
                continue
            # h -> class of (0, h) is an isomorphism N V -> IH^1
            images = []
            zero = (ZERO,) * rep.n
            for v in column_space(N).basis:
                images.append(IH.class_coordinates(zero + v))
            if IH.dim and rank(Matrix(images, IH.dim)) != IH.dim:
                failures.append(f"equal-log rep {idx}: N V -> IH^1 is not onto")
        return "Jordan r=1..5 and 13 equal-log reps"

    return _run(4, "Structural dimensions", None, body)


# --- 5 -----------------------------------------------------------------------


def _random_in(S, rng, lo=-2, hi=2):
    v = [ZERO] * S.ambient_dim
    for b in S.basis:
        c = rng.randint(lo, hi)
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    return tuple(v)


def _nonzero_point(r, rng):
    return tuple(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) for _ in range(r))


def _positive_point(r, rng):
    return tuple(Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(r))


def identity_suite_one(rep, rng, failures, tag, stats) -> None:
    """All algebraic identities on one rep; appends failure messages."""
    K = complex_of(rep)
    D = rep.dual()
    KD = complex_of(D)
    r, n = rep.r, rep.n
    ts = symbolic_point(r)
    tn = _nonzero_point(r, rng)
    for p in range(0, r + 1):
        if p + 1 <= r and p >= 1 and not (K.d(p) @ K.d(p - 1)).is_zero():
            failures.append(f"{tag}: d^2 != 0 at p={p}")
        if p < r and not K.B(p).image(K.d(p)) <= K.B(p + 1):
            failures.append(f"{tag}: d(B^{p}) not in B^{p + 1}")
        x = Cochain(p, r, n, tuple(Fraction(rng.randint(-3, 3)) for _ in range(K.dim(p))))
        if p >= 2 and not delta_t(delta_t(x, ts), ts).is_zero():
            failures.append(f"{tag}: delta_t^2 != 0 at p={p}")
        lap = laplace_t(K, x, ts)
        if lap != apply_componentwise(rep.N_at(ts), x):
            failures.append(f"{tag}: Laplacian != N(t) at p={p}")
        Bp, BDp = K.B(p), KD.B(p)
        a = Cochain(p, r, n, _random_in(Bp, rng))
        b = Cochain(p, r, n, _random_in(BDp, rng))
        # swap sign
        if q_t(D, b, a, tn) != (-1) ** p * q_t(rep, a, b, tn):
            failures.append(f"{tag}: swap sign fails at p={p}")
        # adjointness
        if p >= 1:
            a0 = Cochain(p - 1, r, n, _random_in(K.B(p - 1), rng))
            lhs = q_t(rep, K.apply_d(a0), b, ts)
            rhs = q_t(rep, a0, delta_t(b, ts), ts)
            if lhs != rhs:
                failures.append(f"{tag}: q_t(d a, b) != q_t(a, delta_t b) at p={p}")
            if p < r:
                a2 = Cochain(p + 1, r, n, _random_in(K.B(p + 1), rng))
                lhs2 = q_t(rep, delta_t(a2, ts), b, ts)
                rhs2 = q_t(rep, a2, KD.apply_d(b), ts)
                # the dual carries logarithms -N^T, which flips this one
                if lhs2 != -rhs2:
                    failures.append(f"{tag}: q_t(delta_t a, b) != -q_t(a, d b) at p={p}")
        # nondegeneracy of q_t on B^p x B^p(dual)
        if Bp.dim != BDp.dim:
            failures.append(f"{tag}: dim B^{p} differs from the dual")
        elif Bp.dim:
            G = Matrix(
                [[q_t(rep, Cochain(p, r, n, u), Cochain(p, r, n, w), tn) for w in BDp.basis] for u in Bp.basis]
            )
            if rank(G) != Bp.dim:
                failures.append(f"{tag}: q_t Gram is degenerate at p={p}")
    # IH -> H injective in degrees 0 and 1
    for p in (0, 1):
        if p > r:
            continue
        IH = K.intersection_cohomology(p)
        H = K.cohomology(p)
        combined = list(IH.transversal) + list(H.coboundaries.basis)
        if combined and rank(Matrix.from_columns(combined, K.dim(p))) != IH.dim + H.coboundaries.dim:
            failures.append(f"{tag}: IH^{p} -> H^{p} is not injective")
    if r == 0:
        return
    # height pairing identities
    Z = K.B_cocycles(1)
    ZD = KD.B_cocycles(1)
    alpha = Cochain(1, r, n, _random_in(Z, rng))
    beta = Cochain(1, r, n, _random_in(ZD, rng))
    t = _positive_point(r, rng)
    try:
        base = height_pairing(rep, alpha, beta, t)
    except NotAdmissible:
        stats["skipped"] += 1
        return
    stats["heights"] += 1
    c = Fraction(rng.randint(0, 4), rng.randint(1, 3))
    try:
        scaled = height_pairing(rep, alpha, beta, tuple(c * x for x in t)).value
    except NotAdmissible:
        scaled = None
    if scaled != c * base.value:
        failures.append(f"{tag}: h(ct) != c h(t)")
    l0 = Cochain(0, r, n, random_vector(n, rng))
    m0 = Cochain(0, r, n, random_vector(n, rng))
    moved = height_pairing(rep, alpha + K.apply_d(l0), beta + KD.apply_d(m0), t).value
    if moved != base.value:
        failures.append(f"{tag}: h changes under coboundaries")
    ker = kernel_basis(rep.N_at(t))
    if ker.dim:
        l_alt = tuple(x + y for x, y in zip(base.l, _random_in(ker, rng)))
        if height_pairing(rep, alpha, beta, t, l=l_alt).value != base.value:
            failures.append(f"{tag}: h depends on the choice of l(t)")


def criterion_5(seed: int = SEED, count: int = 100) -> CriterionResult:
    def body(failures):
        rng = random.Random(seed)
        stats = {"heights": 0, "skipped": 0}
        for k in range(count):
            rep = random_commuting_rep(rng, max_n=6, max_r=3)
            identity_suite_one(rep, rng, failures, f"rep {k}", stats)
        return f"{count} reps, {stats['heights']} height checks, {stats['skipped']} inadmissible skipped"

    return _run(5, "Algebraic identity suite", None, body)


# --- 6 -----------------------------------------------------------------------


def ceresa_extension(g: int = 3, h: int = 1):
    """The mixed extension with α = sing and β = −a_q(sing), γ = 0."""
    rep = bounding_pair_rep(g, h)
    s = sing_class(g, h)
    b = a_Q(rep.Q, s)
    beta = [tuple(-x for x in b.component_at(i)) for i in range(2)]
    return make_mixed_extension(rep, [s.component_at(0), s.component_at(1)], beta)


def criterion_6(seed: int = SEED) -> CriterionResult:
    def body(failures):
        rng = random.Random(seed)
        checks = 0
        for k in range(50):
            r = rng.randint(2, 3)
            a = [rng.randint(-4, 4) for _ in range(r)]
            b = [rng.randint(-4, 4) for _ in range(r)]
            gamma = [rng.randint(-4, 4) for _ in range(r)]
            X = make_mixed_extension(
                jordan_rep(r),
                [(0, x) for x in a],
                [(y, 0) for y in b],
                gamma,
            )
            XZ = to_integral(X)
            for _ in range(5):
                t = tuple(Fraction(rng.randint(0, 6)) for _ in range(r))
                rep = jump_identity_check(X, t)
                if not rep.holds:
                    failures.append(f"ext {k} t={t}: {rep}")
                if mu_of_t(X, t) != tau_tilde(pullback_test_curve(XZ, t)):
                    failures.append(f"ext {k} t={t}: mu != tau~ of the integral pullback")
                checks += 1
        X = ceresa_extension()
        for _ in range(5):
            t = tuple(Fraction(rng.randint(0, 6)) for _ in range(2))
            rep = jump_identity_check(X, t)
            if not rep.holds:
                failures.append(f"Ceresa t={t}: {rep}")
            if mu_of_t(X, t) != tau_tilde(pullback_test_curve(X, t)):
                failures.append(f"Ceresa t={t}: mu != tau~ of the pullback")
            checks += 1
        one = jump_identity_check(X, (1, 1))
        if one.h != 2:
            failures.append(f"Ceresa h(1,1) = {one.h}, expected 2")
        return f"{checks} (extension, t) checks"

    return _run(6, "Jump identity", None, body)


# --- 7 -----------------------------------------------------------------------


def brute_force_tau(Tt: Matrix, max_den: int = 4, box: int = 3):
    """Search e0 = (1, x, c) with small rational x such that (T~ − 1) e0 lies in W_{-2}.

    Returns the set of bottom coordinates found; independent of the solvers.
    """
    size = Tt.nrows
    n = size - 2
    D = [[Tt[i, j] - (1 if i == j else 0) for j in range(size)] for i in range(size)]
    grid = sorted({Fraction(k, d) for d in range(1, max_den + 1) for k in range(-box * d, box * d + 1)})
    found = set()
    for xs in product(grid, repeat=n):
        e0 = (Fraction(1),) + xs + (Fraction(0),)
        image = [sum(D[i][j] * e0[j] for j in range(size)) for i in range(size)]
        if all(v == 0 for v in image[1:n + 1]) and image[0] == 0:
            found.add(image[n + 1])
    return found


def random_unipotent(n: int, rng: random.Random) -> Matrix:
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            rows[i][j] = Fraction(rng.randint(-3, 3))
    return Matrix(rows)


def _random_torsion_vector(A: Matrix, rng, transpose=False):
    M = A.T if transpose else A
    for _ in range(200):
        y = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(M.ncols))
        v = M @ y
        if all(c.denominator == 1 for c in v):
            return v
    return tuple(ZERO for _ in range(M.nrows))


def criterion_7(seed: int = SEED) -> CriterionResult:
    def body(failures):
        T = Matrix([[1, 0], [2, 1]])
        value = torsion_pairing(T, (0, 1), (1, 0))
        if value.value != Fraction(1, 2):
            failures.append(f"worked example gives {value}")
        Tt = Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [1, 2, 1, 0], [0, 1, 0, 1]])
        found = brute_force_tau(Tt)
        if len(found) != 1:
            failures.append(f"brute-force oracle found {sorted(found)}")
        else:
            (tt,) = found
            if tt != tau_tilde_matrix(Tt) or (tt - value.value).denominator != 1:
                failures.append(f"oracle tau~ = {tt} disagrees with {value}")
        rng = random.Random(seed)
        done = 0
        for k in range(20):
            n = rng.randint(2, 3)
            U = random_unipotent(n, rng)
            A = U - Matrix.identity(n)
            a1, a2 = _random_torsion_vector(A, rng), _random_torsion_vector(A, rng)
            b1, b2 = _random_torsion_vector(A, rng, True), _random_torsion_vector(A, rng, True)
            s = lambda u, v: tuple(x + y for x, y in zip(u, v))
            lhs = torsion_pairing(U, s(a1, a2), b1)
            rhs = torsion_pairing(U, a1, b1) + torsion_pairing(U, a2, b1)
            if lhs != rhs:
                failures.append(f"T {k}: not additive in alpha")
            lhs = torsion_pairing(U, a1, s(b1, b2))
            rhs = torsion_pairing(U, a1, b1) + torsion_pairing(U, a1, b2)
            if lhs != rhs:
                failures.append(f"T {k}: not additive in beta")
            shift = A @ random_vector(n, rng)
            if torsion_pairing(U, s(a1, shift), b1) != torsion_pairing(U, a1, b1):
                failures.append(f"T {k}: depends on the representative of alpha")
            done += 1
        return f"worked example + oracle, {done} random T"

    return _run(7, "Torsion pairing", None, body)


# --- 8 -----------------------------------------------------------------------


def _ray_limit(f: ParamScalar, t0, tb):
    s = ParamScalar.variable(0, 1)
    values = [s * a + (1 - s) * b for a, b in zip(t0, tb)]
    return limit_at_zero(f.substitute(values))


def boundary_checks(interior, stratum_value, r, rng, failures, tag):
    from itertools import combinations

    for size in range(0, r):
        for S in combinations(range(1, r + 1), size):
            t0 = _positive_point(r, rng)
            tb = tuple(_positive_point(1, rng)[0] if j + 1 in S else ZERO for j in range(r))
            limit = _ray_limit(interior, t0, tb)
            direct = stratum_value(S)
            direct_at = direct(*tb) if isinstance(direct, ParamScalar) else direct
            if limit != direct_at:
                failures.append(f"{tag} stratum {S}: limit {limit} != {direct_at}")


def criterion_8(seed: int = SEED) -> CriterionResult:
    def body(failures):
        rng = random.Random(seed)
        for r in (2, 3):
            rep = jordan_rep(r)
            a = [rng.randint(-3, 3) for _ in range(r)]
            b = [rng.randint(-3, 3) for _ in range(r)]
            al, be = jordan_alpha(a), jordan_beta(b)
            interior = height_pairing(rep, al, be).value
            boundary_checks(
                interior,
                lambda S: height_pairing(rep, al, be, stratum=S).value,
                r, rng, failures, f"Jordan r={r}",
            )
        for g, h in ((3, 1), (4, 2)):
            interior = ceresa_height(g, h).value
            boundary_checks(
                interior,
                lambda S: ceresa_height(g, h, stratum=S).value,
                2, rng, failures, f"Ceresa g={g} h={h}",
            )
        return "Jordan r=2,3 and Ceresa (3,1), (4,2), every boundary stratum"

    return _run(8, "Boundary continuity", None, body)


# --- 9 -----------------------------------------------------------------------


def criterion_9(seed: int = SEED) -> CriterionResult:
    def body(failures):
        rng = random.Random(seed)
        for r in (2, 3):
            rep = jordan_rep(r)
            IH = complex_of(rep).intersection_cohomology(1)
            classes = [Cochain(1, r, 2, v) for v in IH.transversal]
            for _ in range(10):
                t = _positive_point(r, rng)
                G = Matrix([[hQ(rep, x, y, t).value for y in classes] for x in classes])
                if not is_positive_semidefinite(G):
                    failures.append(f"Jordan r={r} t={t}: Gram not PSD")
        for g, h in ((3, 1), (4, 1), (4, 2)):
            rep = bounding_pair_rep(g, h)
            s = sing_class(g, h)
            for _ in range(10):
                t = _positive_point(2, rng)
                G = Matrix([[hQ(rep, s, s, t).value]])
                if not is_positive_semidefinite(G):
                    failures.append(f"Ceresa g={g} h={h} t={t}: sing Gram not PSD")
        return "Jordan IH^1 (r=2,3) and the Ceresa singularity class, 10 t each"

    return _run(9, "Positivity on curated families", None, body)


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
)


def run_all():
    return [c() for c in CRITERIA]
