"""Exact linear algebra over Q and Q(t1, ..., tr).

Vectors are tuples; matrices are immutable :class:`Matrix` objects holding
``Fraction`` or :class:`~heightlab.param.ParamScalar` entries.  Elimination
works on sparse dict rows, since most matrices in this package (Koszul
differentials, wedge-power operators) are very sparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import ParseError
from .param import ParamScalar, eval_param, param_context, to_fmpq

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ints pass through); floats are rejected."""
    if isinstance(text, bool) or isinstance(text, float):
        raise ParseError(f"rationals must be given as 'p/q' strings, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {type(text).__name__}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError as exc:
        raise ParseError(f"malformed rational {text!r}") from exc
    if q == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def scalar(x):
    if isinstance(x, (Fraction, ParamScalar)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"unsupported scalar {x!r}")


def vector(values) -> tuple:
    return tuple(scalar(v) for v in values)


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


def dot(u, v):
    acc = ZERO
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def vadd(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v) -> tuple:
    return tuple(c * a for a in v)


def is_zero_vector(v) -> bool:
    return not any(v)


def is_symbolic(values) -> bool:
    return any(isinstance(x, ParamScalar) for x in values)


class Matrix:
    """Dense immutable matrix; products skip zero entries."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows, ncols: int | None = None):
        self.rows = tuple(tuple(scalar(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self._hash = None

    @classmethod
    def _raw(cls, rows, ncols):
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls._raw(tuple((ZERO,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(unit_vector(n, i) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns, nrows: int) -> "Matrix":
        cols = [tuple(c) for c in columns]
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def from_sparse(cls, entries: dict, m: int, n: int) -> "Matrix":
        rows = [[ZERO] * n for _ in range(m)]
        for (i, j), v in entries.items():
            rows[i][j] = scalar(v)
        return cls._raw(tuple(tuple(r) for r in rows), n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def transpose(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix._raw(tuple(() for _ in range(self.ncols)), 0)
        return Matrix._raw(tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.nrows)

    def sparse_rows(self):
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            right = other.sparse_rows()
            out = []
            for row in self.rows:
                acc: dict = {}
                for k, a in enumerate(row):
                    if a:
                        for j, b in right[k].items():
                            acc[j] = acc[j] + a * b if j in acc else a * b
                out.append(tuple(acc.get(j, ZERO) for j in range(other.ncols)))
            return Matrix._raw(tuple(out), other.ncols)
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(_sum(row[k] * x for k, x in nz if row[k]) for row in self.rows)

    def rmatvec(self, v) -> tuple:
        """Row vector times matrix."""
        return self.transpose() @ v

    def _elementwise(self, other, op):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(
            tuple(tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __add__(self, other):
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix._raw(tuple(tuple(c * a if a else a for a in r) for r in self.rows), self.ncols)

    def __pow__(self, k: int) -> "Matrix":
        result = Matrix.identity(self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_integral(self) -> bool:
        return all(
            isinstance(x, Fraction) and x.denominator == 1 for r in self.rows for x in r
        )

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def _sum(items):
    acc = ZERO
    for x in items:
        acc = acc + x
    return acc


def block_matrix(blocks) -> Matrix:
    """Assemble a matrix from a 2-d list of Matrix blocks (None = zero)."""
    heights = []
    for brow in blocks:
        h = next(b.nrows for b in brow if b is not None)
        heights.append(h)
    widths = []
    for j in range(len(blocks[0])):
        w = next(brow[j].ncols for brow in blocks if brow[j] is not None)
        widths.append(w)
    rows = []
    for brow, h in zip(blocks, heights):
        for i in range(h):
            row = []
            for b, w in zip(brow, widths):
                row.extend(b.rows[i] if b is not None else (ZERO,) * w)
            rows.append(tuple(row))
    return Matrix._raw(tuple(rows), sum(widths))


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


# --- elimination -------------------------------------------------------------


def rref_sparse(rows, ncols: int, pivot_limit: int | None = None):
    """Reduced row echelon form of dict rows.

    Pivots are searched in columns ``< pivot_limit`` only (the remaining
    columns are carried along, as in an augmented system).  Returns the
    nonzero reduced rows in pivot order and the pivot columns.
    """
    limit = ncols if pivot_limit is None else pivot_limit
    work = [dict(r) for r in rows if r]
    pivots = []
    done = []
    for col in range(limit):
        best = None
        for idx, r in enumerate(work):
            if col in r:
                if best is None or len(r) < len(work[best]):
                    best = idx
        if best is None:
            continue
        prow = work.pop(best)
        inv = 1 / prow[col]
        if inv != 1:
            prow = {j: x * inv for j, x in prow.items()}
        for target in (work, done):
            for k, r in enumerate(target):
                c = r.get(col)
                if c:
                    for j, x in prow.items():
                        y = r.get(j, ZERO) - c * x
                        if y:
                            r[j] = y
                        else:
                            r.pop(j, None)
        work = [r for r in work if r]
        done.append(prow)
        pivots.append(col)
        if not work:
            break
    return done, pivots


def rank(A: Matrix) -> int:
    return len(rref_sparse(A.sparse_rows(), A.ncols)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n stored by its reduced row echelon basis.

    Two subspaces are equal exactly when their canonical bases are equal.
    """

    ambient_dim: int
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> "Subspace":
        rows = [{j: x for j, x in enumerate(v) if x} for v in vectors]
        done, pivots = rref_sparse(rows, ambient_dim)
        basis = tuple(tuple(r.get(j, ZERO) for j in range(ambient_dim)) for r in done)
        return cls(ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def coordinates(self, v) -> tuple:
        """Coordinates of ``v`` in the canonical basis; assumes membership."""
        return tuple(v[p] for p in self.pivots)

    def contains(self, v) -> bool:
        residual = list(v)
        for b, p in zip(self.basis, self.pivots):
            c = residual[p]
            if c:
                residual = [x - c * y if y else x for x, y in zip(residual, b)]
        return not any(residual)

    __contains__ = contains

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def annihilator(self) -> "Subspace":
        return kernel_of_rows(self.basis, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        return (self.annihilator() + other.annihilator()).annihilator()

    __and__ = intersect

    def complement_basis(self) -> list:
        """Standard unit vectors on the non-pivot coordinates (an echelon complement)."""
        piv = set(self.pivots)
        return [unit_vector(self.ambient_dim, i) for i in range(self.ambient_dim) if i not in piv]

    def extend_from(self, sub: "Subspace") -> list:
        """Vectors of this basis that extend a basis of ``sub`` to one of ``self``."""
        chosen = []
        current = sub
        for b in self.basis:
            if not current.contains(b):
                chosen.append(b)
                current = Subspace.span(current.basis + (b,), self.ambient_dim)
        return chosen

    def image(self, A: Matrix) -> "Subspace":
        return Subspace.span([A @ b for b in self.basis], A.nrows)

    def basis_matrix(self) -> Matrix:
        """Matrix whose columns are the basis vectors."""
        return Matrix.from_columns(self.basis, self.ambient_dim)


def kernel_of_rows(rows, ncols: int) -> Subspace:
    done, pivots = rref_sparse([{j: x for j, x in enumerate(r) if x} for r in rows], ncols)
    piv = set(pivots)
    vecs = []
    for f in range(ncols):
        if f in piv:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in zip(done, pivots):
            c = r.get(f)
            if c:
                v[p] = -c
        vecs.append(tuple(v))
    return Subspace.span(vecs, ncols)


def kernel_basis(A: Matrix) -> Subspace:
    """Canonical basis of {x : A x = 0}."""
    return kernel_of_rows(A.rows, A.ncols)


def column_space(A: Matrix) -> Subspace:
    return Subspace.span(A.columns(), A.nrows)


def row_space(A: Matrix) -> Subspace:
    return Subspace.span(A.rows, A.ncols)


def restricted_kernel(A: Matrix, S: Subspace) -> Subspace:
    """ker(A) intersected with S, computed inside S."""
    if S.dim == 0:
        return S
    images = [A @ b for b in S.basis]
    coeffs = kernel_of_rows(Matrix.from_columns(images, A.nrows).rows, S.dim) if A.nrows else Subspace.full(S.dim)
    vecs = []
    for c in coeffs.basis:
        v = [ZERO] * S.ambient_dim
        for ci, b in zip(c, S.basis):
            if ci:
                for j, x in enumerate(b):
                    if x:
                        v[j] = v[j] + ci * x
        vecs.append(tuple(v))
    return Subspace.span(vecs, S.ambient_dim)


class SolutionOperator:
    """Canonical solver for A x = b with a fixed rational A.

    Works for any right-hand side whose entries support field arithmetic,
    including rational functions: the solution is ``x[p_i] = (E b)_i`` on the
    pivot columns and 0 on free columns, and b is consistent iff the
    remaining rows of ``E b`` vanish.
    """

    def __init__(self, A: Matrix):
        m, n = A.shape
        rows = []
        for i, r in enumerate(A.rows):
            d = {j: x for j, x in enumerate(r) if x}
            d[n + i] = ONE
            rows.append(d)
        done, pivots = rref_sparse(rows, n + m, pivot_limit=n)
        k = len(pivots)
        self.shape = (m, n)
        self.pivots = tuple(pivots)
        self.solve_rows = [{j - n: x for j, x in r.items() if j >= n} for r in done[:k]]
        self.consistency_rows = self._left_kernel(A)

    @staticmethod
    def _left_kernel(A: Matrix):
        return [dict((j, x) for j, x in enumerate(v) if x) for v in kernel_basis(A.transpose()).basis] if A.nrows else []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def consistent(self, b) -> bool:
        for r in self.consistency_rows:
            acc = ZERO
            for j, x in r.items():
                if b[j]:
                    acc = acc + x * b[j]
            if acc:
                return False
        return True

    def solve(self, b):
        m, n = self.shape
        if len(b) != m:
            raise ValueError("right-hand side has the wrong length")
        if not self.consistent(b):
            return None
        x = [ZERO] * n
        for p, r in zip(self.pivots, self.solve_rows):
            acc = ZERO
            for j, c in r.items():
                if b[j]:
                    acc = acc + c * b[j]
            x[p] = acc
        return tuple(x)


@lru_cache(maxsize=512)
def solution_operator(A: Matrix) -> SolutionOperator:
    return SolutionOperator(A)


def solve_linear(A: Matrix, b):
    """Canonical solution of A x = b, or None when inconsistent.

    Free variables are zero after echelonization with the leftmost-pivot rule.
    Matrices with rational-function entries go through fraction-free
    elimination over Q[t]; rational matrices use a cached solution operator.
    """
    b = tuple(scalar(x) for x in b)
    if any(isinstance(x, ParamScalar) for r in A.rows for x in r):
        return _solve_fraction_free(A, b)
    return solution_operator(A).solve(b)


def _context_of(values):
    for x in values:
        if isinstance(x, ParamScalar):
            return x.context
    return None


def _solve_fraction_free(A: Matrix, b):
    ctx = _context_of([x for r in A.rows for x in r] + list(b))
    nvars = ctx.nvars()
    m, n = A.shape

    def parts(x):
        if isinstance(x, ParamScalar):
            return x.num, x.den
        return ctx.constant(to_fmpq(x)), ctx.constant(1)

    # clear denominators row by row, then strip the row content
    M = []
    for i in range(m):
        entries = [parts(x) for x in A.rows[i]] + [parts(b[i])]
        lcm = ctx.constant(1)
        for _, den in entries:
            if not den.is_one():
                lcm = lcm * den / lcm.gcd(den)
        row = [num * (lcm / den) if not num.is_zero() else num for num, den in entries]
        content = None
        for x in row:
            if not x.is_zero():
                content = x if content is None else content.gcd(x)
                if content.is_constant():
                    break
        if content is not None and not content.is_constant():
            row = [x / content for x in row]
        M.append(row)

    def cost(p):
        return (p.total_degree(), len(p))

    prev = ctx.constant(1)
    r = 0
    pivots = []
    for c in range(n):
        cand = [i for i in range(r, m) if not M[i][c].is_zero()]
        if not cand:
            continue
        best = min(cand, key=lambda i: cost(M[i][c]))
        M[r], M[best] = M[best], M[r]
        piv = M[r][c]
        prow = M[r]
        for i in range(r + 1, m):
            row = M[i]
            a = row[c]
            if a.is_zero():
                if not piv.is_one() or not prev.is_one():
                    for j in range(c + 1, n + 1):
                        if not row[j].is_zero():
                            row[j] = row[j] * piv / prev
                continue
            for j in range(c + 1, n + 1):
                row[j] = (piv * row[j] - a * prow[j]) / prev
            row[c] = a * 0
        prev = piv
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not M[i][n].is_zero():
            return None
    x = [Fraction(0)] * n
    for k in range(len(pivots) - 1, -1, -1):
        p = pivots[k]
        acc = ParamScalar(M[k][n])
        for j in pivots[k + 1:]:
            if not M[k][j].is_zero() and x[j]:
                acc = acc - ParamScalar(M[k][j]) * x[j]
        x[p] = acc / ParamScalar(M[k][p])
    return tuple(v if isinstance(v, ParamScalar) else ParamScalar.constant(v, nvars) for v in x)


def _proportional(A_list):
    """Scalars c_i with A_i = c_i A_0, or None when the A_i are not proportional."""
    base = A_list[0]
    ref = next(((i, j) for i, row in enumerate(base.rows) for j, x in enumerate(row) if x), None)
    if ref is None:
        return None
    cs = []
    for A in A_list:
        c = A[ref] / base[ref]
        if A != base.scale(c):
            return None
        cs.append(c)
    return cs


def solve_pencil(A_list, t, b):
    """Solve (sum t_i A_i) x = b for rational A_i and possibly symbolic t, b.

    Rational input goes straight to :func:`solve_linear`.  Symbolic input is
    first compressed to the joint column and row spaces of the pencil; when
    all A_i are proportional the problem reduces to one rational solve.
    """
    b = tuple(scalar(x) for x in b)
    active = [(A, c) for A, c in zip(A_list, t) if c]
    nonconstant = [c for _, c in active if isinstance(c, ParamScalar) and not c.is_constant()]
    if not nonconstant and not is_symbolic(b):
        n = A_list[0].ncols
        total = Matrix.zeros(A_list[0].nrows, n)
        for A, c in active:
            c = c.constant_value() if isinstance(c, ParamScalar) else c
            total = total + A.scale(c)
        return solve_linear(total, b)
    m, n = A_list[0].shape
    if not active:
        return (ZERO,) * n if not any(b) else None
    mats = [A for A, _ in active]
    coeffs = [c for _, c in active]
    ratios = _proportional(mats)
    if ratios is not None:
        c_t = ZERO
        for c, ratio in zip(coeffs, ratios):
            c_t = c_t + c * ratio
        y = solution_operator(mats[0]).solve(b)
        if not c_t:
            return (ZERO,) * n if not any(b) else None
        if y is None:
            return None
        return tuple(v / c_t for v in y)
    joint_cols = Subspace.span([col for A in mats for col in A.columns()], m)
    if not joint_cols.contains(b):
        return None
    q = joint_cols.pivots
    piv = Subspace.span([row for A in mats for row in A.rows], n).pivots
    rows = []
    for i in q:
        row = []
        for j in piv:
            acc = ZERO
            for A, c in zip(mats, coeffs):
                if A[i, j]:
                    acc = acc + c * A[i, j]
            row.append(acc)
        rows.append(tuple(row))
    small = Matrix._raw(tuple(rows), len(piv))
    if not any(isinstance(x, ParamScalar) for r in rows for x in r):
        y = solve_linear(small, tuple(b[i] for i in q))
    else:
        y = _solve_fraction_free(small, tuple(b[i] for i in q))
    if y is None:
        return None
    x = [ZERO] * n
    for j, v in zip(piv, y):
        x[j] = v
    return tuple(x)


def inverse(A: Matrix) -> Matrix:
    n = A.nrows
    op = solution_operator(A)
    if op.rank != n or A.ncols != n:
        raise ZeroDivisionError("matrix is singular")
    cols = [op.solve(unit_vector(n, i)) for i in range(n)]
    return Matrix.from_columns(cols, n)


def determinant(A: Matrix):
    """Determinant by fraction elimination (entries may be rational functions)."""
    n = A.nrows
    rows = [list(r) for r in A.rows]
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f / piv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


# --- Smith normal form ------------------------------------------------------


def _as_int_rows(A: Matrix):
    out = []
    for r in A.rows:
        row = []
        for x in r:
            if not isinstance(x, Fraction) or x.denominator != 1:
                raise ValueError("smith_normal_form needs an integer matrix")
            row.append(int(x))
        out.append(row)
    return out


def smith_normal_form(A: Matrix):
    """Return (U, D, V) with U, V unimodular and D = U A V diagonal, d_i | d_{i+1}."""
    m, n = A.shape
    D = _as_int_rows(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, q):  # row_dst += q * row_src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(M, src, dst, q):
        for row in M:
            row[dst] += q * row[src]

    for k in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(k, m) for j in range(k, n) if D[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != k:
                swap_rows(D, k, pi)
                swap_rows(U, k, pi)
            if pj != k:
                swap_cols(D, k, pj)
                swap_cols(V, k, pj)
            clean = True
            for i in range(k + 1, m):
                q = D[i][k] // D[k][k]
                if q:
                    add_row(D, k, i, -q)
                    add_row(U, k, i, -q)
                if D[i][k]:
                    clean = False
            for j in range(k + 1, n):
                q = D[k][j] // D[k][k]
                if q:
                    add_col(D, k, j, -q)
                    add_col(V, k, j, -q)
                if D[k][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                ((i, j) for i in range(k + 1, m) for j in range(k + 1, n) if D[i][j] % D[k][k]),
                None,
            )
            if bad is None:
                break
            add_row(D, bad[0], k, 1)
            add_row(U, bad[0], k, 1)
        if k < m and k < n and D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
    return Matrix(U, m), Matrix(D, n), Matrix(V, n)


# --- nilpotent / unipotent series ------------------------------------------


def is_nilpotent(N: Matrix) -> bool:
    """N^n = 0, checked by repeated squaring."""
    P, k = N, 1
    while not P.is_zero():
        if k >= N.nrows:
            return False
        P, k = P @ P, 2 * k
    return True


def nilpotency_index(N: Matrix) -> int:
    """Smallest k with N^k = 0."""
    P = Matrix.identity(N.nrows)
    for k in range(N.nrows + 2):
        if P.is_zero():
            return k
        P = P @ N
    raise ValueError("matrix is not nilpotent")


def exp_nilpotent(N: Matrix) -> Matrix:
    n = N.nrows
    result = Matrix.identity(n)
    term = Matrix.identity(n)
    for k in range(1, n + 3):
        term = (term @ N).scale(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


def log_unipotent(T: Matrix) -> Matrix:
    n = T.nrows
    X = T - Matrix.identity(n)
    result = Matrix.zeros(n, n)
    power = Matrix.identity(n)
    for k in range(1, n + 3):
        power = power @ X
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


# --- multi-indices -------------------------------------------------------------


def multi_indices(r: int, p: int):
    """Strictly increasing p-subsets of range(r), lexicographic."""
    from itertools import combinations

    return list(combinations(range(r), p))


def koszul_dim(n: int, r: int, p: int) -> int:
    return n * comb(r, p) if 0 <= p <= r else 0


def point_to_fractions(t) -> tuple:
    return tuple(scalar(x) for x in t)


def eval_vector(v, point) -> tuple:
    return tuple(eval_param(x, point) for x in v)


__all__ = [
    "Matrix", "Subspace", "ParamScalar", "parse_rational", "vector", "dot", "kernel_basis",
    "column_space", "row_space", "solve_linear", "smith_normal_form", "rank", "inverse",
    "determinant", "exp_nilpotent", "log_unipotent", "param_context",
]
