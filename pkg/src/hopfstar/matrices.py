"""Sparse matrices and exact linear solvers.

Matrices are immutable-by-convention sparse maps (row, col) -> scalar with no
stored zeros in exact mode. Linear maps are matrices with the shape convention
codomain x domain. Solving is fraction-free (Bareiss) on the dense path and
gcd-normalized sparse elimination otherwise; both are exact in exact mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .scalars import (CF, EXACT, FLOAT, QQi, ScalarModeError, ensure_same_mode,
                      one_of, scalar_mode, zero_of)

DENSE_LIMIT = 32  # dense Bareiss path below this size, sparse elimination above


class Matrix:
    __slots__ = ("rows", "cols", "data", "mode", "tol")

    def __init__(self, rows: int, cols: int, data: dict, mode: str, tol: float = 1e-9):
        self.rows = rows
        self.cols = cols
        self.data = data
        self.mode = mode
        self.tol = tol

    # ---- constructors ----

    @staticmethod
    def from_entries(rows, cols, entries, mode=None, tol=1e-9):
        """entries: iterable of (r, c, scalar). Duplicates are an error."""
        data = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            if (r, c) in data:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if mode is None:
                mode = scalar_mode(v)
            elif scalar_mode(v) != mode:
                raise ScalarModeError("mixed scalar modes in matrix entries")
            if not v.is_zero():
                data[(r, c)] = v
        if mode is None:
            mode = EXACT
        return Matrix(rows, cols, data, mode, tol)

    @staticmethod
    def zeros(rows, cols, mode=EXACT, tol=1e-9):
        return Matrix(rows, cols, {}, mode, tol)

    @staticmethod
    def identity(n, mode=EXACT, tol=1e-9):
        one = one_of(mode, tol)
        return Matrix(n, n, {(i, i): one for i in range(n)}, mode, tol)

    @staticmethod
    def from_dense(lists, mode=None, tol=1e-9):
        rows = len(lists)
        cols = len(lists[0]) if rows else 0
        ent = []
        for r, row in enumerate(lists):
            assert len(row) == cols
            for c, v in enumerate(row):
                if isinstance(v, int):
                    v = QQi(v)
                ent.append((r, c, v))
        m = Matrix.from_entries(rows, cols, ent, mode, tol)
        return m

    @staticmethod
    def column(vec: dict, dim: int, mode=EXACT, tol=1e-9):
        return Matrix(dim, 1, {(i, 0): v for i, v in vec.items() if not v.is_zero()},
                      mode, tol)

    # ---- views ----

    def entry(self, r, c):
        v = self.data.get((r, c))
        if v is None:
            return zero_of(self.mode, self.tol)
        return v

    def to_dense(self):
        z = zero_of(self.mode, self.tol)
        out = [[z] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            out[r][c] = v
        return out

    def col_vector(self, c) -> dict:
        return {r: v for (r, cc), v in self.data.items() if cc == c}

    def row_vector(self, r) -> dict:
        return {c: v for (rr, c), v in self.data.items() if rr == r}

    def nnz(self) -> int:
        return len(self.data)

    def is_zero(self) -> bool:
        return not self.data

    # ---- arithmetic ----

    def _check(self, other):
        if self.mode != other.mode:
            raise ScalarModeError("mixed matrix modes")

    def __add__(self, other):
        self._check(other)
        assert (self.rows, self.cols) == (other.rows, other.cols)
        data = dict(self.data)
        for k, v in other.data.items():
            w = data.get(k)
            s = v if w is None else w + v
            if s.is_zero():
                data.pop(k, None)
            else:
                data[k] = s
        return Matrix(self.rows, self.cols, data, self.mode, self.tol)

    def __sub__(self, other):
        return self + other.scale_int(-1)

    def scale(self, s):
        if s.is_zero():
            return Matrix.zeros(self.rows, self.cols, self.mode, self.tol)
        return Matrix(self.rows, self.cols, {k: v * s for k, v in self.data.items()},
                      self.mode, self.tol)

    def scale_int(self, n: int):
        if n == 0:
            return Matrix.zeros(self.rows, self.cols, self.mode, self.tol)
        return Matrix(self.rows, self.cols, {k: v * n for k, v in self.data.items()},
                      self.mode, self.tol)

    def __matmul__(self, other):
        self._check(other)
        assert self.cols == other.rows, f"shape mismatch {self.cols} vs {other.rows}"
        # column-indexed view of other for sparse row-times-matrix products
        by_row = {}
        for (r, c), v in other.data.items():
            by_row.setdefault(r, []).append((c, v))
        acc = {}
        for (r, k), u in self.data.items():
            hits = by_row.get(k)
            if not hits:
                continue
            for c, v in hits:
                key = (r, c)
                w = acc.get(key)
                acc[key] = u * v if w is None else w + u * v
        data = {k: v for k, v in acc.items() if not v.is_zero()}
        return Matrix(self.rows, other.cols, data, self.mode, self.tol)

    def apply(self, vec: dict) -> dict:
        """Sparse matrix-vector product; vec maps index -> scalar."""
        by_col = {}
        for (r, c), v in self.data.items():
            by_col.setdefault(c, []).append((r, v))
        acc = {}
        for k, u in vec.items():
            hits = by_col.get(k)
            if not hits:
                continue
            for r, v in hits:
                w = acc.get(r)
                acc[r] = v * u if w is None else w + v * u
        return {r: v for r, v in acc.items() if not v.is_zero()}

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      {(c, r): v for (r, c), v in self.data.items()}, self.mode, self.tol)

    def conj(self):
        return Matrix(self.rows, self.cols,
                      {k: v.conj() for k, v in self.data.items()}, self.mode, self.tol)

    def conj_transpose(self):
        return Matrix(self.cols, self.rows,
                      {(c, r): v.conj() for (r, c), v in self.data.items()},
                      self.mode, self.tol)

    def trace(self):
        t = zero_of(self.mode, self.tol)
        for (r, c), v in self.data.items():
            if r == c:
                t = t + v
        return t

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        if self.mode == EXACT:
            return self.data == other.data
        keys = set(self.data) | set(other.data)
        return all((self.entry(*k) - other.entry(*k)).is_zero() for k in keys)

    __hash__ = None

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, nnz={len(self.data)}, {self.mode})"


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with row-major index pairing (i*rb + k, j*cb + l)."""
    a._check(b)
    data = {}
    for (i, j), u in a.data.items():
        for (k, l), v in b.data.items():
            w = u * v
            if not w.is_zero():
                data[(i * b.rows + k, j * b.cols + l)] = w
    return Matrix(a.rows * b.rows, a.cols * b.cols, data, a.mode, a.tol)


@dataclass
class LinearSolution:
    consistent: bool
    particular: dict | None  # sparse index -> scalar, None when inconsistent
    kernel: list  # list of sparse vectors spanning the nullspace
    rank: int


# ---- sparse elimination ----

def _row_sub(row, coeff, pivot_row):
    # row -= coeff * pivot_row, in place on a plain dict
    for c, v in pivot_row.items():
        w = row.get(c)
        s = -(coeff * v) if w is None else w - coeff * v
        if s.is_zero():
            row.pop(c, None)
        else:
            row[c] = s


class RowReducer:
    """Incrementally maintained reduced row-echelon set of sparse rows."""

    def __init__(self, ncols, mode=EXACT, tol=1e-9):
        self.ncols = ncols
        self.mode = mode
        self.tol = tol
        self.pivots = {}  # col -> row dict with leading 1 at col

    def reduce(self, row: dict) -> dict:
        """Fully reduce a row against current pivots; returns the residual.

        Reduction must clear every pivot column, not only the leading one:
        kernel_basis reads coefficients straight off the pivot rows, which is
        only sound for a fully reduced set.
        """
        row = dict(row)
        while True:
            hit = None
            for c in row:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                return row
            _row_sub(row, row[hit], self.pivots[hit])

    def insert(self, row: dict) -> bool:
        """Insert a row; True if it added a new pivot (was independent)."""
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        inv = row[c].inverse()
        row = {k: v * inv for k, v in row.items()}
        # back-reduce existing pivot rows to keep the set fully reduced
        for pc, pr in self.pivots.items():
            if c in pr:
                _row_sub(pr, pr[c], row)
        self.pivots[c] = row
        return True

    @property
    def rank(self):
        return len(self.pivots)

    def kernel_basis(self) -> list:
        """Nullspace basis of the inserted row space, one vector per free col."""
        one = one_of(self.mode, self.tol)
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            vec = {f: one}
            for pc, pr in self.pivots.items():
                v = pr.get(f)
                if v is not None:
                    vec[pc] = -v
            basis.append(vec)
        return basis


def _bareiss_echelon(int_rows, ncols):
    """Fraction-free forward elimination on rows of Gaussian-integer pairs.

    int_rows: list of dict col -> (a, b) integer pairs meaning a + b*i.
    Returns (echelon rows as dicts, pivot col list). Exact divisions per the
    Bareiss identity keep entries at minor size.
    """
    rows = [dict(r) for r in int_rows]
    pivots = []
    prev = (1, 0)
    used = [False] * len(rows)
    for col in range(ncols):
        sel = None
        for i, r in enumerate(rows):
            if used[i]:
                continue
            v = r.get(col)
            if v is not None and (v[0] or v[1]):
                sel = i
                break
        if sel is None:
            continue
        used[sel] = True
        pivots.append((col, sel))
        pa, pb = rows[sel][col]
        qa, qb = prev
        qn = qa * qa + qb * qb
        for i, r in enumerate(rows):
            if used[i] or i == sel:
                continue
            v = r.get(col)
            if v is None or (v[0] == 0 and v[1] == 0):
                # still rescale by pivot / prev to keep Bareiss invariant
                if qn == 1 and qa == 1:
                    newr = {c: (pa * x - pb * y, pa * y + pb * x) for c, (x, y) in r.items()}
                else:
                    newr = {}
                    for c, (x, y) in r.items():
                        na = pa * x - pb * y
                        nb = pa * y + pb * x
                        da = (na * qa + nb * qb)
                        db = (nb * qa - na * qb)
                        assert da % qn == 0 and db % qn == 0, "bareiss exact division"
                        newr[c] = (da // qn, db // qn)
                rows[i] = {c: v for c, v in newr.items() if v[0] or v[1]}
                continue
            va, vb = v
            newr = {}
            cols_union = set(r) | set(rows[sel])
            for c in cols_union:
                xa, xb = r.get(c, (0, 0))
                sa, sb = rows[sel].get(c, (0, 0))
                # pivot*x - v*s
                na = pa * xa - pb * xb - (va * sa - vb * sb)
                nb = pa * xb + pb * xa - (va * sb + vb * sa)
                if qn == 1 and qa == 1:
                    if na or nb:
                        newr[c] = (na, nb)
                    continue
                da = na * qa + nb * qb
                db = nb * qa - na * qb
                assert da % qn == 0 and db % qn == 0, "bareiss exact division"
                da //= qn
                db //= qn
                if da or db:
                    newr[c] = (da, db)
            rows[i] = newr
        prev = (pa, pb)
    ordered = [rows[i] for _, i in pivots]
    return ordered, [c for c, _ in pivots]


def _to_int_rows(rows):
    """Clear denominators rowwise; QQi rows -> Gaussian integer pair rows."""
    out = []
    for r in rows:
        if not r:
            continue
        m = lcm(*(v.d for v in r.values())) if r else 1
        out.append({c: (v.a * (m // v.d), v.b * (m // v.d)) for c, v in r.items()})
    return out


def _solve_dense_exact(rows, ncols):
    """Bareiss echelon + exact back substitution. rows: sparse QQi dicts."""
    int_rows = _to_int_rows(rows)
    ech, pivcols = _bareiss_echelon(int_rows, ncols)
    # back-substitute over the field into RREF
    red = RowReducer(ncols, EXACT)
    for r in ech:
        qrow = {c: QQi(a, b) for c, (a, b) in r.items()}
        red.insert(qrow)
    return red


def solve_linear_system(a: Matrix, b) -> LinearSolution:
    """Solve a x = b exactly (or within tol in float mode).

    b may be a sparse vector dict or a single-column Matrix. Returns the
    particular solution, a kernel basis, rank, and a consistency flag. In
    exact mode the result is re-multiplied and checked before returning.
    """
    if isinstance(b, Matrix):
        assert b.cols == 1 and b.rows == a.rows
        b = b.col_vector(0)
    mode = a.mode
    ncols = a.cols + 1
    rows = []
    for r in range(a.rows):
        row = a.row_vector(r)
        bv = b.get(r)
        if bv is not None and not bv.is_zero():
            row = dict(row)
            row[a.cols] = bv
        if row:
            rows.append(row)
    if mode == EXACT and a.rows <= DENSE_LIMIT and a.cols <= DENSE_LIMIT:
        red = _solve_dense_exact(rows, ncols)
    else:
        red = RowReducer(ncols, mode, a.tol)
        for row in rows:
            red.insert(row)
    if a.cols in red.pivots:
        return LinearSolution(False, None, [], red.rank - 1)
    particular = {}
    for pc, pr in red.pivots.items():
        v = pr.get(a.cols)
        if v is not None:
            particular[pc] = v
    kernel = []
    one = one_of(mode, a.tol)
    for f in range(a.cols):
        if f in red.pivots:
            continue
        vec = {f: one}
        for pc, pr in red.pivots.items():
            v = pr.get(f)
            if v is not None:
                vec[pc] = -v
        kernel.append(vec)
    if mode == EXACT:
        chk = a.apply(particular)
        want = {k: v for k, v in b.items() if not v.is_zero()}
        assert all((chk.get(k, QQi(0)) - v).is_zero() for k, v in want.items()) and \
            all(k in want for k in chk), "exact solve failed re-multiplication"
    return LinearSolution(True, particular, kernel, red.rank)


def nullspace(a: Matrix) -> list:
    """Basis of {x : a x = 0} as sparse vectors."""
    red = RowReducer(a.cols, a.mode, a.tol)
    if a.mode == EXACT and a.cols <= DENSE_LIMIT and a.rows <= DENSE_LIMIT:
        rows = [a.row_vector(r) for r in range(a.rows)]
        red = _solve_dense_exact([r for r in rows if r], a.cols)
    else:
        for r in range(a.rows):
            row = a.row_vector(r)
            if row:
                red.insert(row)
    basis = red.kernel_basis()
    if a.mode == EXACT:
        for v in basis:
            assert not a.apply(v), "kernel vector fails re-multiplication"
    return basis


def rank(a: Matrix) -> int:
    red = RowReducer(a.cols, a.mode, a.tol)
    for r in range(a.rows):
        row = a.row_vector(r)
        if row:
            red.insert(row)
    return red.rank


def invert(a: Matrix) -> Matrix:
    """Exact inverse; raises ValueError when singular."""
    assert a.rows == a.cols
    n = a.rows
    red = RowReducer(2 * n, a.mode, a.tol)
    one = one_of(a.mode, a.tol)
    for r in range(n):
        row = dict(a.row_vector(r))
        row[n + r] = one
        red.insert(row)
    data = {}
    for c in range(n):
        pr = red.pivots.get(c)
        if pr is None:
            raise ValueError("matrix is singular")
        for k, v in pr.items():
            if k >= n:
                data[(c, k - n)] = v
    return Matrix(n, n, data, a.mode, a.tol)


def char_poly(m: Matrix) -> list:
    """Monic characteristic polynomial, coefficients highest power first.

    Faddeev-LeVerrier recursion; exact over the Gaussian rationals.
    """
    assert m.rows == m.cols
    n = m.rows
    one = one_of(m.mode, m.tol)
    coeffs = [one]
    mk = Matrix.zeros(n, n, m.mode, m.tol)
    ident = Matrix.identity(n, m.mode, m.tol)
    ck = one
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(ck))
        ck = mk.trace()
        if m.mode == EXACT:
            ck = ck / (-k)
        else:
            ck = ck * CF(-1.0 / k, m.tol)
        coeffs.append(ck)
    return coeffs


def gram_matrix(vectors: list, form=None, mode=EXACT, tol=1e-9) -> Matrix:
    """Hermitian Gram matrix <v_i, v_j> = sum conj(v_i) form v_j (form=id if None)."""
    n = len(vectors)
    data = {}
    for i, vi in enumerate(vectors):
        for j, vj in enumerate(vectors):
            target = vj if form is None else form.apply(vj)
            s = None
            for k, v in vi.items():
                u = target.get(k)
                if u is not None:
                    term = v.conj() * u
                    s = term if s is None else s + term
            if s is not None and not s.is_zero():
                data[(i, j)] = s
    return Matrix(n, n, data, mode, tol)


def vector_in_span(vec: dict, basis: list, ncols: int, mode=EXACT, tol=1e-9):
    """Coordinates of vec in span(basis) or None. Basis given as sparse dicts."""
    a = Matrix(ncols, len(basis),
               {(r, j): v for j, bvec in enumerate(basis) for r, v in bvec.items()},
               mode, tol)
    sol = solve_linear_system(a, vec)
    if not sol.consistent:
        return None
    return sol.particular
