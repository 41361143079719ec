"""Wedderburn decomposition of finite-dimensional *-algebras over Q(i).

Input is a StructureConstants table; output is a BlockShape together with an
explicit *-isomorphism onto the multimatrix algebra of that shape, verified on
all basis pairs before it is returned.

Exact mode never leaves Q(i). The pipeline: semisimplicity via the regular
trace form, center by a stacked commutant solve, central idempotents by
factoring minimal polynomials of self-adjoint central elements (sympy over the
Gaussian rationals), corner refinement by the same splitting applied inside
p A p, a rational-isotropy solver for 2x2 corners that resist every candidate,
and a norm-equation step (sum of two squares) that rescales matrix units until
star is the plain conjugate transpose. Inputs that genuinely require a field
extension beyond Q(i) raise FieldExtensionError instead of silently degrading;
such algebras can be processed in float mode, where splitting uses numpy
eigenvalues and Lagrange interpolation and the rescaling is a square root.

Randomized candidates are drawn from a seeded generator and the draw count is
reported, so runs are reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .matrices import Matrix, invert, nullspace, rank
from .multimatrix import BlockShape, StructureConstants, multiply as block_multiply, star as block_star
from .scalars import CF, EXACT, FLOAT, IUNIT, QQi, one_of, zero_of

MAX_RANDOM_CANDIDATES = 60
FRAME_VECTOR_BUDGET = 20000


class NonSemisimpleError(ValueError):
    """The algebra has a radical, or its involution is not positive."""


class FieldExtensionError(RuntimeError):
    """Splitting needs scalars beyond Q(i); rerun in float mode."""


# ---------------------------------------------------------------------------
# sparse vector helpers

def _vadd(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        w = out.get(k)
        w = v if w is None else w + v
        if w.is_zero():
            out.pop(k, None)
        else:
            out[k] = w
    return out


def _vsub(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        w = out.get(k)
        w = -v if w is None else w - v
        if w.is_zero():
            out.pop(k, None)
        else:
            out[k] = w
    return out


def _vscale(x: dict, s) -> dict:
    if s.is_zero():
        return {}
    return {k: v * s for k, v in x.items()}


def _veq(x: dict, y: dict) -> bool:
    """Equality that treats dropped keys and stored near-zeros alike."""
    return not _vsub(x, y)


class _Span:
    """Incremental span with coordinate tracking over the inserted vectors."""

    def __init__(self, mode, tol):
        self.mode = mode
        self.tol = tol
        self.rows = {}       # pivot -> (reduced row, combo over originals)
        self.originals = []  # independent vectors, in insertion order

    def _reduce(self, row, combo):
        row = {k: v for k, v in row.items() if not v.is_zero()}
        combo = dict(combo)
        while True:
            hit = None
            for k in row:
                if k in self.rows:
                    hit = k
                    break
            if hit is None:
                return row, combo
            prow, pcombo = self.rows[hit]
            c = row[hit]
            for k, v in prow.items():
                w = row.get(k)
                w = -(c * v) if w is None else w - c * v
                if w.is_zero():
                    row.pop(k, None)
                else:
                    row[k] = w
            for k, v in pcombo.items():
                w = combo.get(k)
                combo[k] = -(c * v) if w is None else w - c * v

    def insert(self, vec: dict) -> bool:
        """Add vec; True if it enlarged the span."""
        n = len(self.originals)
        row, combo = self._reduce(vec, {n: one_of(self.mode, self.tol)})
        if not row:
            return False
        pivot = min(row)
        inv = row[pivot].inverse()
        self.rows[pivot] = ({k: v * inv for k, v in row.items()},
                            {k: v * inv for k, v in combo.items()})
        self.originals.append(dict(vec))
        return True

    def coords(self, vec: dict):
        """Coefficients of vec over the stored originals, or None."""
        row, combo = self._reduce(vec, {})
        if row:
            return None
        return {k: -v for k, v in combo.items() if not v.is_zero()}

    @property
    def dim(self) -> int:
        return len(self.originals)


# ---------------------------------------------------------------------------
# polynomials over Q(i) via sympy

_T = sympy.Symbol("t")


def _qqi_to_sympy(c: QQi):
    return sympy.Rational(c.a, c.d) + sympy.Rational(c.b, c.d) * sympy.I


def _sympy_to_qqi(expr) -> QQi:
    e = sympy.nsimplify(sympy.expand(expr))
    re = sympy.Rational(sympy.re(e))
    im = sympy.Rational(sympy.im(e))
    return QQi.from_rational(Fraction(int(re.p), int(re.q)),
                             Fraction(int(im.p), int(im.q)))


def minimal_polynomial(mul, unit: dict, x: dict, mode=EXACT, tol=1e-9,
                       maxdeg=None):
    """Monic minimal polynomial of x in the unital algebra given by mul.

    Returns (coeffs, powers): coeffs is the monic coefficient list in
    descending degree; powers[j] is x**j with x**0 = unit.
    """
    span = _Span(mode, tol)
    span.insert(unit)
    powers = [dict(unit)]
    cur = dict(unit)
    limit = maxdeg if maxdeg is not None else 1 << 20
    for k in range(1, limit + 2):
        cur = mul(cur, x)
        co = span.coords(cur)
        if co is not None:
            one = one_of(mode, tol)
            zero = zero_of(mode, tol)
            coeffs = [one] + [-co.get(j, zero) for j in range(k - 1, -1, -1)]
            return coeffs, powers
        span.insert(cur)
        powers.append(dict(cur))
    raise AssertionError("minimal polynomial did not terminate")


def _factor_exact(coeffs):
    """Factor a monic Q(i) polynomial; list of (monic coeffs desc, mult)."""
    expr = sum(_qqi_to_sympy(c) * _T ** (len(coeffs) - 1 - i)
               for i, c in enumerate(coeffs))
    poly = sympy.Poly(expr, _T, domain="QQ_I")
    _, facs = poly.factor_list()
    out = []
    for f, m in facs:
        cl = f.all_coeffs()
        lead = cl[0]
        cl = [sympy.expand(c / lead) for c in cl]
        out.append(([_sympy_to_qqi(c) for c in cl], m))
    return out


def _is_rational_poly(coeffs) -> bool:
    return all(c.is_real() for c in coeffs)


def _eval_poly(coeffs_desc_fracs, powers):
    """Evaluate a rational polynomial at an algebra element via its powers."""
    acc = {}
    deg = len(coeffs_desc_fracs) - 1
    for i, c in enumerate(coeffs_desc_fracs):
        if c == 0:
            continue
        acc = _vadd(acc, _vscale(powers[deg - i], QQi.from_rational(c)))
    return acc


def _frac_poly(fracs):
    return sympy.Poly([sympy.Rational(f.numerator, f.denominator)
                       for f in fracs], _T, domain="QQ")


def _crt_idempotents_exact(m_coeffs, factors, powers):
    """Orthogonal idempotents from the CRT splitting of a squarefree rational
    minimal polynomial with rational irreducible factors."""
    m_poly = _frac_poly([Fraction(c.re) for c in m_coeffs])
    idems = []
    for f_coeffs, _ in factors:
        f_poly = _frac_poly([Fraction(c.re) for c in f_coeffs])
        w = m_poly.quo(f_poly)
        s, _, g = sympy.gcdex(w.as_expr(), f_poly.as_expr(), _T)
        assert g.is_number and g != 0, "spectral factors are not coprime"
        e_poly = (sympy.Poly(sympy.expand(s / g), _T, domain="QQ") * w) % m_poly
        fr = [Fraction(int(c.p), int(c.q))
              for c in (sympy.Rational(c) for c in e_poly.all_coeffs())]
        idems.append(_eval_poly(fr, powers))
    return idems


# ---------------------------------------------------------------------------
# the decomposer

@dataclass
class WedderburnReport:
    """Shape plus verified *-isomorphism onto the block algebra.

    iso maps input coordinates to block coordinates; iso_inv is its inverse.
    draws counts random candidates consumed under the given seed.
    """
    shape: BlockShape
    iso: Matrix
    iso_inv: Matrix
    center_dim: int
    seed: int
    draws: int
    mode: str

    def to_block(self, x: dict) -> dict:
        return self.iso.apply(x)

    def from_block(self, x: dict) -> dict:
        return self.iso_inv.apply(x)


def _trace_vector(s: StructureConstants):
    """t[l] = trace of left multiplication by basis element l."""
    zero = zero_of(s.mode, s.tol)
    t = []
    for l in range(s.dim):
        acc = zero
        for k in range(s.dim):
            row = s.mult.get((l, k))
            if row:
                v = row.get(k)
                if v is not None:
                    acc = acc + v
        t.append(acc)
    return t


def trace_form(s: StructureConstants) -> Matrix:
    """Gram matrix T[i][j] = tr(L_{e_i e_j}) of the regular trace form."""
    t = _trace_vector(s)
    data = {}
    for (i, j), row in s.mult.items():
        acc = None
        for l, v in row.items():
            term = v * t[l]
            acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            data[(i, j)] = acc
    return Matrix(s.dim, s.dim, data, s.mode, s.tol)


def is_semisimple(s: StructureConstants) -> bool:
    """Nondegeneracy of the regular trace form."""
    tf = trace_form(s)
    if s.mode == FLOAT:
        import numpy as np
        dense = np.array([[tf.entry(r, c).to_complex() for c in range(s.dim)]
                          for r in range(s.dim)])
        return int(np.linalg.matrix_rank(dense, tol=max(s.tol * 100, 1e-8))) == s.dim
    return rank(tf) == s.dim


def center_basis(s: StructureConstants) -> list:
    """Basis of the center, from the stacked commutator kernel."""
    data = {}
    for (i, j), row in s.mult.items():
        for k, v in row.items():
            key = (j * s.dim + k, i)
            w = data.get(key)
            data[key] = v if w is None else w + v
    # subtract the right-multiplication part: (e_j e_i)_k
    for (j, i), row in s.mult.items():
        for k, v in row.items():
            key = (j * s.dim + k, i)
            w = data.get(key)
            w = -v if w is None else w - v
            if w.is_zero():
                data.pop(key, None)
            else:
                data[key] = w
    com = Matrix(s.dim * s.dim, s.dim, data, s.mode, s.tol)
    return nullspace(com)


class _Decomposer:
    def __init__(self, s: StructureConstants, seed: int):
        self.s = s
        self.mode = s.mode
        self.tol = s.tol
        self.rng = random.Random(seed)
        self.seed = seed
        self.draws = 0
        self.one = one_of(s.mode, s.tol)
        self.zero = zero_of(s.mode, s.tol)
        self.i_unit = IUNIT if s.mode == EXACT else CF(1j, s.tol)
        self.trace_vec = _trace_vector(s)

    # -- generic helpers --

    def mul(self, x, y):
        return self.s.multiply(x, y)

    def sa_parts(self, c):
        cs = self.s.star(c)
        yield _vadd(c, cs)
        yield _vscale(_vsub(c, cs), self.i_unit)

    def tr_left(self, x):
        acc = self.zero
        for l, v in x.items():
            acc = acc + v * self.trace_vec[l]
        return acc

    def corner_span(self, p, ambient):
        span = _Span(self.mode, self.tol)
        for b in ambient:
            span.insert(self.mul(self.mul(p, b), p))
        return span

    def candidates(self, p, corner_vectors, scalar_span):
        """Self-adjoint non-scalar corner elements: structured, then seeded."""
        for c in corner_vectors:
            for y in self.sa_parts(c):
                if y and scalar_span.coords(y) is None:
                    yield y
        for _ in range(MAX_RANDOM_CANDIDATES):
            self.draws += 1
            c = {}
            for b in corner_vectors:
                w = self.rng.randint(-2, 2)
                if w:
                    c = _vadd(c, _vscale(b, QQi(w) if self.mode == EXACT
                                         else CF(float(w), self.tol)))
            for y in self.sa_parts(c):
                if y and scalar_span.coords(y) is None:
                    yield y

    # -- splitting --

    def split_element(self, p, y, corner_span):
        """Orthogonal idempotents refining p from a self-adjoint y, or None."""
        if self.mode == EXACT:
            return self._split_exact(p, y, corner_span.dim)
        return self._split_float(p, y, corner_span)

    def _split_exact(self, p, y, corner_dim):
        coeffs, powers = minimal_polynomial(self.mul, p, y, self.mode,
                                            self.tol, maxdeg=corner_dim)
        if len(coeffs) <= 2:
            return None
        if not _is_rational_poly(coeffs):
            raise NonSemisimpleError(
                "self-adjoint element has a non-real minimal polynomial; "
                "the involution is not positive")
        factors = _factor_exact(coeffs)
        if any(m > 1 for _, m in factors):
            raise NonSemisimpleError(
                "self-adjoint element with repeated spectral factor; "
                "the algebra has a radical or a non-positive involution")
        if len(factors) == 1:
            return None
        if not all(_is_rational_poly(f) for f, _ in factors):
            raise NonSemisimpleError(
                "spectral factors of a self-adjoint element are not real")
        idems = _crt_idempotents_exact(coeffs, factors, powers)
        total = {}
        for e in idems:
            assert _veq(self.mul(e, e), e), "CRT output is not idempotent"
            total = _vadd(total, e)
        assert _veq(total, p), "CRT idempotents do not resolve the identity"
        return idems

    def _split_float(self, p, y, corner_span):
        import numpy as np
        basis = corner_span.originals
        m = len(basis)
        cols = []
        for b in basis:
            co = corner_span.coords(self.mul(y, b))
            assert co is not None, "corner is not closed under multiplication"
            cols.append([co.get(r, self.zero).to_complex() for r in range(m)])
        mat = np.array(cols, dtype=complex).T
        eigs = sorted(np.linalg.eigvals(mat).real)
        gap = max(self.tol * 100, 1e-6) * max(1.0, abs(eigs[0]), abs(eigs[-1]))
        clusters = [[eigs[0]]]
        for ev in eigs[1:]:
            if ev - clusters[-1][-1] <= gap:
                clusters[-1].append(ev)
            else:
                clusters.append([ev])
        if len(clusters) == 1:
            return None
        means = [sum(c) / len(c) for c in clusters]
        idems = []
        for t, lt in enumerate(means):
            e = dict(p)
            for u, lu in enumerate(means):
                if u == t:
                    continue
                shifted = _vsub(y, _vscale(p, CF(lu, self.tol)))
                e = _vscale(self.mul(e, shifted), CF(1.0 / (lt - lu), self.tol))
            # sharpen toward the exact idempotent: f <- 3f^2 - 2f^3
            for _ in range(2):
                e2 = self.mul(e, e)
                e3 = self.mul(e2, e)
                e = _vsub(_vscale(e2, CF(3.0, self.tol)),
                          _vscale(e3, CF(2.0, self.tol)))
            e = {k: v for k, v in e.items() if not v.is_zero()}
            idems.append(e)
        return idems

    # -- 2x2 corner rescue: rational isotropic self-adjoint element --

    def sa_basis(self, corner_vectors):
        """Q-basis of the self-adjoint part of the corner span."""
        basis = []
        span = _Span(self.mode, self.tol)
        for b in corner_vectors:
            if span.insert(b):
                basis.append(b)
        m = len(basis)
        dim = self.s.dim
        data = {}
        for k, b in enumerate(basis):
            diff = _vsub(b, self.s.star(b))       # alpha_k column
            summ = _vscale(_vadd(b, self.s.star(b)), self.i_unit)  # beta_k
            for col, vec in ((k, diff), (m + k, summ)):
                for i, v in vec.items():
                    re, im = Fraction(v.re), Fraction(v.im)
                    if re:
                        data[(i, col)] = QQi.from_rational(re) + data.get((i, col), QQi(0))
                    if im:
                        key = (dim + i, col)
                        data[key] = QQi.from_rational(im) + data.get(key, QQi(0))
        sysm = Matrix(2 * dim, 2 * m, {k: v for k, v in data.items()
                                       if not v.is_zero()}, EXACT, self.tol)
        out = []
        sa_span = _Span(self.mode, self.tol)
        for ker in nullspace(sysm):
            x = {}
            for k, b in enumerate(basis):
                coef = ker.get(k, QQi(0)) + ker.get(m + k, QQi(0)) * IUNIT
                if not coef.is_zero():
                    x = _vadd(x, _vscale(b, coef))
            if x and sa_span.insert(x):
                out.append(x)
        return out

    def _block_trace(self, y, corner_span, n):
        """Plain matrix trace of y viewed inside its M_n corner."""
        acc = self.zero
        for k, b in enumerate(corner_span.originals):
            co = corner_span.coords(self.mul(y, b))
            v = co.get(k) if co else None
            if v is not None:
                acc = acc + v
        assert acc.is_real(), "block trace of a self-adjoint element must be real"
        num = Fraction(acc.re)
        return num / n

    def isotropic_sa(self, p, corner_span):
        """Nonzero singular self-adjoint element of a 4-dim corner, or None."""
        ys = self.sa_basis(corner_span.originals)
        if len(ys) != 4:
            return None

        def q(y):
            t1 = self._block_trace(y, corner_span, 2)
            t2 = self._block_trace(self.mul(y, y), corner_span, 2)
            return (t1 * t1 - t2) / 2

        qs = [q(y) for y in ys]
        gram = [[Fraction(0)] * 4 for _ in range(4)]
        for i in range(4):
            gram[i][i] = qs[i]
            for j in range(i + 1, 4):
                val = (q(_vadd(ys[i], ys[j])) - qs[i] - qs[j]) / 2
                gram[i][j] = gram[j][i] = val
        coords = _rational_isotropic_vector(gram)
        if coords is None:
            return None
        y = {}
        for c, base in zip(coords, ys):
            if c:
                y = _vadd(y, _vscale(base, QQi.from_rational(c)))
        assert y, "isotropy solver returned the zero vector"
        assert q(y) == 0
        return y

    # -- refinement --

    def refine(self, start, ambient, allow_quadric):
        """Split start into idempotents whose corners are one-dimensional."""
        final = []
        work = [start]
        while work:
            p = work.pop()
            span = self.corner_span(p, ambient)
            if span.dim == 1:
                final.append(p)
                continue
            scalar_span = _Span(self.mode, self.tol)
            scalar_span.insert(p)
            parts = None
            for y in self.candidates(p, span.originals, scalar_span):
                parts = self.split_element(p, y, span)
                if parts:
                    break
            if parts is None and allow_quadric and span.dim == 4 \
                    and self.mode == EXACT:
                y = self.isotropic_sa(p, span)
                if y is not None:
                    t = self._block_trace(y, span, 2)
                    assert t != 0, "positive involution forces nonzero trace"
                    f = _vscale(y, QQi.from_rational(1 / t))
                    assert _veq(self.mul(f, f), f)
                    parts = [f, _vsub(p, f)]
            if parts is None:
                raise FieldExtensionError(
                    "cannot split a corner over Q(i): the block structure "
                    "needs a field extension; rerun in float mode")
            work.extend(parts)
        return final

    # -- matrix units inside one simple block --

    def matrix_units(self, e, ideal_vectors, prims):
        """Matrix units F[r][c] for the block of e, with F[r][c]* = F[c][r]."""
        n = len(prims)
        f0 = prims[0]
        e0j, ej0, nus = [f0], [f0], [Fraction(1)]
        for j in range(1, n):
            sp = _Span(self.mode, self.tol)
            for b in ideal_vectors:
                sp.insert(self.mul(self.mul(f0, b), prims[j]))
            assert sp.dim == 1, "simple block has 1-dim f0 A fj"
            c_j = sp.originals[0]
            sp2 = _Span(self.mode, self.tol)
            for b in ideal_vectors:
                sp2.insert(self.mul(self.mul(prims[j], b), f0))
            assert sp2.dim == 1
            d_j = sp2.originals[0]
            g_span = _Span(self.mode, self.tol)
            g_span.insert(f0)
            gam = g_span.coords(self.mul(c_j, d_j))
            assert gam and 0 in gam, "f0 A fj pairing degenerates"
            d_j = _vscale(d_j, gam[0].inverse())
            nu_span = _Span(self.mode, self.tol)
            nu_span.insert(d_j)
            nu_co = nu_span.coords(self.s.star(c_j))
            assert nu_co and 0 in nu_co, "star leaves the opposite corner"
            nu = nu_co[0]
            if self.mode == EXACT:
                assert nu.is_real() and nu.re > 0, \
                    "positivity forces a positive rational star twist"
                nus.append(Fraction(nu.re))
            else:
                assert abs(nu.im) <= max(self.tol * 100, 1e-7) and nu.re > 0
                nus.append(nu.re)
            e0j.append(c_j)
            ej0.append(d_j)

        if self.mode == FLOAT:
            scales = [CF(1.0 / nu ** 0.5, self.tol) for nu in nus]
            cols = None
        else:
            scales = []
            for nu in nus:
                c = _two_square_scale(nu)
                if c is None:
                    scales = None
                    break
                scales.append(c)
            cols = None
            if scales is None:
                # need g with g g* = diag(nus): a frame for the reciprocal form
                cols = _orthonormal_frame([Fraction(1) / nu for nu in nus])
                if cols is None:
                    raise FieldExtensionError(
                        "matrix-unit rescaling needs a norm from a field "
                        "extension of Q(i); rerun in float mode")

        units = [[None] * n for _ in range(n)]
        if cols is None:
            row0 = [_vscale(e0j[j], scales[j]) for j in range(n)]
            col0 = [self.s.star(v) for v in row0]
            for r in range(n):
                for c in range(n):
                    units[r][c] = self.mul(col0[r], row0[c])
        else:
            # raw units E[k][l] with star twist diag(nus); recombine by the
            # frame g so that star becomes the conjugate transpose
            raw = [[self.mul(ej0[k], e0j[l]) for l in range(n)] for k in range(n)]
            gmat = Matrix(n, n, {(k, j): cols[j][k] for j in range(n)
                                 for k in range(n) if not cols[j][k].is_zero()},
                          EXACT, self.tol)
            ginv = invert(gmat)
            for r in range(n):
                for c in range(n):
                    acc = {}
                    for k in range(n):
                        gk = gmat.entry(k, r)
                        if gk.is_zero():
                            continue
                        for l in range(n):
                            gl = ginv.entry(c, l)
                            if gl.is_zero():
                                continue
                            acc = _vadd(acc, _vscale(raw[k][l], gk * gl))
                    units[r][c] = acc

        total = {}
        for r in range(n):
            total = _vadd(total, units[r][r])
        assert _veq(total, e), "matrix units do not resolve the block identity"
        for r in range(n):
            for c in range(n):
                assert _veq(self.s.star(units[r][c]), units[c][r]), \
                    "star is not the conjugate transpose on the built units"
        return units

    # -- main driver --

    def run(self) -> WedderburnReport:
        s = self.s
        if not is_semisimple(s):
            raise NonSemisimpleError("regular trace form is degenerate")
        cb = center_basis(s)
        centrals = self.refine(dict(s.unit), cb, allow_quadric=False)

        basis = [{i: self.one} for i in range(s.dim)]
        blocks = []
        for z in centrals:
            ideal = _Span(self.mode, self.tol)
            for b in basis:
                ideal.insert(self.mul(z, b))
            prims = self.refine(z, ideal.originals, allow_quadric=True)
            n = len(prims)
            if n * n != ideal.dim:
                raise FieldExtensionError(
                    "a simple block is a division algebra over Q(i); "
                    "rerun in float mode")
            units = self.matrix_units(z, ideal.originals, prims)
            fp = self._fingerprint(z, n)
            blocks.append((n, fp, units))

        blocks.sort(key=lambda b: (b[0], b[1]))
        shape = BlockShape(tuple(b[0] for b in blocks))
        data = {}
        for bi, (n, _, units) in enumerate(blocks):
            for r in range(n):
                for c in range(n):
                    col = shape.flat(bi, r, c)
                    for k, v in units[r][c].items():
                        data[(k, col)] = v
        iso_inv = Matrix(s.dim, s.dim, data, self.mode, self.tol)
        iso = invert(iso_inv)
        _verify_iso(s, shape, iso, iso_inv)
        return WedderburnReport(shape=shape, iso=iso, iso_inv=iso_inv,
                                center_dim=len(cb), seed=self.seed,
                                draws=self.draws, mode=self.mode)

    def _fingerprint(self, z, n):
        """Intrinsic per-block data: block traces of the input basis."""
        out = []
        for i in range(self.s.dim):
            w = self.mul(z, {i: self.one})
            v = self.tr_left(w)
            if self.mode == EXACT:
                out.append((Fraction(v.re) / n, Fraction(v.im) / n))
            else:
                out.append((round(v.re / n, 6), round(v.im / n, 6)))
        return tuple(out)


def _verify_iso(s: StructureConstants, shape: BlockShape, iso: Matrix,
                iso_inv: Matrix):
    one = one_of(s.mode, s.tol)
    cols = [iso.col_vector(i) for i in range(s.dim)]
    assert _veq(iso.apply(s.unit), shape.unit(s.mode, s.tol)), "unit mismatch"
    for i in range(s.dim):
        lhs = iso.apply(s.star({i: one}))
        assert _veq(lhs, block_star(shape, cols[i])), f"star mismatch at {i}"
    for i in range(s.dim):
        for j in range(s.dim):
            lhs = iso.apply(s.mult.get((i, j), {}))
            rhs = block_multiply(shape, cols[i], cols[j])
            assert _veq(lhs, rhs), f"product mismatch at ({i},{j})"


# ---------------------------------------------------------------------------
# rational quadratic forms and norm equations

def _rational_isotropic_vector(gram):
    """Nonzero rational kernel vector of the quadratic form, or None."""
    n = len(gram)
    q = [row[:] for row in gram]
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_add(dst, src, c):
        for r in range(n):
            q[r][dst] += c * q[r][src]
        for r in range(n):
            q[dst][r] += c * q[src][r]
        for r in range(n):
            basis[dst][r] += c * basis[src][r]

    def col_swap(a, b):
        for r in range(n):
            q[r][a], q[r][b] = q[r][b], q[r][a]
        q[a], q[b] = q[b], q[a]
        basis[a], basis[b] = basis[b], basis[a]

    for k in range(n):
        if q[k][k] == 0:
            j = next((j for j in range(k + 1, n) if q[j][j] != 0), None)
            if j is not None:
                col_swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if q[k][j] != 0), None)
                if j is None:
                    continue
                col_add(k, j, Fraction(1))
        for j in range(k + 1, n):
            if q[k][j] != 0:
                col_add(j, k, -q[k][j] / q[k][k])

    diag = [q[i][i] for i in range(n)]
    for i, d in enumerate(diag):
        if d == 0:
            return basis[i]

    ints = [d.numerator * d.denominator for d in diag]
    # opposite-sign pairs with -mi/mj a perfect square
    for i in range(n):
        for j in range(n):
            if i == j or ints[i] * ints[j] >= 0:
                continue
            ratio = Fraction(-ints[i], ints[j])
            num, den = ratio.numerator, ratio.denominator
            rn, rd = sympy.integer_nthroot(num, 2), sympy.integer_nthroot(den, 2)
            if rn[1] and rd[1]:
                t = Fraction(rn[0], rd[0])
                vec = [basis[i][r] + t * basis[j][r] for r in range(n)]
                return vec

    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic
    x, y, z = sympy.symbols("x y z", integer=True)
    for (i, j, k) in itertools.combinations(range(n), 3):
        signs = {ints[i] > 0, ints[j] > 0, ints[k] > 0}
        if len(signs) < 2:
            continue
        sol = diop_ternary_quadratic(ints[i] * x ** 2 + ints[j] * y ** 2
                                     + ints[k] * z ** 2)
        if sol and sol[0] is not None and any(sol):
            a, b, c = (Fraction(int(v)) for v in sol)
            return [a * basis[i][r] + b * basis[j][r] + c * basis[k][r]
                    for r in range(n)]

    bound = 14
    for xs in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(xs):
            continue
        if sum(m * v * v for m, v in zip(ints, xs)) == 0:
            return [sum(Fraction(xs[i]) * basis[i][r] for i in range(n))
                    for r in range(n)]
    return None


def _two_square_scale(nu: Fraction):
    """c in Q(i) with |c|^2 = 1/nu, or None when no such norm exists."""
    from sympy.solvers.diophantine.diophantine import sum_of_squares
    p, q = nu.numerator, nu.denominator
    for (x, y) in sum_of_squares(p * q, 2, zeros=True):
        return QQi(int(x), int(y), p)
    if p * q == 1:
        return QQi(1, 0, p)
    return None


def _orthonormal_frame(nus):
    """Columns g with g* diag(nus) g = I over Q(i), or None.

    Searches small Gaussian-integer vectors whose diagonal norm is a sum of
    two rational squares, then recurses on the orthogonal complement.
    """
    n = len(nus)
    if n == 0:
        return []
    budget = FRAME_VECTOR_BUDGET

    def h_inner(u, v):
        acc = QQi(0)
        for nu, a, b in zip(nus, u, v):
            acc = acc + QQi.from_rational(nu) * a.conj() * b
        return acc

    for radius in range(1, 4):
        rng = range(-radius, radius + 1)
        for parts in itertools.product(itertools.product(rng, rng), repeat=n):
            budget -= 1
            if budget <= 0:
                return None
            u = [QQi(a, b) for (a, b) in parts]
            if all(c.is_zero() for c in u):
                continue
            if max(max(abs(a), abs(b)) for (a, b) in parts) != radius:
                continue
            s = h_inner(u, u)
            assert s.is_real()
            sf = Fraction(s.re)
            if sf <= 0:
                continue
            c = _two_square_scale(sf)
            if c is None:
                continue
            v = [x * c for x in u]
            if n == 1:
                return [v]
            pivot = next(i for i, x in enumerate(v) if not x.is_zero())
            comp = []
            for j in range(n):
                if j == pivot:
                    continue
                e_j = [QQi(int(i == j)) for i in range(n)]
                coef = h_inner(v, e_j)
                comp.append([e_j[i] - coef * v[i] for i in range(n)])
            # exact Gram-Schmidt on the complement for a diagonal sub-form
            zs, deltas = [], []
            for w in comp:
                for zv, dv in zip(zs, deltas):
                    coef = h_inner(zv, w) / QQi.from_rational(dv)
                    w = [w[i] - coef * zv[i] for i in range(n)]
                d = h_inner(w, w)
                assert d.is_real() and Fraction(d.re) > 0
                zs.append(w)
                deltas.append(Fraction(d.re))
            sub = _orthonormal_frame(deltas)
            if sub is None:
                continue
            frame = [v]
            for col in sub:
                vec = [QQi(0)] * n
                for coef, zv in zip(col, zs):
                    for i in range(n):
                        vec[i] = vec[i] + coef * zv[i]
                frame.append(vec)
            return frame
    return None


def wedderburn_decompose(s: StructureConstants, seed: int = 0) -> WedderburnReport:
    """Block shape and explicit *-isomorphism for a *-semisimple algebra."""
    return _Decomposer(s, seed).run()
