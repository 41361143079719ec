"""The dual Hopf algebra, the pairing, Fourier transforms, operator
convolution, cotracial functionals, and convolution algebras of maps.

Everything reduces to one dense pairing matrix beta and its inverse:
beta[i, k] is the value of the k-th dual block basis element on the
i-th source basis element. The Fourier transform is the map b -> tau(.b)
into the dual, realized as a single invertible matrix.
"""

from .hopf import (HopfAlgebra, StructuralError, _unit_product_table,
                   haar_state, transport_hopf, verify_hopf)
from .matrices import Matrix, invert, nullspace
from .multimatrix import (StructureConstants, apply_functional,
                          multiply as block_multiply, star as block_star)
from .scalars import one_of, zero_of
from .wedderburn import wedderburn_decompose


class DualAlgebra:
    """A Hopf algebra together with its dual in block coordinates.

    All caches (pairing, its inverse, the Fourier matrix and its
    inverse, both Haar states, the Plancherel constant) are computed
    eagerly, so instances are safe to share read-only.
    """

    def __init__(self, source, dual_hopf, to_block, from_block,
                 fourier_matrix, fourier_inv, haar_source, haar_dual,
                 plancherel, kernel):
        self.source = source
        self.dual_hopf = dual_hopf
        self.to_block = to_block        # abstract dual coords -> block
        self.from_block = from_block
        self.pairing = from_block       # beta[i, k] = f_k(e_i)
        self.pairing_inv = to_block
        self.fourier_matrix = fourier_matrix
        self.fourier_inv = fourier_inv
        self.haar_source = haar_source
        self.haar_dual = haar_dual
        self.plancherel = plancherel
        self.kernel = kernel

    def __repr__(self):
        return (f"DualAlgebra({self.source.name or '?'} -> "
                f"dims={self.dual_hopf.shape.dims})")


class ConvolutionKernel:
    """Fourier data over the abstract dual, with no block presentation.

    Convolution only needs the Gram matrix F[x, j] = tau(e_j e_x) and the
    transposed coproduct, so it stays inside the ground field even when
    the dual algebra itself only splits over an extension. dualize
    builds one of these internally; convolution_kernel builds one
    directly for sources whose dual has no presentation over the
    scalars.
    """

    def __init__(self, source, haar_source, fourier_abs, fourier_abs_inv):
        self.source = source
        self.haar_source = haar_source
        self.fourier_abs = fourier_abs
        self.fourier_abs_inv = fourier_abs_inv

    def convolve(self, a: dict, b: dict) -> dict:
        fa = self.fourier_abs.apply(a)
        fb = self.fourier_abs.apply(b)
        n = self.source.dim
        g = {}
        for x in range(n):
            acc = None
            for t, v in self.source.coproduct[x].items():
                p, q = divmod(t, n)
                vp = fa.get(p)
                vq = fb.get(q)
                if vp is None or vq is None:
                    continue
                term = v * vp * vq
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                g[x] = acc
        return self.fourier_abs_inv.apply(g)

    def __repr__(self):
        return f"ConvolutionKernel({self.source.name or '?'})"


def _kernel_from(hopf, haar_src):
    n = hopf.dim
    table = _unit_product_table(hopf.shape)
    fabs = {}
    for j in range(n):
        for a in range(n):
            k = table.get((j, a))
            if k is None:
                continue
            w = haar_src.get(k)
            if w is not None:
                fabs[(a, j)] = w
    fourier_abs = Matrix(n, n, fabs, hopf.mode, hopf.tol)
    return ConvolutionKernel(hopf, haar_src, fourier_abs,
                             invert(fourier_abs))


def convolution_kernel(hopf: HopfAlgebra) -> ConvolutionKernel:
    """Convolution data for a verified source; never leaves the ground
    field, so it works for every source dualize accepts and also for
    the ones whose dual only splits over a field extension."""
    report = verify_hopf(hopf)
    if not report.passed:
        raise StructuralError(
            f"cannot build convolution data, source fails verification:\n"
            f"{report.summary()}")
    return _kernel_from(hopf, haar_state(hopf))


def dualize(hopf: HopfAlgebra, seed: int = 0) -> DualAlgebra:
    """The dual Hopf *-algebra, presented as a multimatrix algebra.

    Dual product is the transposed coproduct, dual coproduct the
    transposed product, dual antipode the transposed antipode, and the
    dual involution is conj . phi . kappa. The abstract dual is pushed
    through its own Wedderburn decomposition and the result is gated by
    the axiom verifier.
    """
    report = verify_hopf(hopf)
    if not report.passed:
        raise StructuralError(
            f"cannot dualize, source fails verification:\n{report.summary()}")
    n = hopf.dim
    mode, tol = hopf.mode, hopf.tol
    one = one_of(mode, tol)

    mult = {}
    for x in range(n):
        for t, v in hopf.coproduct[x].items():
            p, q = divmod(t, n)
            mult.setdefault((p, q), {})[x] = v
    # phi*(x) = conj(phi(kappa(x)*)); dropping the inner star would send
    # delta_g to delta_{g inverse} on group duals and break positivity
    p_star = Matrix(n, n, {(hopf.basis_star_index(i), i): one for i in range(n)},
                    mode, tol)
    invol = (hopf.antipode @ p_star).conj_transpose()
    unit = {k: v for k, v in hopf.counit.items() if not v.is_zero()}
    sc = StructureConstants(n, mult, invol, unit, mode, tol, validate=True)
    rep = wedderburn_decompose(sc, seed=seed)

    table = _unit_product_table(hopf.shape)
    delta_abs = [dict() for _ in range(n)]
    for (i, j), k in table.items():
        delta_abs[k][i * n + j] = one
    eps_abs = dict(hopf.unit())
    kappa_abs = hopf.antipode.transpose()
    dual_hopf = transport_hopf(rep.shape, rep.iso, rep.iso_inv, delta_abs,
                               eps_abs, kappa_abs,
                               f"dual of {hopf.name or '?'}", mode, tol)
    dual_report = verify_hopf(dual_hopf)
    if not dual_report.passed:
        raise StructuralError(
            f"dual failed verification:\n{dual_report.summary()}")

    haar_src = haar_state(hopf)
    kernel = _kernel_from(hopf, haar_src)
    fourier_matrix = rep.iso @ kernel.fourier_abs
    fourier_inv = invert(fourier_matrix)
    haar_dual = haar_state(dual_hopf)
    plancherel = _plancherel_constant(hopf, dual_hopf, fourier_matrix,
                                      haar_src, haar_dual)
    return DualAlgebra(hopf, dual_hopf, rep.iso, rep.iso_inv,
                       fourier_matrix, fourier_inv, haar_src, haar_dual,
                       plancherel, kernel)


def _plancherel_constant(hopf, dual_hopf, fm, haar_src, haar_dual):
    """The single constant c with tau^(F(x)* F(y)) = c tau(x* y).

    Existence of c is part of the duality package; it is scanned over
    all basis pairs and any mismatch is a structural failure.
    """
    n = hopf.dim
    fcols = [dict() for _ in range(n)]
    for (r, c), v in fm.data.items():
        fcols[c][r] = v
    dshape = dual_hopf.shape
    table = _unit_product_table(hopf.shape)
    c_val = None
    zero = zero_of(hopf.mode, hopf.tol)
    for i in range(n):
        si = block_star(dshape, fcols[i])
        istar = hopf.basis_star_index(i)
        for j in range(n):
            lhs = apply_functional(haar_dual,
                                   block_multiply(dshape, si, fcols[j]))
            lhs = zero if lhs is None else lhs
            k = table.get((istar, j))
            rhs = haar_src.get(k) if k is not None else None
            rhs = zero if rhs is None else rhs
            if rhs.is_zero():
                if not lhs.is_zero():
                    raise StructuralError(
                        "Fourier Gram matrices are not proportional")
                continue
            ratio = lhs / rhs
            if c_val is None:
                c_val = ratio
            elif not (c_val - ratio).is_zero():
                raise StructuralError(
                    "Fourier Gram matrices are not proportional")
    if c_val is None:
        raise StructuralError("degenerate Haar Gram matrix")
    return c_val


# ---- transforms ----

def fourier(dual: DualAlgebra, b: dict) -> dict:
    """F(b) in dual block coordinates: beta(a, F(b)) = tau(b a)."""
    return dual.fourier_matrix.apply(b)


def fourier_inverse(dual: DualAlgebra, phi: dict) -> dict:
    return dual.fourier_inv.apply(phi)


def pair(dual: DualAlgebra, a: dict, phi: dict):
    """beta(a, phi) for a in the source, phi in dual block coordinates."""
    acc = zero_of(dual.source.mode, dual.source.tol)
    beta = dual.pairing
    for k, cv in phi.items():
        for i, av in a.items():
            w = beta.entry(i, k)
            if w is not None:
                acc = acc + av * cv * w
    return acc


def convolve(dual, a: dict, b: dict) -> dict:
    """Operator convolution pulled back through the Fourier transform:
    the unique c with F(c) = F(a) F(b). Accepts a DualAlgebra or a bare
    ConvolutionKernel; the two routes agree exactly because the block
    presentation is an algebra isomorphism."""
    kernel = dual.kernel if isinstance(dual, DualAlgebra) else dual
    return kernel.convolve(a, b)


def cotracial_basis(dual) -> list:
    """Basis of the functionals g with g(a conv b) = g(b conv a).

    Functionals are coordinate dicts over the source basis. The Haar
    state always lies in the returned span. Accepts a DualAlgebra or a
    ConvolutionKernel.
    """
    kernel = dual.kernel if isinstance(dual, DualAlgebra) else dual
    n = kernel.source.dim
    one = one_of(kernel.source.mode, kernel.source.tol)
    conv = [[kernel.convolve({i: one}, {j: one}) for j in range(n)]
            for i in range(n)]
    rows = {}
    ridx = 0
    for i in range(n):
        for j in range(i + 1, n):
            diff = dict(conv[i][j])
            for x, v in conv[j][i].items():
                w = diff.get(x)
                s = -v if w is None else w - v
                if s.is_zero():
                    diff.pop(x, None)
                else:
                    diff[x] = s
            if diff:
                for x, v in diff.items():
                    rows[(ridx, x)] = v
                ridx += 1
    if ridx == 0:
        # convolution is commutative; everything is cotracial
        return [{i: one} for i in range(n)]
    a = Matrix(ridx, n, rows, kernel.source.mode, kernel.source.tol)
    return nullspace(a)


# ---- the dual of a linear map, for intertwining checks ----

def dual_map(da: DualAlgebra, db: DualAlgebra, f: Matrix) -> Matrix:
    """f*: dual of B -> dual of A in block coordinates, for f: A -> B."""
    return da.to_block @ f.transpose() @ db.from_block


def double_dual_embedding(da: DualAlgebra, dda: DualAlgebra) -> Matrix:
    """The evaluation map A -> (A^)^ in block coordinates.

    dda must be dualize(da.dual_hopf). The result is a Hopf *-iso
    whenever the inputs are consistent; callers certify it with
    hopf_morphism_failures plus invertibility.
    """
    if dda.source is not da.dual_hopf:
        raise StructuralError(
            "double_dual_embedding needs dualize(da.dual_hopf)")
    return dda.to_block @ da.pairing.transpose()


# ---- convolution algebra of linear maps ----

class MapConvolutionElement:
    """A linear map from a coalgebra to an algebra, with its (C, A) tag.

    matrix columns are images of the source basis in target coordinates.
    """

    def __init__(self, source: HopfAlgebra, target: HopfAlgebra,
                 matrix: Matrix):
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise ValueError("map shape does not match its (C, A) tag")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __eq__(self, other):
        return (isinstance(other, MapConvolutionElement)
                and self.source is other.source
                and self.target is other.target
                and self.matrix == other.matrix)

    def __repr__(self):
        return (f"MapConvolutionElement({self.source.name or '?'} -> "
                f"{self.target.name or '?'})")


def map_convolution_unit(source: HopfAlgebra,
                         target: HopfAlgebra) -> MapConvolutionElement:
    """The convolution identity 1_A eps_C."""
    data = {}
    unit = target.unit()
    for c, e in source.counit.items():
        for r, v in unit.items():
            data[(r, c)] = e * v
    m = Matrix(target.dim, source.dim, data, source.mode, source.tol)
    return MapConvolutionElement(source, target, m)


def map_convolve(f: MapConvolutionElement,
                 g: MapConvolutionElement) -> MapConvolutionElement:
    """(f * g)(c) = sum f(c_1) g(c_2) over the coproduct of c."""
    if f.source is not g.source or f.target is not g.target:
        raise ValueError("convolution tag mismatch: maps live on "
                         "different (C, A) pairs")
    src, tgt = f.source, f.target
    n = src.dim
    fcols = [dict() for _ in range(n)]
    gcols = [dict() for _ in range(n)]
    for (r, c), v in f.matrix.data.items():
        fcols[c][r] = v
    for (r, c), v in g.matrix.data.items():
        gcols[c][r] = v
    data = {}
    for c in range(n):
        acc = {}
        for t, v in src.coproduct[c].items():
            p, q = divmod(t, n)
            prod = tgt.multiply(fcols[p], gcols[q])
            for r, w in prod.items():
                cur = acc.get(r)
                s = v * w if cur is None else cur + v * w
                acc[r] = s
        for r, w in acc.items():
            if not w.is_zero():
                data[(r, c)] = w
    m = Matrix(tgt.dim, n, data, src.mode, src.tol)
    return MapConvolutionElement(src, tgt, m)
