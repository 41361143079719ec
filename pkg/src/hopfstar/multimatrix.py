"""Multimatrix *-algebras: direct sums of full matrix blocks.

A BlockShape fixes the block dimensions and the flat coordinate order
(matrix units blockwise, row-major). Elements are sparse coordinate vectors.
StructureConstants describe an abstract finite-dimensional *-algebra by its
multiplication tensor, involution, and unit, in an arbitrary basis; the
Wedderburn module turns such data back into a BlockShape plus an explicit
*-isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .matrices import Matrix, solve_linear_system
from .scalars import (EXACT, QQi, ScalarModeError, one_of, qi, scalar_mode,
                      zero_of)


@dataclass(frozen=True)
class BlockShape:
    dims: tuple

    def __post_init__(self):
        if not self.dims or any(n <= 0 for n in self.dims):
            raise ValueError("block dims must be positive")

    @cached_property
    def total_dim(self) -> int:
        """Vector-space dimension, sum of squared block dims."""
        return sum(n * n for n in self.dims)

    @cached_property
    def offsets(self) -> tuple:
        off = []
        acc = 0
        for n in self.dims:
            off.append(acc)
            acc += n * n
        return tuple(off)

    def flat(self, b: int, r: int, c: int) -> int:
        n = self.dims[b]
        assert 0 <= r < n and 0 <= c < n
        return self.offsets[b] + r * n + c

    @cached_property
    def _block_of(self):
        table = []
        for b, n in enumerate(self.dims):
            table.extend([b] * (n * n))
        return table

    def unflat(self, i: int):
        b = self._block_of[i]
        loc = i - self.offsets[b]
        n = self.dims[b]
        return b, loc // n, loc % n

    def unit(self, mode=EXACT, tol=1e-9) -> dict:
        one = one_of(mode, tol)
        out = {}
        for b, n in enumerate(self.dims):
            for r in range(n):
                out[self.flat(b, r, r)] = one
        return out

    def block_unit(self, b: int, mode=EXACT, tol=1e-9) -> dict:
        one = one_of(mode, tol)
        return {self.flat(b, r, r): one for r in range(self.dims[b])}

    def minimal_projection(self, b: int, mode=EXACT, tol=1e-9) -> dict:
        """Canonical rank-one projection of block b (upper-left matrix unit)."""
        return {self.flat(b, 0, 0): one_of(mode, tol)}

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


def multiply(shape: BlockShape, x: dict, y: dict) -> dict:
    """Blockwise product of sparse coordinate vectors."""
    # index y by (block, row)
    y_by = {}
    for j, v in y.items():
        b, r, c = shape.unflat(j)
        y_by.setdefault((b, r), []).append((c, v))
    acc = {}
    for i, u in x.items():
        b, r, c = shape.unflat(i)
        hits = y_by.get((b, c))
        if not hits:
            continue
        for d, v in hits:
            k = shape.flat(b, r, d)
            w = acc.get(k)
            acc[k] = u * v if w is None else w + u * v
    return {k: v for k, v in acc.items() if not v.is_zero()}


def star(shape: BlockShape, x: dict) -> dict:
    """Blockwise conjugate transpose."""
    out = {}
    for i, v in x.items():
        b, r, c = shape.unflat(i)
        out[shape.flat(b, c, r)] = v.conj()
    return out


def canonical_trace(shape: BlockShape, mode=EXACT, tol=1e-9) -> dict:
    """The tracial state weighting each block by its matrix dimension.

    As a functional vector w: value on x is sum_i w_i x_i. Unit trace; each
    block enters with weight n_b / sum(n^2).
    """
    d = shape.total_dim
    out = {}
    for b, n in enumerate(shape.dims):
        if mode == EXACT:
            w = QQi(n, 0, d)
        else:
            from .scalars import CF
            w = CF(n / d, tol)
        for r in range(n):
            out[shape.flat(b, r, r)] = w
    return out


def apply_functional(f: dict, x: dict):
    """Plain pairing sum f_i x_i (linear functional, no conjugation)."""
    s = None
    for i, v in x.items():
        u = f.get(i)
        if u is not None:
            t = u * v
            s = t if s is None else s + t
    return s


def trace_of(shape: BlockShape, x: dict, mode=EXACT, tol=1e-9):
    """Canonical trace evaluated on x."""
    s = apply_functional(canonical_trace(shape, mode, tol), x)
    return zero_of(mode, tol) if s is None else s


def unnormalized_block_trace(shape: BlockShape, x: dict, b: int, mode=EXACT, tol=1e-9):
    """Plain matrix trace of the block-b component."""
    s = zero_of(mode, tol)
    for r in range(shape.dims[b]):
        v = x.get(shape.flat(b, r, r))
        if v is not None:
            s = s + v
    return s


def tensor_shape(s1: BlockShape, s2: BlockShape) -> BlockShape:
    """Shape of the tensor product algebra, blocks in factor-pair order."""
    return BlockShape(tuple(n1 * n2 for n1 in s1.dims for n2 in s2.dims))


def tensor_reindex(s1: BlockShape, s2: BlockShape) -> list:
    """Permutation taking tensor coordinates i1*dim2 + i2 to flat coordinates
    of tensor_shape(s1, s2): matrix units e(b1,r1,c1) x e(b2,r2,c2) map to the
    matrix unit of block (b1,b2) at row r1*n2+r2, col c1*n2+c2."""
    d2 = s2.total_dim
    ts = tensor_shape(s1, s2)
    n2blocks = len(s2.dims)
    perm = [0] * (s1.total_dim * d2)
    for i1 in range(s1.total_dim):
        b1, r1, c1 = s1.unflat(i1)
        for i2 in range(d2):
            b2, r2, c2 = s2.unflat(i2)
            n2 = s2.dims[b2]
            tb = b1 * n2blocks + b2
            perm[i1 * d2 + i2] = ts.flat(tb, r1 * n2 + r2, c1 * n2 + c2)
    return perm


class TensorAlgebra:
    """Tensor product of two multimatrix algebras with its re-indexing.

    Elements live in tensor coordinates (i1*dim2 + i2). Products are done
    blockwise through the re-indexing permutation, which is exactly the
    Kronecker pairing of matrix units.
    """

    def __init__(self, s1: BlockShape, s2: BlockShape):
        self.s1 = s1
        self.s2 = s2
        self.shape = tensor_shape(s1, s2)
        self.perm = tensor_reindex(s1, s2)
        self.inv_perm = [0] * len(self.perm)
        for t, f in enumerate(self.perm):
            self.inv_perm[f] = t

    def to_block(self, x: dict) -> dict:
        return {self.perm[i]: v for i, v in x.items()}

    def from_block(self, x: dict) -> dict:
        return {self.inv_perm[i]: v for i, v in x.items()}

    def multiply(self, x: dict, y: dict) -> dict:
        xb = self.to_block(x)
        yb = self.to_block(y)
        return self.from_block(multiply(self.shape, xb, yb))

    def star(self, x: dict) -> dict:
        return self.from_block(star(self.shape, self.to_block(x)))

    def unit(self, mode=EXACT, tol=1e-9) -> dict:
        return self.from_block(self.shape.unit(mode, tol))


class StructureConstants:
    """Abstract finite-dimensional *-algebra in an arbitrary basis.

    mult maps a basis pair (i, j) to the sparse expansion of e_i e_j.
    involution is the conjugate-linear star in coordinates: star(x) =
    inv_matrix . conj(x). unit is the coordinate vector of 1.
    """

    def __init__(self, dim: int, mult: dict, involution: Matrix, unit: dict,
                 mode=EXACT, tol=1e-9, validate="auto"):
        self.dim = dim
        self.mult = mult
        self.involution = involution
        self.unit = unit
        self.mode = mode
        self.tol = tol
        if validate == "auto":
            validate = dim <= 20
        if validate:
            self.validate()

    # ---- basic operations ----

    def multiply(self, x: dict, y: dict) -> dict:
        acc = {}
        mult = self.mult
        for i, u in x.items():
            for j, v in y.items():
                row = mult.get((i, j))
                if not row:
                    continue
                uv = u * v
                for k, w in row.items():
                    s = acc.get(k)
                    t = uv * w
                    acc[k] = t if s is None else s + t
        return {k: v for k, v in acc.items() if not v.is_zero()}

    def star(self, x: dict) -> dict:
        return self.involution.apply({i: v.conj() for i, v in x.items()})

    def left_mult_operator(self, x: dict) -> Matrix:
        """Matrix of left multiplication by x on the algebra."""
        data = {}
        for j in range(self.dim):
            col = self.multiply(x, {j: one_of(self.mode, self.tol)})
            for k, v in col.items():
                data[(k, j)] = v
        return Matrix(self.dim, self.dim, data, self.mode, self.tol)

    def right_mult_operator(self, x: dict) -> Matrix:
        data = {}
        for j in range(self.dim):
            col = self.multiply({j: one_of(self.mode, self.tol)}, x)
            for k, v in col.items():
                data[(k, j)] = v
        return Matrix(self.dim, self.dim, data, self.mode, self.tol)

    def regular_trace(self, x: dict):
        """Trace of left multiplication by x (unnormalized)."""
        t = zero_of(self.mode, self.tol)
        one = one_of(self.mode, self.tol)
        for j in range(self.dim):
            col = self.multiply(x, {j: one})
            v = col.get(j)
            if v is not None:
                t = t + v
        return t

    # ---- validation ----

    def validate(self):
        one = one_of(self.mode, self.tol)
        basis = [{i: one} for i in range(self.dim)]
        # unit laws
        for i, e in enumerate(basis):
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise ValueError(f"unit law fails on basis element {i}")
        # associativity on all basis triples
        prods = {}
        for i in range(self.dim):
            for j in range(self.dim):
                prods[(i, j)] = self.mult.get((i, j), {})
        for i in range(self.dim):
            for j in range(self.dim):
                ij = prods[(i, j)]
                for k in range(self.dim):
                    left = self.multiply(ij, basis[k])
                    right = self.multiply(basis[i], prods[(j, k)])
                    if left != right:
                        raise ValueError(f"associativity fails at triple ({i},{j},{k})")
        # involution: involutive, anti-multiplicative
        for i, e in enumerate(basis):
            if self.star(self.star(e)) != e:
                raise ValueError(f"involution not involutive at {i}")
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = self.star(prods[(i, j)])
                rhs = self.multiply(self.star(basis[j]), self.star(basis[i]))
                if lhs != rhs:
                    raise ValueError(f"involution not anti-multiplicative at ({i},{j})")
        return True

    # ---- constructors ----

    @staticmethod
    def from_shape(shape: BlockShape, mode=EXACT, tol=1e-9) -> "StructureConstants":
        """Structure constants of the multimatrix algebra itself."""
        dim = shape.total_dim
        one = one_of(mode, tol)
        mult = {}
        for i in range(dim):
            b1, r1, c1 = shape.unflat(i)
            for j in range(dim):
                b2, r2, c2 = shape.unflat(j)
                if b1 == b2 and c1 == r2:
                    mult[(i, j)] = {shape.flat(b1, r1, c2): one}
        inv = {}
        for i in range(dim):
            b, r, c = shape.unflat(i)
            inv[(shape.flat(b, c, r), i)] = one
        return StructureConstants(dim, mult,
                                  Matrix(dim, dim, inv, mode, tol),
                                  shape.unit(mode, tol), mode, tol, validate=False)

    def transport(self, t: Matrix) -> "StructureConstants":
        """Transport the whole structure through an invertible basis change.

        New coordinates y represent T^-1 . old, so the abstract algebra is
        unchanged while every tensor is rewritten.
        """
        from .matrices import invert
        ti = invert(t)
        one = one_of(self.mode, self.tol)
        mult = {}
        for i in range(self.dim):
            u = t.col_vector(i)
            for j in range(self.dim):
                v = t.col_vector(j)
                w = self.multiply(u, v)
                res = ti.apply(w)
                if res:
                    mult[(i, j)] = res
        inv_mat = ti @ self.involution @ t.conj()
        unit = ti.apply(self.unit)
        return StructureConstants(self.dim, mult, inv_mat, unit,
                                  self.mode, self.tol, validate=False)
