"""Block algebra operations against dense and pure-tensor oracles."""

import random
from fractions import Fraction

import pytest

from hopfstar.matrices import Matrix, invert
from hopfstar.multimatrix import (BlockShape, StructureConstants, TensorAlgebra,
                                  canonical_trace, multiply, star, tensor_reindex,
                                  tensor_shape, trace_of)
from hopfstar.scalars import ONE, QQi, qi


def rand_qqi(rng, span=4):
    return QQi(rng.randint(-span, span), rng.randint(-span, span),
               rng.randint(1, 3))


def rand_vec(rng, shape, fill=0.6):
    out = {}
    for i in range(shape.total_dim):
        if rng.random() < fill:
            v = rand_qqi(rng)
            if not v.is_zero():
                out[i] = v
    return out


def to_dense_blocks(shape, x):
    """[DERIVED] unpack a flat vector into per-block dense matrices."""
    blocks = [[[QQi(0)] * n for _ in range(n)] for n in shape.dims]
    for i, v in x.items():
        b, r, c = shape.unflat(i)
        blocks[b][r][c] = blocks[b][r][c] + v
    return blocks


def dense_mul(a, b):
    n = len(a)
    return [[sum((a[r][k] * b[k][c] for k in range(n)), QQi(0))
             for c in range(n)] for r in range(n)]


def test_flat_unflat_roundtrip():
    shape = BlockShape((1, 2, 3))
    assert shape.total_dim == 14
    for i in range(shape.total_dim):
        b, r, c = shape.unflat(i)
        assert shape.flat(b, r, c) == i


def test_multiply_matches_dense_oracle():
    shape = BlockShape((2, 3))
    rng = random.Random(7)
    for _ in range(20):
        x = rand_vec(rng, shape)
        y = rand_vec(rng, shape)
        z = multiply(shape, x, y)
        xb, yb = to_dense_blocks(shape, x), to_dense_blocks(shape, y)
        zb = to_dense_blocks(shape, z)
        for b in range(len(shape)):
            assert dense_mul(xb[b], yb[b]) == zb[b]


def test_unit_is_neutral():
    shape = BlockShape((1, 2, 2))
    rng = random.Random(3)
    one = shape.unit()
    for _ in range(5):
        x = rand_vec(rng, shape)
        assert multiply(shape, one, x) == x
        assert multiply(shape, x, one) == x


def test_star_is_involutive_and_antimultiplicative():
    shape = BlockShape((2, 3))
    rng = random.Random(11)
    for _ in range(10):
        x = rand_vec(rng, shape)
        y = rand_vec(rng, shape)
        assert star(shape, star(shape, x)) == x
        lhs = star(shape, multiply(shape, x, y))
        rhs = multiply(shape, star(shape, y), star(shape, x))
        assert lhs == rhs


def test_canonical_trace_weights_and_normalization():
    # [TRIVIAL] weights n_b / sum(n^2); unit trace; minimal projection values
    shape = BlockShape((1, 1, 2))
    tr = canonical_trace(shape)
    assert tr[shape.flat(0, 0, 0)] == QQi(1, 0, 6)
    assert tr[shape.flat(2, 0, 0)] == QQi(2, 0, 6)
    assert trace_of(shape, shape.unit()) == ONE
    assert trace_of(shape, shape.minimal_projection(2)) == QQi(1, 0, 3)
    shape2 = BlockShape((1, 1, 1, 1, 2))
    assert trace_of(shape2, shape2.minimal_projection(4)) == QQi(1, 0, 4)
    assert trace_of(shape2, shape2.minimal_projection(0)) == QQi(1, 0, 8)


def test_canonical_trace_is_tracial():
    shape = BlockShape((2, 3))
    rng = random.Random(19)
    for _ in range(10):
        x = rand_vec(rng, shape)
        y = rand_vec(rng, shape)
        assert trace_of(shape, multiply(shape, x, y)) == \
            trace_of(shape, multiply(shape, y, x))


def test_tensor_shape_block_pattern():
    s = BlockShape((1, 1, 1, 1, 2))
    ts = tensor_shape(s, s)
    assert sorted(ts.dims) == [1] * 16 + [2] * 8 + [4]
    assert ts.total_dim == 64


def test_tensor_reindex_is_permutation():
    s1, s2 = BlockShape((1, 2)), BlockShape((2,))
    perm = tensor_reindex(s1, s2)
    assert sorted(perm) == list(range(s1.total_dim * s2.total_dim))


def pure_tensor(x, y, d2):
    out = {}
    for i, u in x.items():
        for j, v in y.items():
            w = u * v
            if not w.is_zero():
                out[i * d2 + j] = w
    return out


def test_tensor_multiply_matches_factorwise_products():
    # (u (x) v)(w (x) z) = uw (x) vz on pure tensors
    s1, s2 = BlockShape((1, 2)), BlockShape((2, 1))
    ta = TensorAlgebra(s1, s2)
    rng = random.Random(23)
    d2 = s2.total_dim
    for _ in range(12):
        u, w = rand_vec(rng, s1), rand_vec(rng, s1)
        v, z = rand_vec(rng, s2), rand_vec(rng, s2)
        lhs = ta.multiply(pure_tensor(u, v, d2), pure_tensor(w, z, d2))
        rhs = pure_tensor(multiply(s1, u, w), multiply(s2, v, z), d2)
        assert lhs == rhs
    assert ta.multiply(ta.unit(), pure_tensor(u, v, d2)) == pure_tensor(u, v, d2)


def test_tensor_star_matches_factorwise_star():
    s1, s2 = BlockShape((2,)), BlockShape((1, 2))
    ta = TensorAlgebra(s1, s2)
    rng = random.Random(29)
    d2 = s2.total_dim
    for _ in range(8):
        u, v = rand_vec(rng, s1), rand_vec(rng, s2)
        assert ta.star(pure_tensor(u, v, d2)) == \
            pure_tensor(star(s1, u), star(s2, v), d2)


def test_from_shape_satisfies_all_axioms():
    s = StructureConstants.from_shape(BlockShape((1, 2)))
    assert s.validate() is True


def test_validate_rejects_broken_associativity():
    # dim-2 "algebra" with e1*e1 = e0 but no consistent unit behaviour
    one = ONE
    mult = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one},
            (1, 1): {1: one}}  # e1 idempotent and absorbing: breaks unit law? no:
    # unit law holds; break associativity instead via a non-associative twist
    mult[(1, 1)] = {0: one}
    mult[(0, 1)] = {1: qi(2)}
    with pytest.raises(ValueError):
        StructureConstants(2, mult, Matrix.identity(2), {0: one}, validate=True)


def test_transport_preserves_abstract_structure():
    s = StructureConstants.from_shape(BlockShape((2,)))
    t = Matrix.from_dense([
        [1, 1, 0, 0],
        [0, 1, 0, 2],
        [1, 0, 1, 0],
        [0, 0, 1, 1],
    ])
    invert(t)  # raises if singular
    st = s.transport(t)
    assert st.validate() is True
    # regular trace is basis independent on corresponding elements
    rng = random.Random(31)
    for _ in range(5):
        x = rand_vec(rng, BlockShape((2,)))
        tx = invert(t).apply(x)
        assert s.regular_trace(x) == st.regular_trace(tx)


def test_left_right_mult_operators_commute():
    s = StructureConstants.from_shape(BlockShape((1, 2)))
    rng = random.Random(37)
    x = rand_vec(rng, BlockShape((1, 2)))
    y = rand_vec(rng, BlockShape((1, 2)))
    lx, ry = s.left_mult_operator(x), s.right_mult_operator(y)
    assert lx @ ry == ry @ lx


def test_regular_trace_of_unit_is_dim():
    s = StructureConstants.from_shape(BlockShape((1, 2, 2)))
    assert s.regular_trace(s.unit) == qi(9)
