import random
from fractions import Fraction

import pytest

from hopfstar.matrices import (Matrix, char_poly, invert, kron, nullspace,
                               rank, solve_linear_system, vector_in_span)
from hopfstar.scalars import CF, QQi, qi


def rand_qqi(rng, span=6):
    return qi(Fraction(rng.randint(-span, span), rng.randint(1, 4)),
              Fraction(rng.randint(-span, span), rng.randint(1, 4)))


def rand_matrix(rng, rows, cols, density=0.7):
    ent = []
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                ent.append((r, c, rand_qqi(rng)))
    return Matrix.from_entries(rows, cols, ent, "exact")


def test_no_stored_zeros():
    m = Matrix.from_entries(2, 2, [(0, 0, qi(1)), (0, 1, qi(0))])
    assert (0, 1) not in m.data
    s = m - m
    assert s.is_zero()


def test_duplicate_entry_rejected():
    with pytest.raises(ValueError):
        Matrix.from_entries(1, 1, [(0, 0, qi(1)), (0, 0, qi(2))])


def test_matmul_against_dense_oracle():
    rng = random.Random(7)
    a = rand_matrix(rng, 4, 5)
    b = rand_matrix(rng, 5, 3)
    c = a @ b
    ad, bd = a.to_dense(), b.to_dense()
    for i in range(4):
        for j in range(3):
            acc = qi(0)
            for k in range(5):
                acc = acc + ad[i][k] * bd[k][j]
            assert c.entry(i, j) == acc


def test_solve_exact_recovers_known_solution():
    rng = random.Random(3)
    a = rand_matrix(rng, 6, 6, density=0.9)
    x = {i: rand_qqi(rng) for i in range(6)}
    b = a.apply(x)
    sol = solve_linear_system(a, b)
    assert sol.consistent
    # solution may differ from x only by kernel; here a is generically invertible
    if not sol.kernel:
        assert all((sol.particular.get(i, qi(0)) - v).is_zero() for i, v in x.items())


def test_solve_with_kernel_and_remultiplication():
    # 2x4 system: rank 2, kernel dim 2
    a = Matrix.from_dense([
        [qi(1), qi(0), qi(2), qi(-1)],
        [qi(0), qi(1), qi(Fraction(1, 2)), qi(3)],
    ])
    b = {0: qi(5), 1: qi(-2)}
    sol = solve_linear_system(a, b)
    assert sol.consistent and sol.rank == 2 and len(sol.kernel) == 2
    for k in sol.kernel:
        assert a.apply(k) == {}
    chk = a.apply(sol.particular)
    assert chk == b


def test_solve_inconsistent():
    a = Matrix.from_dense([[qi(1), qi(1)], [qi(2), qi(2)]])
    sol = solve_linear_system(a, {0: qi(1), 1: qi(3)})
    assert not sol.consistent and sol.particular is None


def test_solve_sparse_path_large():
    # above the dense threshold to exercise sparse elimination
    n = 40
    ent = [(i, i, qi(i + 1)) for i in range(n)]
    ent += [(i, (i + 1) % n, qi(1)) for i in range(n)]
    a = Matrix.from_entries(n, n, ent)
    x = {i: qi(Fraction(1, i + 1)) for i in range(n)}
    b = a.apply(x)
    sol = solve_linear_system(a, b)
    assert sol.consistent and not sol.kernel
    assert all((sol.particular.get(i, qi(0)) - v).is_zero() for i, v in x.items())


def test_nullspace_and_rank():
    a = Matrix.from_dense([
        [qi(1), qi(2), qi(3)],
        [qi(2), qi(4), qi(6)],
    ])
    assert rank(a) == 1
    ker = nullspace(a)
    assert len(ker) == 2
    for k in ker:
        assert a.apply(k) == {}


def test_invert_roundtrip():
    rng = random.Random(11)
    a = rand_matrix(rng, 5, 5, density=0.95)
    try:
        inv = invert(a)
    except ValueError:
        pytest.skip("random matrix singular")
    assert (a @ inv) == Matrix.identity(5)
    assert (inv @ a) == Matrix.identity(5)


def test_char_poly_identity2():
    m = Matrix.identity(2)
    # t^2 - 2 t + 1
    assert char_poly(m) == [qi(1), qi(-2), qi(1)]


def test_char_poly_diag_order_invariant():
    d1 = Matrix.from_dense([[qi(1), qi(0)], [qi(0), qi(2)]])
    d2 = Matrix.from_dense([[qi(2), qi(0)], [qi(0), qi(1)]])
    assert char_poly(d1) == char_poly(d2)


def test_char_poly_newton_identities_oracle():
    # Newton's identities relate power-sum traces to coefficients; verify on a
    # random exact self-adjoint 3x3 matrix.
    rng = random.Random(23)
    m0 = rand_matrix(rng, 3, 3, density=1.0)
    m = m0 + m0.conj_transpose()
    cp = char_poly(m)  # [1, c2, c1, c0] descending
    n = 3
    powers = [Matrix.identity(n)]
    for _ in range(n):
        powers.append(powers[-1] @ m)
    p = [powers[k].trace() for k in range(n + 1)]  # p[k] = tr(m^k)
    e = [qi(1), cp[1].__neg__(), cp[2], cp[3].__neg__()]  # elementary symmetric
    # p1 = e1; p2 = e1 p1 - 2 e2; p3 = e1 p2 - e2 p1 + 3 e3
    assert p[1] == e[1]
    assert p[2] == e[1] * p[1] - 2 * e[2]
    assert p[3] == e[1] * p[2] - e[2] * p[1] + 3 * e[3]


def test_char_poly_similarity_invariant():
    rng = random.Random(5)
    m = rand_matrix(rng, 4, 4)
    t = rand_matrix(rng, 4, 4, density=1.0)
    try:
        ti = invert(t)
    except ValueError:
        pytest.skip("random matrix singular")
    assert char_poly(t @ m @ ti) == char_poly(m)


def test_kron_shapes_and_mixed_product():
    rng = random.Random(9)
    a = rand_matrix(rng, 2, 3)
    b = rand_matrix(rng, 3, 2)
    c = rand_matrix(rng, 3, 2)
    d = rand_matrix(rng, 2, 3)
    lhs = kron(a, c) @ kron(b, d)
    rhs = kron(a @ b, c @ d)
    assert lhs == rhs


def test_kron_identity_dims():
    a = Matrix.identity(2)
    b = Matrix.identity(3)
    k = kron(a, b)
    assert k == Matrix.identity(6)


def test_vector_in_span():
    b1 = {0: qi(1), 1: qi(1)}
    b2 = {1: qi(1), 2: qi(1)}
    coords = vector_in_span({0: qi(2), 1: qi(3), 2: qi(1)}, [b1, b2], 3)
    assert coords == {0: qi(2), 1: qi(1)}
    assert vector_in_span({0: qi(1), 2: qi(1)}, [b1], 3) is None


def test_float_mode_solve():
    a = Matrix.from_dense([[CF(2.0), CF(1.0)], [CF(1.0), CF(3.0)]], mode="float")
    sol = solve_linear_system(a, {0: CF(3.0), 1: CF(4.0)})
    assert sol.consistent
    x = [sol.particular.get(i, CF(0.0)).z for i in range(2)]
    assert abs(2 * x[0] + x[1] - 3) < 1e-8
    assert abs(x[0] + 3 * x[1] - 4) < 1e-8


def test_bareiss_entries_stay_gaussian_integer():
    # denominators cleared rowwise; forward elimination must divide exactly
    from hopfstar.matrices import _bareiss_echelon, _to_int_rows
    rng = random.Random(17)
    rows = []
    for _ in range(6):
        rows.append({c: rand_qqi(rng) for c in range(6) if rng.random() < 0.8})
    int_rows = _to_int_rows(rows)
    ech, piv = _bareiss_echelon(int_rows, 6)
    assert len(ech) == len(piv)
    for r in ech:
        for a, b in r.values():
            assert isinstance(a, int) and isinstance(b, int)
