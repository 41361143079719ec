"""Standard Hopf algebra builders: group algebras, function algebras,
and the eight-dimensional twisted dihedral example.

Group algebras are assembled in the group basis and pushed through the
Wedderburn decomposition into block coordinates. Over Q(i) this can be
impossible for the plain group basis: the two-dimensional irreducible
of the order-6 dihedral group carries an invariant hermitian form of
determinant 3, and 3 is not a sum of two rational squares, so no
conjugate-transpose model exists. group_algebra repairs such cases by a
quadratic descent: twist the scalars along sqrt(d) and the group by an
inner involution simultaneously; the twisted algebra is defined over
Q(i) again and splits once the twisted discriminant becomes a norm.
The twist changes nothing observable: the complexification, the Haar
state, the fusion data and the co-centre all agree with the plain
group algebra.
"""

from .hopf import HopfAlgebra, StructuralError, transport_hopf, verify_hopf
from .matrices import Matrix, solve_linear_system
from .multimatrix import BlockShape, StructureConstants
from .scalars import CF, EXACT, QQi, one_of
from .wedderburn import FieldExtensionError, wedderburn_decompose

_TWIST_DISCRIMINANTS = (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 23)


# ---- group tables ----

def cyclic_table(n: int) -> list:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def direct_product_table(t1: list, t2: list) -> list:
    n1, n2 = len(t1), len(t2)
    out = []
    for a1 in range(n1):
        for a2 in range(n2):
            row = []
            for b1 in range(n1):
                for b2 in range(n2):
                    row.append(t1[a1][b1] * n2 + t2[a2][b2])
            out.append(row)
    return out


def dihedral_table(m: int) -> list:
    """Order 2m: index 2a + b encodes r^a s^b, with s r = r^{-1} s."""
    n = 2 * m
    table = [[0] * n for _ in range(n)]
    for a in range(m):
        for b in range(2):
            for c in range(m):
                for d in range(2):
                    aa = (a + c) % m if b == 0 else (a - c) % m
                    table[2 * a + b][2 * c + d] = 2 * aa + ((b + d) % 2)
    return table


def validate_group_table(table) -> tuple:
    """Check the table is a group; returns (identity, inverse list)."""
    n = len(table)
    if n == 0:
        raise ValueError("invalid group table: empty")
    for row in table:
        if len(row) != n or any(not (0 <= v < n) for v in row):
            raise ValueError("invalid group table: not a square table over 0..n-1")
    ident = None
    for e in range(n):
        if all(table[e][g] == g and table[g][e] == g for g in range(n)):
            ident = e
            break
    if ident is None:
        raise ValueError("invalid group table: no identity")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise ValueError(
                        f"invalid group table: not associative at ({a},{b},{c})")
    inv = [None] * n
    for g in range(n):
        for h in range(n):
            if table[g][h] == ident and table[h][g] == ident:
                inv[g] = h
                break
        if inv[g] is None:
            raise ValueError(f"invalid group table: element {g} has no inverse")
    return ident, inv


# ---- function algebras ----

def function_algebra(table, name=None, mode=EXACT, tol=1e-9) -> HopfAlgebra:
    """Functions on a finite group: diagonal algebra, convolution coproduct.

    Delta(d_g) = sum over ab = g of d_a (x) d_b, eps(f) = f(e),
    kappa(f)(g) = f(g^{-1}).
    """
    ident, inv = validate_group_table(table)
    n = len(table)
    shape = BlockShape((1,) * n)
    one = one_of(mode, tol)
    coproduct = [dict() for _ in range(n)]
    for a in range(n):
        for b in range(n):
            coproduct[table[a][b]][a * n + b] = one
    counit = {ident: one}
    antipode = Matrix(n, n, {(inv[g], g): one for g in range(n)}, mode, tol)
    hopf = HopfAlgebra(shape, coproduct, counit, antipode,
                       name or f"functions on order-{n} group", mode, tol)
    report = verify_hopf(hopf)
    if not report.passed:
        raise StructuralError(f"function algebra failed verification:\n{report.summary()}")
    return hopf


# ---- group algebras ----

def group_algebra(table, name=None, mode=EXACT, tol=1e-9, seed=0) -> HopfAlgebra:
    """Group algebra in block coordinates, grouplike coproduct.

    The group basis is decomposed by wedderburn_decompose and all Hopf
    tensors are transported through the resulting isomorphism. When the
    plain group basis has no conjugate-transpose model over Q(i), a
    quadratic descent twist is searched (inner involutions, small
    discriminants); see the module docstring. The result is always
    cocommutative and its Haar state is the canonical trace.
    """
    ident, inv = validate_group_table(table)
    raw = _group_hopf_raw(table, inv, ident, mode, tol)
    try:
        return _finish_group(raw, name, mode, tol, seed, len(table))
    except FieldExtensionError:
        if mode != EXACT:
            raise
    for c_perm in _inner_involutions(table, inv, ident):
        for d in _TWIST_DISCRIMINANTS:
            try:
                twisted = _quadratic_twist(table, inv, ident, c_perm, d, tol)
            except FieldExtensionError:      # pragma: no cover - constructive
                continue
            try:
                return _finish_group(twisted, name, mode, tol, seed, len(table))
            except FieldExtensionError:
                continue
    raise FieldExtensionError(
        "group algebra does not split over Q(i) and no small quadratic "
        "twist repairs it; rerun in float mode")


def _finish_group(raw, name, mode, tol, seed, order) -> HopfAlgebra:
    sc, delta, eps, kappa = raw
    hopf = _blockify(sc, delta, eps, kappa,
                     name or f"group algebra of order {order}", seed)
    report = verify_hopf(hopf)
    if not report.passed:
        raise StructuralError(f"group algebra failed verification:\n{report.summary()}")
    if not report.check("cocommutative").passed:
        raise StructuralError("group algebra came out non-cocommutative")
    return hopf


def _group_hopf_raw(table, inv, ident, mode, tol):
    n = len(table)
    one = one_of(mode, tol)
    mult = {(i, j): {table[i][j]: one} for i in range(n) for j in range(n)}
    invol = Matrix(n, n, {(inv[i], i): one for i in range(n)}, mode, tol)
    sc = StructureConstants(n, mult, invol, {ident: one}, mode, tol)
    delta = [{g * n + g: one} for g in range(n)]
    eps = {g: one for g in range(n)}
    kappa = Matrix(n, n, {(inv[g], g): one for g in range(n)}, mode, tol)
    return sc, delta, eps, kappa


def _inner_involutions(table, inv, ident):
    n = len(table)
    seen = []
    for t in range(n):
        if t == ident or table[t][t] != ident:
            continue
        perm = tuple(table[table[t][g]][t] for g in range(n))
        if perm == tuple(range(n)) or perm in seen:
            continue
        seen.append(perm)
        yield list(perm)


# ---- quadratic descent twist ----
#
# L = Q(i)(sqrt d). H = fixed points of (Galois conjugation) x (inner
# involution c) inside L[G]. Scalars of L are kept as pairs (p, q)
# meaning p + q sqrt(d) with p, q in Q(i); the fixed-point basis is
#   g                 for c(g) = g
#   g + c(g)          one per 2-orbit
#   sqrt d (g - c(g)) one per 2-orbit
# and all structure constants land back in Q(i).

class _TwistLayer:
    def __init__(self, table, inv, c_perm, d):
        self.table = table
        self.inv = inv
        self.c = c_perm
        self.d = d
        self.n = len(table)
        self.basis = []
        for g in range(self.n):
            if c_perm[g] == g:
                self.basis.append(("f", g))
        for g in range(self.n):
            if g < c_perm[g]:
                self.basis.append(("u", g))
                self.basis.append(("w", g))

    def expansion(self, kind, g):
        """Group-basis expansion with L-coefficients (p, q)."""
        c = self.c[g]
        if kind == "f":
            return {g: (QQi(1), QQi(0))}
        if kind == "u":
            return {g: (QQi(1), QQi(0)), c: (QQi(1), QQi(0))}
        return {g: (QQi(0), QQi(1)), c: (QQi(0), QQi(-1))}

    def coords(self, expansion) -> dict:
        """Coordinates of an L[G] element in the twisted basis.

        Raises if the element is not Galois-c fixed; that would be a
        construction bug, not an input condition.
        """
        out = {}
        for k, (kind, g) in enumerate(self.basis):
            c = self.c[g]
            if kind == "f":
                p, q = expansion.get(g, (QQi(0), QQi(0)))
                if not q.is_zero():
                    raise StructuralError("twist: sqrt(d) mass on a fixed element")
                if not p.is_zero():
                    out[k] = p
            elif kind == "u":
                p, _ = expansion.get(g, (QQi(0), QQi(0)))
                p2, _ = expansion.get(c, (QQi(0), QQi(0)))
                if not (p - p2).is_zero():
                    raise StructuralError("twist: element not c-symmetric")
                if not p.is_zero():
                    out[k] = p
            else:
                _, q = expansion.get(g, (QQi(0), QQi(0)))
                _, q2 = expansion.get(c, (QQi(0), QQi(0)))
                if not (q + q2).is_zero():
                    raise StructuralError("twist: element not c-antisymmetric")
                if not q.is_zero():
                    out[k] = q
        return out

    def mul(self, e1: dict, e2: dict) -> dict:
        d = self.d
        acc = {}
        for g, (p1, q1) in e1.items():
            for h, (p2, q2) in e2.items():
                k = self.table[g][h]
                p = p1 * p2 + (q1 * q2) * d
                q = p1 * q2 + q1 * p2
                if k in acc:
                    p0, q0 = acc[k]
                    acc[k] = (p0 + p, q0 + q)
                else:
                    acc[k] = (p, q)
        return {k: v for k, v in acc.items()
                if not (v[0].is_zero() and v[1].is_zero())}

    def star(self, e: dict) -> dict:
        out = {}
        for g, (p, q) in e.items():
            out[self.inv[g]] = (p.conj(), q.conj())
        return out


def _quadratic_twist(table, inv, ident, c_perm, d, tol):
    lay = _TwistLayer(table, inv, c_perm, d)
    n = lay.n
    exps = [lay.expansion(kind, g) for kind, g in lay.basis]
    mult = {}
    for i in range(n):
        for j in range(n):
            coords = lay.coords(lay.mul(exps[i], exps[j]))
            if coords:
                mult[(i, j)] = coords
    # column j of the involution = coordinates of (e_j)*, star acting as
    # invol . conj(coords)
    invol_data = {}
    for j in range(n):
        for i, v in lay.coords(lay.star(exps[j])).items():
            if not v.is_zero():
                invol_data[(i, j)] = v
    invol = Matrix(n, n, invol_data, EXACT, tol)
    unit_idx = lay.basis.index(("f", ident))
    sc = StructureConstants(n, mult, invol, {unit_idx: QQi(1)}, EXACT, tol)

    # coproduct: solve for twisted (x) twisted coordinates cell by cell.
    # column k*n + l of the conversion matrix is the L[GxG] expansion of
    # basis_k (x) basis_l, realified into (p, q) rows.
    big_rows = {}
    for k in range(n):
        for l in range(n):
            col = k * n + l
            for g, (p1, q1) in exps[k].items():
                for h, (p2, q2) in exps[l].items():
                    cell = g * len(table) + h
                    p = p1 * p2 + (q1 * q2) * d
                    q = p1 * q2 + q1 * p2
                    for part, val in ((0, p), (1, q)):
                        key = (2 * cell + part, col)
                        w = big_rows.get(key)
                        s = val if w is None else w + val
                        if s.is_zero():
                            big_rows.pop(key, None)
                        else:
                            big_rows[key] = s
    conv = Matrix(2 * len(table) * len(table), n * n, big_rows, EXACT, tol)
    delta = []
    for k in range(n):
        kind, g = lay.basis[k]
        c = c_perm[g]
        if kind == "f":
            target = {g * len(table) + g: (QQi(1), QQi(0))}
        elif kind == "u":
            target = {g * len(table) + g: (QQi(1), QQi(0)),
                      c * len(table) + c: (QQi(1), QQi(0))}
        else:
            target = {g * len(table) + g: (QQi(0), QQi(1)),
                      c * len(table) + c: (QQi(0), QQi(-1))}
        rhs = {}
        for cell, (p, q) in target.items():
            if not p.is_zero():
                rhs[2 * cell] = p
            if not q.is_zero():
                rhs[2 * cell + 1] = q
        sol = solve_linear_system(conv, rhs)
        if not sol.consistent:
            raise StructuralError("twist: coproduct image left the descent algebra")
        delta.append(dict(sol.particular))

    eps = {}
    for k in range(n):
        acc_p = QQi(0)
        acc_q = QQi(0)
        for g, (p, q) in exps[k].items():
            acc_p = acc_p + p
            acc_q = acc_q + q
        if not acc_q.is_zero():
            raise StructuralError("twist: counit picked up sqrt(d)")
        if not acc_p.is_zero():
            eps[k] = acc_p
    kappa_data = {}
    for k in range(n):
        img = {}
        for g, (p, q) in exps[k].items():
            gi = inv[g]
            if gi in img:
                p0, q0 = img[gi]
                img[gi] = (p0 + p, q0 + q)
            else:
                img[gi] = (p, q)
        for i, v in lay.coords(img).items():
            kappa_data[(i, k)] = v
    kappa = Matrix(n, n, kappa_data, EXACT, tol)
    return sc, delta, eps, kappa


# ---- transport through a Wedderburn isomorphism ----

def _blockify(sc, delta, eps, kappa, name, seed=0) -> HopfAlgebra:
    """Move raw-basis Hopf data into block coordinates."""
    rep = wedderburn_decompose(sc, seed=seed)
    return transport_hopf(rep.shape, rep.iso, rep.iso_inv, delta, eps,
                          kappa, name, sc.mode, sc.tol)


# ---- the eight-dimensional crossed-product example ----
#
# Generators x, y, z with x^2 = y^2 = 1, xy = yx, z x = y z and
# z^2 = (1 + x + y - xy)/2. z is unitary but not self-adjoint:
# z* = z^3 = z^2 z. Basis index 4a + 2j + k encodes x^j y^k z^a.
# A plain bicharacter twist of an order-8 group algebra cannot produce
# this object: such twists stay cocommutative (they shuttle between the
# dihedral and quaternion group algebras), so the presentation below is
# genuinely crossed, with the half-sum cocycle in z^2.

_KP_HALF_SUM = ((0, 1), (2, 1), (1, 1), (3, -1))   # (1 + x + y - xy) / 2


def _kp_products(mode, tol):
    """Multiplication dicts for the basis x^j y^k z^a, index 4a + 2j + k."""
    one = one_of(mode, tol)
    half = QQi(1, 0, 2) if mode == EXACT else CF(0.5, tol)

    def vpart(i):
        return (i >> 1) & 1, i & 1, i >> 2

    mult = {}
    for i in range(8):
        j1, k1, a1 = vpart(i)
        for m in range(8):
            j2, k2, a2 = vpart(m)
            if a1 == 1:
                j2, k2 = k2, j2          # z v = sigma(v) z, sigma swaps x, y
            j, k = j1 ^ j2, k1 ^ k2
            if a1 + a2 < 2:
                mult[(i, m)] = {4 * (a1 + a2) + 2 * j + k: one}
            else:
                out = {}
                for w, sgn in _KP_HALF_SUM:     # z^2 expands to the half sum
                    jj = j ^ ((w >> 1) & 1)
                    kk = k ^ (w & 1)
                    out[2 * jj + kk] = half * sgn
                mult[(i, m)] = out
    return mult


def kac_palyutkin(mode=EXACT, tol=1e-9, seed=0) -> HopfAlgebra:
    """Eight-dimensional example that is neither commutative nor
    cocommutative.

    x and y stay grouplike; the coproduct of the unitary z is the
    cocycle-twisted tensor
        Delta(z) = (z (x) z + yz (x) z + z (x) xz - yz (x) xz) / 2
    and the antipode swaps x with y in the z-coset. All literal data is
    gated through the axiom verifier before the algebra is returned, so
    a transcription slip cannot survive construction.
    """
    one = one_of(mode, tol)
    half = QQi(1, 0, 2) if mode == EXACT else CF(0.5, tol)
    mult = _kp_products(mode, tol)

    def mul_tensor(s, t):
        acc = {}
        for (p1, q1), u in s.items():
            for (p2, q2), v in t.items():
                for r1, c1 in mult[(p1, p2)].items():
                    for r2, c2 in mult[(q1, q2)].items():
                        key = (r1, r2)
                        w = acc.get(key)
                        add = u * v * c1 * c2
                        acc[key] = add if w is None else w + add
        return {k: v for k, v in acc.items() if not v.is_zero()}

    # z = 4, yz = 5, xz = 6
    delta_z = {(4, 4): half, (5, 4): half, (4, 6): half, (5, 6): -half}
    delta = [None] * 8
    for g in range(4):
        delta[g] = {g * 8 + g: one}
    for g in range(4):
        img = mul_tensor({(g, g): one}, delta_z)
        delta[4 + g] = {p * 8 + q: v for (p, q), v in img.items()}
    eps = {i: one for i in range(8)}

    # kappa fixes the group part and swaps x with y on the z coset
    kperm = {0: 0, 1: 1, 2: 2, 3: 3, 4: 4, 5: 6, 6: 5, 7: 7}
    kappa = Matrix(8, 8, {(kperm[i], i): one for i in range(8)}, mode, tol)

    # star: v* = v and (v z)* = z^2 sigma(v) z, a four-term half sum
    invol_data = {}
    for i in range(4):
        invol_data[(i, i)] = one
    for i in range(4, 8):
        j, k = (i >> 1) & 1, i & 1
        sj, sk = k, j
        for w, sgn in _KP_HALF_SUM:
            jj = sj ^ ((w >> 1) & 1)
            kk = sk ^ (w & 1)
            invol_data[(4 + 2 * jj + kk, i)] = half * sgn
    invol = Matrix(8, 8, invol_data, mode, tol)
    sc = StructureConstants(8, mult, invol, {0: one}, mode, tol)
    hopf = _blockify(sc, delta, eps, kappa, "kac_palyutkin", seed)

    report = verify_hopf(hopf)
    if not report.passed:
        raise StructuralError(f"crossed-product fixture failed verification:\n"
                              f"{report.summary()}")
    if hopf.dim != 8 or hopf.shape.dims != (1, 1, 1, 1, 2):
        raise StructuralError("crossed-product fixture has the wrong shape")
    if report.check("commutative").passed or report.check("cocommutative").passed:
        raise StructuralError("crossed-product fixture must be neither "
                              "commutative nor cocommutative")
    return hopf


# ---- facade ----

_PRESETS = {
    "group_algebra": group_algebra,
    "function_algebra": function_algebra,
    "kac_palyutkin": kac_palyutkin,
}


def build_standard(preset, *args, **kwargs) -> HopfAlgebra:
    """Build one of the named standard algebras.

    preset is either one of the builder functions of this module or its
    name. Remaining arguments go to the builder (group tables first).
    """
    if isinstance(preset, str):
        try:
            fn = _PRESETS[preset]
        except KeyError:
            raise ValueError(f"unknown preset {preset!r}; "
                             f"have {sorted(_PRESETS)}") from None
    elif callable(preset):
        fn = preset
    else:
        raise TypeError("preset must be a name or a builder function")
    return fn(*args, **kwargs)
