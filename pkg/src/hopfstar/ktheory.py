"""K-theory of the block lattice: fusion rings, K0 states, the
box/convolve pairing, K-functoriality of maps, and truncated towers.

The box product of two block classes never materializes a
representation: the image of a central projection z_k under
(pi_i (x) pi_j) Delta is an idempotent, so its rank equals its trace,
and the trace reads off from the coproduct coefficients of z_k at pairs
of diagonal matrix unit positions. Everything else in the module is
bookkeeping on top of those integers.
"""

from dataclasses import dataclass, field

from .duality import convolution_kernel
from .hopf import (AxiomCheck, AxiomReport, HopfAlgebra, StructuralError,
                   haar_state, star_algebra_morphism_failures, tensor_hopf,
                   verify_hopf)
from .matrices import Matrix, invert
from .multimatrix import (BlockShape, apply_functional, multiply,
                          unnormalized_block_trace)
from .scalars import CF, EXACT, QQi, one_of, zero_of


def _int_scalar(n: int, mode, tol):
    return QQi(n) if mode == EXACT else CF(float(n), tol)


def _as_nonneg_int(v, div: int, mode, context: str) -> int:
    """v / div as a non-negative integer, or a structural failure."""
    if not v.is_real():
        raise StructuralError(f"{context}: value {v!r} is not real")
    if mode == EXACT:
        q = v.re / div
        if q.denominator != 1 or q < 0:
            raise StructuralError(
                f"{context}: {q} is not a non-negative integer")
        return int(q)
    x = v.z.real / div
    r = round(x)
    if r < 0 or abs(x - r) > 64 * max(v.tol, 1e-12):
        raise StructuralError(
            f"{context}: {x} is not a non-negative integer")
    return int(r)


def _central_coproduct_diagonal(hopf: HopfAlgebra) -> list:
    """out[k][(i, j)] = sum of Delta(z_k) coefficients over tensor
    positions whose legs are both diagonal matrix units, grouped by the
    pair of blocks the legs live in."""
    shape = hopf.shape
    n = hopf.dim
    diag = {}
    for b, nb in enumerate(shape.dims):
        for r in range(nb):
            diag[shape.flat(b, r, r)] = b
    out = []
    for b, nb in enumerate(shape.dims):
        acc = {}
        for r in range(nb):
            for t, v in hopf.coproduct[shape.flat(b, r, r)].items():
                p, q = divmod(t, n)
                bp = diag.get(p)
                bq = diag.get(q)
                if bp is None or bq is None:
                    continue
                key = (bp, bq)
                w = acc.get(key)
                acc[key] = v if w is None else w + v
        out.append(acc)
    return out


def _fusion_table(hopf: HopfAlgebra) -> list:
    """table[i][j][k] = N_ij^k, with integrality enforced."""
    dims = hopf.shape.dims
    nb = len(dims)
    cc = _central_coproduct_diagonal(hopf)
    table = [[[0] * nb for _ in range(nb)] for _ in range(nb)]
    for k in range(nb):
        for (i, j), v in cc[k].items():
            table[i][j][k] = _as_nonneg_int(
                v, dims[k], hopf.mode, f"multiplicity N[{i}][{j}]^{k}")
    return table


def box_fusion(hopf: HopfAlgebra, i: int, j: int) -> tuple:
    """Multiplicities (N_ij^k)_k of the box product [p_i] [] [p_j].

    Assumes a verified source (fusion_ring gates once for the whole
    table); a non-integral or negative rank raises StructuralError and
    is the symptom that the input was not a Hopf algebra.
    """
    nb = len(hopf.shape.dims)
    if not (0 <= i < nb and 0 <= j < nb):
        raise IndexError(f"block pair ({i}, {j}) outside 0..{nb - 1}")
    return tuple(_fusion_table(hopf)[i][j])


def _conjugation_permutation(hopf: HopfAlgebra) -> tuple:
    """b -> b' with kappa(z_b) = z_b'; the antipode permutes the centre."""
    shape = hopf.shape
    mode, tol = hopf.mode, hopf.tol
    units = [shape.block_unit(b, mode, tol) for b in range(len(shape.dims))]
    conj = []
    for b, unit in enumerate(units):
        img = hopf.kappa(unit)
        for b2, target in enumerate(units):
            keys = set(img) | set(target)
            zero = zero_of(mode, tol)
            if all((img.get(k, zero) - target.get(k, zero)).is_zero()
                   for k in keys):
                conj.append(b2)
                break
        else:
            raise StructuralError(
                f"antipode does not permute the central projections "
                f"(block {b})")
    return tuple(conj)


def _counit_block(hopf: HopfAlgebra) -> int:
    """The unique block carrying the counit; it must be 1-dimensional."""
    shape = hopf.shape
    hits = []
    for b, nb in enumerate(shape.dims):
        s = None
        for r in range(nb):
            v = hopf.counit.get(shape.flat(b, r, r))
            if v is not None:
                s = v if s is None else s + v
        if s is not None and not s.is_zero():
            hits.append((b, s))
    if len(hits) != 1:
        raise StructuralError(
            f"counit is supported on {len(hits)} blocks, expected one")
    b, s = hits[0]
    if shape.dims[b] != 1:
        raise StructuralError(
            f"counit block {b} has dimension {shape.dims[b]}, "
            f"support is not 1-dimensional")
    if not (s - one_of(hopf.mode, hopf.tol)).is_zero():
        raise StructuralError("counit does not restrict to the identity "
                              "character on its block")
    return b


@dataclass(frozen=True)
class FusionRing:
    """Based ring on the block classes: table[i][j][k] = N_ij^k."""

    dims: tuple
    unit: int
    conj: tuple
    table: tuple

    @property
    def rank(self) -> int:
        return len(self.dims)

    def product(self, x, y) -> tuple:
        """Bilinear extension to integer vectors (sequences or sparse
        index -> coefficient dicts)."""
        xs = x.items() if isinstance(x, dict) else enumerate(x)
        ys = list(y.items() if isinstance(y, dict) else enumerate(y))
        out = [0] * self.rank
        for i, xi in xs:
            if not xi:
                continue
            for j, yj in ys:
                if not yj:
                    continue
                row = self.table[i][j]
                for k in range(self.rank):
                    if row[k]:
                        out[k] += xi * yj * row[k]
        return tuple(out)

    def verify(self) -> None:
        """Dimension count, unit laws, Frobenius anchor, associativity.
        Raises StructuralError on the first violation."""
        r = self.rank
        if sorted(set(self.conj)) != list(range(r)):
            raise StructuralError("conjugation is not a permutation")
        for i in range(r):
            if self.conj[self.conj[i]] != i:
                raise StructuralError("conjugation is not involutive")
            if self.dims[self.conj[i]] != self.dims[i]:
                raise StructuralError("conjugation changes dimensions")
        for j in range(r):
            want = tuple(1 if k == j else 0 for k in range(r))
            if self.table[self.unit][j] != want:
                raise StructuralError(f"left unit law fails at {j}")
            if self.table[j][self.unit] != want:
                raise StructuralError(f"right unit law fails at {j}")
        for i in range(r):
            for j in range(r):
                row = self.table[i][j]
                if any(n < 0 for n in row):
                    raise StructuralError("negative multiplicity")
                if sum(row[k] * self.dims[k] for k in range(r)) \
                        != self.dims[i] * self.dims[j]:
                    raise StructuralError(
                        f"dimension count fails at ({i}, {j})")
                if row[self.unit] != (1 if j == self.conj[i] else 0):
                    raise StructuralError(
                        f"Frobenius pairing fails at ({i}, {j})")
        sparse = [[{k: n for k, n in enumerate(self.table[i][j]) if n}
                   for j in range(r)] for i in range(r)]
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    left = [0] * r
                    for m, n in sparse[i][j].items():
                        row = self.table[m][k]
                        for l in range(r):
                            if row[l]:
                                left[l] += n * row[l]
                    right = [0] * r
                    for m, n in sparse[j][k].items():
                        row = self.table[i][m]
                        for l in range(r):
                            if row[l]:
                                right[l] += n * row[l]
                    if left != right:
                        raise StructuralError(
                            f"associativity fails at ({i}, {j}, {k})")


def fusion_ring(hopf: HopfAlgebra) -> FusionRing:
    """The full fusion ring of the block classes, gated by the axiom
    verifier and with its own ring invariants checked."""
    report = verify_hopf(hopf)
    if not report.passed:
        raise StructuralError(
            f"cannot take fusion ring, source fails verification:\n"
            f"{report.summary()}")
    table = _fusion_table(hopf)
    ring = FusionRing(
        dims=tuple(hopf.shape.dims),
        unit=_counit_block(hopf),
        conj=_conjugation_permutation(hopf),
        table=tuple(tuple(tuple(row) for row in plane) for plane in table))
    ring.verify()
    return ring


def fusion_tensor(f1: FusionRing, f2: FusionRing) -> FusionRing:
    """Fusion ring of a tensor product from the factor rings.

    Block (b1, b2) sits at index b1*rank2 + b2, matching the Kronecker
    block order of the tensor algebra. The ring invariants are inherited
    from the verified factors, so they are not re-checked here; that
    keeps large combinatorial levels cheap.
    """
    r1, r2 = f1.rank, f2.rank
    dims = tuple(d1 * d2 for d1 in f1.dims for d2 in f2.dims)
    conj = tuple(f1.conj[i1] * r2 + f2.conj[i2]
                 for i1 in range(r1) for i2 in range(r2))
    table = []
    for i1 in range(r1):
        for i2 in range(r2):
            plane = []
            for j1 in range(r1):
                for j2 in range(r2):
                    row1 = f1.table[i1][j1]
                    row2 = f2.table[i2][j2]
                    plane.append(tuple(row1[k1] * row2[k2]
                                       for k1 in range(r1)
                                       for k2 in range(r2)))
            table.append(tuple(plane))
    return FusionRing(dims=dims, unit=f1.unit * r2 + f2.unit,
                      conj=conj, table=tuple(table))


@dataclass(frozen=True)
class K0States:
    """Haar and counit on K0 classes: haar[b] is the Haar value on one
    minimal projection of block b, counit_block the unique block where
    the counit lives."""

    dims: tuple
    haar: tuple
    counit_block: int

    @property
    def counit(self) -> tuple:
        return tuple(1 if b == self.counit_block else 0
                     for b in range(len(self.dims)))


def k0_states(hopf: HopfAlgebra, _haar=None) -> K0States:
    """Positivity and normalization are enforced: every block weight
    must be real and strictly positive, and sum(n_b * haar_b) = 1."""
    haar = haar_state(hopf) if _haar is None else _haar
    shape = hopf.shape
    mode, tol = hopf.mode, hopf.tol
    vals = []
    for b in range(len(shape.dims)):
        v = haar.get(shape.flat(b, 0, 0))
        if v is None or v.is_zero():
            raise StructuralError(f"Haar state vanishes on block {b}")
        if not v.is_real():
            raise StructuralError(f"Haar weight on block {b} is not real")
        positive = v.re > 0 if mode == EXACT else v.z.real > 0
        if not positive:
            raise StructuralError(f"Haar weight on block {b} is negative")
        vals.append(v)
    total = zero_of(mode, tol)
    for b, nb in enumerate(shape.dims):
        total = total + _int_scalar(nb, mode, tol) * vals[b]
    if not (total - one_of(mode, tol)).is_zero():
        raise StructuralError("Haar state is not normalized")
    return K0States(dims=tuple(shape.dims), haar=tuple(vals),
                    counit_block=_counit_block(hopf))


def verify_box_convolve(hopf: HopfAlgebra) -> AxiomReport:
    """Check (sigma (x) t)(l1 [] l2) = sigma(l1 <> l2) for every pair of
    block classes and every basis trace sigma_m = tau(z_m .).

    The convolution side needs basis-free representatives, and the only
    such projections are the central ones, so l_i is the class of z_i,
    which is n_i copies of the block-i generator. With t normalized so
    a rank-one class weighs 1/dim, the identity per trace reads

        (1/dim) n_i n_j N_ij^m haar_m = tau(z_m (z_i <> z_j)).

    (Minimal projections would not work: conjugating one by a unitary
    changes its convolutions, so the right side would depend on the
    choice.) One check per trace; failing pairs go in the detail.
    """
    kernel = convolution_kernel(hopf)
    haar = kernel.haar_source
    shape = hopf.shape
    dims = shape.dims
    nb = len(dims)
    mode, tol = hopf.mode, hopf.tol
    table = _fusion_table(hopf)
    states = k0_states(hopf, _haar=haar)
    const = (QQi(1, 0, hopf.dim) if mode == EXACT
             else CF(1.0 / hopf.dim, tol))
    zero = zero_of(mode, tol)
    fails = [[] for _ in range(nb)]
    for i in range(nb):
        zi = shape.block_unit(i, mode, tol)
        for j in range(nb):
            zj = shape.block_unit(j, mode, tol)
            conv = kernel.convolve(zi, zj)
            for m in range(nb):
                weight = dims[i] * dims[j] * table[i][j][m]
                lhs = const * _int_scalar(weight, mode, tol) * states.haar[m]
                zm = shape.block_unit(m, mode, tol)
                rhs = apply_functional(haar, multiply(shape, zm, conv))
                rhs = zero if rhs is None else rhs
                if not (lhs - rhs).is_zero():
                    fails[m].append((i, j))
    checks = []
    for m in range(nb):
        bad = fails[m]
        detail = "" if not bad else \
            f"{len(bad)} pairs, first {bad[:4]}"
        checks.append(AxiomCheck(f"box-convolve trace {m}", not bad, detail))
    return AxiomReport(checks, ())


def check_k_comultiplicative(f: Matrix, src: HopfAlgebra,
                             dst: HopfAlgebra) -> AxiomReport:
    """Whether a unital *-algebra isomorphism f: A -> B respects the box
    product on K0.

    The induced class map K(f)[i][k] is the block-k rank of f(p_i). Two
    formulations are checked and reported separately: the trace pairing
    (sigma_m (x) t)(f(p) [] f(q)) = (sigma_m (x) t)(K(f)(p [] q)) with
    the target Haar weights, and the bare integer statement that K(f)
    is a homomorphism of fusion rings. The precheck that f is a
    *-algebra isomorphism raises instead of reporting, because the class
    map is undefined otherwise.
    """
    failures = star_algebra_morphism_failures(src, dst, f)
    try:
        invert(f)
    except ValueError:
        failures.append("invertible")
    if failures:
        raise StructuralError(
            f"not a *-algebra isomorphism: {', '.join(failures)}")
    na = len(src.shape.dims)
    nb = len(dst.shape.dims)
    mode, tol = dst.mode, dst.tol
    kmap = []
    for i in range(na):
        img = f.apply(src.shape.minimal_projection(i, src.mode, src.tol))
        row = []
        for k in range(nb):
            tr = unnormalized_block_trace(dst.shape, img, k, mode, tol)
            row.append(_as_nonneg_int(
                tr, 1, mode, f"rank of f(p_{i}) in block {k}"))
        kmap.append(tuple(row))
    na_table = _fusion_table(src)
    nb_table = _fusion_table(dst)
    haar_b = k0_states(dst).haar
    const = (QQi(1, 0, dst.dim) if mode == EXACT
             else CF(1.0 / dst.dim, tol))
    hom_fails = []
    pair_fails = []
    for i in range(na):
        for j in range(na):
            lhs = [0] * nb
            for a in range(nb):
                ka = kmap[i][a]
                if not ka:
                    continue
                for b in range(nb):
                    kb = kmap[j][b]
                    if not kb:
                        continue
                    row = nb_table[a][b]
                    for m in range(nb):
                        if row[m]:
                            lhs[m] += ka * kb * row[m]
            rhs = [0] * nb
            for k in range(na):
                n_ijk = na_table[i][j][k]
                if not n_ijk:
                    continue
                for m in range(nb):
                    if kmap[k][m]:
                        rhs[m] += n_ijk * kmap[k][m]
            for m in range(nb):
                if lhs[m] != rhs[m]:
                    hom_fails.append((i, j, m))
                ls = const * _int_scalar(lhs[m], mode, tol) * haar_b[m]
                rs = const * _int_scalar(rhs[m], mode, tol) * haar_b[m]
                if not (ls - rs).is_zero():
                    pair_fails.append((i, j, m))
    checks = [
        AxiomCheck("k0 trace pairing", not pair_fails,
                   "" if not pair_fails else
                   f"{len(pair_fails)} triples, first {pair_fails[:4]}"),
        AxiomCheck("fusion ring homomorphism", not hom_fails,
                   "" if not hom_fails else
                   f"{len(hom_fails)} triples, first {hom_fails[:4]}"),
    ]
    return AxiomReport(checks, ())


# ---- truncated towers of iterated tensor powers ----

@dataclass(frozen=True)
class TowerLevel:
    """One floor: block shape, fusion ring, K0 states, and the
    materialized algebra when the level is small enough to hold."""

    shape: BlockShape
    fusion: FusionRing
    states: K0States
    hopf: HopfAlgebra = field(repr=False, default=None)

    @property
    def materialized(self) -> bool:
        return self.hopf is not None


@dataclass(frozen=True)
class BratteliTower:
    """Levels base, base^(x)2, ..., with connecting multiplicity
    matrices. connecting[m] has one row per level-(m+1) block and one
    column per level-(m+2) block, counting how often each old block
    feeds each new one."""

    base: HopfAlgebra
    levels: tuple
    connecting: tuple


def build_tower(base: HopfAlgebra, levels: int,
                materialize_cap: int = 64,
                materialize_all: bool = False) -> BratteliTower:
    """Iterated tensor powers of a verified base, materialized while the
    total dimension stays within materialize_cap and continued
    combinatorially past it (fusion rings and K0 data tensor along;
    connecting maps depend only on the base shape). Forcing
    materialization past the cap in exact mode is refused.
    """
    if levels < 1:
        raise ValueError("tower needs at least one level")
    f1 = fusion_ring(base)
    s1 = k0_states(base)
    lvls = [TowerLevel(base.shape, f1, s1, base)]
    connecting = []
    current = base
    rb = len(base.shape.dims)
    for m in range(2, levels + 1):
        dim_m = base.dim ** m
        prev = lvls[-1]
        if dim_m <= materialize_cap or materialize_all:
            if dim_m > materialize_cap and base.mode == EXACT:
                raise StructuralError(
                    f"materializing level {m} needs dimension {dim_m}, "
                    f"over the cap {materialize_cap}")
            current = tensor_hopf(current, base)
            lvl = TowerLevel(current.shape, fusion_ring(current),
                             k0_states(current), current)
        else:
            fus = fusion_tensor(prev.fusion, f1)
            haar = tuple(hp * h1 for hp in prev.states.haar
                         for h1 in s1.haar)
            cb = prev.states.counit_block * rb + s1.counit_block
            lvl = TowerLevel(BlockShape(fus.dims), fus,
                             K0States(dims=fus.dims, haar=haar,
                                      counit_block=cb), None)
            current = None
        prev_nb = len(prev.shape.dims)
        mm = []
        for i in range(prev_nb):
            row = [0] * (prev_nb * rb)
            for j in range(rb):
                row[i * rb + j] = base.shape.dims[j]
            mm.append(tuple(row))
        for c, d_new in enumerate(lvl.shape.dims):
            got = sum(mm[i][c] * prev.shape.dims[i] for i in range(prev_nb))
            if got != d_new:
                raise StructuralError(
                    f"connecting matrix breaks the dimension recursion "
                    f"at level {m}, column {c}")
        if any(all(v == 0 for v in row) for row in mm):
            raise StructuralError("connecting matrix has a zero row")
        connecting.append(tuple(mm))
        lvls.append(lvl)
    return BratteliTower(base=base, levels=tuple(lvls),
                         connecting=tuple(connecting))
