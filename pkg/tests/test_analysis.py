"""Map classification: Jordan/Stormer splits, antipode intertwining,
positivity, spectra, the iso/co-anti-iso dichotomy, and bi-inner unitaries."""

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from hopfstar.analysis import (BiInnerReport, BlockAlgebra, MapReport,
                               StormerSplit, UNIT_PHASES, Unitary,
                               adjoint_action, biinner_check, certify_unitary,
                               classify_iso, cocentre_commutant_diagonal,
                               intertwines_antipodes, jordan_check,
                               lift_k_iso, orthogonality_preserving_check,
                               power_trace_isospectral, stormer_decompose)
from hopfstar.duality import dual_map, dualize
from hopfstar.hopf import StructuralError, tensor_hopf
from hopfstar.matrices import Matrix
from hopfstar.multimatrix import BlockShape
from hopfstar.presets import (cyclic_table, dihedral_table,
                              direct_product_table, function_algebra,
                              group_algebra, kac_palyutkin)
from hopfstar.scalars import EXACT, QQi

ONE = QQi(1)


def kp():
    return kac_palyutkin()


def fn(table, **kw):
    return function_algebra(table, **kw)


def identity_on(hopf):
    return Matrix.identity(hopf.dim, EXACT)


def block_transpose(shape):
    # e_{rc} -> e_{cr} within each block
    ents = []
    for b, n in enumerate(shape.dims):
        off = shape.offsets[b]
        for r in range(n):
            for c in range(n):
                ents.append((off + c * n + r, off + r * n + c, ONE))
    d = shape.total_dim
    return Matrix.from_entries(d, d, ents, EXACT)


def diag_unitary(hopf, phases):
    """Element dict for a diagonal unitary; phases maps diag position -> QQi."""
    fam = cocentre_commutant_diagonal(hopf)
    elem = {p: ONE for p in fam.positions}
    elem.update(phases)
    return elem


KP_DIAG = (0, 1, 2, 3, 4, 7)   # diagonal matrix-unit positions of the 8-dim fixture


# ---- jordan_check and stormer_decompose ----

def test_transpose_on_m2_is_jordan_anti():
    # [TRIVIAL] transposition is the textbook anti-automorphism
    alg = BlockAlgebra(BlockShape((2,)))
    t = block_transpose(alg.shape)
    ok, wit = jordan_check(t, alg, alg)
    assert ok and wit is None
    split = stormer_decompose(t, alg, alg)
    assert split.labels == ("anti",)
    assert split.projection == {}


def test_transpose_plus_identity_splits_per_block():
    # [TRIVIAL] transpose on the 2x2 block, identity on the 3x3 block:
    # a Jordan map that is neither multiplicative nor anti-multiplicative
    # globally but splits cleanly under block compression
    alg = BlockAlgebra(BlockShape((2, 3)))
    t2 = block_transpose(BlockShape((2,)))
    ents = [(r, c, v) for (r, c), v in t2.data.items()]
    ents += [(4 + k, 4 + k, ONE) for k in range(9)]
    f = Matrix.from_entries(13, 13, ents, EXACT)
    ok, _ = jordan_check(f, alg, alg)
    assert ok
    split = stormer_decompose(f, alg, alg)
    assert split.labels == ("anti", "mult")
    # projection supports exactly the multiplicative part: the 3x3 unit
    assert split.projection == {4: ONE, 8: ONE, 12: ONE}


def test_random_linear_map_fails_jordan_with_witness():
    # [DERIVED] seed 0 below yields a map violating the polarized product
    # identity already at the basis pair (0, 0)
    alg = BlockAlgebra(BlockShape((2,)))
    rng = random.Random(0)
    ents = []
    for r in range(4):
        for c in range(4):
            v = QQi(rng.randint(-3, 3), rng.randint(-3, 3))
            if not v.is_zero():
                ents.append((r, c, v))
    f = Matrix.from_entries(4, 4, ents, EXACT)
    ok, wit = jordan_check(f, alg, alg)
    assert not ok
    assert wit == (0, 0)


def test_stormer_rejects_non_jordan_map():
    alg = BlockAlgebra(BlockShape((2,)))
    rng = random.Random(0)
    ents = []
    for r in range(4):
        for c in range(4):
            v = QQi(rng.randint(-3, 3), rng.randint(-3, 3))
            if not v.is_zero():
                ents.append((r, c, v))
    f = Matrix.from_entries(4, 4, ents, EXACT)
    with pytest.raises(StructuralError):
        stormer_decompose(f, alg, alg)


def test_stormer_rejects_non_bijective_map():
    # the zero map is Jordan but carries no splitting
    alg = BlockAlgebra(BlockShape((2,)))
    with pytest.raises(StructuralError, match="not bijective"):
        stormer_decompose(Matrix.zeros(4, 4, EXACT), alg, alg)


def test_stormer_commutative_blocks_count_as_mult():
    # [TRIVIAL] on a function algebra every block is 1-dim, so the
    # mult/anti distinction degenerates; the convention is "mult"
    h = fn(dihedral_table(3))
    split = stormer_decompose(identity_on(h), h, h)
    assert split.labels == ("mult",) * 6


def test_stormer_identity_on_group_algebra_all_mult():
    # [TRIVIAL]
    h = group_algebra(dihedral_table(3))
    split = stormer_decompose(identity_on(h), h, h)
    assert split.labels == ("mult", "mult", "mult")


# ---- intertwines_antipodes ----

def test_identity_intertwines_antipodes():
    # [TRIVIAL] and both convolution products against the antipode
    # composite give the convolution unit
    h = kp()
    rep = intertwines_antipodes(identity_on(h), h, h)
    assert rep.intertwines
    assert rep.witness is None
    assert rep.left_convolution_unit and rep.right_convolution_unit


def test_antipode_of_cocommutative_intertwines_itself():
    # [DERIVED] on a group algebra the antipode is an algebra map composed
    # with the inverse, and it commutes with itself
    h = group_algebra(dihedral_table(3))
    rep = intertwines_antipodes(h.antipode, h, h)
    assert rep.intertwines
    assert rep.left_convolution_unit and rep.right_convolution_unit


def test_point_swap_on_z4_fails_antipode_asymmetrically():
    # [DERIVED] the permutation of Z4 points fixing 0 and 3 and swapping
    # 1 and 2 is a unital counit-preserving *-automorphism of the function
    # algebra, but g -> -g moves 1 to 3, so the antipode square does not
    # commute.  The right convolution f * (f o kappa) is the unit for any
    # multiplicative counit-preserving f; only the left product detects
    # the failure.  witness: delta_1
    h = fn(cyclic_table(4))
    perm = {0: 0, 1: 2, 2: 1, 3: 3}
    f = Matrix.from_entries(4, 4, [(perm[j], j, ONE) for j in range(4)], EXACT)
    rep = intertwines_antipodes(f, h, h)
    assert not rep.intertwines
    assert rep.witness == 1
    assert rep.left_convolution_unit is False
    assert rep.right_convolution_unit is True


# ---- positivity and orthogonality ----

def test_star_isomorphism_preserves_order_and_orthogonality():
    # [TRIVIAL]
    h = kp()
    rep = orthogonality_preserving_check(identity_on(h), h, h)
    assert rep.positive and rep.orthogonality_preserving
    assert rep.positivity_witness is None and rep.orthogonality_witness is None


def test_transpose_is_positive_and_orthogonality_preserving():
    # [TRIVIAL] transposition preserves spectra of self-adjoint elements
    alg = BlockAlgebra(BlockShape((2, 3)))
    rep = orthogonality_preserving_check(block_transpose(alg.shape), alg, alg)
    assert rep.positive and rep.orthogonality_preserving


def test_rank_one_perturbation_breaks_orthogonality():
    # [DERIVED] adding E01 + E10 to the image of E00 keeps the map unital
    # and positive on the probe family but E00, E11 stop being orthogonal
    alg = BlockAlgebra(BlockShape((2,)))
    ents = [(k, k, ONE) for k in range(4)]
    ents += [(1, 0, ONE), (2, 0, ONE)]
    f = Matrix.from_entries(4, 4, ents, EXACT)
    rep = orthogonality_preserving_check(f, alg, alg)
    assert not rep.orthogonality_preserving
    assert rep.orthogonality_witness == ((0, (0,)), (0, (1,)))


def test_positivity_failure_has_witness():
    # [DERIVED] sending E00 to E01 + E10 (spectrum {1, -1}) kills positivity;
    # the witness names the block, the generating corner, and the probe kind
    alg = BlockAlgebra(BlockShape((2,)))
    ents = [(1, 1, ONE), (2, 2, ONE), (3, 3, ONE), (1, 0, ONE), (2, 0, ONE)]
    f = Matrix.from_entries(4, 4, ents, EXACT)
    rep = orthogonality_preserving_check(f, alg, alg)
    assert not rep.positive
    assert rep.positivity_witness == (0, 0, 0, "unit")


# ---- power_trace_isospectral ----

def rotation_345(off, n):
    """Entries of the exact rotation (3+4i-free) unitary [[3,4],[-4,3]]/5
    conjugating the leading 2x2 corner of an n-dim block at offset off."""
    u = {(0, 0): QQi(3, 0, 5), (0, 1): QQi(4, 0, 5),
         (1, 0): QQi(-4, 0, 5), (1, 1): QQi(3, 0, 5)}
    for k in range(2, n):
        u[(k, k)] = ONE
    return u


def conj_block(x, u, n):
    """u x u* for dense dict blocks."""
    def mul(a, b):
        out = {}
        for (r, s), v in a.items():
            for (s2, c), w in b.items():
                if s == s2:
                    out[(r, c)] = out.get((r, c), QQi(0)) + v * w
        return {k: v for k, v in out.items() if not v.is_zero()}
    ustar = {(c, r): v.conj() for (r, c), v in u.items()}
    return mul(mul(u, x), ustar)


def test_unitary_conjugate_is_isospectral():
    # [TRIVIAL] Pythagorean rotation keeps everything inside Q(i)
    sh = BlockShape((2,))
    x = {(0, 0): QQi(2), (0, 1): QQi(1, 1), (1, 0): QQi(1, -1), (1, 1): QQi(-1)}
    y = conj_block(x, rotation_345(0, 2), 2)
    xv = {r * 2 + c: v for (r, c), v in x.items()}
    yv = {r * 2 + c: v for (r, c), v in y.items()}
    assert power_trace_isospectral(sh, xv, sh, yv)


def test_permutation_conjugate_is_isospectral():
    # [TRIVIAL] cycling the diagonal of a 3x3 block
    sh = BlockShape((3,))
    x = {0: QQi(1), 4: QQi(2), 8: QQi(3)}
    y = {0: QQi(3), 4: QQi(1), 8: QQi(2)}
    assert power_trace_isospectral(sh, x, sh, y)


def test_different_multiplicities_are_detected():
    # [TRIVIAL] diag(1,2,2) vs diag(1,1,2)
    sh = BlockShape((3,))
    x = {0: QQi(1), 4: QQi(2), 8: QQi(2)}
    y = {0: QQi(1), 4: QQi(1), 8: QQi(2)}
    assert not power_trace_isospectral(sh, x, sh, y)


def test_dimension_mismatch_raises():
    a, b = BlockShape((2,)), BlockShape((3,))
    with pytest.raises(StructuralError):
        power_trace_isospectral(a, {0: ONE}, b, {0: ONE})


def test_dual_of_verified_automorphism_is_isospectral():
    # [DERIVED] the sign-flip inner automorphism of the 8-dim fixture is a
    # verified Hopf automorphism; its dual map preserves power traces of a
    # seeded self-adjoint element (seed 7)
    h = kp()
    ad = adjoint_action(h, diag_unitary(h, {7: QQi(-1)}))
    da, db = dualize(h), dualize(h)
    fstar = dual_map(da, db, ad)
    dh = da.dual_hopf
    rng = random.Random(7)
    sh = dh.shape
    x = {}
    for b, n in enumerate(sh.dims):
        off = sh.offsets[b]
        for r in range(n):
            d = QQi(rng.randint(-3, 3))
            if not d.is_zero():
                x[off + r * n + r] = d
            for c in range(r + 1, n):
                re, im = rng.randint(-2, 2), rng.randint(-2, 2)
                v = QQi(re, im)
                if not v.is_zero():
                    x[off + r * n + c] = v
                    x[off + c * n + r] = v.conj()
    y = fstar.apply(x)
    assert power_trace_isospectral(dh, x, dh, y)


# ---- classify_iso: the dichotomy pipeline ----

def test_identity_on_kp_is_hopf_iso():
    # [TRIVIAL] every flag true, every block multiplicative
    h = kp()
    rep = classify_iso(identity_on(h), h, h)
    assert rep.verdict == "hopf_iso"
    assert rep.k_comultiplicative
    # the dual of the fixture is noncommutative, so the identity's dual is
    # multiplicative but not anti-multiplicative
    assert rep.flags["multiplicative"] is True
    assert rep.flags["anti_multiplicative"] is False
    assert all(v for k, v in rep.flags.items() if k != "anti_multiplicative")
    assert rep.stormer == ("mult",) * 5
    assert rep.path_hypothesis == "unchecked"


def test_antipode_of_function_s3_is_co_anti_iso():
    # [DERIVED] inversion on a nonabelian group: a genuine co-anti-iso.
    # Its dual is the convolution algebra of S3, where inversion is an
    # anti-homomorphism, so the dual splits anti everywhere; the induced
    # K-map does not intertwine the box products (recorded as a flag, not
    # an obstruction), and the dual has no exact block presentation here,
    # so the convolution dual is used and no Stormer projection is emitted.
    h = fn(dihedral_table(3))
    rep = classify_iso(h.antipode, h, h)
    assert rep.verdict == "hopf_co_anti_iso"
    assert rep.k_comultiplicative is False
    assert rep.stormer is None
    assert rep.flags["jordan"] is True
    assert rep.flags["multiplicative"] is False
    assert rep.flags["anti_multiplicative"] is True
    assert rep.flags["antipode_intertwining"] is True
    assert "induced K-theory map does not intertwine the box products" in rep.notes
    assert any("convolution dual" in n for n in rep.notes)


def test_antipode_composed_with_transpose_collapses_on_group_s3():
    # [DERIVED] on the twisted S3 convolution algebra the block basis is
    # adapted to the antipode: kappa followed by blockwise transposition
    # is the identity matrix.  The classifier reports hopf_iso and records
    # that the co-anti alternative holds as well (the dual is commutative).
    h = group_algebra(dihedral_table(3))
    f = block_transpose(h.shape) @ h.antipode
    assert f == identity_on(h)
    rep = classify_iso(f, h, h)
    assert rep.verdict == "hopf_iso"
    assert any("co-anti alternative" in n for n in rep.notes)


def test_phase_i_inner_map_is_neither():
    # [DERIVED] the diagonal unitary diag(1,1,1,1,1,i) on the 8-dim fixture
    # commutes with the co-centre, and its adjoint action is a unital
    # *-automorphism intertwining counit and Haar whose K-map respects the
    # box products.  Yet the dual map is not even Jordan: convolution
    # traces of minimal projections are not class functions here, so the
    # K-level data does not control the dual product.  The dichotomy does
    # not apply and the verdict is "neither".
    h = kp()
    ad = adjoint_action(h, diag_unitary(h, {7: QQi(0, 1)}))
    rep = classify_iso(ad, h, h)
    assert rep.verdict == "neither"
    assert rep.k_comultiplicative is True
    assert rep.flags["jordan"] is False
    assert rep.witnesses.get("jordan") == (5, 6)
    assert any("not Jordan" in n for n in rep.notes)


def test_classify_rejects_counit_violation():
    # swapping the identity point with another point of V4 breaks the counit
    h = fn(direct_product_table(cyclic_table(2), cyclic_table(2)))
    perm = {0: 1, 1: 0, 2: 2, 3: 3}
    f = Matrix.from_entries(4, 4, [(perm[j], j, ONE) for j in range(4)], EXACT)
    with pytest.raises(StructuralError, match="counit not intertwined at basis index 0"):
        classify_iso(f, h, h)


def test_classify_rejects_non_star_morphism():
    h = fn(cyclic_table(2))
    f = Matrix.from_entries(2, 2, [(0, 0, QQi(2)), (1, 1, ONE)], EXACT)
    with pytest.raises(StructuralError, match="morphism"):
        classify_iso(f, h, h)


def test_classify_rejects_non_invertible_map():
    # delta_0 -> 1, delta_1 -> 0 is a unital *-homomorphism preserving the
    # counit but has rank 1
    h = fn(cyclic_table(2))
    f = Matrix.from_entries(2, 2, [(0, 0, ONE), (1, 0, ONE)], EXACT)
    with pytest.raises(StructuralError, match="not invertible"):
        classify_iso(f, h, h)


def test_report_serialization_is_stable():
    # [TRIVIAL] same input, same bytes; flag order is fixed
    h = kp()
    r1 = classify_iso(identity_on(h), h, h)
    r2 = classify_iso(identity_on(h), h, h)
    s1 = json.dumps(r1.to_dict(), sort_keys=False)
    s2 = json.dumps(r2.to_dict(), sort_keys=False)
    assert s1 == s2
    d = r1.to_dict()
    assert list(d["flags"]) == ["linear", "unital", "star", "multiplicative",
                                "anti_multiplicative", "jordan", "positive",
                                "orthogonality_preserving", "counit_intertwining",
                                "antipode_intertwining", "haar_intertwining"]
    assert d["verdict"] == "hopf_iso"
    assert d["path_hypothesis"] == "unchecked"


# ---- K-class lifting ----

def test_lift_identity_correspondence_on_kp():
    # [TRIVIAL]
    h = kp()
    f = lift_k_iso((0, 1, 2, 3, 4), h, h)
    assert f == identity_on(h)
    assert classify_iso(f, h, h).verdict == "hopf_iso"


def test_lift_z4_inversion_is_hopf_iso():
    # [DERIVED] g -> -g on the function algebra of Z4 permutes the four
    # points (0)(13)(2); the lifted map is a Hopf isomorphism
    h = fn(cyclic_table(4))
    f = lift_k_iso((0, 3, 2, 1), h, h)
    rep = classify_iso(f, h, h)
    assert rep.verdict == "hopf_iso"


def test_lift_identifies_v4_presentations():
    # [DERIVED] the tensor square of the 2-point algebra and the function
    # algebra of the Klein group: same fusion data, and the aligned block
    # correspondence lifts to a Hopf isomorphism
    a = tensor_hopf(fn(cyclic_table(2)), fn(cyclic_table(2)))
    b = fn(direct_product_table(cyclic_table(2), cyclic_table(2)))
    f = lift_k_iso((0, 1, 2, 3), a, b)
    rep = classify_iso(f, a, b)
    assert rep.verdict == "hopf_iso"
    assert rep.k_comultiplicative


def test_lift_rejects_fusion_mismatch():
    h = fn(cyclic_table(4))
    with pytest.raises(StructuralError, match=r"fusion table mismatch at \(1, 1, 0\)"):
        lift_k_iso((0, 2, 1, 3), h, h)


def test_lift_rejects_counit_block_mismatch():
    h = fn(cyclic_table(4))
    with pytest.raises(StructuralError, match="counit block mismatch"):
        lift_k_iso((1, 0, 2, 3), h, h)


def test_lift_rejects_wrong_block_count():
    h = kp()
    g = tensor_hopf(fn(cyclic_table(4)), fn(cyclic_table(2)))
    with pytest.raises(StructuralError, match="bijection"):
        lift_k_iso((0, 1, 2, 3, 4), h, g)


def test_lift_rejects_dimension_mismatch():
    h = kp()
    g = fn(cyclic_table(5))
    with pytest.raises(StructuralError, match="dimension mismatch at block 4"):
        lift_k_iso((0, 1, 2, 3, 4), h, g)


# ---- unitaries and the bi-inner check ----

def test_certify_unit_element():
    # [TRIVIAL] the algebra unit is unitary, antipode-symmetric, central
    h = kp()
    u = certify_unitary(h, dict(h.unit()))
    assert u.kappa_symmetric and u.cocentre_commuting
    rep = biinner_check(u, h)
    assert rep.passed
    assert rep.classification.verdict == "hopf_iso"


def test_certify_rejects_non_unitary():
    h = kp()
    elem = {p: ONE for p in KP_DIAG}
    elem[7] = QQi(2)
    with pytest.raises(StructuralError, match="not unitary"):
        certify_unitary(h, elem)


def test_phase_i_unitary_separates_the_two_hypotheses():
    # [DERIVED] diag(1,...,1,i) commutes with the co-centre but is not
    # antipode-symmetric, and its adjoint action is classified "neither":
    # co-centre commutation alone does not produce a Hopf automorphism
    h = kp()
    elem = diag_unitary(h, {7: QQi(0, 1)})
    u = certify_unitary(h, elem)
    assert u.cocentre_commuting is True
    assert u.kappa_symmetric is False
    rep = biinner_check(elem, h)
    assert not rep.passed
    assert rep.classification.verdict == "neither"


def test_sign_flip_unitary_gives_nontrivial_hopf_automorphism():
    # [DERIVED] diag(1,1,1,1,1,-1) is antipode-symmetric and co-centre
    # commuting; its adjoint action is a nontrivial Hopf automorphism with
    # an all-multiplicative dual splitting
    h = kp()
    elem = diag_unitary(h, {7: QQi(-1)})
    rep = biinner_check(elem, h)
    assert rep.passed
    assert rep.classification.verdict == "hopf_iso"
    assert rep.classification.stormer == ("mult",) * 5
    assert adjoint_action(h, elem) != identity_on(h)


def test_block_swap_unitary_fails_cocentre_commutation():
    # [DERIVED] the self-adjoint unitary swapping the two corners of the
    # 2x2 block does not commute with the co-centre (witness: the basis
    # element at position 3), and its adjoint action is a co-anti-iso,
    # not a Hopf iso, so the bi-inner check fails on both counts
    h = kp()
    elem = {0: ONE, 1: ONE, 2: ONE, 3: ONE, 5: ONE, 6: ONE}
    rep = biinner_check(elem, h)
    assert rep.cocentre_commuting is False
    assert rep.cocentre_witness == 3
    assert rep.classification.verdict == "hopf_co_anti_iso"
    assert not rep.passed


# ---- diagonal commutant families ----

def test_kp_family_is_real_and_exhaustive():
    # [DERIVED] six diagonal positions, the antipode fixes each of them,
    # and antipode symmetry forces every phase real: 64 sign patterns
    h = kp()
    fam = cocentre_commutant_diagonal(h)
    assert fam.describe() == {"positions": 6, "classes": 6,
                              "real_classes": 6, "free_classes": 0}
    assert fam.positions == KP_DIAG
    assert fam.classes == ((0,), (1,), (2,), (3,), (4,), (7,))


def test_kp_family_samples_all_pass_biinner():
    # [DERIVED] twelve seeded samples; every one certifies, classifies as
    # a Hopf iso, and at least two distinct adjoint actions occur
    h = kp()
    fam = cocentre_commutant_diagonal(h)
    mats = set()
    for seed in range(12):
        u = fam.sample(seed)
        assert u.kappa_symmetric and u.cocentre_commuting
        rep = biinner_check(u, h)
        assert rep.passed
        assert rep.classification.verdict == "hopf_iso"
        mats.add(repr(sorted(adjoint_action(h, u.element).data.items(),
                             key=lambda kv: kv[0])))
    assert len(mats) >= 2


def test_sample_many_is_deterministic():
    # [TRIVIAL] same seed, same elements
    h = kp()
    fam = cocentre_commutant_diagonal(h)
    a = [u.element for u in fam.sample_many(5, 11)]
    b = [u.element for u in fam.sample_many(5, 11)]
    assert a == b


def test_function_s3_family_pairs_inverse_elements():
    # [DERIVED] on the function algebra of S3 the antipode pairs the two
    # 3-cycles (positions 2 and 4) into one free class with conjugate
    # phases; involutions and the identity stay real
    h = fn(dihedral_table(3))
    fam = cocentre_commutant_diagonal(h)
    assert fam.describe() == {"positions": 6, "classes": 5,
                              "real_classes": 4, "free_classes": 1}
    assert (2, 4) in fam.classes
    i = fam.classes.index((2, 4))
    assert fam.parities[i] == (0, 1)
    # seed 1 draws the 3-4-5 phase for the free class
    u = fam.sample(1)
    assert u.element[2] == QQi(3, 4, 5)
    assert u.element[4] == QQi(3, -4, 5)
    # commutative algebra: the adjoint action is trivially the identity
    rep = biinner_check(u, h)
    assert rep.passed
    assert adjoint_action(h, u.element) == identity_on(h)


def test_unit_phases_have_unit_modulus():
    # [TRIVIAL] every (a + bi)/c in the phase table satisfies a^2+b^2=c^2
    for a, b, c in UNIT_PHASES:
        assert a * a + b * b == c * c


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_kp_family_samples_always_certify(seed):
    # any seed yields an antipode-symmetric co-centre-commuting unitary
    h = kp()
    fam = cocentre_commutant_diagonal(h)
    u = fam.sample(seed)
    assert u.kappa_symmetric and u.cocentre_commuting


# ---- structural invariants across the bundled maps ----

def bundled_hopf_isos():
    h = kp()
    out = [(identity_on(h), h, h)]
    out.append((adjoint_action(h, diag_unitary(h, {7: QQi(-1)})), h, h))
    z4 = fn(cyclic_table(4))
    out.append((lift_k_iso((0, 3, 2, 1), z4, z4), z4, z4))
    a = tensor_hopf(fn(cyclic_table(2)), fn(cyclic_table(2)))
    b = fn(direct_product_table(cyclic_table(2), cyclic_table(2)))
    out.append((lift_k_iso((0, 1, 2, 3), a, b), a, b))
    return out


def test_bundled_isos_are_k_comultiplicative_with_jordan_duals():
    # every bundled Hopf isomorphism passes the K-box check and has a
    # Jordan dual; the chain of implications holds on the whole family
    for f, a, b in bundled_hopf_isos():
        rep = classify_iso(f, a, b)
        assert rep.verdict == "hopf_iso"
        assert rep.k_comultiplicative
        assert rep.flags["jordan"] is True
        assert rep.flags["antipode_intertwining"] is True
        assert rep.flags["positive"] is True
        assert rep.flags["orthogonality_preserving"] is True


def test_bundled_isos_pass_jordan_directly():
    # positive orthogonality-preserving bijections are Jordan; the bundled
    # maps and blockwise transposition all satisfy the polarized identity
    for f, a, b in bundled_hopf_isos():
        ok, _ = jordan_check(f, a, b)
        assert ok
    alg = BlockAlgebra(BlockShape((2, 3)))
    ok, _ = jordan_check(block_transpose(alg.shape), alg, alg)
    assert ok


def test_biinner_equivalence_at_this_scale():
    # forward: every family sample is co-centre commuting and its adjoint
    # action classifies as a Hopf iso.  contrapositive: the block swap is
    # not co-centre commuting and its adjoint action is not a Hopf iso.
    h = kp()
    fam = cocentre_commutant_diagonal(h)
    for seed in (0, 2, 4, 10):
        rep = biinner_check(fam.sample(seed), h)
        assert rep.cocentre_commuting and rep.classification.verdict == "hopf_iso"
    swap = {0: ONE, 1: ONE, 2: ONE, 3: ONE, 5: ONE, 6: ONE}
    rep = biinner_check(swap, h)
    assert not rep.cocentre_commuting
    assert rep.classification.verdict != "hopf_iso"
