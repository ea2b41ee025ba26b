import random

import pytest

from bkshapes.gf import field
from bkshapes.series import Mat2, Series
from bkshapes.phimod import (
    BKModule,
    GradingError,
    NoShapeError,
    add_descent_data,
    ascend_from_base,
    change_eigenbasis,
    classify_shape,
    cuspidal_companion,
    descend_to_base,
    dual_module,
    module_from_descent_removed,
    remove_descent_data,
    shape_at,
    strong_determinant_ok,
)
from bkshapes.randgen import (
    random_basis_change,
    random_component_module,
    random_module,
    random_unit_matrix,
)
from bkshapes.tametypes import (
    CUSPIDAL,
    PRINCIPAL,
    enumerate_profiles,
    enumerate_types,
    make_type,
    profile_data,
    type_from_gamma,
)

F3 = field(3)
F9 = field(3, 2)


def _vmats(F, entries):
    return Mat2(*entries)


def test_descent_removal_roundtrip():
    tau = make_type(3, 2, PRINCIPAL, 5, 2)
    F = F9
    v = Series.monomial(F, "v", 1, 1)
    one = Series.one(F, "v")
    A = Mat2(v, one + v, v * (one + v), one)
    C = add_descent_data(tau, 0, A)
    # eigenbasis grading: off-diagonals carry the exponent classes
    assert all(e % tau.estep == tau.ell_prime(0) for e in C[0, 1].support())
    assert all(e % tau.estep == tau.ell(0) for e in C[1, 0].support())
    back = remove_descent_data(tau, 0, C)
    assert back == A


def test_cuspidal_companion_formula():
    F = F9
    one = Series.one(F, "v")
    v = Series.monomial(F, "v", 1, 1)
    a, b, c, d = one + v, v, one, one - v
    A = Mat2(a, b, v * c, d)
    comp = cuspidal_companion(A)
    assert comp == Mat2(d, c, v * b, a)


def test_cuspidal_module_linkage_consistent():
    tau = type_from_gamma(3, 1, CUSPIDAL, (1,))
    rng = random.Random(1)
    mod = random_component_module(rng, tau, {0}, F9, degree=3)
    # companions were derived through the v-scale formula; the u-scale
    # linkage must then hold on the nose (checked in the constructor too)
    from bkshapes.phimod import ad_swap

    assert mod.mats[1] == ad_swap(mod.mats[0])


def test_grading_rejected():
    tau = make_type(3, 2, PRINCIPAL, 5, 2)
    one_u = Series.one(F9, "u")
    bad = Mat2(one_u, one_u, one_u, one_u)  # off-diagonals in the wrong class
    with pytest.raises(GradingError):
        BKModule(tau, [bad, bad])


def test_strong_det_examples():
    tau = make_type(3, 1, PRINCIPAL, 1, 0)
    v = Series.monomial(F3, "v", 1, 1)
    one = Series.one(F3, "v")
    zero = Series.zero(F3, "v")
    assert strong_determinant_ok(module_from_descent_removed(tau, [Mat2(v, zero, zero, one)]))
    assert not strong_determinant_ok(module_from_descent_removed(tau, [Mat2(one, zero, zero, one)]))
    assert not strong_determinant_ok(module_from_descent_removed(tau, [Mat2(v, zero, zero, v)]))


def test_shape_examples():
    tau = make_type(3, 1, PRINCIPAL, 1, 0)
    v = Series.monomial(F3, "v", 1, 1)
    one = Series.one(F3, "v")
    zero = Series.zero(F3, "v")
    m = module_from_descent_removed(tau, [Mat2(v, zero, zero, one)])
    assert shape_at(m, 0) == "I_eta"
    m2 = module_from_descent_removed(tau, [Mat2(v, zero, zero, v)])
    shapes, profs = classify_shape(m2)
    assert shapes == ("II",) and sorted(map(sorted, profs)) == [[], [0]]
    m3 = module_from_descent_removed(tau, [Mat2(one, zero, zero, one)])
    with pytest.raises(NoShapeError):
        classify_shape(m3)


def test_membership_counts_match_shape_word():
    rng = random.Random(3)
    tau = make_type(3, 2, PRINCIPAL, 5, 2)
    for _ in range(30):
        shapes = [rng.choice(["I_eta", "I_eta'", "II"]) for _ in range(2)]
        mod = random_module(rng, tau, F9, shapes, degree=5)
        got, profs = classify_shape(mod)
        assert got == tuple(shapes)
        free = sum(1 for s in shapes if s == "II")
        assert len(profs) == 2**free


def test_change_eigenbasis_identity_and_invariance():
    rng = random.Random(9)
    tau = make_type(3, 2, PRINCIPAL, 5, 2)
    mod = random_module(rng, tau, F9, ["I_eta", "II"], degree=4)
    ident = [Mat2.identity(F9, "v") for _ in range(2)]
    same = change_eigenbasis(mod, ident, terms=30)
    for i in range(2):
        assert same.mats[i] == mod.mats[i]
    for _ in range(25):
        I = [random_basis_change(rng, F9, 4) for _ in range(2)]
        moved = change_eigenbasis(mod, I, terms=40)
        assert classify_shape(moved)[0] == classify_shape(mod)[0]


def test_change_eigenbasis_rejects_nonunit():
    rng = random.Random(9)
    tau = make_type(3, 2, PRINCIPAL, 5, 2)
    mod = random_module(rng, tau, F9, ["I_eta", "II"], degree=4)
    v = Series.monomial(F9, "v", 1, 1)
    zero = Series.zero(F9, "v")
    with pytest.raises(ValueError):
        change_eigenbasis(mod, [Mat2(v, zero, zero, v)] * 2, terms=20)


@pytest.mark.parametrize("p,f", [(3, 1), (3, 2)])
def test_descend_all_pairs(p, f):
    rng = random.Random(17)
    for tau in enumerate_types(p, f):
        F = field(p, tau.fprime)
        for J in enumerate_profiles(tau):
            mod = random_component_module(rng, tau, J, F, degree=4)
            res = descend_to_base(mod, J)
            pd = profile_data(tau, J)
            assert res.exponents == [
                (1 - pd.theta[i], -pd.s[i] - pd.theta[i]) for i in range(f)
            ]
            back = ascend_from_base(res)
            for i in range(tau.fprime):
                assert back.mats[i] == mod.mats[i]
            for B in res.units:
                det = B.det()
                assert det.val == 0


def test_descend_is_basis_independent():
    # the module stays on its component under a unit eigenbasis change, so
    # descent must still produce the same diagonal exponents
    rng = random.Random(23)
    tau = make_type(3, 2, PRINCIPAL, 5, 2)
    for J in enumerate_profiles(tau):
        mod = random_component_module(rng, tau, J, F9, degree=4)
        I = [random_basis_change(rng, F9, 4) for _ in range(2)]
        moved = change_eigenbasis(mod, I, terms=64)
        res1 = descend_to_base(mod, J)
        res2 = descend_to_base(moved, J)
        assert res1.exponents == res2.exponents


def test_strong_det_inconclusive_at_low_precision():
    from bkshapes.series import PrecisionError

    tau = make_type(3, 1, PRINCIPAL, 1, 0)
    one = Series.one(F3, "v")
    zero = Series.zero(F3, "v")
    fuzzy = Series(F3, "v", 0, [], prec=1)  # zero up to v^1; e' = 2
    mod = module_from_descent_removed(tau, [Mat2(fuzzy, zero, zero, one)])
    with pytest.raises(PrecisionError):
        strong_determinant_ok(mod)
    # divisibility of the (0,0) entry is still decidable (constant term known
    # zero); with no known coefficient at all it is not
    blind = Series(F3, "v", 0, [], prec=0)
    mod2 = module_from_descent_removed(tau, [Mat2(blind, zero, zero, one)])
    with pytest.raises(PrecisionError):
        shape_at(mod2, 0)


def test_descend_then_transport_pipeline():
    """Component module -> base normal form -> operator transport.

    The transported family is a normal-form witness for the flipped
    profile's type, tying the matrix engine to the combinatorial layer.
    """
    from bkshapes.hodge import apply_operator, hodge_equiv, hodge_type_of
    from bkshapes.phimod import apply_operator_on_basis

    rng = random.Random(77)
    p, f = 3, 2
    done = 0
    for tau in enumerate_types(p, f, kinds=(PRINCIPAL,)):
        F = field(p, tau.fprime)
        for J in enumerate_profiles(tau):
            pd = profile_data(tau, J)
            for j in sorted(pd.bad_set):
                mod = random_component_module(rng, tau, J, F, degree=4)
                res = descend_to_base(mod, J)
                r = tuple(tuple(e) for e in res.exponents)
                new, exps = apply_operator_on_basis(res.mats, r, "nu", j, p, terms=48)
                img = apply_operator("nu", j, r, p)
                Jp = frozenset(J) ^ frozenset({j})
                assert hodge_equiv(img, hodge_type_of(tau, Jp), p)
                done += 1
        if done >= 20:
            break
    assert done >= 10


def test_dual_module_examples():
    one = Series.one(F9, "v")
    v = Series.monomial(F9, "v", 1, 1)
    ident = Mat2.identity(F9, "v")
    assert dual_module([ident], terms=10)[0] == ident
    d = dual_module([Mat2.diag(v, one)], terms=10)[0]
    assert d == Mat2.diag(Series.monomial(F9, "v", 1, -1), one)
    rng = random.Random(2)
    M = random_unit_matrix(rng, F9, 4)
    dd = dual_module(dual_module([M], terms=40), terms=40)[0]
    for s, t in zip(dd.e, M.e):
        assert s == t
