from bkshapes.intervals import (
    extended,
    interval_anchor,
    interval_decomposition,
    shapeshift_targets,
    shifted_bad_set,
)
from bkshapes.tametypes import (
    CUSPIDAL,
    PRINCIPAL,
    enumerate_profiles,
    enumerate_types,
    is_transition,
    profile_data,
    type_from_gamma,
)


def test_decomposition_example():
    dec = interval_decomposition({0, 1, 3}, 6)
    assert dec == [(0, 1), (3,)]
    assert extended({0, 1}, 6) == {5, 0, 1}
    assert interval_anchor((0, 1), 6) == 5


def test_decomposition_full_circle_and_singleton():
    assert interval_decomposition(set(range(4)), 4) == [(0, 1, 2, 3)]
    assert interval_decomposition({2}, 4) == [(2,)]
    assert interval_anchor((2,), 4) == 1
    assert interval_decomposition(set(), 5) == []


def test_decomposition_wraps():
    dec = interval_decomposition({4, 0}, 5)
    assert dec == [(4, 0)]
    assert interval_anchor((4, 0), 5) == 3


def test_maximality_extended_disjoint():
    import itertools

    for f in (4, 5, 6):
        for mask in range(1, 2**f):
            S = {i for i in range(f) if mask >> i & 1}
            blocks = interval_decomposition(S, f)
            assert set().union(*map(set, blocks)) == S
            if len(S) < f:
                exts = [extended(set(b), f) for b in blocks]
                for e1, e2 in itertools.combinations(exts, 2):
                    assert not (e1 & e2)


def test_shapeshift_trivial_when_no_bad_indices():
    tau = type_from_gamma(3, 2, PRINCIPAL, (1, 1))
    for J in enumerate_profiles(tau):
        pd = profile_data(tau, J)
        if not pd.bad_set:
            assert shapeshift_targets(tau, J) == [frozenset(J)]


def test_shapeshift_excludes_full_enlargements():
    # find a profile with a single bad index whose anchor step is a transition
    hit = False
    for tau in enumerate_types(3, 3, kinds=(PRINCIPAL,)):
        for J in enumerate_profiles(tau):
            pd = profile_data(tau, J)
            if len(pd.bad_set) != 1:
                continue
            (b,) = pd.bad_set
            m = (b - 1) % 3
            if not is_transition(J, m, tau.fprime):
                continue
            hit = True
            allowed = shifted_bad_set(tau, J)
            assert allowed == {b, m}
            targets = shapeshift_targets(tau, J)
            difference_sets = {frozenset(J ^ Jp) for Jp in targets}
            assert frozenset() in difference_sets
            assert frozenset({b}) in difference_sets
            assert frozenset({m}) in difference_sets
            assert frozenset({b, m}) not in difference_sets  # the full enlargement
        if hit:
            break
    assert hit


def test_shapeshift_cuspidal_differences_are_doubled():
    for tau in enumerate_types(3, 2, kinds=(CUSPIDAL,)):
        for J in enumerate_profiles(tau):
            for Jp in shapeshift_targets(tau, J):
                D = frozenset(J) ^ Jp
                assert all(((i + tau.f) % tau.fprime) in D for i in D)


def test_full_bad_set_allows_everything():
    # bad set equal to the whole circle drops the containment rule
    found = False
    for tau in enumerate_types(3, 2):
        for J in enumerate_profiles(tau):
            pd = profile_data(tau, J)
            if len(pd.bad_set) == 2:
                targets = shapeshift_targets(tau, J)
                assert len(targets) == 4
                found = True
    assert found
