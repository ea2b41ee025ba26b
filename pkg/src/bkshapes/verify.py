"""The cross-module invariant suite behind the `verify` command.

Each check returns (passed, detail); failures carry a counterexample
string.  Combinatorial checks run exhaustively at desk scale; the matrix
engine checks run exhaustively when the (type, profile) count is small and
fall back to seeded samples otherwise.  The fault switch corrupts the data
under test inside the harness so the reporting path itself can be
exercised.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .charexp import CharExp, collapse_exponents, factor_through_norm, lambda_membership
from .gf import MAX_TABLE_Q, coefficient_field
from .hodge import (
    ForcedChoiceError,
    apply_operator,
    as_hodge,
    diffs,
    find_type_profile,
    hodge_equiv,
    hodge_type_of,
    irregular_ratio_never_cyclotomic,
    irregular_set,
    is_p_bounded,
)
from .intervals import shapeshift_targets
from .tametypes import (
    CUSPIDAL,
    PRINCIPAL,
    enumerate_profiles,
    enumerate_types,
    profile_data,
    serre_weight,
)
from .extensions import (
    ExceptionalPairError,
    ExtensionPoint,
    build_extension,
    kext_dimension,
    kext_structure,
    splits_after_inverting_u,
)
from .intervals import extended
from .phimod import (
    NoShapeError,
    apply_operator_on_basis,
    classify_shape,
    descend_to_base,
    module_from_descent_removed,
    strong_determinant_ok,
)
from .randgen import (
    random_basis_change,
    random_component_module,
    random_module,
    random_noshape_matrix,
    random_unit_matrix,
)

SHAPES = ("I_eta", "I_eta'", "II")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _pairs_sample(rng, tau_profiles, cap):
    if len(tau_profiles) <= cap:
        return tau_profiles
    return rng.sample(tau_profiles, cap)


def check_char_relations(p, f, rng, fault=None):
    for m in sorted({f, 2 * f}):
        mod = p**m - 1
        for i in range(m):
            e_next = [0] * m
            e_next[(i + 1) % m] = 1
            e_here = [0] * m
            e_here[i] = 1
            if (collapse_exponents(e_next, p, m) * p) % mod != collapse_exponents(e_here, p, m):
                return False, f"index relation fails at level {m}, i={i}"
    return True, f"levels {sorted({f, 2*f})}"


def check_norm_section(p, f, rng, fault=None):
    big = p ** (2 * f) - 1
    q = p**f
    if big <= 3000:
        residues = list(range(big))
    else:
        # half the sample from the descendable stratum so pairs actually occur
        residues = [rng.randrange(big // (q + 1)) * (q + 1) for _ in range(60)]
        residues += [rng.randrange(big) for _ in range(60)]
    count = 0
    step = max(1, len(residues) // 80)
    for e1 in residues:
        for e2 in residues[::step]:
            t1 = factor_through_norm(CharExp(p, 2 * f, e1), f)
            t2 = factor_through_norm(CharExp(p, 2 * f, e2), f)
            t12 = factor_through_norm(CharExp(p, 2 * f, e1 + e2), f)
            if t1 is not None and t2 is not None:
                if t12 is None:
                    return False, f"sum failed to descend: {e1}+{e2}"
                if (t1.residue + t2.residue) % (p**f - 1) != t12.residue:
                    return False, f"section not additive at {e1},{e2}"
                count += 1
    return True, f"{count} additive pairs"


def check_lambda_subgroup(p, f, rng, fault=None):
    mod = p**f - 1
    members = []
    space = itertools.product(range(mod), repeat=f)
    if mod**f <= 20000:
        members = [lam for lam in space if lambda_membership(lam, p, f)]
    else:
        while len(members) < 60:
            lam = tuple(rng.randrange(mod) for _ in range(f))
            if lambda_membership(lam, p, f):
                members.append(lam)
    pairs = itertools.product(members, members)
    if len(members) ** 2 > 40000:
        members2 = rng.sample(members, 200)
        pairs = itertools.product(members2, members2)
    n = 0
    for a, b in pairs:
        if not lambda_membership([x + y for x, y in zip(a, b)], p, f):
            return False, f"not closed under addition: {a}+{b}"
        n += 1
    for a in members:
        if not lambda_membership([-x for x in a], p, f):
            return False, f"not closed under negation: {a}"
    return True, f"{len(members)} members, {n} sums"


def check_recipe_bounds(p, f, rng, fault=None):
    rows = 0
    for tau in enumerate_types(p, f):
        g = tau.gamma
        for i in range(tau.fprime):
            lhs = p * tau.ell_prime(i - 1) - tau.ell_prime(i)
            if lhs != tau.estep * (p - 1 - g[i]):
                return False, f"exponent identity fails for {tau}"
        if tau.kind == CUSPIDAL and any(g[i] + g[i + f] != p - 1 for i in range(f)):
            return False, f"cuspidal gamma pairing fails for {tau}"
        for J in enumerate_profiles(tau):
            pd = profile_data(tau, J)
            s = list(pd.s)
            if fault == "s-flip" and rows == 0:
                s[0] = p + 1
            if any(not -1 <= x <= p - 1 for x in s):
                return False, f"s out of [-1,p-1] for {tau.key()} J={sorted(J)}: {s}"
            if any(not 0 <= x <= p for x in pd.t):
                return False, f"t out of [0,p] for {tau.key()} J={sorted(J)}"
            if any(s[i] != s[(i + f) % tau.fprime] for i in range(tau.fprime)):
                return False, f"s not f-periodic for {tau.key()} J={sorted(J)}"
            rows += 1
    return True, f"{rows} (type, profile) pairs"


def check_existence_roundtrip(p, f, rng, fault=None):
    count = 0
    for gaps in itertools.product(range(p + 1), repeat=f):
        if all(g == p for g in gaps):
            continue
        r = as_hodge(tuple((g, 0) for g in gaps))
        tau, J = find_type_profile(r, p)
        if not hodge_equiv(r, hodge_type_of(tau, J), p):
            return False, f"roundtrip fails at gaps={gaps}"
        count += 1
    return True, f"{count} canonical types"


def check_remark_exceptions(p, f, rng, fault=None):
    hits = []
    for gaps in itertools.product(range(p + 1), repeat=f):
        if all(g == p for g in gaps):
            continue
        r = as_hodge(tuple((g, 0) for g in gaps))
        for j in range(f):
            if not 1 <= gaps[j] <= p - 1:
                continue
            for pref in ("transition", "non-transition"):
                expected_fail = False
                if f == 1 and gaps[j] == 1 and pref == "non-transition":
                    expected_fail = True
                if (
                    f >= 2
                    and gaps[j] == p - 1
                    and gaps[(j + 1) % f] == 0
                    and all(gaps[i] == p for i in range(f) if i not in (j, (j + 1) % f))
                    and pref == "transition"
                ):
                    expected_fail = True
                try:
                    tau, J = find_type_profile(r, p, {j: pref})
                    failed = False
                    if not hodge_equiv(r, hodge_type_of(tau, J), p):
                        return False, f"constrained roundtrip broken at {gaps}, {j}, {pref}"
                    from .tametypes import is_transition

                    if is_transition(J, j, tau.fprime) != (pref == "transition"):
                        return False, f"preference not honored at {gaps}, {j}, {pref}"
                except ForcedChoiceError:
                    failed = True
                if failed != expected_fail:
                    return False, f"exception pattern mismatch at gaps={gaps}, j={j}, {pref}"
                if expected_fail:
                    hits.append((gaps, j, pref))
    return True, f"{len(hits)} forced patterns found"


def check_convention_coherence(p, f, rng, fault=None):
    n = 0
    for tau in enumerate_types(p, f):
        for J in enumerate_profiles(tau):
            pd = profile_data(tau, J)
            if not pd.in_P_tau:
                continue
            w = serre_weight(tau, J)
            if not hodge_equiv(as_hodge(w.hodge_pairs()), hodge_type_of(tau, J), p):
                return False, f"weight/type mismatch for {tau.key()} J={sorted(J)}"
            n += 1
    return True, f"{n} good profiles"


def check_cyclotomic_lemma(p, f, rng, fault=None):
    for ff in range(1, f + 1):
        if not irregular_ratio_never_cyclotomic(p, ff):
            return False, f"cyclotomic ratio found at f={ff}"
    return True, f"f up to {f}"


def check_operator_bounded(p, f, rng, fault=None):
    if f < 2:
        return True, "skipped (f=1 has no operators)"
    n = 0
    for gaps in itertools.product(range(p + 1), repeat=f):
        r = as_hodge(tuple((g, 0) for g in gaps))
        for j in irregular_set(r):
            for kind in ("theta", "mu", "nu"):
                if kind == "theta" and gaps[(j - 1) % f] == p:
                    continue
                img = apply_operator(kind, j, r, p)
                if not is_p_bounded(img, p):
                    return False, f"{kind}_{j} left the bounded range at {gaps}"
                n += 1
    return True, f"{n} operator applications"


def check_operator_chain(p, f, rng, fault=None):
    if f < 2:
        return True, "skipped (f=1 has no operators)"
    n = 0
    for j in range(f):
        gaps = [p] * f
        gaps[j] = 0
        gaps[(j - 1) % f] = p - 1
        r = as_hodge(tuple((g, 0) for g in gaps))
        for _ in range(f - 1):
            irr = sorted(irregular_set(r))
            if not irr:
                break
            r = apply_operator("nu", irr[0], r, p)
        if diffs(r) != (1,) * f:
            return False, f"chain did not land on unit gaps from j={j}: {diffs(r)}"
        n += 1
    return True, f"{n} chains"


def _phi_pairs(p, f, rng, cap=None):
    pairs = []
    for tau in enumerate_types(p, f):
        for J in enumerate_profiles(tau):
            pairs.append((tau, J))
    if cap is not None and len(pairs) > cap:
        pairs = rng.sample(pairs, cap)
    return pairs


def check_shape_invariance(p, f, rng, fault=None, trials=200):
    tau = enumerate_types(p, f, kinds=(PRINCIPAL,))[0]
    F = coefficient_field(p, tau.fprime)
    n = 0
    for _ in range(trials):
        shapes = [rng.choice(SHAPES) for _ in range(f)]
        mod = random_module(rng, tau, F, shapes, degree=6)
        I = [random_basis_change(rng, F, 5) for _ in range(f)]
        mod2 = change_eigenbasis_safe(mod, I)
        if classify_shape(mod2)[0] != classify_shape(mod)[0]:
            return False, f"shape changed under unit conjugation (trial {n})"
        n += 1
    return True, f"{n} trials"


def change_eigenbasis_safe(mod, I):
    from .phimod import change_eigenbasis

    return change_eigenbasis(mod, I, terms=40)


def check_strongdet_shape(p, f, rng, fault=None, trials=200):
    tau = enumerate_types(p, f, kinds=(PRINCIPAL,))[0]
    F = coefficient_field(p, tau.fprime)
    for t in range(trials):
        shapes = [rng.choice(SHAPES) for _ in range(f)]
        mod = random_module(rng, tau, F, shapes, degree=6)
        if not strong_determinant_ok(mod):
            return False, f"shaped sample fails the determinant condition (trial {t})"
        got, _ = classify_shape(mod)
        if got != tuple(shapes[:f]) + tuple(got[f:]):
            return False, f"classified shape disagrees with construction (trial {t})"
        bad = module_from_descent_removed(tau, [random_noshape_matrix(rng, F, 6) for _ in range(f)])
        if strong_determinant_ok(bad):
            return False, f"shapeless module passed the determinant condition (trial {t})"
        try:
            classify_shape(bad)
            return False, f"shapeless module classified (trial {t})"
        except NoShapeError:
            pass
    return True, f"{trials} trials each way"


def check_descend(p, f, rng, fault=None, cap=400):
    pairs = _phi_pairs(p, f, rng, cap=cap)
    n = 0
    for tau, J in pairs:
        if p**tau.fprime > MAX_TABLE_Q:
            continue
        F = coefficient_field(p, tau.fprime)
        mod = random_component_module(rng, tau, J, F, degree=4)
        res = descend_to_base(mod, J)
        pd = profile_data(tau, J)
        want = [(1 - pd.theta[i], -pd.s[i] - pd.theta[i]) for i in range(f)]
        if res.exponents != want:
            return False, f"diagonal exponents disagree at {tau.key()} J={sorted(J)}"
        from .phimod import ascend_from_base

        back = ascend_from_base(res)
        for i in range(tau.fprime):
            if not back.mats[i] == mod.mats[i]:
                return False, f"reconstruction failed at {tau.key()} J={sorted(J)} i={i}"
        n += 1
    return True, f"{n} (type, profile) pairs"


def check_operator_basis(p, f, rng, fault=None, trials=50):
    if f < 2:
        return True, "skipped (f=1 has no operators)"
    from .series import Mat2

    F = coefficient_field(p, f)
    n = 0
    for gaps in itertools.product(range(p + 1), repeat=f):
        r = as_hodge(tuple((g, 0) for g in gaps))
        for j in irregular_set(r):
            for kind in ("theta", "mu", "nu"):
                if kind == "theta" and gaps[(j - 1) % f] == p:
                    continue
                for _ in range(trials):
                    B = [random_unit_matrix(rng, F, 4) for _ in range(f)]
                    mats = [
                        Mat2(
                            B[i][0, 0].shift(r[i][0]),
                            B[i][0, 1].shift(r[i][1]),
                            B[i][1, 0].shift(r[i][0]),
                            B[i][1, 1].shift(r[i][1]),
                        )
                        for i in range(f)
                    ]
                    new, exps = apply_operator_on_basis(mats, r, kind, j, p, terms=48)
                    target = apply_operator(kind, j, r, p)
                    for i in range(f):
                        if tuple(sorted(exps[i], reverse=True)) != target[i]:
                            return False, f"exponent mismatch {kind}_{j} at gaps={gaps}"
                    n += 1
    return True, f"{n} lifts"


def check_extension_shape_law(p, f, rng, fault=None, cap=200):
    pairs = _phi_pairs(p, f, rng, cap=cap)
    n = 0
    for tau, J in pairs:
        if p**tau.fprime > MAX_TABLE_Q:
            continue
        F = coefficient_field(p, tau.fprime)
        from .extensions import extension_exponents

        data = extension_exponents(tau, J)
        hspace = itertools.product((0, 1), repeat=f)
        for h in hspace:
            try:
                x = ExtensionPoint(tau, J, F, 1, 2 % F.q if F.q > 2 else 1, h)
            except ExceptionalPairError:
                continue
            mod = build_extension(x)
            if not strong_determinant_ok(mod):
                return False, f"extension fails determinant at {tau.key()} J={sorted(J)}"
            shapes, profs = classify_shape(mod)
            for i in range(tau.fprime):
                want = data[i].transition and h[i % f] == 0
                if (shapes[i] == "II") != want:
                    return False, f"shape law broken at {tau.key()} J={sorted(J)} h={h} i={i}"
            if frozenset(J) not in profs:
                return False, f"extension escaped its component at {tau.key()} J={sorted(J)}"
            n += 1
    return True, f"{n} extensions"


def check_kext_dimension(p, f, rng, fault=None, cap=400):
    pairs = _phi_pairs(p, f, rng, cap=cap)
    n = 0
    for tau, J in pairs:
        if p**tau.fprime > MAX_TABLE_Q:
            continue
        F = coefficient_field(p, tau.fprime)
        pd = profile_data(tau, J)
        abs_pairs = [(1, 2 % F.q), (2 % F.q, 1)] if F.q > 2 else [(1, 1)]
        for a, b in abs_pairs:
            try:
                d = kext_dimension(tau, J, a, b, F)
            except ExceptionalPairError:
                continue
            if d != len(pd.bad_set):
                return False, (
                    f"kext dimension {d} != |bad set| {len(pd.bad_set)}"
                    f" at {tau.key()} J={sorted(J)} a={a} b={b}"
                )
            n += 1
    return True, f"{n} computations"


def check_split_closure(p, f, rng, fault=None, samples=40):
    from .extensions import kext_obstruction_rows
    from .linalg import kernel_basis

    found = negatives = 0
    for tau, J in _phi_pairs(p, f, rng, cap=80):
        if found >= samples:
            break
        if p**tau.fprime > MAX_TABLE_Q:
            continue
        pd = profile_data(tau, J)
        if not pd.bad_set:
            continue
        F = coefficient_field(p, tau.fprime)
        try:
            x0 = ExtensionPoint(tau, J, F, 1, 2 % F.q, (0,) * f)
        except ExceptionalPairError:
            continue
        rows = kext_obstruction_rows(x0)
        ker = (
            kernel_basis(rows, F, f)
            if rows
            else [[1 if i == j else 0 for i in range(f)] for j in range(f)]
        )
        if not ker:
            continue

        def combo():
            h = [0] * f
            for vec in ker:
                c = rng.randrange(F.q)
                h = [F.add(x, F.mul(c, y)) for x, y in zip(h, vec)]
            return tuple(h)

        h1, h2 = combo(), combo()
        hsum = tuple(F.add(a, b) for a, b in zip(h1, h2))
        for h in (h1, h2, hsum):
            xx = ExtensionPoint(tau, J, F, 1, 2 % F.q, h)
            if not splits_after_inverting_u(xx):
                return False, f"kernel vector did not split at {tau.key()} J={sorted(J)}"
        found += 1
        if rows:
            # negative control: a class violating some functional must not split
            row = rows[0]
            i0 = next(i for i in range(f) if row[i])
            hbad = tuple(1 if i == i0 else 0 for i in range(f))
            if splits_after_inverting_u(ExtensionPoint(tau, J, F, 1, 2 % F.q, hbad)):
                return False, f"non-kernel class split at {tau.key()} J={sorted(J)}"
            negatives += 1
    return True, f"{found} additive triples, {negatives} negative controls"


def check_shapeshift(p, f, rng, fault=None, cap=200):
    pairs = _phi_pairs(p, f, rng, cap=cap)
    n = 0
    for tau, J in pairs:
        if p**tau.fprime > MAX_TABLE_Q:
            continue
        F = coefficient_field(p, tau.fprime)
        for Jp in shapeshift_targets(tau, J):
            D = frozenset(i % f for i in (frozenset(J) ^ Jp))
            h = tuple(0 if i in D else 1 for i in range(f))
            try:
                x = ExtensionPoint(tau, J, F, 1, 2 % F.q, h)
            except ExceptionalPairError:
                continue
            mod = build_extension(x)
            _, profs = classify_shape(mod)
            if Jp not in profs:
                return False, f"target not classified at {tau.key()} J={sorted(J)} J'={sorted(Jp)}"
            n += 1
    return True, f"{n} shifted targets"


def check_kext_hyperplanes(p, f, rng, fault=None, cap=300):
    n = 0
    for tau, J in _phi_pairs(p, f, rng, cap=cap):
        if p**tau.fprime > MAX_TABLE_Q:
            continue
        pd = profile_data(tau, J)
        if not pd.bad_set or len(pd.bad_set) == f:
            continue
        F = coefficient_field(p, tau.fprime)
        try:
            x = ExtensionPoint(tau, J, F, 1, 2 % F.q, (0,) * f)
        except ExceptionalPairError:
            continue
        dim, blocks = kext_structure(x)
        if dim != len(pd.bad_set):
            return False, f"structure dimension off at {tau.key()} J={sorted(J)}"
        for block, vecs in blocks.items():
            supp = extended(set(block), f)
            if len(vecs) != 1:
                return False, f"interval {block} carries {len(vecs)} functionals at {tau.key()}"
            if any(vecs[0][i] == 0 for i in supp) or any(
                vecs[0][i] != 0 for i in range(f) if i not in supp
            ):
                return False, f"support mismatch on {block} at {tau.key()} J={sorted(J)}"
        n += 1
    return True, f"{n} structured kernels"


CHECKS = [
    ("char-index-relation", check_char_relations),
    ("norm-descent-section", check_norm_section),
    ("lambda-subgroup", check_lambda_subgroup),
    ("recipe-bounds", check_recipe_bounds),
    ("existence-roundtrip", check_existence_roundtrip),
    ("forced-choice-patterns", check_remark_exceptions),
    ("weight-type-coherence", check_convention_coherence),
    ("cyclotomic-exclusion", check_cyclotomic_lemma),
    ("operator-boundedness", check_operator_bounded),
    ("operator-unit-chain", check_operator_chain),
    ("shape-invariance", check_shape_invariance),
    ("strongdet-vs-shape", check_strongdet_shape),
    ("descend-normal-form", check_descend),
    ("operator-basis-lifts", check_operator_basis),
    ("extension-shape-law", check_extension_shape_law),
    ("kext-dimension", check_kext_dimension),
    ("kext-hyperplanes", check_kext_hyperplanes),
    ("split-subspace-closure", check_split_closure),
    ("shapeshift-targets", check_shapeshift),
]


def run_suite(p: int, f: int, seed: int = 0, precision: int | None = None, fault=None):
    import os

    if precision is not None:
        os.environ["BKSHAPES_PRECISION"] = str(precision)
    results = []
    for name, fn in CHECKS:
        rng = random.Random((seed, name).__repr__())
        try:
            ok, detail = fn(p, f, rng, fault=fault)
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"crashed: {exc!r}"
        results.append(CheckResult(name, ok, detail))
    return results
