"""Rank-2 semilinear matrix families: eigenbases, shapes, descent, duality.

A module of type tau is stored through the matrices of its partial
Frobenius maps with respect to an eigenbasis: 2x2 matrices over the
u-scale series whose entries carry the grading forced by the two
characters.  Removing the descent data conjugates into v-scale matrices;
the shape of the module reads divisibility off the diagonal; descending to
the base field produces the diagonal normal form whose exponents are the
Hodge data of the pair (tau, J).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import GF, coefficient_field
from .series import Mat2, PrecisionError, Series
from .tametypes import CUSPIDAL, TameType, check_profile, profile_data

SHAPE_I_ETA = "I_eta"
SHAPE_I_ETA_PRIME = "I_eta'"
SHAPE_II = "II"


class NoShapeError(ArithmeticError):
    """Neither diagonal entry is divisible; the module has no shape."""


class GradingError(ValueError):
    """Matrix entries violate the eigenbasis grading."""


def _check_residue(s: Series, residue: int, estep: int, what: str):
    for e in s.support():
        if e % estep != residue % estep:
            raise GradingError(f"{what} has exponent {e} outside its grading class")


def cuspidal_companion(A: Mat2) -> Mat2:
    """The index i+f matrix attached to a v-scale matrix ((a,b),(vc,d))."""
    a, b, vc, d = A.e
    if not vc.is_zero() and vc.val < 1:
        raise GradingError("lower-left entry must be divisible in the v-scale")
    c = vc.shift(-1)
    return Mat2(d, c, b.shift(1), a)


@dataclass
class BKModule:
    """Eigenbasis presentation: f' matrices of partial Frobenius maps."""

    tau: TameType
    mats: list  # u-scale Mat2, indexed by Z/f'Z

    def __post_init__(self):
        tau = self.tau
        if len(self.mats) != tau.fprime:
            raise ValueError(f"need {tau.fprime} matrices")
        ep = tau.estep
        for i, M in enumerate(self.mats):
            for s in M.e:
                if s.scale != "u":
                    raise ValueError("eigenbasis matrices live in the u-scale")
            _check_residue(M[0, 0], 0, ep, f"entry (0,0) at {i}")
            _check_residue(M[1, 1], 0, ep, f"entry (1,1) at {i}")
            _check_residue(M[0, 1], tau.ell_prime(i), ep, f"entry (0,1) at {i}")
            _check_residue(M[1, 0], tau.ell(i), ep, f"entry (1,0) at {i}")
        if tau.kind == CUSPIDAL:
            f = tau.f
            for i in range(f):
                expect = ad_swap(self.mats[i])
                if not self.mats[i + f] == expect:
                    raise GradingError(f"cuspidal linkage fails at index {i}")

    @property
    def field(self) -> GF:
        return self.mats[0][0, 0].field

    def descent_removed(self, i: int) -> Mat2:
        """The v-scale matrix at index i (the eigenbasis conjugated form)."""
        return remove_descent_data(self.tau, i, self.mats[i % self.tau.fprime])


def ad_swap(M: Mat2) -> Mat2:
    a, b, c, d = M.e
    return Mat2(d, c, b, a)


def remove_descent_data(tau: TameType, i: int, C: Mat2) -> Mat2:
    """Conjugate the eigenbasis matrix into plain v-scale entries."""
    lp = tau.ell_prime(i)
    ep = tau.estep
    a, b, c, d = C.e
    out = Mat2(a, b.shift(-lp), c.shift(lp), d)
    return out.map(lambda s: s.to_v(ep))


def add_descent_data(tau: TameType, i: int, A: Mat2) -> Mat2:
    lp = tau.ell_prime(i)
    ep = tau.estep
    a, b, c, d = A.e
    return Mat2(
        a.to_u(ep),
        b.to_u(ep).shift(lp),
        c.to_u(ep).shift(-lp),
        d.to_u(ep),
    )


def module_from_descent_removed(tau: TameType, A_list) -> BKModule:
    """Build from v-scale matrices at indices 0..f-1 (companions derived)."""
    f = tau.f
    if len(A_list) != f:
        raise ValueError(f"need {f} matrices")
    full = list(A_list)
    if tau.kind == CUSPIDAL:
        full += [cuspidal_companion(A) for A in A_list]
    return BKModule(tau, [add_descent_data(tau, i, A) for i, A in enumerate(full)])


def module_from_partial_frobenius(tau: TameType, J, B_list) -> BKModule:
    """The component normal form: B*diag(v,1) inside J, diag(1,v)*B outside."""
    J = check_profile(tau, J)
    f = tau.f
    if len(B_list) != f:
        raise ValueError(f"need {f} unit matrices")
    F = B_list[0][0, 0].field
    v = Series.monomial(F, "v", 1, 1)
    one = Series.one(F, "v")
    A_list = []
    for i, B in enumerate(B_list):
        if i in J:
            A_list.append(B * Mat2.diag(v, one))
        else:
            A_list.append(Mat2.diag(one, v) * B)
    return module_from_descent_removed(tau, A_list)


# -- shapes -------------------------------------------------------------------

def _divisible(s: Series, what: str) -> bool:
    if s.is_zero():
        if s.prec is not None and s.prec <= 0:
            raise PrecisionError(f"{what}: cannot decide divisibility at this precision")
        return True
    return s.val >= 1


def shape_at(mod: BKModule, i: int) -> str:
    A = mod.descent_removed(i)
    va = _divisible(A[0, 0], f"entry a at {i}")
    vd = _divisible(A[1, 1], f"entry d at {i}")
    if va and vd:
        return SHAPE_II
    if va:
        return SHAPE_I_ETA
    if vd:
        return SHAPE_I_ETA_PRIME
    raise NoShapeError(f"no diagonal divisibility at index {i}")


def classify_shape(mod: BKModule):
    """Per-index shapes and the profiles whose component contains the module."""
    tau = mod.tau
    fp = tau.fprime
    shapes = tuple(shape_at(mod, i) for i in range(fp))
    if tau.kind == CUSPIDAL:
        swap = {SHAPE_I_ETA: SHAPE_I_ETA_PRIME, SHAPE_I_ETA_PRIME: SHAPE_I_ETA, SHAPE_II: SHAPE_II}
        for i in range(tau.f):
            if shapes[i + tau.f] != swap[shapes[i]]:
                raise AssertionError("cuspidal shape symmetry violated")
    profiles = []
    from .tametypes import enumerate_profiles

    for J in enumerate_profiles(tau):
        ok = True
        for i in range(fp):
            needs = (SHAPE_I_ETA, SHAPE_II) if i in J else (SHAPE_I_ETA_PRIME, SHAPE_II)
            if shapes[i] not in needs:
                ok = False
                break
        if ok:
            profiles.append(J)
    return shapes, sorted(profiles, key=sorted)


def strong_determinant_ok(mod: BKModule) -> bool:
    """Every partial Frobenius determinant is a unit times u**estep."""
    ep = mod.tau.estep
    for i, M in enumerate(mod.mats):
        det = M.det()
        if det.is_zero():
            if det.prec is not None and det.prec <= ep:
                raise PrecisionError(f"determinant at {i} undecidable at this precision")
            return False
        if det.val != ep:
            return False
    return True


def change_eigenbasis(mod: BKModule, I_list, terms: int | None = None) -> BKModule:
    """Conjugate by a unit family given in descent-removed (v-scale) form."""
    tau = mod.tau
    f, fp = tau.f, tau.fprime
    if len(I_list) != f:
        raise ValueError(f"need {f} matrices")
    full = list(I_list)
    if tau.kind == CUSPIDAL:
        full += [cuspidal_companion(I) for I in I_list]
    for i, I in enumerate(full):
        det = I.det()
        if det.is_zero() or det.val != 0:
            raise ValueError(f"change of basis at {i} must have unit determinant")
    U = [add_descent_data(tau, i, I) for i, I in enumerate(full)]
    new = []
    for i in range(fp):
        Uinv = U[i].inverse(terms)
        new.append(Uinv * mod.mats[i] * U[(i - 1) % fp].frobenius())
    return BKModule(tau, new)


# -- descent to the base field -----------------------------------------------

@dataclass
class DescentResult:
    tau: TameType
    J: frozenset
    mats: list          # v-scale Mat2, indices 0..f-1
    units: list         # B_i with mats[i] == B_i * diag(v^{r1}, v^{r2})
    exponents: list     # (r1, r2) per index: (1-theta_i, -s_i-theta_i)
    nu: tuple


def _conj_monomial(C: Mat2, row_exp, col_exp) -> Mat2:
    a, b, c, d = C.e
    return Mat2(
        a.shift(col_exp[0] - row_exp[0]),
        b.shift(col_exp[1] - row_exp[0]),
        c.shift(col_exp[0] - row_exp[1]),
        d.shift(col_exp[1] - row_exp[1]),
    )


def _perm_conj(G: Mat2, swap_rows: bool, swap_cols: bool) -> Mat2:
    a, b, c, d = G.e
    if swap_rows:
        a, b, c, d = c, d, a, b
    if swap_cols:
        a, b, c, d = b, a, d, c
    return Mat2(a, b, c, d)


def descend_to_base(mod: BKModule, J) -> DescentResult:
    """Base-field invariants basis: matrices B_i*diag(v, v^{-s_i})*v^{-theta_i}.

    Follows the constructive proof: conjugate by the monomial basis with
    exponents from the derived twist chain, then reorder the pair at each
    index by profile membership.  In the cuspidal case the matching
    exponent is asserted to vanish and the output is the f-indexed family
    of invariants.
    """
    tau = mod.tau
    J = check_profile(tau, J)
    pd = profile_data(tau, J)
    p, f, fp, ep = tau.p, tau.f, tau.fprime, tau.estep

    if tau.kind == CUSPIDAL:
        for i in range(f):
            if pd.xi(i) != 0:
                raise AssertionError(f"cuspidal matching exponent nonzero at {i}")

    texp = []
    for i in range(fp):
        base = -tau.k_prime(i) + ep * (pd.nu[i] - 1)
        texp.append((tau.ell_prime(i) + base, ep * (0 if i in J else 1) + base))

    G = []
    for i in range(fp):
        shifted = _conj_monomial(
            mod.mats[i],
            texp[i],
            tuple(p * e for e in texp[(i - 1) % fp]),
        )
        G.append(shifted)

    if tau.kind == CUSPIDAL:
        for i in range(f):
            if not G[i + f] == ad_swap(G[i]):
                raise AssertionError("cuspidal invariance of the descended family fails")

    mats = []
    for i in range(f):
        M = G[i]
        if tau.kind == CUSPIDAL and i == 0:
            M = _perm_conj(M, swap_rows=False, swap_cols=True)
        prev = (i - 1) % f
        M = _perm_conj(M, swap_rows=i not in J, swap_cols=prev not in J)
        mats.append(M.map(lambda s: s.to_v(ep)))

    units, exponents = [], []
    for i in range(f):
        r1, r2 = 1 - pd.theta[i], -pd.s[i] - pd.theta[i]
        B = Mat2(
            mats[i][0, 0].shift(-r1),
            mats[i][0, 1].shift(-r2),
            mats[i][1, 0].shift(-r1),
            mats[i][1, 1].shift(-r2),
        )
        for s in B.e:
            if not s.is_integral():
                raise AssertionError(f"unit part at {i} is not integral")
        det = B.det()
        if det.is_zero() or det.val != 0:
            raise AssertionError(f"unit part at {i} has non-unit determinant")
        units.append(B)
        exponents.append((r1, r2))
    return DescentResult(tau, J, mats, units, exponents, pd.nu)


def ascend_from_base(res: DescentResult) -> BKModule:
    """Rebuild the eigenbasis matrices from a descent result (left inverse)."""
    tau = res.tau
    p, f, fp, ep = tau.p, tau.f, tau.fprime, tau.estep
    pd = profile_data(tau, res.J)
    G = [None] * fp
    for i in range(f):
        M = res.mats[i].map(lambda s: s.to_u(ep))
        prev = (i - 1) % f
        M = _perm_conj(M, swap_rows=i not in res.J, swap_cols=prev not in res.J)
        if tau.kind == CUSPIDAL and i == 0:
            M = _perm_conj(M, swap_rows=False, swap_cols=True)
        G[i] = M
    if tau.kind == CUSPIDAL:
        for i in range(f):
            G[i + f] = ad_swap(G[i])
    texp = []
    for i in range(fp):
        base = -tau.k_prime(i) + ep * (pd.nu[i] - 1)
        texp.append((tau.ell_prime(i) + base, ep * (0 if i in res.J else 1) + base))
    mats = []
    for i in range(fp):
        mats.append(
            _conj_monomial(
                G[i],
                tuple(-e for e in texp[i]),
                tuple(-p * e for e in texp[(i - 1) % fp]),
            )
        )
    return BKModule(tau, mats)


# -- duality and weight operators on bases ------------------------------------

def dual_module(mats, terms: int | None = None) -> list:
    """Inverse-transpose of each partial Frobenius matrix (an involution)."""
    return [M.inverse(terms).transpose() for M in mats]


def apply_operator_on_basis(mats, r, kind: str, j: int, p: int, terms: int | None = None):
    """Transform a diagonal normal form along a weight operator.

    ``mats[i]`` must equal B_i * diag(v**r[i][0], v**r[i][1]) with unit B_i.
    Returns (new_mats, new_exponents) where new_exponents[i] is the actual
    diagonal pair of the output at index i (the sorted pairs agree with the
    Hodge-level operator).
    """
    from .hodge import apply_operator

    f = len(mats)
    if f < 2:
        raise ValueError("operators need f >= 2")
    j %= f
    if r[j][0] != r[j][1]:
        raise ValueError("normal form is regular at j; operator undefined")
    F = mats[0][0, 0].field

    def unit_part(i):
        return Mat2(
            mats[i][0, 0].shift(-r[i][0]),
            mats[i][0, 1].shift(-r[i][1]),
            mats[i][1, 0].shift(-r[i][0]),
            mats[i][1, 1].shift(-r[i][1]),
        )

    one = Series.one(F, "v")
    v = Series.monomial(F, "v", 1, 1)
    expected = {i: tuple(r[i]) for i in range(f)}
    if kind in ("theta", "mu"):
        if kind == "theta" and r[(j - 1) % f][0] - r[(j - 1) % f][1] == p:
            raise ValueError("theta would leave the bounded range at j-1")
        C = Mat2.diag(one, v) if kind == "theta" else Mat2.diag(v, one)
        S_prev = unit_part((j - 1) % f) * C
        S_j = None
        if kind == "theta":
            expected[(j - 1) % f] = (r[(j - 1) % f][0], r[(j - 1) % f][1] - 1)
            expected[j] = (r[j][0], r[j][1] + p)
        else:
            expected[(j - 1) % f] = (r[(j - 1) % f][0] - 1, r[(j - 1) % f][1])
            expected[j] = (r[j][0] + p, r[j][1])
    elif kind == "nu":
        S_prev = unit_part(j).inverse(terms)
        S_j = Mat2.diag(one, v)
        expected[j] = (r[j][0], r[j][1] - 1)
        expected[(j + 1) % f] = (r[(j + 1) % f][0], r[(j + 1) % f][1] + p)
    else:
        raise ValueError(f"unknown operator kind {kind!r}")

    S = [None] * f
    S[(j - 1) % f] = S_prev
    if S_j is not None:
        S[j] = S_j
    new = []
    for i in range(f):
        M = mats[i]
        if S[(i - 1) % f] is not None:
            M = M * S[(i - 1) % f].frobenius()
        if S[i] is not None:
            M = S[i].inverse(terms) * M
        new.append(M)

    exps = [expected[i] for i in range(f)]
    for i in range(f):
        B = Mat2(
            new[i][0, 0].shift(-exps[i][0]),
            new[i][0, 1].shift(-exps[i][1]),
            new[i][1, 0].shift(-exps[i][0]),
            new[i][1, 1].shift(-exps[i][1]),
        )
        for s in B.e:
            if not s.is_integral():
                raise AssertionError(f"operator image at {i} is not in normal form")
        det = B.det()
        if det.is_zero() or det.val != 0:
            raise AssertionError(f"operator image at {i} has non-unit part")
    target = apply_operator(kind, j, tuple(tuple(x) for x in r), p)
    for i in range(f):
        if tuple(sorted(exps[i], reverse=True)) != target[i]:
            raise AssertionError("diagonal exponents disagree with the Hodge operator")
    return new, exps


def default_field(tau: TameType) -> GF:
    return coefficient_field(tau.p, tau.fprime)
