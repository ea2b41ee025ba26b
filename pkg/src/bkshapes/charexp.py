"""Exact arithmetic of tame characters as exponent residues.

A character of the inertia group (equivalently, of the unit group of a
finite field with p**m elements) is pinned down by a single exponent
residue modulo p**m - 1 with respect to the level-m fundamental character
indexed by 0.  Products of fundamental characters collapse to one residue
via the relation "character at index i+1, raised to p, equals the
character at index i", which gives index i the weight p**((-i) % m).

Everything here is plain integer arithmetic; residues may exceed machine
words, so no numpy.
"""

from __future__ import annotations

from dataclasses import dataclass


class NormDescentError(ArithmeticError):
    """A character that was expected to factor through the norm does not."""


def _weight(p: int, m: int, i: int) -> int:
    # weight of index i; index 0 gets p**m == 1 mod p**m - 1
    return p ** ((-i) % m)


def collapse_exponents(entries, p: int, m: int) -> int:
    """Collapse an exponent tuple indexed by Z/mZ to a residue in [0, p**m - 1).

    Returns sum_i entries[i] * p**(m - i) reduced mod p**m - 1 (the index-0
    weight is 1 because p**m is 1 modulo p**m - 1).
    """
    if m < 1:
        raise ValueError("level must be >= 1")
    if len(entries) != m:
        raise ValueError(f"expected {m} entries, got {len(entries)}")
    mod = p**m - 1
    return sum(a * _weight(p, m, i) for i, a in enumerate(entries)) % mod


def digit_tuple(residue: int, p: int, m: int) -> tuple[int, ...]:
    """The unique tuple in [0, p-1]^m, never all p-1, collapsing to ``residue``.

    Inverse of :func:`collapse_exponents` on canonical representatives.
    """
    mod = p**m - 1
    r = residue % mod
    base = []
    for _ in range(m):
        base.append(r % p)
        r //= p
    # base[j] is the coefficient of p**j; index i carries weight p**((-i) % m)
    return tuple(base[(-i) % m] for i in range(m))


@dataclass(frozen=True)
class CharExp:
    """A tame character of level ``m``: an exponent residue mod p**m - 1."""

    p: int
    level: int
    residue: int

    def __post_init__(self):
        mod = self.p**self.level - 1
        object.__setattr__(self, "residue", self.residue % mod)

    @property
    def modulus(self) -> int:
        return self.p**self.level - 1

    def __mul__(self, other: "CharExp") -> "CharExp":
        if (other.p, other.level) != (self.p, self.level):
            raise ValueError("cannot multiply characters of different levels")
        return CharExp(self.p, self.level, self.residue + other.residue)

    def inverse(self) -> "CharExp":
        return CharExp(self.p, self.level, -self.residue)

    def power(self, n: int) -> "CharExp":
        return CharExp(self.p, self.level, self.residue * n)


def char_from_exponents(entries, p: int, m: int) -> CharExp:
    return CharExp(p, m, collapse_exponents(entries, p, m))


def is_trivial_char(c: CharExp) -> bool:
    return c.residue == 0


def factor_through_norm(c: CharExp, f: int) -> CharExp | None:
    """Descend a level-2f character through the norm to level f, if possible.

    The pullback through the norm multiplies exponents by 1 + p**f, which is
    injective on residues mod p**f - 1.  A residue descends exactly when its
    canonical representative is divisible by p**f + 1 as an integer; the
    result is then unique.  Returns None when no descent exists.
    """
    if c.level != 2 * f:
        raise ValueError(f"expected a character of level {2 * f}, got level {c.level}")
    q = c.p**f
    if c.residue % (q + 1) != 0:
        return None
    return CharExp(c.p, f, c.residue // (q + 1))


def lambda_membership(entries, p: int, f: int) -> bool:
    """Whether an integer tuple gives the trivial product of level-f characters.

    These tuples form the translation lattice used for comparing Hodge types;
    membership means the collapse residue vanishes.
    """
    return collapse_exponents([a % (p**f - 1) for a in entries], p, f) == 0


def solve_twist_chain(d, p: int, m: int) -> tuple[int, ...]:
    """Solve nu[i] = p*nu[i-1] - d[i] around Z/mZ; unique when solvable.

    Solvable exactly when collapse_exponents(d) == 0, in which case the
    solution is the integer tuple with
    ``d[i] == mu-part`` absorbed as ``nu[i] - p*nu[i-1] == -d[i]``.
    """
    if len(d) != m:
        raise ValueError(f"expected {m} entries")
    mod = p**m - 1
    # nu[m] == p**m * nu[0] - sum(p**(m-i) d[i], i=1..m) with d[m] = d[0]
    acc = 0
    for i in range(1, m + 1):
        acc += p ** (m - i) * d[i % m]
    if acc % mod != 0:
        raise ValueError("chain has no integral solution: collapse is nonzero")
    nu0 = acc // mod
    nu = [nu0]
    for i in range(1, m):
        nu.append(p * nu[-1] - d[i])
    assert p * nu[-1] - d[0] == nu0
    return tuple(nu)


def periodic_extension(entries, copies: int) -> tuple[int, ...]:
    """Repeat a level-f tuple to level copies*f (used to pass from f to f')."""
    return tuple(entries) * copies


def level_f_lift_residue(residue: int, p: int, f: int, fprime: int) -> int:
    """Exponent at level fprime of the level-f character with given exponent.

    For fprime == f this is the identity; for fprime == 2f the level-f
    fundamental character at index i is the product of the level-2f ones at
    indices i and i+f, so the exponent is multiplied by 1 + p**f.
    """
    if fprime == f:
        return residue % (p**f - 1)
    if fprime == 2 * f:
        return (residue * (1 + p**f)) % (p ** (2 * f) - 1)
    raise ValueError("level must be f or 2f")
