"""Small finite fields F_{p^m} with table-driven arithmetic.

Elements are integer codes in [0, p**m): the code of sum(c_j * x**j) is
sum(c_j * p**j) where x is a root of the defining polynomial.  The defining
polynomial is the lexicographically least monic irreducible of degree m
over F_p, ordering candidates by the packed integer of their lower
coefficients (constant term least significant); this keeps every run of
every build reproducible with no external tables.

Addition and multiplication are full q-by-q lookup tables, so fields are
only constructed for q up to MAX_TABLE_Q.  Array-valued operations accept
numpy arrays of codes and broadcast through the tables.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_TABLE_Q = 4096

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in _SMALL_PRIMES:
        if n == d:
            return True
        if n % d == 0:
            return False
    d = 49
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    # remainder of num by monic den, coefficient lists with index = degree
    num = [c % p for c in num]
    dd = len(den) - 1
    while len(num) > dd:
        lead = num[-1]
        if lead:
            shift = len(num) - 1 - dd
            for j, c in enumerate(den):
                num[shift + j] = (num[shift + j] - lead * c) % p
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return num


def _all_monic(p: int, deg: int):
    for packed in range(p**deg):
        coeffs = []
        n = packed
        for _ in range(deg):
            coeffs.append(n % p)
            n //= p
        yield coeffs + [1]


def _is_irreducible(poly: list[int], p: int) -> bool:
    deg = len(poly) - 1
    if deg == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in _all_monic(p, d):
            if not _poly_mod(list(poly), cand, p):
                return False
    return True


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Coefficients (degree-ascending, monic) of the chosen defining polynomial."""
    for poly in _all_monic(p, m):
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """F_{p^m} with precomputed add/mul/inv tables over integer codes."""

    def __init__(self, p: int, m: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        q = p**m
        if q > MAX_TABLE_Q:
            raise ValueError(f"field size {q} exceeds table limit {MAX_TABLE_Q}")
        self.p = p
        self.m = m
        self.q = q
        self.poly = least_irreducible(p, m)

        dtype = np.int16 if q < 2**15 else np.int32
        codes = np.arange(q)
        digits = np.zeros((q, m), dtype=dtype)
        n = codes.copy()
        for j in range(m):
            digits[:, j] = n % p
            n //= p
        self._digits = digits
        powers = p ** np.arange(m, dtype=np.int64)
        self._powers = powers

        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
        self.ADD = add.astype(dtype)
        self.NEG = (((-digits) % p) @ powers).astype(dtype)

        mul = np.zeros((q, q), dtype=dtype)
        for a in range(q):
            pa = [int(c) for c in digits[a]]
            for b in range(a, q):
                pb = [int(c) for c in digits[b]]
                prod = [0] * (2 * m - 1)
                for i, ca in enumerate(pa):
                    if ca:
                        for j, cb in enumerate(pb):
                            prod[i + j] = (prod[i + j] + ca * cb) % p
                rem = _poly_mod(prod, list(self.poly), p)
                code = sum(c * p**j for j, c in enumerate(rem))
                mul[a, b] = code
                mul[b, a] = code
        self.MUL = mul

        inv = np.zeros(q, dtype=dtype)
        for a in range(1, q):
            row = mul[a]
            inv[a] = int(np.nonzero(row == 1)[0][0])
        self.INV = inv
        self.dtype = dtype

    # -- scalar helpers ------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.ADD[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.ADD[a, self.NEG[b]])

    def neg(self, a: int) -> int:
        return int(self.NEG[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.MUL[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.INV[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = 1
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def dot(self, xs, ys) -> int:
        """Code of sum_i xs[i]*ys[i] for arrays of codes (digitwise summation)."""
        if len(xs) == 0:
            return 0
        prods = self.MUL[np.asarray(xs), np.asarray(ys)]
        dsum = self._digits[prods].sum(axis=0) % self.p
        return int(dsum @ self._powers)

    def from_prime_field(self, c: int) -> int:
        return c % self.p

    def element_digits(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits[a])

    def nonzero(self):
        return range(1, self.q)

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))


@lru_cache(maxsize=None)
def field(p: int, m: int = 1) -> GF:
    return GF(p, m)


def coefficient_field(p: int, fprime: int) -> GF:
    """Largest admissible F_{p^d} with d dividing fprime that fits in tables.

    The faithful choice is d == fprime (the residue field of the big
    unramified extension); for large (p, f) sweeps we fall back to the
    largest divisor that keeps q within the table limit.
    """
    for d in sorted((d for d in range(1, fprime + 1) if fprime % d == 0), reverse=True):
        if p**d <= MAX_TABLE_Q:
            return field(p, d)
    raise ValueError(f"no admissible coefficient field for p={p}")
