"""Dirichlet characters mod an odd prime p in exponent form.

All p-1 characters are indexed by j in [0, p-2] against the smallest
primitive root g:  chi_j(g^k) = omega^(j k) with omega = exp(2 pi i/(p-1)).
chi_j is odd iff j is odd; j = (p-1)/2 is the quadratic character.  Values
are powers of omega looked up through a discrete-log table, as certified
complex balls.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpc

from .balls import BallComplex, DomainError, pi_ball
from .arith import is_prime, primitive_root


@dataclass(frozen=True)
class Character:
    """chi_j mod p; value at g^k is omega^(j k)."""

    p: int
    j: int

    def __post_init__(self):
        if not (0 <= self.j <= self.p - 2):
            raise DomainError(f"character index {self.j} outside [0, {self.p - 2}]")

    @property
    def odd(self) -> bool:
        return self.j % 2 == 1

    @property
    def even(self) -> bool:
        return self.j % 2 == 0

    @property
    def principal(self) -> bool:
        return self.j == 0

    @property
    def quadratic(self) -> bool:
        return 2 * self.j == self.p - 1

    def conjugate(self) -> "Character":
        return Character(self.p, 0 if self.j == 0 else self.p - 1 - self.j)


class CharacterTable:
    """Discrete logs and root-of-unity tables for one modulus."""

    def __init__(self, p: int):
        if p < 3 or not is_prime(p):
            raise DomainError(f"p = {p} must be an odd prime")
        self.p = p
        self.g = primitive_root(p)
        dlog = [0] * p  # dlog[0] unused
        v = 1
        for k in range(p - 1):
            dlog[v] = k
            v = v * self.g % p
        self.dlog = dlog
        self._roots: dict[int, list[BallComplex]] = {}
        self._raw: dict[int, tuple[list[mpc], object]] = {}

    def roots(self, prec: int) -> list[BallComplex]:
        """[omega^t for t in 0..p-2] as certified balls.

        omega from ball sin/cos of 2 pi/(p-1); the chain of ball products
        keeps every radius rigorous (growth is linear in t and microscopic
        next to 2^-prec scales that matter here).
        """
        tab = self._roots.get(prec)
        if tab is None:
            n = self.p - 1
            theta = pi_ball(prec) * 2 / n
            w = BallComplex(theta.cos(), theta.sin())
            tab = [BallComplex.from_real(1, prec)]
            for _ in range(1, n):
                tab.append(tab[-1] * w)
            self._roots[prec] = tab
        return tab

    def roots_raw(self, prec: int):
        """(midpoints as mpc, uniform radius bound) for hot loops.

        The radius bound dominates |true omega^t - mid_t| coordinatewise
        for every t; callers combine it with their own coefficient sums.
        """
        pair = self._raw.get(prec)
        if pair is None:
            balls = self.roots(prec)
            mids = [mpc(b.re.mid, b.im.mid, precision=(prec, prec)) for b in balls]
            rmax = max(max(b.re.rad, b.im.rad) for b in balls)
            pair = (mids, rmax)
            self._raw[prec] = pair
        return pair

    def exponent(self, chi: Character, n: int) -> int:
        """t with chi(n) = omega^t, for gcd(n, p) = 1."""
        if chi.p != self.p:
            raise DomainError("character belongs to a different modulus")
        n %= self.p
        if n == 0:
            raise DomainError("character value at a multiple of p is 0")
        return (chi.j * self.dlog[n]) % (self.p - 1)


@lru_cache(maxsize=64)
def build_table(p: int) -> CharacterTable:
    return CharacterTable(p)


def character_value(chi: Character, n: int, prec: int = 128) -> BallComplex:
    """chi(n) as a ball; exact 0 for n = 0 mod p."""
    if n % chi.p == 0:
        return BallComplex.from_real(0, prec)
    table = build_table(chi.p)
    return table.roots(prec)[table.exponent(chi, n)]


def odd_characters(p: int) -> list[Character]:
    """The (p-1)/2 odd characters, ascending j."""
    build_table(p)  # validates p
    return [Character(p, j) for j in range(1, p - 1, 2)]


def quadratic_character(p: int) -> Character:
    return Character(p, (p - 1) // 2)


def quadratic_values(p: int) -> list[int]:
    """[chi_quad(n) for n in 0..p-1] with values in {0, +1, -1}, exact."""
    table = build_table(p)
    out = [0] * p
    for n in range(1, p):
        out[n] = 1 if table.dlog[n] % 2 == 0 else -1
    return out
