"""Sieve, primitive roots and exact prime-power class sums.

Oracles are deliberately naive re-implementations (trial division, direct
enumeration) so the fast sieve/vectorized paths are checked against
something independent.
"""

import math
import random
from fractions import Fraction

import mpmath
import pytest

from kummer.arith import (
    PiSum,
    PrimePower,
    bt_bound,
    is_prime,
    pi_sum,
    prime_powers_in_class,
    primes_in_range,
    primitive_root,
    sieve_primes,
)
from kummer.balls import DomainError

mpmath.mp.dps = 50


def naive_is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, int(math.isqrt(n)) + 1))


def test_sieve_against_trial_division():
    primes = sieve_primes(2000)
    assert primes == [n for n in range(2001) if naive_is_prime(n)]
    assert sieve_primes(1) == []
    assert sieve_primes(2) == [2]


def test_primes_in_range():
    assert primes_in_range(500, 550) == [503, 509, 521, 523, 541, 547]
    assert primes_in_range(9640, 9680) == [9643, 9649, 9661, 9677, 9679]


def test_is_prime_spot():
    for n, want in [(1, False), (2, True), (9, False), (199, True),
                    (2003, True), (2001, False), (9649, True)]:
        assert is_prime(n) is want


@pytest.mark.parametrize("p,g", [
    (3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (23, 5), (41, 6),
    (43, 3), (71, 7), (191, 19), (409, 21),
])
def test_primitive_root_known_values(p, g):
    assert primitive_root(p) == g


def test_primitive_root_is_generator():
    rng = random.Random(2)
    for p in rng.sample(sieve_primes(3000)[2:], 25):
        g = primitive_root(p)
        seen = set()
        v = 1
        for _ in range(p - 1):
            v = v * g % p
            seen.add(v)
        assert len(seen) == p - 1


def naive_prime_powers(p, a, x):
    out = []
    for v in range(2, int(x) + 1):
        w, q0, m = v, None, 0
        for q in range(2, v + 1):  # smallest divisor of v is prime
            if w % q == 0:
                q0 = q
                while w % q == 0:
                    w //= q
                    m += 1
                break
        if w == 1 and v % p == a % p:
            out.append((q0, m, v))
    return out


def test_prime_powers_in_class_matches_naive():
    for p, a, x in [(5, 1, 200), (5, 4, 200), (7, 6, 300), (11, 1, 150), (3, 2, 100)]:
        got = [(pp.q, pp.m, pp.value) for pp in prime_powers_in_class(p, a, x)]
        assert got == naive_prime_powers(p, a, x)


def test_pi_sum_hand_example():
    # p=5, x=25: class 1 holds 11 and 2^4=16; class 4 holds 2^2, 3^2, 19, 24=no
    s1 = pi_sum(5, 1, 25)
    assert s1.value == Fraction(1, 11) + Fraction(1, 4 * 16)
    assert s1.terms == 2
    s4 = pi_sum(5, 4, 25)
    # class 4 mod 5 up to 25: 4=2^2, 9=3^2, 19, 24 (excluded: not a prime power)
    assert s4.value == Fraction(1, 8) + Fraction(1, 18) + Fraction(1, 19)
    assert s4.terms == 3


def test_pi_sum_boundary_inclusive():
    # x exactly on a prime power in the class: term included
    s = pi_sum(5, 1, 16)
    assert s.value == Fraction(1, 11) + Fraction(1, 64)
    s = pi_sum(5, 1, Fraction(3199, 200))  # 15.995 < 16
    assert s.value == Fraction(1, 11)


def test_pi_sum_pairwise_equals_sequential():
    pps = prime_powers_in_class(7, 1, 50000)
    seq = sum((Fraction(1, pp.m * pp.value) for pp in pps), Fraction(0))
    assert pi_sum(7, 1, 50000).value == seq


def test_pi_sum_returns_dataclass_fields():
    s = pi_sum(13, 12, 1000)
    assert isinstance(s, PiSum) and s.p == 13 and s.a == 12
    assert s.x == 1000 and s.terms > 0


def test_bt_bound_matches_reference():
    for p, x in [(503, 10**7), (503, 1006), (1009, 10090), (2003, 2003**2)]:
        b = bt_bound(p, x, prec=128)
        ref = 2 * mpmath.mpf(x) / ((p - 1) * mpmath.log(mpmath.mpf(x) / p))
        assert abs(mpmath.mpf(str(b.mid)) - ref) <= mpmath.mpf(str(b.rad)) + mpmath.mpf(10) ** -30


def test_bt_bound_domain():
    with pytest.raises(DomainError):
        bt_bound(503, 503)
    with pytest.raises(DomainError):
        bt_bound(503, 100)


def test_prime_power_value_field():
    pp = PrimePower(2, 4, 16)
    assert pp.value == pp.q**pp.m
