"""Prime-power bookkeeping and exact class sums.

The central object is

    Pi(x; p, a) = sum over prime powers q^m <= x with q^m = a (mod p)
                  of 1/(m q^m),

computed as an exact Fraction (pairwise summation keeps intermediate
denominators tame), together with the Brun-Titchmarsh style comparison
bound 2x / ((p-1) log(x/p)) evaluated as a certified ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .balls import BallReal, DomainError

# ------------------------------------------------------------------ sieve

_SIEVE_LIMIT = 0
_SIEVE_PRIMES = np.empty(0, dtype=np.int64)


def sieve_primes(limit: int) -> list[int]:
    """Ascending primes <= limit."""
    return [int(q) for q in _prime_array(limit)]


def _prime_array(limit: int) -> np.ndarray:
    global _SIEVE_LIMIT, _SIEVE_PRIMES
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    if limit > _SIEVE_LIMIT:
        is_prime = np.ones(limit + 1, dtype=bool)
        is_prime[:2] = False
        for q in range(2, int(limit**0.5) + 1):
            if is_prime[q]:
                is_prime[q * q:: q] = False
        _SIEVE_PRIMES = np.flatnonzero(is_prime).astype(np.int64)
        _SIEVE_LIMIT = limit
    return _SIEVE_PRIMES[_SIEVE_PRIMES <= limit]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in sieve_primes(int(n**0.5) + 1):
        if q * q > n:
            break
        if n % q == 0:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    arr = _prime_array(hi)
    return [int(q) for q in arr[(arr >= lo) & (arr <= hi)]]


def primitive_root(p: int) -> int:
    """Smallest primitive root mod an odd prime p."""
    if p == 2:
        return 1
    if not is_prime(p) or p < 3:
        raise DomainError(f"{p} is not an odd prime")
    n = p - 1
    fac = []
    m = n
    for q in sieve_primes(int(n**0.5) + 1):
        if q * q > m:
            break
        if m % q == 0:
            fac.append(q)
            while m % q == 0:
                m //= q
    if m > 1:
        fac.append(m)
    for g in range(2, p):
        if all(pow(g, n // q, p) != 1 for q in fac):
            return g
    raise RuntimeError(f"no primitive root found for {p}")  # unreachable


# ----------------------------------------------------------- prime powers


@dataclass(frozen=True)
class PrimePower:
    q: int
    m: int
    value: int  # q**m


@dataclass(frozen=True)
class PiSum:
    p: int
    a: int
    x: Fraction
    value: Fraction
    terms: int


_PP_CACHE: dict[str, np.ndarray] = {}
_PP_LIMIT = 0


def _prime_power_arrays(limit: int):
    """Sorted arrays (values, qs, ms) of all prime powers q^m <= limit."""
    global _PP_LIMIT
    if limit > _PP_LIMIT or not _PP_CACHE:
        primes = _prime_array(limit)
        vals = [primes]
        qs = [primes]
        ms = [np.ones(len(primes), dtype=np.int64)]
        m = 2
        while (1 << m) <= limit:
            qmax = int(round(limit ** (1.0 / m))) + 1
            while qmax**m > limit:
                qmax -= 1
            base = _prime_array(qmax)
            if len(base):
                v = base.astype(object) ** m  # exact, then back to int64
                v = v.astype(np.int64)
                keep = v <= limit
                vals.append(v[keep])
                qs.append(base[keep])
                ms.append(np.full(int(keep.sum()), m, dtype=np.int64))
            m += 1
        values = np.concatenate(vals)
        order = np.argsort(values, kind="stable")
        _PP_CACHE["values"] = values[order]
        _PP_CACHE["q"] = np.concatenate(qs)[order]
        _PP_CACHE["m"] = np.concatenate(ms)[order]
        _PP_LIMIT = limit
    cut = np.searchsorted(_PP_CACHE["values"], limit, side="right")
    return (_PP_CACHE["values"][:cut], _PP_CACHE["q"][:cut], _PP_CACHE["m"][:cut])


def _as_cutoff(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def prime_powers_in_class(p: int, a: int, x) -> list[PrimePower]:
    """Prime powers q^m <= x with q^m = a (mod p), ascending by value."""
    if not is_prime(p) or p < 3:
        raise DomainError(f"p = {p} must be an odd prime")
    xf = _as_cutoff(x)
    if xf < 2:
        raise DomainError(f"cutoff x = {x} is below 2")
    limit = int(xf)  # floor; exact boundary handled below
    values, qs, ms = _prime_power_arrays(max(limit, 4))
    target = a % p
    sel = np.flatnonzero((values % p) == target)
    out = []
    for i in sel:
        v = int(values[i])
        if Fraction(v) <= xf:
            out.append(PrimePower(int(qs[i]), int(ms[i]), v))
    return out


def _pairwise_fraction_sum(terms: list[Fraction]) -> Fraction:
    """Divide-and-conquer sum; exact, with balanced denominators."""
    n = len(terms)
    if n == 0:
        return Fraction(0)
    if n == 1:
        return terms[0]
    mid = n // 2
    return _pairwise_fraction_sum(terms[:mid]) + _pairwise_fraction_sum(terms[mid:])


def pi_sum(p: int, a: int, x) -> PiSum:
    """Exact Pi(x; p, a) as a Fraction."""
    pps = prime_powers_in_class(p, a, x)
    terms = [Fraction(1, pp.m * pp.value) for pp in pps]
    val = _pairwise_fraction_sum(terms)
    return PiSum(p=p, a=a % p, x=_as_cutoff(x), value=val, terms=len(terms))


def bt_bound(p: int, x, prec: int = 128) -> BallReal:
    """Certified ball for 2x / ((p-1) log(x/p)); requires x > p."""
    xf = _as_cutoff(x)
    if xf <= p:
        raise DomainError(f"bt_bound needs x > p (got x = {x}, p = {p})")
    xb = BallReal.from_fraction(xf, prec)
    ratio = BallReal.from_fraction(xf / p, prec)
    return (xb * 2) / (ratio.log() * (p - 1))
