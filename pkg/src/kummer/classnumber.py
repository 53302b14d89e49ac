"""Exact relative class number h_p^- by two independent routes.

h_p^- = 2p prod_{chi odd} (-B_{1,chi}/2) with the generalized Bernoulli
number B_{1,chi} = (1/p) sum_{a=1}^{p-1} a chi(a).

The analytic route folds the sum using chi(p-a) = -chi(a) for odd chi:

    T_j = sum_{a=1}^{(p-1)/2} (p-2a) chi_j(a),   -B_{1,chi_j}/2 = T_j/(2p),

so h_p^- = 2p (2p)^(-(p-1)/2) prod_{j odd} T_j.  The product is accumulated
as a complex ball in ascending-j order; the true value is real, so the
imaginary enclosure must contain 0, and the result counts as certified
only when the real enclosure pins a unique integer: midpoint within 1/4 of
it, radius below 1/4 (both checked as exact rationals).  On failure the
working precision doubles.

The independent oracle is the Maillet determinant

    |det(R(a b^{-1} mod p))_{1<=a,b<=(p-1)/2}| = p^((p-3)/2) h_p^-,

with R(x) the least positive residue, computed exactly over the integers
by fraction-free (Bareiss) elimination: no floating point anywhere, hence
no failure mode shared with the ball route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpc, mpq

from .arith import is_prime
from .balls import (
    _RU,
    BallComplex,
    BallReal,
    DomainError,
    PrecisionExhausted,
    _eps,
    _nctx,
    log_int_ball,
    pi_ball,
)
from .chars import Character, build_table

ANALYTIC_CAP = 4001
DEFAULT_ORACLE_CEILING = 199


@dataclass
class RelativeClassNumberRecord:
    p: int
    h_minus: int
    log_g: BallReal
    log_ratio: BallReal
    method: str  # "analytic" | "maillet" | "both"
    precision_bits: int
    certified: bool


def _require_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise DomainError(f"p = {p} must be an odd prime")


# ------------------------------------------------------------- analytic


def b1_chi(chi: Character, prec: int = 128) -> BallComplex:
    """B_{1,chi} = (1/p) sum_{a=1}^{p-1} a chi(a) for odd chi."""
    if not chi.odd:
        raise DomainError("B_{1,chi} factor defined here for odd chi only")
    p = chi.p
    table = build_table(p)
    roots = table.roots(prec)
    dlog = table.dlog
    n = p - 1
    acc = BallComplex.from_real(0, prec)
    for a in range(1, p):
        acc = acc + roots[(chi.j * dlog[a]) % n] * a
    return acc * Fraction(1, p)


def default_precision(p: int) -> int:
    """Initial bits for the analytic product: ceil((p/4) log2 p) + 128.

    h_p^- has about (p/4) log2 p - (p/2) log2(2 pi) bits, so this
    overshoots safely.
    """
    return math.ceil(p / 4 * math.log2(p)) + 128


def analytic_product(p: int, prec: int) -> BallComplex:
    """2p prod_{j odd} (-B_{1,chi_j}/2) as one complex ball.

    Each T_j = sum_{a <= (p-1)/2} (p-2a) chi_j(a) is accumulated on raw
    root midpoints; with C = sum (p-2a) = ((p-1)/2)^2 the per-coordinate
    error is below C rad_w (input radii) plus (2p+2) C (1+rad_w) eps for
    the correctly rounded muls and adds.  Factors multiply in ascending-j
    order.
    """
    table = build_table(p)
    roots, rad_w = table.roots_raw(prec)
    dlog = table.dlog
    n = p - 1
    half = n // 2
    ctx = _nctx(prec)
    mul = ctx.mul
    add = ctx.add
    coef_sum = half * half
    e = _RU.mul(
        coef_sum,
        _RU.add(rad_w,
                _RU.mul(_RU.mul(2 * p + 2, _RU.add(1, rad_w)), _eps(prec))),
    )
    prod = BallComplex.from_real(1, prec)
    for j in range(1, n, 2):
        acc = mpc(0, precision=(prec, prec))
        for a in range(1, half + 1):
            acc = add(acc, mul(roots[(j * dlog[a]) % n], p - 2 * a))
        tj = BallComplex(BallReal(acc.real, e, prec),
                         BallReal(acc.imag, e, prec))
        prod = prod * tj
    return prod * Fraction(2 * p, (2 * p) ** half)


def _certify_integer(v: BallReal) -> tuple[int, bool]:
    """(nearest integer to mid, whether |mid - n| + rad < 1/4 exactly)."""
    m = mpq(v.mid)  # exact; float rounding would corrupt wide integers
    n = (2 * int(m.numerator) + int(m.denominator)) // (2 * int(m.denominator))
    dist = abs(m - n)
    return n, dist + mpq(v.rad) < mpq(1, 4)


def hminus_analytic(p: int, prec: int | None = None,
                    max_prec: int | None = None) -> RelativeClassNumberRecord:
    """Certified h_p^- from the ball product, escalating precision."""
    _require_odd_prime(p)
    if p > ANALYTIC_CAP:
        raise DomainError(f"p = {p} beyond the analytic cap {ANALYTIC_CAP}")
    bits = prec if prec is not None else default_precision(p)
    if max_prec is None:
        max_prec = 16 * bits
    while True:
        v = analytic_product(p, bits)
        if v.im.contains_zero():
            h_ball = abs(v)  # true value is real positive
            h, ok = _certify_integer(h_ball)
            if ok and h >= 1:
                lg = g_factor_log(p, bits)
                return RelativeClassNumberRecord(
                    p=p,
                    h_minus=h,
                    log_g=lg,
                    log_ratio=BallReal.from_int(h, bits).log() - lg,
                    method="analytic",
                    precision_bits=bits,
                    certified=True,
                )
        if 2 * bits > max_prec:
            raise PrecisionExhausted(
                f"h_p^- for p = {p} not certified at {bits} bits")
        bits *= 2


# ------------------------------------------------------------- Maillet


def maillet_matrix(p: int) -> list[list[int]]:
    """Least positive residues R(a b^{-1} mod p), 1 <= a, b <= (p-1)/2."""
    _require_odd_prime(p)
    half = (p - 1) // 2
    inv = [0] + [pow(b, -1, p) for b in range(1, half + 1)]
    return [[(a * inv[b]) % p for b in range(1, half + 1)]
            for a in range(1, half + 1)]


def bareiss_determinant(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination.

    Every division is exact (Sylvester identity); a nonzero remainder
    would mean corrupted input and raises instead of truncating.
    """
    a = [list(row) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                q, r = divmod(pivot * row_i[j] - aik * row_k[j], prev)
                if r:
                    raise RuntimeError("fraction-free step left a remainder")
                row_i[j] = q
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def maillet_determinant(p: int) -> int:
    """Signed determinant of the Maillet matrix."""
    return bareiss_determinant(maillet_matrix(p))


def maillet_hminus(p: int) -> int:
    """h_p^- = |D_p| / p^((p-3)/2), asserting exact divisibility."""
    d = abs(maillet_determinant(p))
    h, r = divmod(d, p ** ((p - 3) // 2))
    if r:
        raise RuntimeError(
            f"Maillet determinant for p = {p} not divisible by p^((p-3)/2)")
    return h


# ----------------------------------------------------------- G and ratio


def g_factor_log(p: int, prec: int = 128) -> BallReal:
    """log G(p) = log(2p) + ((p-1)/4) (log p - log(4 pi^2))."""
    _require_odd_prime(p)
    log_p = log_int_ball(p, prec)
    log_4pi2 = pi_ball(prec).log() * 2 + log_int_ball(4, prec)
    return log_int_ball(2 * p, prec) + (log_p - log_4pi2) * Fraction(p - 1, 4)


def kummer_log_ratio(p: int, prec: int = 128,
                     h_minus: int | None = None) -> BallReal:
    """log(h_p^- / G(p)) from the certified integer; equals sum over odd
    chi of log L(1,chi) within radii (the cross-path consistency check)."""
    if h_minus is None:
        h_minus = hminus(p).h_minus
    if h_minus < 1:
        raise DomainError("h_p^- is a positive integer")
    return BallReal.from_int(h_minus, prec).log() - g_factor_log(p, prec)


# ---------------------------------------------------------- orchestrator


def hminus(p: int, method: str = "auto", prec: int | None = None,
           oracle_ceiling: int = DEFAULT_ORACLE_CEILING,
           ) -> RelativeClassNumberRecord:
    """h_p^- with the dual-oracle cross-check below the ceiling.

    method "auto" runs both routes for p <= oracle_ceiling (the
    determinant cost grows steeply) and the analytic route alone above;
    "analytic", "maillet", and "both" force the respective routes.
    """
    _require_odd_prime(p)
    if method == "auto":
        method = "both" if p <= oracle_ceiling else "analytic"
    if method == "analytic":
        return hminus_analytic(p, prec=prec)
    if method == "maillet":
        h = maillet_hminus(p)
        bits = prec if prec is not None else 128
        lg = g_factor_log(p, bits)
        return RelativeClassNumberRecord(
            p=p,
            h_minus=h,
            log_g=lg,
            log_ratio=BallReal.from_int(h, bits).log() - lg,
            method="maillet",
            precision_bits=bits,
            certified=True,
        )
    if method == "both":
        rec = hminus_analytic(p, prec=prec)
        h_det = maillet_hminus(p)
        if h_det != rec.h_minus:
            raise RuntimeError(
                f"oracle mismatch at p = {p}: "
                f"analytic {rec.h_minus} vs determinant {h_det}")
        rec.method = "both"
        return rec
    raise DomainError(f"unknown method {method!r}")
