"""Dirichlet L-functions mod p near s = 1, as certified balls.

For non-principal chi,

    L(s, chi) = p^(-s) sum_{a=1}^{p-1} chi(a) H(s, a/p),

with H(s, x) = zeta(s, x) - 1/(s-1): the pole cancels exactly against
sum_a chi(a) = 0, so one pole-free Hurwitz family serves every character
and every expansion point including s0 = 1.

f(sigma) = sum_{chi odd} log L(sigma, chi) [- log(sigma - beta) if a real
zero beta was located] is assembled as an *exactly real* ball: conjugate
character pairs contribute 2 Re of the log-jet, whose order-0 term is
log|L|^2 / 2 and whose higher terms come from a recurrence that never
evaluates the order-0 complex logarithm.  No branch of log is ever chosen
inside f, so no branch can be chosen wrongly.

The eq-(2)-style identity check deliberately goes the other way: it takes
per-character principal logarithms (valid at sigma >= 2 where
|L - 1| <= zeta(2) - 1 < 1) so that a systematic 2 pi k offset anywhere
in the character/log machinery would surface as a fat residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from gmpy2 import mpc, mpq

from .arith import _prime_power_arrays, is_prime
from .balls import (
    _RU,
    BallComplex,
    BallReal,
    DomainError,
    EnclosureError,
    PrecisionExhausted,
    _eps,
    _nctx,
    jet_log_tail,
    log_int_ball,
)
from .chars import Character, build_table, quadratic_values
from .hurwitz import EmPlan

DEFAULT_C = Fraction("6.4355")
MAX_PREC = 4096


@dataclass
class SiegelZeroReport:
    """Outcome of the real-zero scan for the quadratic odd character."""

    p: int
    present: bool
    beta: BallReal | None
    interval: tuple[BallReal, int] | None  # (sigma0, 1) that was scanned
    c: Fraction
    method: str
    certified: bool
    prec_bits: int

    @property
    def indicator(self) -> int:
        return 1 if self.present else 0


@dataclass
class FValue:
    p: int
    order: int
    sigma: BallReal
    value: BallReal
    siegel: SiegelZeroReport | None


def h_family(p: int, s, K: int, prec: int) -> list[list[BallReal]]:
    """[H-jet at a/p for a = 1..p-1]; index 0 holds None."""
    plan = EmPlan(s, K, prec, regularized=True)
    fam: list = [None]
    for a in range(1, p):
        fam.append(plan.jet(Fraction(a, p)))
    return fam


def _p_pow_jet(p: int, s: BallReal, K: int, prec: int) -> list[BallReal]:
    """Jet of p^(-s0-t): p^(-s0) (-log p)^r / r!."""
    lg = log_int_ball(p, prec)
    c = (-(s * lg)).exp()
    out = [c]
    for r in range(1, K + 1):
        c = c * (-lg) * Fraction(1, r)
        out.append(c)
    return out


def _hot_tables(p: int, fam, K: int, prec: int, rad_w) -> tuple[list, list]:
    """Per-order midpoint arrays and a j-independent radius bound.

    For sum_a w_a h_a with |w_a| = 1, root midpoints off by <= rad_w per
    coordinate, and real h_a carried as mid +/- rad:

        |error per coordinate| <= rad_w (S_abs + S_rad) + (1 + rad_w) S_rad
                                  + rounding,

    rounding <= (2p+2)(1+rad_w) S_abs eps for the p-1 correctly rounded
    muls and adds at working precision (partial sums stay below
    (1+rad_w) S_abs).  S_abs = sum |mid h_a|, S_rad = sum rad h_a.
    """
    one_plus = _RU.add(1, rad_w)
    round_coef = _RU.mul(_RU.mul(2 * p + 2, one_plus), _eps(prec))
    mids = []
    bound = []
    for r in range(K + 1):
        mr = [None]
        s_abs = _RU.add(0, 0)
        s_rad = _RU.add(0, 0)
        for a in range(1, p):
            b = fam[a][r]
            mr.append(b.mid)
            s_abs = _RU.add(s_abs, abs(b.mid))
            s_rad = _RU.add(s_rad, b.rad)
        e = _RU.add(
            _RU.add(_RU.mul(rad_w, _RU.add(s_abs, s_rad)),
                    _RU.mul(one_plus, s_rad)),
            _RU.mul(round_coef, s_abs),
        )
        mids.append(mr)
        bound.append(e)
    return mids, bound


def _char_h_jet(table, j: int, fam, K: int, prec: int, hot=None) -> list[BallComplex]:
    """sum_a chi_j(a) H_a as a complex jet (raw-midpoint hot loop)."""
    p = table.p
    roots, rad_w = table.roots_raw(prec)
    if hot is None:
        hot = _hot_tables(p, fam, K, prec, rad_w)
    mids, bound = hot
    dlog = table.dlog
    n = p - 1
    ctx = _nctx(prec)
    mul = ctx.mul
    add = ctx.add
    out = []
    for r in range(K + 1):
        mr = mids[r]
        acc = mpc(0, precision=(prec, prec))
        for a in range(1, p):
            acc = add(acc, mul(roots[(j * dlog[a]) % n], mr[a]))
        e = bound[r]
        out.append(BallComplex(BallReal(acc.real, e, prec),
                               BallReal(acc.imag, e, prec)))
    return out


def l_jet(chi: Character, s, K: int, prec: int, fam=None) -> list[BallComplex]:
    """Coefficient jet of L(s0+t, chi) for non-principal chi; s0 = 1 fine."""
    if chi.principal:
        raise DomainError("principal character: L has a pole; not supported")
    p = chi.p
    table = build_table(p)
    sb = BallReal.from_any(s, prec)
    if fam is None:
        fam = h_family(p, sb, K, prec)
    inner = _char_h_jet(table, chi.j, fam, K, prec)
    pj = _p_pow_jet(p, sb, K, prec)
    out = []
    for r in range(K + 1):
        acc = None
        for i in range(r + 1):
            t = inner[i] * pj[r - i]
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def l_value_derivs(chi: Character, s, K: int = 0, prec: int = 128) -> list[BallComplex]:
    """[L(s,chi), L'(s,chi), ..., L^(K)(s,chi)] as certified complex balls."""
    jets = l_jet(chi, s, K, prec)
    fact = 1
    out = []
    for r, c in enumerate(jets):
        if r:
            fact *= r
        out.append(c * fact)
    return out


def log_l_derivs(chi: Character, sigma, K: int = 0, prec: int = 128) -> list[BallComplex]:
    """Derivatives of the principal log L along the real axis.

    The order-0 value takes the principal branch of log on the L-ball;
    if the ball straddles the cut an EnclosureError escapes (recompute
    at higher precision).  Orders >= 1 are branch-free.
    """
    U = l_jet(chi, sigma, K, prec)
    V0 = U[0].log()
    tail = jet_log_tail(U) if K else []
    out = [V0]
    fact = 1
    for r, v in enumerate(tail, start=1):
        fact *= r
        out.append(v * fact)
    return out


# --------------------------------------------------------- f and its jets


def _f_jet(p: int, K: int, sigma, prec: int) -> list[BallReal]:
    """Coefficients of sum_{chi odd} log L(sigma + t, chi): exactly real."""
    if p < 3 or not is_prime(p):
        raise DomainError(f"p = {p} must be an odd prime")
    table = build_table(p)
    sb = BallReal.from_any(sigma, prec)
    fam = h_family(p, sb, K, prec)
    pj = _p_pow_jet(p, sb, K, prec)
    half = (p - 1) // 2
    out = [BallReal.from_int(0, prec) for _ in range(K + 1)]

    _, rad_w = table.roots_raw(prec)
    hot = _hot_tables(p, fam, K, prec, rad_w)
    for j in range(1, half, 2):  # odd j strictly below (p-1)/2: pairs
        inner = _char_h_jet(table, j, fam, K, prec, hot=hot)
        U = []
        for r in range(K + 1):
            acc = inner[0] * pj[r]
            for i in range(1, r + 1):
                acc = acc + inner[i] * pj[r - i]
            U.append(acc)
        # log L_j + log L_jbar = 2 Re log L_j = log |L_j|^2
        out[0] = out[0] + U[0].abs2().log()
        if K:
            V = jet_log_tail(U)
            for r in range(1, K + 1):
                out[r] = out[r] + V[r - 1].re * 2

    if half % 2 == 1:  # p = 3 mod 4: the quadratic character is odd
        vals = quadratic_values(p)
        inner = []
        for r in range(K + 1):
            acc = BallReal.from_int(0, prec)
            for a in range(1, p):
                acc = acc + fam[a][r] if vals[a] == 1 else acc - fam[a][r]
            inner.append(acc)
        U = []
        for r in range(K + 1):
            acc = inner[0] * pj[r]
            for i in range(1, r + 1):
                acc = acc + inner[i] * pj[r - i]
            U.append(acc)
        if not U[0].is_positive():
            raise EnclosureError(
                f"L(sigma, quadratic chi mod {p}) not certified positive")
        out[0] = out[0] + U[0].log()
        if K:
            V = jet_log_tail(U)
            for r in range(1, K + 1):
                out[r] = out[r] + V[r - 1]
    return out


def _siegel_coeffs(sigma: BallReal, beta: BallReal, K: int) -> list[BallReal]:
    """Jet coefficients of log(sigma - beta + t)."""
    d = sigma - beta
    out = [d.log()]
    inv = 1 / d
    powv = inv
    for r in range(1, K + 1):
        out.append(powv * Fraction((-1) ** (r - 1), r))
        powv = powv * inv
    return out


def f_derivatives(p: int, max_order: int, sigma, prec: int = 128,
                  siegel: SiegelZeroReport | None = None) -> list[FValue]:
    """All derivatives f, f', ..., f^(max_order) at sigma from one jet.

    f(sigma) = sum_{chi odd} log L(sigma, chi), minus log(sigma - beta)
    when `siegel` reports a located real zero beta.  sigma = 1 exactly is
    allowed (pole-free evaluation); sigma must not dip below 1.
    """
    sb = BallReal.from_any(sigma, prec)
    exact_one = sb.mid == 1 and sb.rad == 0
    if not exact_one and not (mpq(sb.mid) - mpq(sb.rad) >= 1):
        raise DomainError(f"sigma = {sb!r} must be >= 1")
    jet = _f_jet(p, max_order, sb, prec)
    if siegel is not None and siegel.present:
        sc = _siegel_coeffs(sb, siegel.beta, max_order)
        jet = [a - b for a, b in zip(jet, sc)]
    out = []
    fact = 1
    for r, coeff in enumerate(jet):
        if r:
            fact *= r
        out.append(FValue(p=p, order=r, sigma=sb, value=coeff * fact,
                          siegel=siegel))
    return out


def f_derivative(p: int, nu: int, sigma, prec: int = 128,
                 siegel: SiegelZeroReport | None = None) -> FValue:
    """nu-th derivative of f at sigma (see f_derivatives)."""
    return f_derivatives(p, nu, sigma, prec, siegel=siegel)[nu]


def f_at_one(p: int, prec: int = 128,
             siegel: SiegelZeroReport | None = None) -> FValue:
    """f(1) = sum_{chi odd} log L(1, chi) (Siegel-adjusted if reported)."""
    return f_derivative(p, 0, 1, prec, siegel=siegel)


# ------------------------------------------------------------ eq (2) check


@dataclass
class Eq2Detail:
    p: int
    sigma: Fraction
    X: int
    enclosure: BallReal  # |LHS - truncated RHS| widened by the tail bound
    absdiff: BallReal    # |LHS - truncated RHS| alone
    tail: BallReal       # certified tail bound (p-1)/2 X^(1-sigma)/(sigma-1)
    lhs_im: BallReal     # imaginary part of the character-log sum
    terms: int


def eq2_detail(p: int, sigma, X: int, prec: int = 128) -> Eq2Detail:
    sigma = Fraction(sigma)
    if not (2 <= sigma <= 3):
        raise DomainError(f"sigma = {sigma} outside [2, 3]")
    if X < p:
        raise DomainError(f"X = {X} below p = {p}")
    table = build_table(p)
    sb = BallReal.from_fraction(sigma, prec)
    fam = h_family(p, sb, 0, prec)
    pj = _p_pow_jet(p, sb, 0, prec)

    total = BallComplex.from_real(0, prec)
    for j in range(1, p - 1, 2):
        inner = _char_h_jet(table, j, fam, 0, prec)
        total = total + (inner[0] * pj[0]).log()

    values, qs, ms = _prime_power_arrays(X)
    r1 = np.flatnonzero(values % p == 1)
    r2 = np.flatnonzero(values % p == (p - 1))
    acc = BallReal.from_int(0, prec)
    int_sigma = sigma.denominator == 1
    nterms = 0
    for idx, sign in ((r1, 1), (r2, -1)):
        for i in idx:
            v, m = int(values[i]), int(ms[i])
            if int_sigma:
                term = BallReal.from_fraction(
                    Fraction(sign, m * v ** int(sigma)), prec)
            else:
                vb = BallReal.from_int(v, prec)
                term = (-(sb * vb.log())).exp() * Fraction(sign, m)
            acc += term
            nterms += 1
    rhs = acc * Fraction(p - 1, 2)

    diff = total - BallComplex.from_real(rhs, prec)
    absdiff = abs(diff)
    xb = BallReal.from_int(X, prec)
    tail = ((-(sb - 1) * xb.log()).exp() / (sb - 1)) * Fraction(p - 1, 2)
    enclosure = absdiff.widen(tail.upper())
    return Eq2Detail(p=p, sigma=sigma, X=X, enclosure=enclosure,
                     absdiff=absdiff, tail=tail, lhs_im=total.im, terms=nterms)


def eq2_residual(p: int, sigma, X: int, prec: int = 128) -> BallReal:
    """Enclosure of |sum_{chi odd} Log L - (p-1)/2 (class sums <= X)|.

    The radius includes the certified prime-power tail beyond X, so the
    ball must contain 0 whenever the identity holds.
    """
    return eq2_detail(p, sigma, X, prec).enclosure


# ------------------------------------------------------------- Siegel scan


def _l_quadratic(p: int, sigma: BallReal, prec: int) -> BallReal:
    """L(sigma, chi_quad) for p = 3 mod 4, via the exact +-1 values."""
    vals = quadratic_values(p)
    plan = EmPlan(sigma, 0, prec, regularized=True)
    acc = BallReal.from_int(0, prec)
    for a in range(1, p):
        h = plan.jet(Fraction(a, p))[0]
        acc = acc + h if vals[a] == 1 else acc - h
    return (-(sigma * log_int_ball(p, prec))).exp() * acc


def siegel_scan(p: int, c: Fraction = DEFAULT_C, prec: int = 128,
                max_prec: int = MAX_PREC) -> SiegelZeroReport:
    """Certify absence (or locate) a real zero of L(s, chi_quad) in
    [1 - 1/(c log p), 1).

    For p = 1 mod 4 every odd character is non-real, and non-real
    characters admit no exceptional real zero, so the report is immediate.
    For p = 3 mod 4 the sign of L at sigma0 = 1 - 1/(c log p) decides:
    positive certifies absence on [sigma0, 1) (at most one simple real
    zero can sit in the near-1 region, and L(1) > 0); negative brackets a
    zero, which is then bisected to radius 2^(-prec/4).
    """
    if p < 3 or not is_prime(p):
        raise DomainError(f"p = {p} must be an odd prime")
    c = Fraction(c)
    if c <= 0:
        raise DomainError("c must be positive")
    if p % 4 == 1:
        return SiegelZeroReport(
            p=p, present=False, beta=None, interval=None, c=c,
            method="no-odd-quadratic-character", certified=True,
            prec_bits=prec)

    bits = prec
    while True:
        sigma0 = 1 - 1 / (BallReal.from_fraction(c, bits) * log_int_ball(p, bits))
        val = _l_quadratic(p, sigma0, bits)
        if val.is_positive():
            return SiegelZeroReport(
                p=p, present=False, beta=None, interval=(sigma0, 1), c=c,
                method="quadratic-L-positive-at-sigma0", certified=True,
                prec_bits=bits)
        if val.is_negative():
            beta = _bisect_zero(
                lambda s: _l_quadratic(p, s, bits), sigma0, bits, prec)
            return SiegelZeroReport(
                p=p, present=True, beta=beta, interval=(sigma0, 1), c=c,
                method="quadratic-L-negative-at-sigma0-bisected",
                certified=True, prec_bits=bits)
        if bits >= max_prec:
            raise PrecisionExhausted(
                f"sign of L(sigma0, chi_quad) mod {p} undetermined at {bits} bits")
        bits *= 2


def _bisect_zero(fn, lo_ball: BallReal, bits: int, prec: int) -> BallReal:
    """Bracketed root of an increasing-through-zero fn on [lo, 1].

    fn(lo) < 0 certified on entry; fn(1^-) > 0 from L(1, chi) > 0.
    Width target 2^(-prec/4).  Midpoints that cannot be signed at this
    precision stop the refinement (the returned ball stays certified,
    just wider); callers escalate if they need more.
    """
    lo = mpq(lo_ball.mid) - mpq(lo_ball.rad)
    hi = mpq(1)
    target = mpq(2) ** -(prec // 4)
    while hi - lo > target:
        mid = (lo + hi) / 2
        v = fn(BallReal.from_fraction(Fraction(mid.numerator, mid.denominator), bits))
        if v.is_negative():
            lo = mid
        elif v.is_positive():
            hi = mid
        else:
            break
    center = (lo + hi) / 2
    radius = (hi - lo) / 2
    b = BallReal.from_fraction(Fraction(center.numerator, center.denominator), bits)
    return b.widen(Fraction(radius.numerator, radius.denominator))


def sum_log_l_at_one(p: int, prec: int = 128) -> BallReal:
    """sum_{chi odd} log L(1, chi), exactly real by pairing."""
    return _f_jet(p, 0, 1, prec)[0]
