"""Explicit constants and inequalities, with verification sweeps.

Every evaluator returns a certified ball; a comparison "lhs <= rhs"
passes only when the upper bound of lhs sits at or below the lower bound
of rhs (exact rational comparison), so a pass can never be a rounding
artifact.  Throughout, the iterated logarithms are natural-base:
loglog(x) and logloglog(x); a base-2 reading makes the constants
inconsistent.

Domain gates are lenient at the edges: a grid point is rejected only
when it is *certainly* outside the stated domain, so evaluating exactly
at an interval endpoint (the common case: sigma = 1 + 1/(c log p)) is
accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .arith import bt_bound, pi_sum, primes_in_range
from .balls import (
    BallReal,
    DomainError,
    EnclosureError,
    cert_le,
    cert_lt,
    log_int_ball,
    pi_ball,
)
from .classnumber import ANALYTIC_CAP, kummer_log_ratio
from .lfunc import (
    DEFAULT_C,
    eq2_detail,
    f_at_one,
    f_derivatives,
    siegel_scan,
)

C_FLOOR = Fraction("6.4355")  # "big enough" zero-free-region constant


@dataclass
class BoundReport:
    bound_id: str
    p: int
    parameters: dict
    lhs: BallReal | None
    rhs: BallReal | None
    passed: bool
    notes: str = ""


@dataclass
class SigmaNu:
    """The abscissa where the divergent and absolute derivative bounds meet."""

    sigma: BallReal          # sigma_nu itself
    excess: BallReal         # sigma_nu - 1
    floor: BallReal          # closed-form lower bound on the excess


@dataclass
class CrossoverReport:
    p_lo: int
    p_hi: int
    largest_fail: int | None
    first_stable_pass: int | None
    n_primes: int
    outcomes: list = field(default_factory=list)  # (p, passed) ascending


# ---------------------------------------------------------------- helpers


def _ball(x, prec: int) -> BallReal:
    return x if isinstance(x, BallReal) else BallReal.from_any(x, prec)


def _mpq_floor(x) -> int:
    q = mpq(x)
    return int(q.numerator) // int(q.denominator)


def _floor_log(nu: int) -> int:
    """floor(log nu) for integer nu >= 1, certified via a ball."""
    if nu == 1:
        return 0
    b = BallReal.from_int(nu, 96).log()
    lo = _mpq_floor(b.lower())
    hi = _mpq_floor(b.upper())
    if lo != hi:
        raise EnclosureError(f"floor(log {nu}) not resolved")
    return hi


def _factorial(n: int) -> int:
    return math.factorial(n)


def _check_c(c: BallReal) -> None:
    if cert_lt(c, BallReal.from_fraction(C_FLOOR, c.prec)):
        raise DomainError(f"c = {c!r} certainly below {C_FLOOR}")


def _check_sigma_interval(sigma: BallReal, right: BallReal,
                          left_open_at: int = 1) -> None:
    """Reject sigma certainly outside ]left, right]."""
    one = BallReal.from_int(left_open_at, sigma.prec)
    if cert_le(sigma, one):
        raise DomainError(f"sigma = {sigma!r} certainly <= {left_open_at}")
    if cert_lt(right, sigma):
        raise DomainError(f"sigma = {sigma!r} certainly beyond {right!r}")


def _loglog(p: int, prec: int) -> BallReal:
    return log_int_ball(p, prec).log()


# -------------------------------------------------------------- evaluators


def c_p_nu(p: int, nu: int, sigma, c, prec: int = 128) -> BallReal:
    """The derivative-bound constant

        log(2)/(2 c^nu (nu-1)! log p)
      + (loglog p + log c - loglog 2 + 1/e) / (c^nu (nu-1)!)
      + 1/(c log p) + sigma floor(log nu)/(nu - floor(log nu))
      + sigma nu / (c^floor(log nu) floor(log nu)!).
    """
    if nu < 1:
        raise DomainError("c_{p,nu} is defined for nu >= 1")
    if p < 500:
        raise DomainError(f"p = {p} below 500")
    cb = _ball(c, prec)
    _check_positive_c = cb.is_positive()
    if not _check_positive_c:
        raise DomainError("c must be positive")
    sb = _ball(sigma, prec)
    log_p = log_int_ball(p, prec)
    _check_sigma_interval(sb, 1 + 1 / (cb * log_p))
    fl = _floor_log(nu)
    c_nu = cb.pow_int(nu)
    fac = _factorial(nu - 1)
    log2 = log_int_ball(2, prec)
    t1 = log2 / (c_nu * (2 * fac) * log_p)
    t2 = (_loglog(p, prec) + cb.log() - log2.log()
          + BallReal.from_int(-1, prec).exp()) / (c_nu * fac)
    t3 = 1 / (cb * log_p)
    t4 = sb * Fraction(fl, nu - fl)
    t5 = sb * nu / (cb.pow_int(fl) * _factorial(fl))
    return t1 + t2 + t3 + t4 + t5


def lemma22_rhs(p: int, nu: int, sigma, c, beta_indicator: int = 0,
                prec: int = 128) -> BallReal:
    """Divergent-as-sigma->1 derivative bound for f.

    nu = 0: (1 + 1_beta) log(1/(sigma-1)) + 3/2
    nu >= 1: (1 + 1_beta + c_{p,nu}) (nu-1)! / (sigma-1)^nu
    """
    if nu < 0:
        raise DomainError("nu >= 0")
    if p < 500:
        raise DomainError(f"p = {p} below 500")
    if beta_indicator not in (0, 1):
        raise DomainError("beta indicator is 0 or 1")
    cb = _ball(c, prec)
    sb = _ball(sigma, prec)
    log_p = log_int_ball(p, prec)
    _check_sigma_interval(sb, 1 + 1 / (cb * log_p))
    gap = sb - 1
    if not gap.is_positive():
        raise DomainError("sigma - 1 not certainly positive")
    if nu == 0:
        return (1 / gap).log() * (1 + beta_indicator) + Fraction(3, 2)
    cpn = c_p_nu(p, nu, sb, cb, prec)
    return ((cpn + (1 + beta_indicator)) * _factorial(nu - 1)
            / gap.pow_int(nu))


def lemma23_rhs(p: int, nu: int, c, prec: int = 128) -> BallReal:
    """Absolute derivative bound 2 c^nu nu! p (log p)^(nu+1).

    Needs c >= 6.4355 (the zero-free-region constant that is "big
    enough") and (p-1)/log p > c.
    """
    if nu < 0:
        raise DomainError("nu >= 0")
    cb = _ball(c, prec)
    _check_c(cb)
    log_p = log_int_ball(p, prec)
    if cert_le(BallReal.from_int(p - 1, prec) / log_p, cb):
        raise DomainError(f"(p-1)/log p certainly <= c at p = {p}")
    return cb.pow_int(nu) * (2 * _factorial(nu) * p) * log_p.pow_int(nu + 1)


def sigma_nu(p: int, nu: int, c, beta_indicator: int = 0,
             sigma_for_c=None, prec: int = 128) -> SigmaNu:
    """Where the divergent and absolute bounds coincide:

        sigma_nu - 1 = (1/(c log p)) ((1+1_beta+c_{p,nu})/(2 nu p log p))^(1/nu)

    together with its closed-form floor 1/(c log p (2 nu p log p)^(1/nu)).
    """
    if nu < 1:
        raise DomainError("sigma_nu is defined for nu >= 1")
    cb = _ball(c, prec)
    log_p = log_int_ball(p, prec)
    if sigma_for_c is None:
        sigma_for_c = 1 + 1 / (cb * log_p)  # right endpoint: conservative
    cpn = c_p_nu(p, nu, sigma_for_c, cb, prec)
    base = (cpn + (1 + beta_indicator)) / (log_p * (2 * nu * p))
    excess = (base.log() * Fraction(1, nu)).exp() / (cb * log_p)
    floor_base = log_p * (2 * nu * p)
    floor = 1 / (cb * log_p * (floor_base.log() * Fraction(1, nu)).exp())
    if cert_lt(excess, floor):
        raise RuntimeError("sigma_nu fell below its closed-form floor")
    return SigmaNu(sigma=excess + 1, excess=excess, floor=floor)


def thm31_bound(p: int, c, beta_indicator: int = 0,
                prec: int = 128) -> BallReal:
    """|f(1)| bound (1 + 2*1_beta + e^(1/c)) loglog p + explicit O(1):

        (3 + e^(1/c)) log c + 0.791 e^(1/c) + 10.720 + 0.943/c.
    """
    if p <= 500:
        raise DomainError(f"p = {p} not above 500")
    if beta_indicator not in (0, 1):
        raise DomainError("beta indicator is 0 or 1")
    cb = _ball(c, prec)
    _check_c(cb)
    e1c = (1 / cb).exp()
    llp = _loglog(p, prec)
    return ((e1c + (1 + 2 * beta_indicator)) * llp
            + (e1c + 3) * cb.log()
            + e1c * Fraction(791, 1000)
            + Fraction(10720, 1000)
            + BallReal.from_fraction(Fraction(943, 1000), prec) / cb)


def default_c(p: int, prec: int = 128) -> BallReal:
    """c = 6.4355 loglog p / loglog 500; exceeds 6.4355 for p > 500."""
    if p <= 500:
        raise DomainError(f"p = {p} not above 500")
    return (_loglog(p, prec) / _loglog(500, prec)) * C_FLOOR


def cor33_rhs(p: int, prec: int = 128) -> BallReal:
    """((p-1)/4) log(4 pi^2 / 39): what |f(1)| must stay under for the
    h_p^- <= 2p (p/39)^((p-1)/4) form."""
    pi2_4 = pi_ball(prec).pow_int(2) * 4
    return (pi2_4 / 39).log() * Fraction(p - 1, 4)


def cor33_crossover(p_lo: int, p_hi: int, prec: int = 128) -> CrossoverReport:
    """Scan thm31_bound(p, default_c(p), 1) <= ((p-1)/4) log(4 pi^2/39).

    Returns the largest failing prime and the first prime from which the
    comparison passes for every later prime in range.  Each comparison is
    resolved by certified inequality (precision doubles on a tie).
    """
    # [9001, 11000] holds the same primes as [9000, 11000]
    if p_lo > 9001 or p_hi < 11000:
        raise DomainError("scan range must cover the primes of [9000, 11000]")
    outcomes = []
    for p in primes_in_range(p_lo, p_hi):
        bits = prec
        while True:
            lhs = thm31_bound(p, default_c(p, bits), 1, bits)
            rhs = cor33_rhs(p, bits)
            if cert_le(lhs, rhs):
                outcomes.append((p, True))
                break
            if cert_lt(rhs, lhs):
                outcomes.append((p, False))
                break
            bits *= 2
            if bits > 4096:
                raise EnclosureError(f"comparison unresolved at p = {p}")
    largest_fail = None
    first_stable = None
    for p, ok in outcomes:
        if not ok:
            largest_fail = p
            first_stable = None
        elif first_stable is None:
            first_stable = p
    return CrossoverReport(p_lo=p_lo, p_hi=p_hi, largest_fail=largest_fail,
                           first_stable_pass=first_stable,
                           n_primes=len(outcomes), outcomes=outcomes)


# ------------------------------------------------------------------ sweeps


def _beta_for(p: int, force_beta: bool, prec: int):
    if force_beta:
        return 1, None
    rep = siegel_scan(p, prec=prec)
    return rep.indicator, rep


def _report_le(bound_id: str, p: int, params: dict, lhs: BallReal,
               rhs: BallReal, notes: str = "") -> BoundReport:
    return BoundReport(bound_id=bound_id, p=p, parameters=params,
                       lhs=lhs, rhs=rhs, passed=cert_le(lhs, rhs),
                       notes=notes)


def default_x_grid(p: int) -> list[int]:
    return sorted({2 * p, 10 * p, p * p, 10 ** 7})


def verify(bound_id: str, p_lo: int, p_hi: int, *, c=None, prec: int = 128,
           nu_values=(0, 1, 2, 3), x_grid=None, X: int = 10 ** 7,
           sigma=2, force_beta: bool = False) -> list[BoundReport]:
    """One certified BoundReport per grid point, ascending p.

    bound ids: lemma21, lemma22, lemma23, thm31, thm11, eq2 (alias
    eq2_identity), cor33 (alias cor33_crossover).  Infeasible points are
    reported as passed with a "skipped" note rather than failed.
    """
    bound_id = {"eq2": "eq2_identity", "cor33": "cor33_crossover"}.get(
        bound_id, bound_id)
    primes = primes_in_range(p_lo, p_hi)
    out: list[BoundReport] = []

    if bound_id == "lemma21":
        for p in primes:
            if p <= 500:
                raise DomainError("lemma21 needs p > 500")
            for x in (x_grid or default_x_grid(p)):
                if x <= p:
                    continue
                for cls in (1, -1):
                    val = pi_sum(p, cls, x)
                    lhs = BallReal.from_fraction(val.value, prec)
                    rhs = bt_bound(p, x, prec)
                    out.append(_report_le(
                        "lemma21", p,
                        {"x": x, "cls": cls, "terms": val.terms}, lhs, rhs))
        return out

    if bound_id in ("lemma22", "lemma23"):
        c_in = Fraction(c) if c is not None else DEFAULT_C
        cb = _ball(c_in, prec)
        for p in primes:
            beta, siegel = _beta_for(p, force_beta, prec)
            log_p = log_int_ball(p, prec)
            inv = 1 / (cb * log_p)
            scales = (1,) if bound_id == "lemma22" else (1, 2)
            for scale in scales:
                sb = 1 + inv * scale
                derivs = f_derivatives(p, max(nu_values), sb, prec,
                                       siegel=siegel)
                for nu in nu_values:
                    lhs = abs(derivs[nu].value)
                    if bound_id == "lemma22":
                        rhs = lemma22_rhs(p, nu, sb, cb, beta, prec)
                    else:
                        rhs = lemma23_rhs(p, nu, cb, prec)
                    out.append(_report_le(
                        bound_id, p,
                        {"nu": nu, "sigma_scale": scale,
                         "sigma": float(sb.mid), "c": str(c_in),
                         "beta": beta}, lhs, rhs))
        return out

    if bound_id in ("thm31", "thm11"):
        for p in primes:
            beta, siegel = _beta_for(p, force_beta, prec)
            cb = _ball(c, prec) if c is not None else default_c(p, prec)
            rhs = thm31_bound(p, cb, beta, prec)
            c_label = str(Fraction(c)) if c is not None else "default"
            params = {"c": c_label, "beta": beta}
            if bound_id == "thm31":
                lhs = abs(f_at_one(p, prec, siegel=siegel).value)
                out.append(_report_le("thm31", p, params, lhs, rhs))
            else:
                if p > ANALYTIC_CAP:
                    out.append(BoundReport(
                        bound_id="thm11", p=p, parameters=params,
                        lhs=None, rhs=rhs, passed=True,
                        notes=f"skipped: p beyond analytic cap {ANALYTIC_CAP}"))
                    continue
                lhs = abs(kummer_log_ratio(p, prec))
                out.append(_report_le("thm11", p, params, lhs, rhs))
        return out

    if bound_id == "eq2_identity":
        for p in primes:
            det = eq2_detail(p, sigma, X, prec)
            out.append(BoundReport(
                bound_id="eq2_identity", p=p,
                parameters={"sigma": str(Fraction(sigma)), "X": X,
                            "terms": det.terms},
                lhs=det.absdiff, rhs=det.tail,
                passed=cert_le(det.absdiff, det.tail)
                and det.enclosure.contains_zero(),
                notes=f"width={float(det.enclosure.rad):.3e}"))
        return out

    if bound_id == "cor33_crossover":
        rep = cor33_crossover(p_lo, p_hi, prec)
        ok = (rep.largest_fail == 9649
              and rep.first_stable_pass is not None
              and 9649 < rep.first_stable_pass <= 9700)
        knife = thm31_bound(9649, default_c(9649, prec), 1, prec)
        out.append(BoundReport(
            bound_id="cor33_crossover", p=rep.largest_fail or 0,
            parameters={"p_lo": p_lo, "p_hi": p_hi,
                        "first_stable_pass": rep.first_stable_pass,
                        "n_primes": rep.n_primes},
            lhs=knife, rhs=cor33_rhs(9649, prec), passed=ok,
            notes=f"largest_fail={rep.largest_fail} "
                  f"first_stable_pass={rep.first_stable_pass}"))
        return out

    raise DomainError(f"unknown bound id {bound_id!r}")
