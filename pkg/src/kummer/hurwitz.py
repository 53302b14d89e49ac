"""Hurwitz zeta near the real axis with certified error and s-derivatives.

Euler-Maclaurin at a real expansion point s0 > 0.75:

    zeta(s, a) = sum_{k=0}^{N-1} (k+a)^(-s)
               + (N+a)^(1-s)/(s-1)
               + (N+a)^(-s)/2
               + sum_{j=1}^{M} B_{2j}/(2j)! (s)_{2j-1} (N+a)^(-s-2j+1)
               + R_M(s, a)

Derivatives in s are carried as jets: truncated power series in t about
s0, coefficient lists [c_0..c_K] with d^r/ds^r = r! c_r.  Every piece of
the formula is assembled in ball arithmetic, and the remainder is bounded
rigorously, coefficient by coefficient:

    |R_M coefficient r| <= 4/(2pi)^(2M+1) * (1/r!) *
        sum_{i<=r} C(r,i) D_i J_{r-i},

    D_i  = |d^i/dt^i (s0+t)_{2M+1}| <= i! C(2M+1, i) (s0)_{2M+1} / s0^i,
    J_k  = int_N^inf log^k(x+a) (x+a)^(-beta-1) dx
         = (N+a)^(-beta) k!/beta^(k+1) sum_{i<=k} (beta L0)^i / i!,
    beta = s0 + 2M (lower bound used where it must shrink J),
    L0   = log(N+a),

which comes from |periodic B_{2M+1}(x)| <= 4 (2M+1)!/(2pi)^(2M+1) and
d^i of the rising factorial as a sum over C(2M+1,i) subproducts, each at
most (s0)_{2M+1}/s0^i for s0 > 0.

The pole-free variant H(s, a) = zeta(s, a) - 1/(s-1) is entire in s and
supports expansion at s0 = 1 exactly:

    [(N+a)^(1-s0-t) - 1]/(s0-1+t)  at s0 = 1 is  (e^(-tL) - 1)/t,
    coefficient r = (-1)^(r+1) L^(r+1)/(r+1)!,   L = log(N+a).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import gmpy2
from gmpy2 import mpfr
from mpmath import bernfrac

from .balls import (
    BallReal,
    DomainError,
    EnclosureError,
    jet_mul,
    _RU,
    _RD,
)

_BERN_OVER_FACT: dict[int, Fraction] = {}


def bernoulli_over_factorial(j: int) -> Fraction:
    """B_{2j}/(2j)! as an exact Fraction."""
    f = _BERN_OVER_FACT.get(j)
    if f is None:
        p, q = bernfrac(2 * j)
        f = Fraction(int(p), int(q)) / factorial(2 * j)
        _BERN_OVER_FACT[j] = f
    return f


def default_shape(prec: int) -> tuple[int, int]:
    """(N, M) defaults; generous enough that R_M sits far below 2^-prec."""
    N = max(32, -(-35 * prec // 100))
    M = -(-20 * prec // 100)
    return N, M


def _as_s_ball(s, prec: int) -> BallReal:
    b = BallReal.from_any(s, prec)
    if not (_RD.sub(b.mid, b.rad) > mpfr("0.75")):
        raise DomainError(f"s = {b!r} must certainly exceed 0.75")
    return b


def _as_a_fraction(a) -> Fraction:
    if isinstance(a, int):
        a = Fraction(a)
    if not isinstance(a, Fraction):
        raise DomainError(f"a must be rational, got {type(a).__name__}")
    if not (0 < a <= 2):
        # contractually (0,1]; (1,2] kept working so the recurrence
        # zeta(s,a) = a^-s + zeta(s,a+1) is testable in-range
        raise DomainError(f"a = {a} outside (0, 2]")
    return a


class EmPlan:
    """Euler-Maclaurin constants for one (s0, K, prec), reusable across a.

    Building a plan costs a few hundred ball operations; `jet(a)` is then
    the per-argument price.  The L-function layer evaluates thousands of
    a = n/p against a single plan.
    """

    def __init__(self, s, K: int, prec: int, N: int | None = None,
                 M: int | None = None, regularized: bool = False):
        if prec < 64:
            raise DomainError("prec must be at least 64")
        if K < 0:
            raise DomainError("derivative order must be >= 0")
        self.prec = prec
        self.K = K
        self.regularized = regularized
        self.s = _as_s_ball(s, prec)
        dN, dM = default_shape(prec)
        self.N = dN if N is None else N
        self.M = dM if M is None else M
        if self.N < 1 or self.M < 1:
            raise DomainError("need N >= 1 and M >= 1")
        self.at_one = (self.s.mid == 1) and (self.s.rad == 0)
        if self.at_one and not regularized:
            raise DomainError("zeta has its pole at s = 1; use the regularized variant")
        if not self.at_one and self.s.contains(1):
            raise EnclosureError("s-ball straddles the pole at 1")

        one = BallReal.from_int(1, prec)
        # geometric jet of 1/(s0-1+t): (-1)^r / (s0-1)^(r+1)
        if not self.at_one:
            d = self.s - 1
            g = one / d
            self.pole_jet = [g]
            for _ in range(K):
                g = -(g / d)
                self.pole_jet.append(g)
        else:
            self.pole_jet = None

        # rising-factorial jets (s0+t)_{2j-1} for j = 1..M, degree-capped at K
        self.rf_jets: list[list[BallReal]] = []
        zero = BallReal.from_int(0, prec)
        cur = [self.s, one] + [zero] * max(0, K - 1)
        cur = cur[: K + 1]

        def mul_linear(jet, c):
            out = []
            for r in range(K + 1):
                t = jet[r] * c
                if r >= 1:
                    t = t + jet[r - 1]
                out.append(t)
            return out

        if K == 0:
            cur = [self.s]
        self.rf_jets.append(list(cur))
        for j in range(2, self.M + 1):
            # extend (s)_{2j-3} by (s+2j-3)(s+2j-2)
            cur = mul_linear(cur, self.s + (2 * j - 3))
            cur = mul_linear(cur, self.s + (2 * j - 2))
            self.rf_jets.append(list(cur))

        self.bern = [BallReal.from_fraction(bernoulli_over_factorial(j), prec)
                     for j in range(1, self.M + 1)]

        # ---- remainder machinery (64-bit directed bounds) ----
        two_m1 = 2 * self.M + 1
        s_lo = _RD.sub(self.s.mid, self.s.rad)
        s_hi = _RU.add(self.s.mid, self.s.rad)
        rf_hi = mpfr(1)
        x = s_hi
        for _ in range(two_m1):
            rf_hi = _RU.mul(rf_hi, x)
            x = _RU.add(x, 1)
        pi_lo = _RD.const_pi()
        twopi_pow_lo = mpfr(1)
        for _ in range(two_m1):
            twopi_pow_lo = _RD.mul(twopi_pow_lo, _RD.mul(mpfr(2), pi_lo))
        self._rem_front = _RU.div(mpfr(4), twopi_pow_lo)
        self._d_bound = []
        for i in range(K + 1):
            num = _RU.mul(_RU.mul(mpfr(factorial(i)), mpfr(comb(two_m1, i))), rf_hi)
            den = _RD.pow(s_lo, i)
            self._d_bound.append(_RU.div(num, den))
        self._beta_lo = _RD.add(s_lo, 2 * self.M)
        self._beta_hi = _RU.add(s_hi, 2 * self.M)
        self._s_lo = s_lo

    # ------------------------------------------------------------- core

    def _remainder_radii(self, a: Fraction) -> list[mpfr]:
        """Upper bounds for |coefficient r of R_M|, r = 0..K."""
        na = Fraction(self.N) + a
        na_lo = _RD.div(mpfr(na.numerator), mpfr(na.denominator))
        l0_hi = _RU.log(_RU.div(mpfr(na.numerator), mpfr(na.denominator)))
        # (N+a)^(-beta) upper: beta_lo and log lower
        l0_lo = _RD.log(na_lo)
        pow_hi = _RU.exp(_RU.minus(_RD.mul(self._beta_lo, l0_lo)))
        J = []
        for k in range(self.K + 1):
            ssum = mpfr(0)
            term = mpfr(1)
            for i in range(k + 1):
                if i:
                    term = _RU.div(_RU.mul(term, _RU.mul(self._beta_hi, l0_hi)), i)
                ssum = _RU.add(ssum, term)
            jk = _RU.mul(pow_hi, _RU.div(mpfr(factorial(k)), _RD.pow(self._beta_lo, k + 1)))
            J.append(_RU.mul(jk, ssum))
        out = []
        for r in range(self.K + 1):
            acc = mpfr(0)
            for i in range(r + 1):
                acc = _RU.add(acc, _RU.mul(_RU.mul(mpfr(comb(r, i)), self._d_bound[i]), J[r - i]))
            out.append(_RU.mul(self._rem_front, _RU.div(acc, mpfr(factorial(r)))))
        return out

    def jet(self, a) -> list[BallReal]:
        """Coefficients [c_0..c_K] of zeta(s0+t, a) (or H(s0+t, a))."""
        a = _as_a_fraction(a)
        prec, K = self.prec, self.K
        s = self.s

        S = [BallReal.from_int(0, prec) for _ in range(K + 1)]
        for k in range(self.N):
            u = BallReal.from_fraction(k + a, prec)
            L = u.log()
            c = (-(s * L)).exp()  # (k+a)^(-s0)
            S[0] = S[0] + c
            negL = -L
            for r in range(1, K + 1):
                c = c * negL * Fraction(1, r)
                S[r] = S[r] + c

        u = BallReal.from_fraction(Fraction(self.N) + a, prec)
        L = u.log()
        negL = -L
        e0 = (-(s * L)).exp()          # (N+a)^(-s0)
        c1 = e0 * u                    # (N+a)^(1-s0)
        E = [BallReal.from_int(1, prec)]
        for r in range(1, K + 1):
            E.append(E[-1] * negL * Fraction(1, r))

        # integral term (with or without the pole removed)
        if self.at_one:
            # (e^(-tL) - 1)/t : coefficient r is (-1)^(r+1) L^(r+1)/(r+1)!
            I = []
            c = -L
            I.append(c)
            for r in range(1, K + 1):
                c = c * negL * Fraction(1, r + 1)
                I.append(c)
        else:
            CE = [e * c1 for e in E]
            I = jet_mul(CE, self.pole_jet)
            if self.regularized:
                I = [I[r] - self.pole_jet[r] for r in range(K + 1)]

        # boundary half-term
        T = [e * e0 * Fraction(1, 2) for e in E]

        # Bernoulli block: C1 * E * sum_j bern_j RF_j u^(-2j)
        u2inv = 1 / (u * u)
        pw = u2inv  # u^(-2j) for j = 1
        Q = [BallReal.from_int(0, prec) for _ in range(K + 1)]
        for j in range(self.M):
            q = self.bern[j] * pw
            rf = self.rf_jets[j]
            for r in range(K + 1):
                Q[r] = Q[r] + rf[r] * q
            if j + 1 < self.M:
                pw = pw * u2inv
        B = [b * c1 for b in jet_mul(E, Q)]

        rem = self._remainder_radii(a)
        out = []
        for r in range(K + 1):
            coeff = S[r] + I[r] + T[r] + B[r]
            out.append(coeff.widen(rem[r]))
        return out


def hurwitz_zeta_derivs(s, a, K: int = 0, prec: int = 128) -> list[BallReal]:
    """[zeta(s,a), zeta'(s,a), ..., zeta^(K)(s,a)] as certified balls.

    s: real, > 0.75, not 1 (ball must not straddle the pole);
    a: rational in (0, 1] (recurrence-testing range (1, 2] tolerated);
    result radii are checked against 2^(-prec/2).
    """
    plan = EmPlan(s, K, prec, regularized=False)
    return _scaled_checked(plan, a, prec)


def hurwitz_zeta_reg_derivs(s, a, K: int = 0, prec: int = 128) -> list[BallReal]:
    """Derivatives of H(s, a) = zeta(s, a) - 1/(s-1); s = 1 allowed."""
    plan = EmPlan(s, K, prec, regularized=True)
    return _scaled_checked(plan, a, prec)


def _scaled_checked(plan: EmPlan, a, prec: int) -> list[BallReal]:
    coeffs = plan.jet(a)
    tol = _RU.pow(mpfr(2), -(prec // 2))
    out = []
    for r, c in enumerate(coeffs):
        d = c * factorial(r)
        if not (d.rad <= tol):
            raise EnclosureError(
                f"derivative {r} radius {d.rad} exceeds 2^-{prec // 2}; "
                "raise prec or narrow the inputs")
        out.append(d)
    return out


def riemann_zeta(s, prec: int = 128) -> BallReal:
    return hurwitz_zeta_derivs(s, Fraction(1), 0, prec)[0]
