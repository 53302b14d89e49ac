"""Certified midpoint-radius arithmetic on top of MPFR.

A ball (mid, rad) stands for the closed interval [mid - rad, mid + rad].
Every operation returns a ball that contains f(x) whenever x lies in the
input balls: midpoints are computed round-to-nearest at the working
precision, radii are accumulated in a short round-up context, and every
potentially inexact midpoint operation adds one ulp-scale margin
|mid| * 2^(1-prec).  Radii therefore never shrink by rounding, so a
verification that passes on balls passes for the exact values.

Certified comparisons (cert_le, contains, ...) are done in exact rational
arithmetic via mpq, not in floating point.

Nothing here mutates the gmpy2 thread context; all rounding goes through
explicit context objects, so library users' global settings are irrelevant.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq, mpz

RADIUS_PREC = 64

_RU = gmpy2.context(precision=RADIUS_PREC, round=gmpy2.RoundUp)
_RD = gmpy2.context(precision=RADIUS_PREC, round=gmpy2.RoundDown)

_ZERO = mpfr(0)


class DomainError(ValueError):
    """An argument is certainly outside the operation's domain."""


class EnclosureError(ArithmeticError):
    """The input balls are too wide to certify the operation.

    Typical causes: dividing by a ball that straddles zero, taking the
    complex logarithm of a ball that straddles the branch cut.  The usual
    remedy is to recompute the inputs at higher precision.
    """


class PrecisionExhausted(RuntimeError):
    """Certification kept failing up to the configured precision cap."""


_NCTX: dict[int, gmpy2.context] = {}
_EPS: dict[int, mpfr] = {}


def _to_mpq(x) -> mpq:
    # Fractions sometimes carry mpz components (built from gmpy2 results);
    # mpq() rejects those, so normalize through Python ints.
    if isinstance(x, Fraction):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


def _nctx(prec: int) -> gmpy2.context:
    ctx = _NCTX.get(prec)
    if ctx is None:
        ctx = gmpy2.context(precision=prec, round=gmpy2.RoundToNearest)
        _NCTX[prec] = ctx
    return ctx


def _eps(prec: int) -> mpfr:
    # 2^(1-prec), an exact power of two; one of these dominates the
    # round-to-nearest relative error (<= 2^-prec) with slack to spare.
    e = _EPS.get(prec)
    if e is None:
        e = _RU.pow(mpfr(2), 1 - prec)
        _EPS[prec] = e
    return e


def _rad_term(mid: mpfr, prec: int) -> mpfr:
    """Upper bound for the rounding error of the op that produced mid."""
    return _RU.mul(_RU.abs(mid), _eps(prec))


class BallReal:
    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: mpfr, rad: mpfr, prec: int):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # ---------------------------------------------------------------- build

    @classmethod
    def from_int(cls, n: int, prec: int) -> "BallReal":
        m = mpfr(n, prec)
        if mpz(m) == n and gmpy2.is_integer(m):
            return cls(m, _ZERO, prec)
        return cls(m, _rad_term(m, prec), prec)

    @classmethod
    def from_fraction(cls, q, prec: int) -> "BallReal":
        q = _to_mpq(q)
        m = mpfr(q, prec)
        # conversion rounds once in an unknown direction; 2 ulps cover it
        r = _RU.mul(_rad_term(m, prec), 2)
        if mpq(m) == q:
            r = _ZERO
        return cls(m, r, prec)

    @classmethod
    def from_any(cls, x, prec: int) -> "BallReal":
        if isinstance(x, BallReal):
            return x
        if isinstance(x, int):
            return cls.from_int(x, prec)
        if isinstance(x, (Fraction, type(mpq(1)))):
            return cls.from_fraction(x, prec)
        if isinstance(x, float):
            # floats are exact binary rationals
            return cls.from_fraction(Fraction(x), prec)
        if isinstance(x, type(_ZERO)):
            return cls(mpfr(x, prec), _ZERO if x.precision <= prec else _rad_term(mpfr(x, prec), prec), prec)
        raise TypeError(f"cannot coerce {type(x).__name__} to BallReal")

    @classmethod
    def exact(cls, x, prec: int) -> "BallReal":
        b = cls.from_any(x, prec)
        if b.rad != 0:
            raise ValueError(f"{x!r} is not exactly representable at {prec} bits")
        return b

    # ------------------------------------------------------------ inspect

    def upper(self) -> mpfr:
        return _RU.add(self.mid, self.rad)

    def lower(self) -> mpfr:
        return _RD.sub(self.mid, self.rad)

    def mid_fraction(self) -> Fraction:
        return Fraction(int(mpq(self.mid).numerator), int(mpq(self.mid).denominator))

    def upper_fraction(self) -> Fraction:
        m = mpq(self.mid)
        r = mpq(self.rad)
        s = m + r
        return Fraction(int(s.numerator), int(s.denominator))

    def lower_fraction(self) -> Fraction:
        m = mpq(self.mid)
        r = mpq(self.rad)
        s = m - r
        return Fraction(int(s.numerator), int(s.denominator))

    def contains(self, value) -> bool:
        """Exact membership test for an int/Fraction value."""
        return abs(_to_mpq(value) - mpq(self.mid)) <= mpq(self.rad)

    def contains_zero(self) -> bool:
        return _RU.abs(self.mid) <= self.rad

    def is_positive(self) -> bool:
        """True when every point of the ball is > 0."""
        return self.mid > self.rad

    def is_negative(self) -> bool:
        # negating the short radius is exact; comparing mpfr is exact
        return self.mid < _RD.minus(self.rad)

    def __repr__(self) -> str:
        return f"BallReal({self.mid!s} +/- {self.rad!s}, prec={self.prec})"

    def __float__(self) -> float:
        return float(self.mid)

    # ---------------------------------------------------------- arithmetic

    def _coerce(self, other) -> "BallReal":
        return BallReal.from_any(other, self.prec)

    def __add__(self, other) -> "BallReal":
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        m = _nctx(prec).add(self.mid, o.mid)
        r = _RU.add(_RU.add(self.rad, o.rad), _rad_term(m, prec))
        return BallReal(m, r, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "BallReal":
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        m = _nctx(prec).sub(self.mid, o.mid)
        r = _RU.add(_RU.add(self.rad, o.rad), _rad_term(m, prec))
        return BallReal(m, r, prec)

    def __rsub__(self, other) -> "BallReal":
        return self._coerce(other).__sub__(self)

    def __neg__(self) -> "BallReal":
        return BallReal(_nctx(self.prec).minus(self.mid), self.rad, self.prec)

    def __abs__(self) -> "BallReal":
        # |mid| at the ball's own precision is exact
        return BallReal(_nctx(self.prec).abs(self.mid), self.rad, self.prec)

    def __mul__(self, other) -> "BallReal":
        if isinstance(other, int):
            # the int enters the mpfr multiply exactly: one rounding
            m = _nctx(self.prec).mul(self.mid, other)
            r = _RU.add(_RU.mul(self.rad, _RU.abs(mpfr(other, RADIUS_PREC))),
                        _rad_term(m, self.prec))
            return BallReal(m, r, self.prec)
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        m = _nctx(prec).mul(self.mid, o.mid)
        am = _RU.abs(self.mid)
        bm = _RU.abs(o.mid)
        r = _RU.add(_RU.add(_RU.mul(am, o.rad), _RU.mul(bm, self.rad)),
                    _RU.add(_RU.mul(self.rad, o.rad), _rad_term(m, prec)))
        return BallReal(m, r, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BallReal":
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        if not (o.is_positive() or o.is_negative()):
            raise EnclosureError("division by a ball containing zero")
        m = _nctx(prec).div(self.mid, o.mid)
        # |a/b - am/bm| <= (ra + |am/bm| rb) / min|b|
        blo = _RD.sub(_RD.abs(o.mid), o.rad)
        r = _RU.add(
            _RU.div(_RU.add(self.rad, _RU.mul(_RU.abs(m), o.rad)), blo),
            _rad_term(m, prec),
        )
        return BallReal(m, r, prec)

    def __rtruediv__(self, other) -> "BallReal":
        return self._coerce(other).__truediv__(self)

    def pow_int(self, n: int) -> "BallReal":
        """self**n for integer n (binary powering on balls)."""
        if n < 0:
            return BallReal.from_int(1, self.prec) / self.pow_int(-n)
        result = BallReal.from_int(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # ------------------------------------------------------ transcendental
    #
    # One full-precision evaluation at the midpoint; the radius moves
    # through a first-derivative bound evaluated in the 64-bit round-up
    # context.  For monotone f with |f'| maximised at a known endpoint this
    # is as rigorous as endpoint evaluation and three times cheaper.

    def exp(self) -> "BallReal":
        n = _nctx(self.prec)
        m = n.exp(self.mid)
        # |exp'| on the ball <= exp(mid + rad) <= |m| (1+eps) e^rad
        grow = _RU.exp(self.rad)
        r = _RU.add(_RU.mul(self.rad, _RU.mul(_RU.mul(_RU.abs(m), grow),
                                              _RU.add(mpfr(1), _eps(self.prec)))),
                    _rad_term(m, self.prec))
        return BallReal(m, r, self.prec)

    def log(self) -> "BallReal":
        if not self.is_positive():
            raise DomainError("log of a ball not certainly positive")
        n = _nctx(self.prec)
        m = n.log(self.mid)
        lo = _RD.sub(self.mid, self.rad)  # rounded down: safe 1/x bound
        r = _RU.add(_RU.div(self.rad, lo), _rad_term(m, self.prec))
        return BallReal(m, r, self.prec)

    def sqrt(self) -> "BallReal":
        if self.is_negative():
            raise DomainError("sqrt of a certainly negative ball")
        n = _nctx(self.prec)
        if self.is_positive():
            m = n.sqrt(self.mid)
            lo = _RD.sqrt(_RD.sub(self.mid, self.rad))
            r = _RU.add(_RU.div(self.rad, _RU.mul(mpfr(2), lo)),
                        _rad_term(m, self.prec))
            return BallReal(m, r, self.prec)
        # ball touches 0: enclose [0, sqrt(upper)] symmetrically
        hi = _RU.sqrt(_RU.add(self.mid, self.rad))
        half = _RU.div(hi, 2)
        return BallReal(mpfr(half, self.prec), half, self.prec)

    def atan(self) -> "BallReal":
        n = _nctx(self.prec)
        m = n.atan(self.mid)
        r = _RU.add(self.rad, _rad_term(m, self.prec))  # |atan'| <= 1
        return BallReal(m, r, self.prec)

    def sin(self) -> "BallReal":
        n = _nctx(self.prec)
        m = n.sin(self.mid)
        r = _RU.add(self.rad, _rad_term(m, self.prec))  # Lipschitz 1
        return BallReal(m, r, self.prec)

    def cos(self) -> "BallReal":
        n = _nctx(self.prec)
        m = n.cos(self.mid)
        r = _RU.add(self.rad, _rad_term(m, self.prec))
        return BallReal(m, r, self.prec)

    def widen(self, extra) -> "BallReal":
        """Same midpoint, radius increased by `extra` (ball/mpfr/number)."""
        if isinstance(extra, BallReal):
            extra = extra.upper()
        elif not isinstance(extra, type(_ZERO)):
            if isinstance(extra, float):
                extra = Fraction(extra)
            q = abs(_to_mpq(extra))
            extra = _RU.div(q.numerator, q.denominator)  # rounds up
        return BallReal(self.mid, _RU.add(self.rad, _RU.abs(extra)), self.prec)


# ---------------------------------------------------------------- helpers


def pi_ball(prec: int) -> BallReal:
    m = _nctx(prec).const_pi()
    return BallReal(m, _rad_term(m, prec), prec)


def log_int_ball(n: int, prec: int) -> BallReal:
    return BallReal.from_int(n, prec).log()


def ball_sum(items, prec: int) -> BallReal:
    total = BallReal.from_int(0, prec)
    for it in items:
        total = total + it
    return total


def cert_le(a: BallReal, b: BallReal) -> bool:
    """True iff a <= b holds for every pair of points in the balls (exact)."""
    return (mpq(a.mid) + mpq(a.rad)) <= (mpq(b.mid) - mpq(b.rad))


def cert_lt(a: BallReal, b: BallReal) -> bool:
    return (mpq(a.mid) + mpq(a.rad)) < (mpq(b.mid) - mpq(b.rad))


def overlap(a: BallReal, b: BallReal) -> bool:
    return abs(mpq(a.mid) - mpq(b.mid)) <= mpq(a.rad) + mpq(b.rad)


# ----------------------------------------------------------------- complex


class BallComplex:
    __slots__ = ("re", "im")

    def __init__(self, re: BallReal, im: BallReal):
        self.re = re
        self.im = im

    @classmethod
    def from_real(cls, re, prec: int) -> "BallComplex":
        return cls(BallReal.from_any(re, prec), BallReal.from_int(0, prec))

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def __repr__(self) -> str:
        return f"BallComplex({self.re!r}, {self.im!r})"

    def _coerce(self, other) -> "BallComplex":
        if isinstance(other, BallComplex):
            return other
        return BallComplex.from_real(other, self.prec)

    def __add__(self, other) -> "BallComplex":
        o = self._coerce(other)
        return BallComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "BallComplex":
        o = self._coerce(other)
        return BallComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "BallComplex":
        return self._coerce(other).__sub__(self)

    def __neg__(self) -> "BallComplex":
        return BallComplex(-self.re, -self.im)

    def conj(self) -> "BallComplex":
        return BallComplex(self.re, -self.im)

    def __mul__(self, other) -> "BallComplex":
        if isinstance(other, (int, Fraction, BallReal)):
            return BallComplex(self.re * other, self.im * other)
        o = self._coerce(other)
        return BallComplex(self.re * o.re - self.im * o.im,
                           self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> BallReal:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> BallReal:
        return self.abs2().sqrt()

    def __truediv__(self, other) -> "BallComplex":
        if isinstance(other, (int, Fraction, BallReal)):
            return BallComplex(self.re / other, self.im / other)
        o = self._coerce(other)
        d = o.abs2()
        num = self * o.conj()
        return BallComplex(num.re / d, num.im / d)

    def log(self) -> "BallComplex":
        """Principal branch; raises EnclosureError on a cut straddle."""
        prec = self.prec
        mod = self.abs2().log() * Fraction(1, 2)
        re, im = self.re, self.im
        if re.is_positive():
            arg = (im / re).atan()
        elif im.is_positive():
            arg = pi_ball(prec) * Fraction(1, 2) - (re / im).atan()
        elif im.is_negative():
            arg = (re / (-im)).atan() - pi_ball(prec) * Fraction(1, 2)
        else:
            raise EnclosureError(
                "complex log: ball may straddle the branch cut")
        return BallComplex(mod, arg)

    def contains_zero_im(self) -> bool:
        return self.im.contains_zero()


# -------------------------------------------------------------------- jets
#
# A jet is a list [c_0, ..., c_K] of ball coefficients of a truncated
# power series c_0 + c_1 t + ... + c_K t^K.  Derivatives at the expansion
# point are k! c_k.  The same code serves BallReal and BallComplex
# coefficients; only ring operations are used.


def jet_mul(A: list, B: list) -> list:
    K = max(len(A), len(B)) - 1
    out = []
    for r in range(K + 1):
        acc = None
        for i in range(r + 1):
            if i < len(A) and (r - i) < len(B):
                term = A[i] * B[r - i]
                acc = term if acc is None else acc + term
        if acc is None:
            raise ValueError("jet_mul: empty coefficient")
        out.append(acc)
    return out


def jet_add(A: list, B: list) -> list:
    if len(A) != len(B):
        raise ValueError("jet_add: length mismatch")
    return [a + b for a, b in zip(A, B)]


def jet_scale(A: list, s) -> list:
    return [a * s for a in A]


def jet_log_tail(U: list) -> list:
    """Coefficients r = 1..K of log(U(t)), without the order-0 term.

    V_r = (U_r - sum_{i=1}^{r-1} (i/r) V_i U_{r-i}) / U_0; the recurrence
    never touches the order-0 value of the log, so no branch is chosen.
    """
    K = len(U) - 1
    V: list = [None]
    for r in range(1, K + 1):
        acc = U[r]
        for i in range(1, r):
            acc = acc - V[i] * U[r - i] * Fraction(i, r)
        V.append(acc / U[0])
    return V[1:]
