"""Bound evaluators vs independent mpmath transcriptions + sweep plumbing."""

import math
from fractions import Fraction

import mpmath
import pytest

from kummer.balls import BallReal, DomainError, cert_lt
from kummer.bounds import (
    _floor_log,
    c_p_nu,
    cor33_crossover,
    cor33_rhs,
    default_c,
    default_x_grid,
    lemma22_rhs,
    lemma23_rhs,
    sigma_nu,
    thm31_bound,
    verify,
)

C = Fraction("6.4355")

mpmath.mp.dps = 40


def _close(ball: BallReal, ref, tol=1e-25):
    assert abs(float(ball.mid - mpmath.mpf(str(ref)) if False else
               float(ball.mid) - float(ref))) < tol
    assert float(ball.rad) < tol


def _mp_c_p_nu(p, nu, sigma, c):
    fl = int(mpmath.floor(mpmath.log(nu)))
    c = mpmath.mpf(str(c))
    sigma = mpmath.mpf(str(sigma))
    lp = mpmath.log(p)
    return (mpmath.log(2) / (2 * c ** nu * mpmath.factorial(nu - 1) * lp)
            + (mpmath.log(lp) + mpmath.log(c) - mpmath.log(mpmath.log(2))
               + mpmath.exp(-1)) / (c ** nu * mpmath.factorial(nu - 1))
            + 1 / (c * lp)
            + sigma * fl / (nu - fl)
            + sigma * nu / (c ** fl * mpmath.factorial(fl)))


def _mp_thm31(p, c, b):
    c = mpmath.mpf(str(c))
    e1c = mpmath.exp(1 / c)
    return ((1 + 2 * b + e1c) * mpmath.log(mpmath.log(p))
            + (3 + e1c) * mpmath.log(c)
            + mpmath.mpf("0.791") * e1c + mpmath.mpf("10.720")
            + mpmath.mpf("0.943") / c)


def _sigma_right(p, c=C):
    return 1 + 1 / (float(c) * math.log(p))


# ------------------------------------------------------------- floor log


def test_floor_log_boundaries():
    # e ~ 2.718, e^2 ~ 7.389
    assert [_floor_log(v) for v in (1, 2)] == [0, 0]
    assert all(_floor_log(v) == 1 for v in range(3, 8))
    assert all(_floor_log(v) == 2 for v in range(8, 21))


# ----------------------------------------------------------------- c_p_nu


@pytest.mark.parametrize("nu,approx", [(1, 1.746), (8, 0.466)])
def test_c_p_nu_examples(nu, approx):
    s = _sigma_right(503)
    v = c_p_nu(503, nu, s, C)
    assert abs(float(v.mid) - approx) < 2e-3
    assert abs(float(v.mid) - float(_mp_c_p_nu(503, nu, s, C))) < 1e-12


@pytest.mark.parametrize("p,nu", [(503, 1), (503, 3), (1009, 2), (1009, 8)])
def test_c_p_nu_oracle(p, nu):
    s = _sigma_right(p)
    v = c_p_nu(p, nu, s, C, prec=160)
    assert abs(float(v.mid) - float(_mp_c_p_nu(p, nu, s, C))) < 1e-13
    assert float(v.rad) < 1e-30


def test_c_p_nu_domain():
    with pytest.raises(DomainError):
        c_p_nu(503, 0, _sigma_right(503), C)
    with pytest.raises(DomainError):
        c_p_nu(499, 1, 1.01, C)
    with pytest.raises(DomainError):
        c_p_nu(503, 1, 1.2, C)  # certainly beyond 1 + 1/(c log p)
    with pytest.raises(DomainError):
        c_p_nu(503, 1, 1, C)  # left end excluded


# ------------------------------------------------------------ lemma 2.2


def test_lemma22_examples():
    s = _sigma_right(503)
    v0 = lemma22_rhs(503, 0, s, C)
    assert abs(float(v0.mid) - 5.190) < 2e-3
    v1 = lemma22_rhs(503, 1, s, C)
    assert abs(float(v1.mid) - 109.93) < 0.05


def test_lemma22_beta_linearity():
    s = _sigma_right(503)
    for nu in (0, 1, 2):
        base = lemma22_rhs(503, nu, s, C, 0)
        up = lemma22_rhs(503, nu, s, C, 1)
        if nu == 0:
            extra = (1 / (BallReal.from_any(s, 128) - 1)).log()
        else:
            extra = (BallReal.from_any(s, 128) - 1).pow_int(nu).__rtruediv__(
                math.factorial(nu - 1))
        assert ((up - base) - extra).contains_zero()


def test_lemma22_sigma_monotone():
    # decreasing in sigma on ]1, 1+1/(c log p)]
    lp = math.log(503)
    pts = [1 + f / (float(C) * lp) for f in (0.25, 0.5, 0.75, 1.0)]
    for nu in (0, 2):
        vals = [lemma22_rhs(503, nu, s, C) for s in pts]
        for a, b in zip(vals[1:], vals):
            assert cert_lt(a, b)


def test_lemma22_domain():
    with pytest.raises(DomainError):
        lemma22_rhs(503, 0, 1.2, C)
    with pytest.raises(DomainError):
        lemma22_rhs(503, 0, 1, C)
    with pytest.raises(DomainError):
        lemma22_rhs(499, 0, 1.001, C)
    with pytest.raises(DomainError):
        lemma22_rhs(503, 0, _sigma_right(503), C, beta_indicator=2)


# ------------------------------------------------------------ lemma 2.3


def test_lemma23_examples():
    assert abs(float(lemma23_rhs(503, 0, C).mid) - 6258) < 1
    assert abs(float(lemma23_rhs(503, 1, C).mid) - 2.505e5) < 60


def test_lemma23_ratio_identity():
    # rhs(nu+1)/rhs(nu) = c (nu+1) log p
    for nu in (0, 1, 2):
        lhs = lemma23_rhs(503, nu + 1, C) / lemma23_rhs(503, nu, C)
        rhs = BallReal.from_fraction(C, 128) * (nu + 1) \
            * BallReal.from_int(503, 128).log()
        assert (lhs - rhs).contains_zero()


def test_lemma23_domain():
    with pytest.raises(DomainError):
        lemma23_rhs(503, 0, Fraction("6.4"))  # certainly below the floor
    with pytest.raises(DomainError):
        lemma23_rhs(503, 0, 100)  # (p-1)/log p certainly <= c
    # the boundary constant itself is admissible
    assert lemma23_rhs(503, 0, C).is_positive()


# ------------------------------------------------------------- sigma_nu


def test_sigma_nu_example():
    sn = sigma_nu(503, 8, C, 0)
    assert abs(float(sn.excess.mid) - 0.00677) < 5e-5
    assert not cert_lt(sn.excess, sn.floor)
    assert (sn.sigma - (sn.excess + 1)).contains_zero()


def test_sigma_nu_beta_increases():
    a = sigma_nu(503, 8, C, 0)
    b = sigma_nu(503, 8, C, 1)
    assert cert_lt(a.excess, b.excess)


def test_sigma_nu_domain():
    with pytest.raises(DomainError):
        sigma_nu(503, 0, C)


# ------------------------------------------------------------ theorem 3.1


@pytest.mark.parametrize("p,c,b", [(503, C, 0), (9649, Fraction("7.808"), 1),
                                   (1009, C, 0)])
def test_thm31_oracle(p, c, b):
    v = thm31_bound(p, c, b)
    assert abs(float(v.mid) - float(_mp_thm31(p, c, b))) < 1e-12
    assert float(v.rad) < 1e-30


def test_thm31_beta_coefficient():
    # toggling 1_beta adds exactly 2 loglog p
    v0 = thm31_bound(503, C, 0)
    v1 = thm31_bound(503, C, 1)
    two_llp = BallReal.from_int(503, 128).log().log() * 2
    assert ((v1 - v0) - two_llp).contains_zero()


def test_thm31_domain():
    with pytest.raises(DomainError):
        thm31_bound(500, C, 0)
    with pytest.raises(DomainError):
        thm31_bound(503, Fraction("6.4"), 0)
    with pytest.raises(DomainError):
        thm31_bound(503, C, 2)


# ------------------------------------------------------------- default c


def test_default_c_values():
    mpmath.mp.dps = 40
    for p, approx in [(503, 6.4389), (9649, 7.8077)]:
        v = default_c(p)
        ref = (mpmath.log(mpmath.log(p)) / mpmath.log(mpmath.log(500))
               * mpmath.mpf("6.4355"))
        assert abs(float(v.mid) - float(ref)) < 1e-12
        assert abs(float(v.mid) - approx) < 1e-3
        assert cert_lt(BallReal.from_fraction(C, 128), v)


def test_default_c_domain():
    with pytest.raises(DomainError):
        default_c(500)


# ------------------------------------------------------------- crossover


def test_cor33_crossover_pins_9649():
    rep = cor33_crossover(9001, 11000)
    assert rep.largest_fail == 9649
    assert rep.first_stable_pass == 9661
    assert 9649 < rep.first_stable_pass <= 9700
    # every prime above 9649 in range passes
    assert all(ok for p, ok in rep.outcomes if p > 9649)
    # and 9649 itself fails by a whisker
    lhs = thm31_bound(9649, default_c(9649), 1)
    rhs = cor33_rhs(9649)
    assert cert_lt(rhs, lhs)
    assert float(lhs.mid - rhs.mid) < 2e-3


def test_cor33_crossover_range_guard():
    with pytest.raises(DomainError):
        cor33_crossover(9100, 11000)
    with pytest.raises(DomainError):
        cor33_crossover(9001, 10500)


# ----------------------------------------------------------------- verify


def test_verify_lemma21_small():
    reports = verify("lemma21", 503, 521)
    assert reports and all(r.passed for r in reports)
    assert all(r.bound_id == "lemma21" for r in reports)
    # one report per (p, x, class) grid point
    seen = {(r.p, r.parameters["x"], r.parameters["cls"]) for r in reports}
    assert len(seen) == len(reports)
    with pytest.raises(DomainError):
        verify("lemma21", 3, 13)


def test_verify_thm31_small():
    reports = verify("thm31", 503, 509)
    assert len(reports) == 2
    assert all(r.passed for r in reports)
    assert all(float(r.lhs.mid) < 2 and float(r.rhs.mid) > 23
               for r in reports)


def test_verify_thm11_and_skip():
    reports = verify("thm11", 503, 503)
    assert len(reports) == 1 and reports[0].passed
    skip = verify("thm11", 5003, 5003)
    assert len(skip) == 1 and skip[0].passed
    assert "skipped" in skip[0].notes


def test_verify_lemma22_lemma23_grid():
    r22 = verify("lemma22", 503, 503, nu_values=(0, 1))
    assert len(r22) == 2 and all(r.passed for r in r22)
    assert {r.parameters["sigma_scale"] for r in r22} == {1}
    r23 = verify("lemma23", 503, 503, nu_values=(0, 1))
    assert len(r23) == 4 and all(r.passed for r in r23)
    assert {r.parameters["sigma_scale"] for r in r23} == {1, 2}


def test_verify_eq2_small():
    reports = verify("eq2", 3, 7, X=10 ** 5)
    assert len(reports) == 3
    assert all(r.passed for r in reports)


def test_verify_cor33_summary():
    reports = verify("cor33", 9001, 11000)
    assert len(reports) == 1
    r = reports[0]
    assert r.passed and r.parameters["first_stable_pass"] == 9661


def test_verify_unknown_bound():
    with pytest.raises(DomainError):
        verify("lemma99", 503, 509)


def test_default_x_grid():
    assert default_x_grid(503) == sorted({1006, 5030, 253009, 10 ** 7})


def test_force_beta_widens_rhs():
    base = verify("thm31", 503, 503)[0]
    forced = verify("thm31", 503, 503, force_beta=True)[0]
    assert forced.passed
    assert cert_lt(base.rhs, forced.rhs)
    assert forced.parameters["beta"] == 1
