import random
from fractions import Fraction
from math import comb

import pytest

from iwrank.cyclotomic import zeta
from iwrank.iwasawa import (
    IdealClass,
    IwasawaContext,
    PadicSeries,
    UndeterminedInvariants,
    euler_factor_series,
    gamma_power,
    ideal_mod_pi,
    invariants,
    series_mul,
)
from iwrank.padics import PadicNumber


@pytest.fixture(scope="module")
def ctx():
    return IwasawaContext(11)


def test_context_defaults_and_validation(ctx):
    assert (ctx.p, ctx.u, ctx.M, ctx.D) == (11, 12, 8, 11)
    assert IwasawaContext(11, 23).u == 23  # 23 = 1 + 2*11 generates too
    for bad in ((4,), (11, 13), (11, 1 + 121)):
        with pytest.raises(ValueError):
            IwasawaContext(*bad)


def test_ring_arithmetic_and_certificate(ctx):
    # (p + T)(1 + T) = p + (1+p)T + T^2
    h = series_mul(ctx.series([11, 1]), ctx.series([1, 1]))
    assert h == ctx.series([11, 12, 1])
    assert [h.coefficient(i).lift() for i in range(3)] == [11, 12, 1]
    w = invariants(h)
    assert (w.mu, w.lam) == (0, 1)
    dist_full = ctx.series(list(w.dist.coeffs))
    assert dist_full * w.unit == h
    assert w.unit_head.val == 0
    assert w.dist.coefficient(1).lift() == 1
    assert w.dist.coefficient(0).val >= 1


@pytest.mark.parametrize("coeffs,mu,lam", [
    ([11], 1, 0),
    ([0, 1, 5], 0, 1),
    ([3], 0, 0),
    ([Fraction(1, 11), 3], -1, 0),
])
def test_invariants_simple(ctx, coeffs, mu, lam):
    w = invariants(ctx.series(coeffs))
    assert (w.mu, w.lam) == (mu, lam)


def test_negative_mu_precision(ctx):
    assert invariants(ctx.series([Fraction(1, 11), 3])).precision == 9


def test_undetermined_raises(ctx):
    with pytest.raises(UndeterminedInvariants):
        invariants(ctx.zero())
    with pytest.raises(UndeterminedInvariants):
        invariants(ctx.series([11**8, 11**9]))


def test_ideal_classes(ctx):
    assert ideal_mod_pi(ctx.series([3])) == IdealClass.unit()
    assert ideal_mod_pi(ctx.series([11, 12, 0, 1])) == IdealClass.power(1)
    assert ideal_mod_pi(ctx.series([11 * 5])) == IdealClass.zero()
    assert ideal_mod_pi(ctx.zero()) == IdealClass.zero()
    assert str(IdealClass.power(1)) == "(T)"
    assert str(IdealClass.power(2)) == "(T^2)"
    assert str(IdealClass.unit()) == "(1)"
    assert str(IdealClass.zero()) == "(0)"
    assert IdealClass.power(1) * IdealClass.power(2) == IdealClass.power(3)
    assert IdealClass.zero() * IdealClass.unit() == IdealClass.zero()


def test_invariant_additivity_random(ctx):
    rng = random.Random(20260823)
    for trial in range(40):
        parts = []
        for _ in range(2):
            mu = rng.randrange(0, 2)
            lam = rng.randrange(0, 4)
            cs = [11 * rng.randrange(1, 120) for _ in range(lam)]
            cs.append(rng.choice([1, 2, 3, 5, 7, 13, 24]))
            cs += [rng.randrange(0, 120) for _ in range(rng.randrange(0, 4))]
            parts.append((mu, lam, ctx.series([11**mu * c for c in cs])))
        (m1, l1, s1), (m2, l2, s2) = parts
        w = invariants(s1 * s2)
        assert (w.mu, w.lam) == (m1 + m2, l1 + l2), trial


def test_unit_scale_invariance(ctx):
    rng = random.Random(17)
    base = ctx.series([11 * 7, 4, 9])
    for _ in range(20):
        unit = ctx.series([rng.choice([1, 2, 3, 5]), rng.randrange(0, 120),
                           rng.randrange(0, 120)])
        w = invariants(base * unit)
        assert (w.mu, w.lam) == (0, 1)


def test_serialization_round_trip(ctx):
    rng = random.Random(5)
    samples = [
        series_mul(ctx.series([11, 1]), ctx.series([1, 1])),
        ctx.zero(),
        ctx.series([Fraction(1, 11), 3]),
        ctx.series([rng.randrange(0, 11**8) for _ in range(11)]),
    ]
    for s in samples:
        text = s.serialize()
        back = PadicSeries.deserialize(text)
        assert back == s
        assert back.serialize() == text
    head = samples[0].serialize().split("[")[0]
    assert head.strip().startswith("11, 8, 11")


def test_mismatched_layouts_refuse(ctx):
    h = ctx.series([1, 2])
    with pytest.raises(ValueError):
        h * IwasawaContext(11, M=6).series([1])
    with pytest.raises(ValueError):
        h + IwasawaContext(5).series([1])


def test_gamma_power(ctx):
    g5 = gamma_power(5, ctx)
    for i in range(ctx.D):
        assert g5.coefficient(i).lift() == comb(5, i)
    assert gamma_power(3, ctx) * gamma_power(4, ctx) == gamma_power(7, ctx)


def test_euler_substitution_values(ctx):
    assert euler_factor_series([1], 23, 0, ctx) == ctx.one()
    e23 = euler_factor_series([1, -1], 23, 0, ctx)
    c0 = e23.coefficient(0)
    assert c0.eq_to(PadicNumber.from_rational(Fraction(22, 23), 11, 9), 8)
    assert c0.val == 1  # 23 = 1 mod 11: 1 - 23^(-1) dies exactly once
    assert (invariants(e23).mu, invariants(e23).lam) == (0, 1)
    # T = 0 value is P(ell^(-j-1))
    P, ell, j = [1, -3, 5], 7, 2
    v = euler_factor_series(P, ell, j, ctx).coefficient(0)
    x = Fraction(1, ell ** (j + 1))
    expect = Fraction(1) - 3 * x + 5 * x * x
    assert v.eq_to(PadicNumber.from_rational(expect, 11, 9), 8)
    with pytest.raises(ValueError):
        euler_factor_series([1, -1], 22, 0, ctx)


def test_euler_series_against_cyclotomic_evaluation():
    # push truncation to T^90 so the tail at zeta-1 dies mod 11^8; then
    # the series must match 1 - 23^(-1) zeta^c coefficientwise
    ctx_deep = IwasawaContext(11, M=8, D=90)
    deep = euler_factor_series([1, -1], 23, 0, ctx_deep)
    cbar = deep.meta["c_ell"] % 11
    mod = 11**8
    zc = zeta(11, cbar)
    acc = [0] * 10
    pw = zeta(11, 0)
    zm1 = zeta(11) - 1
    for i in range(90):
        ci = deep.coefficient(i)
        if not ci.zero:
            lift = int(ci.lift())
            for t, coeff in enumerate(pw.coeffs):
                assert coeff.denominator == 1
                acc[t] = (acc[t] + lift * int(coeff)) % mod
        pw = pw * zm1
    rhs = [0] * 10
    inv23 = pow(23, -1, mod)
    rhs[0] = 1
    for t, coeff in enumerate(zc.coeffs):
        rhs[t] = (rhs[t] - inv23 * int(coeff)) % mod
    assert acc == rhs


def test_reduce_gamma_respects_evaluation():
    ctx_deep = IwasawaContext(11, M=8, D=90)
    rng = random.Random(88)
    s = ctx_deep.series([rng.randrange(0, 11**8) for _ in range(90)])
    r = s.reduce_gamma(11)
    assert r.D == 11
    zm1 = zeta(11) - 1
    accs, accr = [0] * 10, [0] * 10
    pw = zeta(11, 0)
    m6 = 11**6
    for i in range(90):
        cs_ = s.coefficient(i)
        if not cs_.zero:
            for t, coeff in enumerate(pw.coeffs):
                accs[t] = (accs[t] + int(cs_.lift()) * int(coeff)) % m6
        if i < 11:
            cr_ = r.coefficient(i)
            if not cr_.zero:
                for t, coeff in enumerate(pw.coeffs):
                    accr[t] = (accr[t] + int(cr_.lift()) * int(coeff)) % m6
        pw = pw * zm1
    assert accs == accr
