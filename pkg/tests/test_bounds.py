import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from gronbound.bounds import (EnvelopeNorm, bound_constant, bound_curve,
                              bound_general, bound_general_closed, bound_linear,
                              bound_sinusoidal, bound_sinusoidal_per_period,
                              c_factor, n_periods)

mp.mp.dps = 20


def mp_gronwall(kappa, T):
    """Nested integral by mpmath quadrature, kinks split at `kappa.breaks`."""
    pts = [mp.mpf(0)] + [mp.mpf(b) for b in kappa.breaks if 0 < b < T] + [mp.mpf(T)]
    inner = lambda s: mp.quad(kappa, [s] + [p for p in pts if p > s])
    return mp.quad(lambda s: kappa(s) * mp.e ** inner(s), pts)


def c_factor_mp(g, w):
    g, w = mp.mpf(g), mp.mpf(w)
    return w ** 2 * (1 + mp.e ** (-g * mp.pi / w)) / (mp.pi * (g ** 2 + w ** 2))


# values frozen from c_factor_mp / direct mpmath evaluation
C_015_PI = 0.59093457490897
C_015_PI4 = 0.47565233873846


def test_c_factor_oracle_values():
    assert float(c_factor_mp(0.15, mp.pi)) == pytest.approx(C_015_PI, abs=1e-13)
    assert float(c_factor_mp(0.15, mp.pi / 4)) == pytest.approx(C_015_PI4, abs=1e-13)


def test_c_factor_examples():
    assert c_factor(0.0, 1.7) == pytest.approx(2 / math.pi, rel=1e-15)
    assert c_factor(0.15, math.pi) == pytest.approx(C_015_PI, abs=1e-13)
    assert c_factor(0.15, math.pi / 4) == pytest.approx(C_015_PI4, abs=1e-13)
    with pytest.raises(ValueError):
        c_factor(0.1, 0.0)


def test_constant_examples():
    assert bound_constant(0.0, 7.0) == 0.0
    assert bound_constant(0.15, 10) == pytest.approx(3.4816890703380645, rel=1e-14)
    assert bound_constant(0.1, 1) == pytest.approx(0.10517091807564763, rel=1e-14)


def test_sinusoidal_examples():
    assert bound_sinusoidal(0.0, math.pi, 10) == 0.0
    v = bound_sinusoidal(0.15, math.pi, 10)
    assert v == pytest.approx(float(c_factor_mp(0.15, mp.pi) * mp.mpf("1.5") * mp.e ** mp.mpf("1.5")), rel=1e-13)
    v = bound_sinusoidal(0.15, math.pi / 4, 16)
    assert v == pytest.approx(float(c_factor_mp(0.15, mp.pi / 4) * mp.mpf("2.4") * mp.e ** mp.mpf("2.4")), rel=1e-13)
    assert v > bound_constant(0.15, 16)


def test_per_period_single_integral_oracle():
    # one-period integral of |sin(w s)| exp(-g s), computed by mpmath quadrature
    for g, w in [(0.15, math.pi), (0.15, math.pi / 4), (0.4, 2.3)]:
        one = mp.quad(lambda s: mp.sin(w * s) * mp.e ** (-g * s), [0, mp.pi / w])
        closed = (1 / w) * (1 + math.exp(-g * math.pi / w)) / ((g / w) ** 2 + 1)
        assert float(one) == pytest.approx(closed, rel=1e-13)


@pytest.mark.parametrize("g,w,n", [(0.15, math.pi, 10), (0.15, math.pi / 4, 4), (0.33, 1.1, 7)])
def test_sinusoidal_forms_agree(g, w, n):
    T = n * math.pi / w
    a = bound_sinusoidal(g, w, T)
    b = bound_sinusoidal_per_period(g, w, n)
    assert abs(a - b) <= 1e-12 * abs(b)


def test_sinusoidal_requires_whole_periods():
    with pytest.raises(ValueError):
        bound_sinusoidal(0.1, math.pi, 2.5)
    with pytest.raises(ValueError):
        n_periods(math.pi, 0.0)
    assert n_periods(math.pi / 4, 16) == 4


def test_linear_examples():
    assert bound_linear(EnvelopeNorm.constant(0.15), 10) == pytest.approx(1.5, rel=1e-15)
    assert bound_linear(EnvelopeNorm.sinusoidal(0.15, math.pi), 10) == pytest.approx(3 / math.pi, rel=1e-13)
    assert bound_linear(EnvelopeNorm.constant(0.0), 10) == 0.0


def test_general_examples():
    assert bound_general(EnvelopeNorm.constant(0.0), 5.0) == 0.0
    assert bound_general(EnvelopeNorm.constant(0.15), 10) == pytest.approx(math.expm1(1.5), rel=1e-10)
    s = EnvelopeNorm.sinusoidal(0.15, math.pi)
    assert bound_general(s, 10) == pytest.approx(math.expm1(0.15 * 20 / math.pi), rel=1e-10)
    assert bound_general_closed(s, 10) == pytest.approx(math.expm1(0.15 * 20 / math.pi), rel=1e-14)
    assert bound_general_closed(EnvelopeNorm.constant(0.2), 3) == bound_constant(0.2, 3)


class _Kappa:
    def __init__(self, f, breaks=()):
        self.f, self.breaks = f, breaks

    def __call__(self, s):
        return self.f(s)


@pytest.mark.parametrize("g,w,T", [(0.3, 1.7, 4.0), (0.5, 0.6, 9.0), (0.1, 5.0, 2.2)])
def test_general_matches_mpmath_nested_quadrature(g, w, T):
    # T deliberately not a whole number of half-periods
    env = EnvelopeNorm.sinusoidal(g, w)
    breaks = [k * math.pi / w for k in range(1, int(T * w / math.pi) + 1)]
    ref = mp_gronwall(_Kappa(lambda s: g * abs(mp.sin(w * s)), breaks), T)
    assert bound_general(env, T) == pytest.approx(float(ref), rel=1e-9)
    assert bound_general_closed(env, T) == pytest.approx(float(ref), rel=1e-12)


def test_tabulated_matches_scipy_nested_quadrature():
    t = np.linspace(0, 6, 25)
    k = 0.2 + 0.15 * np.cos(t) ** 2
    env = EnvelopeNorm.tabulated(t, k)
    kap = lambda s: float(np.interp(s, t, k))
    inner = lambda s: integrate.quad(kap, s, 5.0, points=t[(t > s) & (t < 5)], limit=200)[0]
    ref = integrate.quad(lambda s: kap(s) * math.exp(inner(s)), 0, 5.0, points=t[t < 5], limit=200)[0]
    assert bound_general(env, 5.0) == pytest.approx(ref, rel=1e-8)
    lin = integrate.quad(kap, 0, 5.0, points=t[t < 5], limit=200)[0]
    assert bound_linear(env, 5.0) == pytest.approx(lin, rel=1e-12)
    # exp(int kappa) - 1 identity holds for tabulated kappa too
    assert bound_general(env, 5.0) == pytest.approx(math.expm1(lin), rel=1e-8)


def test_tabulated_errors():
    env = EnvelopeNorm.tabulated([0.0, 1.0, 2.0], [0.1, 0.2, 0.1])
    with pytest.raises(ValueError):
        bound_general(env, 3.0)
    with pytest.raises(ValueError):
        bound_general_closed(env, 1.0)
    with pytest.raises(ValueError):
        EnvelopeNorm.tabulated([0.0, 1.0], [0.1, -0.2])
    with pytest.raises(ValueError):
        bound_general(EnvelopeNorm.constant(0.1), -1.0)
    with pytest.raises(ValueError):
        bound_general(EnvelopeNorm.constant(0.1), 1.0, quad_points=16)


def test_sinusoidal_integral_is_exact():
    env = EnvelopeNorm.sinusoidal(0.7, 1.9)
    for T in (0.3, 1.65, 5.0, 11.2):
        ref = integrate.quad(lambda s: 0.7 * abs(math.sin(1.9 * s)), 0, T, limit=200,
                             points=[k * math.pi / 1.9 for k in range(1, 8)])[0]
        assert float(env.integral(T)) == pytest.approx(ref, rel=1e-12)


def test_kappa_definition():
    env = EnvelopeNorm.sinusoidal(0.3, 2.0)
    t = np.linspace(0, 7, 50)
    np.testing.assert_array_equal(env(t), 0.3 * np.abs(np.sin(2.0 * t)))
    assert np.all(env(t) >= 0)


def test_curve_constant_zero():
    c = bound_curve(EnvelopeNorm.constant(0.0), [0, 1, 2])
    for col in (c.linear, c.gronwall, c.closed_form):
        np.testing.assert_array_equal(col, 0.0)


def test_curve_constant_values():
    c = bound_curve(EnvelopeNorm.constant(0.15), np.linspace(0, 10, 11))
    assert c.linear[-1] == pytest.approx(1.5)
    assert c.gronwall[-1] == pytest.approx(3.4816890703380645, rel=1e-14)


def test_curve_sinusoidal_closed_form_only_at_whole_periods():
    t = np.linspace(0, 4, 9)
    c = bound_curve(EnvelopeNorm.sinusoidal(0.15, math.pi), t)
    whole = np.isclose(t, np.round(t))
    assert np.all(np.isfinite(c.closed_form[whole]))
    assert np.all(np.isnan(c.closed_form[~whole]))
    assert np.all(np.diff(c.linear) >= 0) and np.all(np.diff(c.gronwall) >= 0)
    assert np.all(c.linear <= c.gronwall + 1e-9)


def test_curve_rejects_bad_grid():
    with pytest.raises(ValueError):
        bound_curve(EnvelopeNorm.constant(0.1), [0, 2, 1])
    with pytest.raises(ValueError):
        bound_curve(EnvelopeNorm.constant(0.1), [1, 2])


def test_curve_tabulated():
    t = np.linspace(0, 3, 7)
    env = EnvelopeNorm.tabulated(t, 0.1 + 0.05 * t)
    c = bound_curve(env, t)
    assert c.closed_form is None
    np.testing.assert_allclose(c.gronwall, np.expm1(c.linear), rtol=1e-9)


gammas = st.floats(0.0, 0.5)
omegas = st.floats(0.1, 10.0)


@settings(max_examples=80, deadline=None)
@given(g=gammas, w=omegas, n=st.integers(1, 20))
def test_sinusoidal_dominates_general(g, w, n):
    T = n * math.pi / w
    env = EnvelopeNorm.sinusoidal(g, w)
    lin = bound_linear(env, T)
    gen = bound_general_closed(env, T)
    sin = bound_sinusoidal(g, w, T)
    assert lin <= gen * (1 + 1e-12) + 1e-15
    assert gen <= sin * (1 + 1e-12) + 1e-15


@settings(max_examples=80, deadline=None)
@given(g1=gammas, g2=gammas, t1=st.floats(0, 30), t2=st.floats(0, 30), w=omegas)
def test_monotone_in_gamma_and_time(g1, g2, t1, t2, w):
    (g1, g2), (t1, t2) = sorted((g1, g2)), sorted((t1, t2))
    assert bound_constant(g1, t1) <= bound_constant(g2, t2)
    e1, e2 = EnvelopeNorm.sinusoidal(g1, w), EnvelopeNorm.sinusoidal(g2, w)
    assert bound_linear(e1, t1) <= bound_linear(e2, t2) * (1 + 1e-12) + 1e-15
    assert bound_general_closed(e1, t1) <= bound_general_closed(e2, t2) * (1 + 1e-12) + 1e-15
    n = 3
    assert bound_sinusoidal(g1, w, n * math.pi / w) <= bound_sinusoidal(g2, w, n * math.pi / w)
    assert bound_sinusoidal(g2, w, n * math.pi / w) <= bound_sinusoidal(g2, w, (n + 1) * math.pi / w)
