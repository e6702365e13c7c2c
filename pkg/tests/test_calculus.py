import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import linalg as sla
from scipy import special

from translab import calculus
from translab import measure as msr
from translab.errors import GrowthMismatch, NotElementary, StripOrder
from translab.families import jordan_group, jordan_oracle, rational_derivative
from translab.gridfn import GridSpec
from translab.groups import MatrixGroup, ShiftGroup

from conftest import cvec


def test_phillips_atoms(rng):
    g = MatrixGroup(rng.standard_normal((4, 4)))
    x = cvec(rng, 4)
    assert np.allclose(calculus.phillips(g, msr.dirac(0.0), x), x)
    assert np.allclose(calculus.phillips(g, msr.dirac(0.8), x), g.apply(0.8, x))


def test_phillips_gaussian_oracle(rng):
    a = rng.uniform(-3, 3, 6)
    g = MatrixGroup(np.diag(a))
    x = cvec(rng, 6)
    got = calculus.phillips(g, msr.gaussian(1.0), x)
    assert np.max(np.abs(got - np.exp(-a * a / 2) * x)) <= 1e-8 * np.linalg.norm(x)


def test_phillips_is_multiplicative(rng):
    g = MatrixGroup(np.diag(rng.uniform(-2, 2, 5)))
    x = cvec(rng, 5)
    mu = msr.gaussian(0.3, center=0.5, half_width=6.0)
    nu = msr.Measure(((0.25, 1 - 1j),), msr.gaussian(0.6, half_width=6.0).density, math.inf)
    lhs = calculus.phillips(g, msr.convolve(mu, nu), x)
    rhs = calculus.phillips(g, mu, calculus.phillips(g, nu, x))
    assert np.linalg.norm(lhs - rhs) <= 1e-6 * np.linalg.norm(x)


def test_growth_mismatch():
    g = MatrixGroup(np.diag([1j, 0.0]))
    with pytest.raises(GrowthMismatch):
        calculus.phillips(g, msr.two_sided_exponential(0.5), np.ones(2))


def test_cauchy_zero_generator(rng):
    g = MatrixGroup(np.zeros((3, 3)))
    x = cvec(rng, 3)
    res = calculus.cauchy_strip(g, calculus.inv_shift(3j, 2), 1.0, x)
    assert np.allclose(res.value, -x / 9, atol=1e-10)


@pytest.mark.parametrize("k", [4.0, 16.0])
def test_cauchy_tau_on_jordan_block(k):
    g = jordan_group(np.random.default_rng(7), d=5)
    a = g.matrix
    oracle = jordan_oracle(a, rational_derivative(1j * k, 2, -k * k))
    x = np.arange(1.0, 6.0)
    res = calculus.cauchy_strip(g, calculus.tau(k), 0.5, x, tail_tol=1e-10)
    assert np.linalg.norm(res.value - oracle @ x) <= 1e-6 * np.linalg.norm(x)
    assert res.tail_bound <= 1e-8


def test_cauchy_requires_decay_and_order():
    g = MatrixGroup(np.zeros((2, 2)))
    with pytest.raises(NotElementary):
        calculus.cauchy_strip(g, calculus.const(1.0), 0.5, np.ones(2))
    with pytest.raises(StripOrder):
        calculus.cauchy_strip(g, calculus.tau(2.0), 3.0, np.ones(2))


def test_tau_limit_on_diagonal(rng):
    g = MatrixGroup(np.diag(rng.uniform(-10, 10, 8)))
    x = cvec(rng, 8)
    res = calculus.regularized_calculus(g, calculus.const(1.0), x, range(16, 65, 4))
    assert np.linalg.norm(res.value - x) <= 1e-4 * np.linalg.norm(x)
    # the plain iterate at k = 64 is nowhere near: |tau_64(10) - 1| is about 0.3
    assert np.linalg.norm(res.raw[-1] - x) > 1e-2 * np.linalg.norm(x)


def test_regularized_gauss_matches_expm():
    g = MatrixGroup(np.diag([0.5, -1.0, 2.0]) + np.diag([0.3, 0.2], 1))
    x = np.array([1.0, -1.0, 2.0j])
    res = calculus.regularized_calculus(g, calculus.gauss(), x, range(16, 129, 16))
    assert np.linalg.norm(res.value - sla.expm(-g.matrix @ g.matrix) @ x) <= 1e-5 * np.linalg.norm(x)


def test_neville_recovers_polynomial():
    h = [0.5, 0.25, 0.125]
    vals = [np.array([3 + 2 * t - t * t]) for t in h]
    assert calculus.extrapolate_to_zero(h, vals)[-1][0] == pytest.approx(3.0)


def test_hinf1_constant_and_exponential():
    assert calculus.hinf1_norm(calculus.const(1.0), 1.0).value == pytest.approx(1.0)
    assert calculus.hinf1_norm(calculus.exp_i(0.5), 0.5).infinite


def test_hinf1_inverse_shift_two_stage_oracle():
    f = calculus.inv_shift(2j)
    # dense oracle: coarse lattice, then a fine patch around its best point
    xs = np.linspace(-50, 50, 20001)
    ys = np.linspace(-1, 1, 201) * (1 - 1e-6)
    z = xs[None, :] + 1j * ys[:, None]
    v = np.abs(f.eval(z)) + (1 + np.abs(z)) * np.abs(f.deriv(z))
    i, j = np.unravel_index(np.argmax(v), v.shape)
    zf = np.linspace(xs[j] - 0.01, xs[j] + 0.01, 2001)[None, :] + 1j * np.linspace(ys[i] - 0.01, min(ys[i] + 0.01, ys[-1]), 401)[:, None]
    vf = np.abs(f.eval(zf)) + (1 + np.abs(zf)) * np.abs(f.deriv(zf))
    oracle = max(v.max(), vf.max())
    assert calculus.hinf1_norm(f, 1.0).value == pytest.approx(oracle, rel=1e-6)


@given(k=st.floats(2, 64))
def test_tau_is_holomorphic(k):
    assert calculus.tau(k).cauchy_riemann_residual() < 1e-6


def test_pv_zero_and_sine_integral():
    g = ShiftGroup(GridSpec(8 * math.pi, 256))
    x = np.exp(1j * 3.0 * g.spec.t)
    zero = calculus.pv_group_integral(g, lambda s: np.zeros_like(s), x)
    assert np.allclose(zero.limit, 0)
    res = calculus.pv_group_integral(g, lambda s: np.ones_like(s), x)
    assert np.linalg.norm(res.limit - 2j * special.sici(3.0)[0] * x) <= 1e-4 * np.linalg.norm(x)
    assert min(res.contraction) >= 2


@pytest.mark.parametrize("c", [1.0, 0.3 - 2j])
def test_sector_constant(c):
    fs = calculus.SectorFunction(lambda w: np.full(np.shape(w), c, dtype=complex),
                                 lambda w: np.zeros(np.shape(w), dtype=complex))
    assert calculus.hlog_norm(fs, 1.0) == pytest.approx(abs(c))
    assert calculus.hinf1_norm(calculus.sector_pullback(fs, 1.0), 1.0).value == pytest.approx(abs(c))


def test_sector_pullback_isometry():
    fs = calculus.sector_rational("w/(1+w)^2")
    a = calculus.hlog_norm(fs, 1.0)
    b = calculus.hinf1_norm(calculus.sector_pullback(fs, 1.0), 1.0).value
    assert abs(a - b) <= 1e-3
