import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import linalg as sla

from translab import families
from translab import measure as msr


@given(seed=st.integers(0, 10 ** 6))
def test_mixture_transform_matches_quadrature(seed):
    mix = families.random_mixture(np.random.default_rng(seed), atoms=1, gaussians=2)
    z = np.linspace(-5, 5, 11)
    assert np.max(np.abs(mix.fourier(z) - msr.fourier(mix.measure(0.01), z))) < 1e-9


def test_weighted_symbol_converges_at_second_order():
    mix = families.random_mixture(np.random.default_rng(3), atoms=1, gaussians=1, exponentials=1)
    z = np.linspace(-4, 4, 9)
    errs = [np.max(np.abs(mix.weighted_symbol(0.5).value(z)
                          - msr.fourier(msr.cosh_weight(mix.measure(h), 0.5), z))) for h in (0.02, 0.01)]
    assert errs[1] < 1e-3 and 3.5 < errs[0] / errs[1] < 4.5


def test_weighted_symbol_needs_decay():
    mix = families.Mixture(exponentials=((1.0, 1.0),))
    with pytest.raises(ValueError):
        mix.weighted_symbol(1.5)


def test_symbol_derivative_by_differences():
    mix = families.random_mixture(np.random.default_rng(8), exponentials=1)
    z = np.linspace(-3, 3, 13)
    h = 1e-6
    fd = (mix.fourier(z + h) - mix.fourier(z - h)) / (2 * h)
    assert np.allclose(mix.fourier_derivative(z), fd, atol=1e-6)


@pytest.mark.parametrize("d", [2, 4, 6])
def test_jordan_oracle_against_expm(d):
    g = families.jordan_group(np.random.default_rng(d), d=d)
    s = 0.8
    # exp(-isz): n-th derivative is (-is)^n exp(-isz)
    oracle = families.jordan_oracle(g.matrix, lambda n, a: (-1j * s) ** n * np.exp(-1j * s * a))
    assert np.allclose(oracle, sla.expm(-1j * s * g.matrix), atol=1e-12)


def test_rational_derivative():
    f = families.rational_derivative(2j, 2, 3.0)
    z, h = 0.4, 1e-6
    assert f(1, z) == pytest.approx((f(0, z + h) - f(0, z - h)) / (2 * h), rel=1e-7)


def test_nonnormal_group_growth():
    g = families.nonnormal_group(np.random.default_rng(0), 5, growth=0.3)
    assert g.growth_bound == pytest.approx(0.3)


def test_bounded_mixture_stays_inside():
    mix = families.bounded_mixture(np.random.default_rng(1), 2.0)
    assert mix.reach() <= 2.0
