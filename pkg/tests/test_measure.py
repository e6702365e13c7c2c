import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from translab import measure as msr
from translab.errors import GridOverflow, StripViolation
from translab.families import random_mixture

locs = st.floats(-5, 5, allow_nan=False)


def test_dirac_at_origin_is_one_everywhere():
    z = np.linspace(-7, 7, 15) + 0.0j
    assert np.allclose(msr.fourier(msr.dirac(0.0), z), 1.0)


def test_unit_atom_at_pi():
    assert msr.fourier(msr.dirac(1.0), math.pi) == pytest.approx(-1.0, abs=1e-15)


def test_standard_gaussian_transform_at_one():
    assert abs(msr.fourier(msr.gaussian(1.0), 1.0) - math.exp(-0.5)) < 1e-8


def test_exponential_density_matches_lorentzian():
    mu = msr.two_sided_exponential(2.0, h=0.001)
    z = np.array([0.0, 1.0, 3.0])
    # the kink at zero limits the trapezoid rule to O(h^2)
    assert np.max(np.abs(msr.fourier(mu, z) - 4.0 / (4.0 + z * z))) < 1e-6


def test_strip_violation_beyond_decay():
    mu = msr.two_sided_exponential(1.0)
    with pytest.raises(StripViolation):
        msr.fourier(mu, 2j)
    msr.fourier(mu, 0.5j)  # inside: fine


def test_complex_argument_gaussian():
    mu = msr.Measure((), msr.gaussian(0.5).density, math.inf)
    z = 0.7 + 0.4j
    assert abs(msr.fourier(mu, z) - np.exp(-0.25 * z * z)) < 1e-9


@given(a=locs, b=locs)
def test_atoms_convolve_to_sum(a, b):
    nu = msr.convolve(msr.dirac(a), msr.dirac(b))
    assert len(nu.atoms) == 1
    assert nu.atoms[0][0] == pytest.approx(a + b)


def test_dirac_zero_is_convolution_identity():
    mu = msr.gaussian(0.4, center=0.3)
    nu = msr.convolve(msr.dirac(0.0), mu)
    z = np.linspace(-4, 4, 9)
    assert np.allclose(msr.fourier(nu, z), msr.fourier(mu, z), atol=1e-13)


def test_gaussians_add_variances():
    g = msr.gaussian(1.0)
    both = msr.convolve(g, g)
    t = np.array([0.0, 1.0, 2.0])
    assert np.max(np.abs(msr.fourier(both, t) - np.exp(-t * t))) < 1e-6


@given(seed=st.integers(0, 2 ** 32 - 1))
def test_fourier_is_multiplicative_on_mixtures(seed):
    r = np.random.default_rng(seed)
    a = random_mixture(r).measure(0.02)
    b = random_mixture(r).measure(0.02)
    z = np.linspace(-6, 6, 25)
    lhs = msr.fourier(msr.convolve(a, b), z)
    rhs = msr.fourier(a, z) * msr.fourier(b, z)
    assert np.max(np.abs(lhs - rhs)) <= 1e-6 * max(1.0, np.max(np.abs(rhs)))


def test_off_grid_atom_shifts_density_band_limited():
    g = msr.gaussian(0.3, h=0.01)
    shifted = msr.convolve(g, msr.dirac(0.123))
    z = np.linspace(-5, 5, 11)
    assert np.allclose(msr.fourier(shifted, z), np.exp(-0.123j * z) * msr.fourier(g, z), atol=1e-9)


def test_convolution_grid_cap():
    g = msr.gaussian(1.0, half_width=20.0, h=0.01)
    with pytest.raises(GridOverflow):
        msr.convolve(g, g, max_samples=1000)


def test_weighted_variation_examples():
    assert msr.total_variation_weighted(msr.dirac(1.0), 2.0).value == pytest.approx(math.e ** 2)
    assert msr.total_variation_weighted(msr.dirac(0.0), 3.7).value == pytest.approx(1.0)


def test_weighted_variation_gaussian_against_quad():
    mu = msr.gaussian(1.0, h=0.005)
    oracle, _ = integrate.quad(lambda s: math.exp(-s * s / 2 + abs(s)) / math.sqrt(2 * math.pi), -20, 20,
                               points=[0.0], epsabs=1e-13)
    assert oracle == pytest.approx(2 * math.exp(0.5) * special.ndtr(1.0), rel=1e-12)
    assert abs(msr.total_variation_weighted(mu, 1.0).value - oracle) < 1e-8


def test_weighted_variation_flags_growth():
    mu = msr.two_sided_exponential(1.0)
    assert msr.total_variation_weighted(mu, 1.5).infinite
    assert not msr.total_variation_weighted(mu, 0.5).infinite


def test_cosh_weight_atoms():
    assert msr.cosh_weight(msr.dirac(0.0), 0.8).atoms[0][1] == 1.0
    w = msr.cosh_weight(msr.dirac(1.0), 0.8).atoms[0][1]
    assert w == pytest.approx(math.cosh(0.8))


def test_cosh_weight_needs_room():
    with pytest.raises(StripViolation):
        msr.cosh_weight(msr.two_sided_exponential(1.0), 1.0)


def test_cosh_weight_fourier_is_average_of_shifts():
    mu = msr.two_sided_exponential(3.0, h=0.002)
    w = 0.9
    z = np.linspace(-3, 3, 7)
    lhs = msr.fourier(msr.cosh_weight(mu, w), z)
    rhs = 0.5 * (msr.fourier(mu, z + 1j * w) + msr.fourier(mu, z - 1j * w))
    assert np.allclose(lhs, rhs, atol=1e-12)


@given(seed=st.integers(0, 2 ** 32 - 1))
def test_text_round_trip(seed):
    r = np.random.default_rng(seed)
    mu = random_mixture(r, exponentials=1).measure(0.05)
    back = msr.from_text(msr.to_text(mu))
    z = np.linspace(-3, 3, 7)
    assert back.decay_weight == mu.decay_weight
    assert np.array_equal(msr.fourier(back, z), msr.fourier(mu, z))


def test_reflect_conjugates_transform():
    mu = msr.Measure(((0.5, 2 + 1j),), msr.gaussian(0.2, center=1.0).density, math.inf)
    z = np.linspace(-2, 2, 5)
    assert np.allclose(msr.fourier(mu.reflect(), z), msr.fourier(mu, -z))


def test_odd_density_rejected():
    with pytest.raises(ValueError):
        msr.Density(0.0, 0.1, np.ones(3))
