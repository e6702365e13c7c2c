import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from translab import measure as msr
from translab.gridfn import (GridFunction, GridSpec, convolve_measure, derivative, from_csv, lp_norm,
                             sobolev_norm, to_csv, translate)


def test_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1.0, 100)
    with pytest.raises(ValueError):
        GridSpec(-1.0, 64)


def test_refined_keeps_spacing():
    s = GridSpec(4.0, 256)
    assert s.refined().h == s.h and s.refined().half_length == 8.0


def test_indicator_norm():
    spec = GridSpec(4.0, 512)
    f = GridFunction.sample(spec, lambda t: ((t >= 0) & (t <= 1)).astype(float))
    assert abs(lp_norm(f, 2) - 1.0) <= spec.h


def test_sine_norms():
    spec = GridSpec(math.pi, 1024)
    f = GridFunction.sample(spec, np.sin)
    assert lp_norm(f, 2) == pytest.approx(math.sqrt(math.pi), abs=1e-6)
    assert sobolev_norm(f, 2) == pytest.approx(2 * math.sqrt(math.pi), abs=1e-6)


@given(c=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       p=st.sampled_from([1.0, 2.0, 3.5]))
def test_constant_sobolev(c, p):
    spec = GridSpec(3.0, 64)
    f = GridFunction(spec, np.full(64, c))
    assert sobolev_norm(f, p) == pytest.approx(abs(c) * 6.0 ** (1 / p), rel=1e-12, abs=1e-12)


def test_zero_function():
    f = GridFunction.zeros(GridSpec(2.0, 32))
    assert lp_norm(f, 2) == 0 and sobolev_norm(f, 1) == 0


def test_derivative_of_mode():
    spec = GridSpec(math.pi, 64)
    f = GridFunction.sample(spec, lambda t: np.exp(3j * t))
    assert np.allclose(derivative(f).values[:, 0], 3j * np.exp(3j * spec.t))


def test_dirac_convolution_is_shift_by_grid_step():
    spec = GridSpec(8.0, 128)
    rng = np.random.default_rng(1)
    f = GridFunction(spec, rng.standard_normal(128))
    m = 5
    out = convolve_measure(msr.dirac(m * spec.h), f)
    assert np.allclose(out.values, np.roll(f.values, m, axis=0), atol=1e-12)
    same = convolve_measure(msr.dirac(0.0), f)
    assert np.allclose(same.values, f.values, atol=1e-13)


@given(a=st.floats(-3, 3))
def test_translate_matches_atom(a):
    spec = GridSpec(8.0, 128)
    f = GridFunction.sample(spec, lambda t: np.exp(-t * t))
    assert np.allclose(translate(f, a).values, convolve_measure(msr.dirac(a), f).values, atol=1e-12)


def test_wide_measure_warns():
    spec = GridSpec(2.0, 64)
    with pytest.warns(RuntimeWarning):
        convolve_measure(msr.dirac(1.5), GridFunction.zeros(spec))


def test_csv_round_trip():
    spec = GridSpec(2.0, 16, fiber_dim=2)
    vals = np.arange(32).reshape(16, 2) * (1 - 0.5j)
    f = GridFunction(spec, vals)
    g = from_csv(to_csv(f))
    assert g.spec.samples == 16 and g.spec.half_length == pytest.approx(2.0)
    assert np.array_equal(g.values, f.values)


def test_bochner_norm_uses_fiber_exponent():
    spec = GridSpec(1.0, 8, fiber_dim=2, fiber_exponent=1.0)
    f = GridFunction(spec, np.ones((8, 2)))
    assert lp_norm(f, math.inf) == 2.0
    assert lp_norm(f, 1) == pytest.approx(2.0 * 2.0)


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        GridFunction(GridSpec(1.0, 8), np.full(8, np.nan))
