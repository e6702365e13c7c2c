import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import linalg as sla

from translab.errors import DimensionMismatch, NearSpectrum
from translab.gridfn import GridSpec
from translab.groups import (MatrixGroup, MultiplicationGroup, ShiftGroup, estimate_group_type, matrix_norm,
                             symbol_affine)

from conftest import cvec

SPEC = GridSpec(4.0, 64)


def test_zero_time_is_identity(rng):
    for g in (ShiftGroup(SPEC), MatrixGroup(rng.standard_normal((4, 4)))):
        x = cvec(rng, g.dim)
        assert np.allclose(g.apply(0.0, x), x)


def test_shift_by_grid_steps_is_roll(rng):
    g = ShiftGroup(SPEC)
    x = cvec(rng, 64)
    assert np.allclose(g.apply(3 * SPEC.h, x), np.roll(x, -3), atol=1e-12)


def test_diag_pm_one_at_pi(rng):
    g = MatrixGroup(np.diag([1.0, -1.0]))
    x = cvec(rng, 2)
    assert np.allclose(g.apply(math.pi, x), -x, atol=1e-14)


@given(s=st.floats(-3, 3), r=st.floats(-3, 3), seed=st.integers(0, 10 ** 6))
def test_group_law(s, r, seed):
    rr = np.random.default_rng(seed)
    g = MatrixGroup(rr.standard_normal((4, 4)) + 0.3j * rr.standard_normal((4, 4)))
    x = cvec(rr, 4)
    lhs = g.apply(s + r, x)
    assert np.allclose(lhs, g.apply(s, g.apply(r, x)), rtol=1e-8, atol=1e-8 * np.linalg.norm(lhs))


def test_non_diagonalizable_falls_back_to_expm(rng):
    j = np.array([[0.0, 1.0], [0.0, 0.0]])
    g = MatrixGroup(j)
    assert not g.diagonalizable
    assert np.allclose(g.expm(np.array([2.0]))[0], np.eye(2) - 2j * j)
    assert np.allclose(g.expm(np.array([0.7]))[0], sla.expm(-0.7j * j))


def test_resolvent_examples(rng):
    x = cvec(rng, 3)
    assert np.allclose(MatrixGroup(np.zeros((3, 3))).resolvent(2.0, x), x / 2)
    g = ShiftGroup(GridSpec(math.pi, 64))
    f = np.exp(1j * 5 * g.spec.t)
    # A acts on exp(i xi t) as -xi under U(s) f(t) = f(t + s) = exp(-isA) f
    assert np.allclose(g.resolvent(1j, f), f / (1j + 5), atol=1e-12)


def test_resolvent_near_spectrum():
    with pytest.raises(NearSpectrum):
        MatrixGroup(np.diag([1.0, 2.0])).resolvent(2.0, np.ones(2))


def test_shift_generator_is_derivative():
    g = ShiftGroup(GridSpec(math.pi, 64))
    f = np.exp(4j * g.spec.t)
    # U(s) f(t) = f(t + s) = exp(-isA) f with A f = i f'
    assert np.allclose(g.generator(f), 1j * 4j * f, atol=1e-10)


def test_domain_norm():
    x = np.array([1.0, 2.0])
    assert MatrixGroup(np.zeros((2, 2))).domain_norm(x) == pytest.approx(np.linalg.norm(x))
    g = ShiftGroup(GridSpec(math.pi, 64))
    f = np.exp(3j * g.spec.t)
    assert g.domain_norm(f) == pytest.approx(4 * g.norm(f), rel=1e-12)
    assert g.domain_norm(np.zeros(64)) == 0.0


def test_dimension_check():
    with pytest.raises(DimensionMismatch):
        MatrixGroup(np.eye(3)).apply(0.1, np.ones(2))


def test_multiplication_group_is_pointwise(rng):
    g = MultiplicationGroup(SPEC, symbol_affine(0.0, 1.0), 2.0)
    x = cvec(rng, 64)
    assert np.allclose(g.apply(0.4, x), np.exp(-0.4j * SPEC.t) * x)


def test_matrix_norm_exact_cases():
    m = np.array([[1.0, -2.0], [3.0, 0.5]])
    assert matrix_norm(m, 1.0).value == pytest.approx(4.0)
    assert matrix_norm(m, math.inf).value == pytest.approx(3.5)
    assert matrix_norm(m, 2.0).value == pytest.approx(np.linalg.norm(m, 2))
    est = matrix_norm(m, 3.0)
    assert est.lower <= est.upper + 1e-12


def test_group_type_unitary():
    est = estimate_group_type(MatrixGroup(np.diag([0.3, -2.0, 1.1])))
    assert est.M_hat == pytest.approx(1.0, abs=1e-9) and est.theta_hat == pytest.approx(0.0, abs=1e-5)


def test_group_type_nilpotent():
    est = estimate_group_type(MatrixGroup(np.array([[0.0, 1.0], [0.0, 0.0]])))
    assert est.theta_hat < 0.05 and est.polynomial_growth_flag


def test_group_type_exponential():
    est = estimate_group_type(MatrixGroup(np.diag([1j, -1j])))
    assert abs(est.theta_hat - 1.0) <= 0.05
    assert not est.polynomial_growth_flag
