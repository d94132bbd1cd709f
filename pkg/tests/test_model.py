import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import random_params
from lindsqueeze import model
from lindsqueeze.errors import InconsistentSolutionError, NumericError, ValidationError
from lindsqueeze.model import ModelParams

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_validate_accepts():
    p = ModelParams(1.0, 3.0, 1.0, 1.0)
    assert model.validate(p) is p


@pytest.mark.parametrize(
    "p,fragment",
    [
        (ModelParams(1.0, 1.0, 1.0, 0.0), "mu > nu"),
        (ModelParams(1.0, 2.0, 1.0, 1.5), "positivity violated"),
        (ModelParams(1.0, 2.0, -0.1, 0.0), "nu >= 0"),
        (ModelParams(float("nan"), 2.0, 1.0, 0.0), "omega"),
        (ModelParams(1.0, 2.0, 1.0, complex(float("inf"), 0)), "kappa"),
    ],
)
def test_validate_rejects(p, fragment):
    with pytest.raises(ValidationError, match=fragment):
        model.validate(p)


def test_validate_boundary_accepted():
    model.validate(ModelParams(1.0, 2.0, 0.5, 1.0))


def test_solve_reference():
    sol = model.solve_squeeze(ModelParams(1.0, 3.0, 1.0, 1.0))
    assert abs(sol.t_h - (2 - math.sqrt(3))) < 1e-12
    assert sol.phi == 0.0


def test_solve_kappa_zero():
    sol = model.solve_squeeze(ModelParams(1.0, 2.0, 1.0, 0.0))
    assert (sol.t_h, sol.c, sol.s, sol.phi) == (0.0, 1.0, 0.0, 0.0)


def test_solve_boundary():
    sol = model.solve_squeeze(ModelParams(1.0, 2.0, 0.5, 1.0))
    assert abs(sol.t_h - 0.5) < 1e-12


def test_phase_convention():
    sol = model.solve_squeeze(ModelParams(1.0, 3.0, 1.0, cmath.exp(-0.8j)))
    assert sol.phi == pytest.approx(0.8, abs=1e-15)
    assert sol.eps == pytest.approx(sol.abs_eps * cmath.exp(0.8j), abs=1e-15)


def test_stable_root_tiny_kappa():
    # naive ((mu+nu) - sqrt(D)) / 2k loses every digit here
    p = ModelParams(1.0, 1.0, 0.5, 1e-9)
    sol = model.solve_squeeze(p)
    with mpmath.workdps(50):
        k, s = mpmath.mpf(1e-9), mpmath.mpf(1.5)
        exact = (s - mpmath.sqrt(s * s - 4 * k * k)) / (2 * k)
    assert abs(sol.t_h - float(exact)) < 1e-15 * float(exact)


def test_negative_discriminant_detected():
    with pytest.raises(NumericError):
        model.solve_squeeze(ModelParams(1.0, 1.0, 0.5, 2.0))


def _mp_rates(mu, nu, k):
    # independent substitution at 50 digits
    with mpmath.workdps(50):
        mu, nu, k = mpmath.mpf(mu), mpmath.mpf(nu), mpmath.mpf(k)
        t = (mu + nu - mpmath.sqrt((mu + nu) ** 2 - 4 * k * k)) / (2 * k)
        c = 1 / mpmath.sqrt(1 - t * t)
        s = t * c
        return float(mu * c * c + nu * s * s - 2 * k * c * s), float(mu * s * s + nu * c * c - 2 * k * c * s)


def test_transformed_reference():
    p = ModelParams(1.0, 3.0, 1.0, 1.0)
    tc = model.transformed_coeffs(p, model.solve_squeeze(p))
    mu_mp, nu_mp = _mp_rates(3, 1, 1)
    assert abs(tc.mu_p - (1 + math.sqrt(3))) < 1e-12
    assert abs(tc.nu_p - (math.sqrt(3) - 1)) < 1e-12
    assert abs(tc.mu_p - mu_mp) < 1e-14 and abs(tc.nu_p - nu_mp) < 1e-14


def test_transformed_kappa_zero():
    p = ModelParams(1.0, 2.0, 0.7, 0.0)
    tc = model.transformed_coeffs(p, model.solve_squeeze(p))
    assert (tc.mu_p, tc.nu_p) == (2.0, 0.7)


def test_transformed_boundary():
    p = ModelParams(1.0, 2.0, 0.5, 1.0)
    tc = model.transformed_coeffs(p, model.solve_squeeze(p))
    assert abs(tc.nu_p) < 1e-10
    assert abs(tc.mu_p - 1.5) < 1e-10


def test_transformed_rejects_wrong_root():
    p = ModelParams(1.0, 3.0, 1.0, 1.0)
    sol = model.solve_squeeze(p)
    bad = model.squeeze_from_tanh(sol.phi, sol.t_h + 0.01)
    with pytest.raises(InconsistentSolutionError):
        model.transformed_coeffs(p, bad)


@pytest.mark.parametrize("delta", [-0.01, 0.01])
def test_residual_nonzero_off_solution(delta):
    p = ModelParams(1.0, 3.0, 1.0, 1.0)
    sol = model.solve_squeeze(p)
    assert model.anomalous_residual(p, sol) < 1e-12
    assert model.anomalous_residual(p, model.squeeze_from_tanh(sol.phi, sol.t_h + delta)) > 1e-3


def test_squeeze_from_tanh_range():
    with pytest.raises(NumericError):
        model.squeeze_from_tanh(0.0, 1.0)


@given(seeds)
def test_solution_invariants(seed):
    p = random_params(np.random.default_rng(seed))
    sol = model.solve_squeeze(model.validate(p))
    assert 0.0 <= sol.t_h < 1.0
    assert abs(sol.c**2 - sol.s**2 - 1.0) < 1e-12 * sol.c**2
    assert abs(sol.s - sol.c * sol.t_h) < 1e-12 * sol.c
    assert model.anomalous_residual(p, sol) <= 1e-10 * (p.mu + p.nu)
    raw = model.bracket_coeffs(p, sol)
    assert abs(raw.C) <= 1e-10 * (p.mu + p.nu)
    assert abs(raw.D) <= 1e-10 * (p.mu + p.nu)


@given(seeds)
def test_root_product(seed):
    p = random_params(np.random.default_rng(seed))
    assume(p.k > 1e-6)
    small, large = model.quadratic_roots(p)
    assert abs(small * large - 1.0) < 1e-12


@given(seeds)
def test_rate_invariants(seed):
    p = random_params(np.random.default_rng(seed))
    tc = model.transformed_coeffs(p, model.solve_squeeze(p))
    assert abs(tc.mu_minus_nu - (p.mu - p.nu)) < 1e-10
    assert tc.mu_p >= tc.nu_p >= 0.0


@given(seeds, st.floats(0.0, 1.0))
def test_nu_p_positive_iff_strict(seed, frac):
    p = random_params(np.random.default_rng(seed), k_frac=frac)
    tc = model.transformed_coeffs(p, model.solve_squeeze(p))
    if frac < 1.0 and p.nu > 0:
        assert tc.nu_p > 0
    if frac == 1.0:
        assert tc.nu_p < 1e-10 * p.mu


def test_nu_p_vanishes_continuously():
    mu, nu = 2.0, 0.5
    values = []
    for gap in (1e-2, 1e-4, 1e-6, 0.0):
        k = math.sqrt(mu * nu - gap)
        p = ModelParams(1.0, mu, nu, k)
        values.append(model.transformed_coeffs(p, model.solve_squeeze(p)).nu_p)
    assert values == sorted(values, reverse=True)
    assert values[-1] == 0.0 and values[-2] < 1e-6
