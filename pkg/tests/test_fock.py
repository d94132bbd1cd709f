import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lindsqueeze import evolve, fock, numkit
from lindsqueeze.errors import ContractError, ShapeError, TruncationRangeError

thetas = st.floats(0.0, 2 * math.pi)


def test_annihilation_d3():
    expected = np.array([[0, 1, 0], [0, 0, math.sqrt(2)], [0, 0, 0]])
    assert np.array_equal(fock.annihilation(3), expected)


@given(st.integers(2, 12), thetas)
def test_annihilation_superdiagonal(d, theta):
    a = fock.annihilation(d, theta)
    n = np.arange(d - 1)
    assert np.allclose(a[n, n + 1], np.exp(1j * theta) * np.sqrt(n + 1), atol=1e-15)
    a[n, n + 1] = 0
    assert not np.any(a)


@given(st.integers(2, 12), thetas)
def test_creation_is_adjoint(d, theta):
    assert np.array_equal(fock.creation(d, theta), fock.annihilation(d, theta).conj().T)


@given(st.integers(2, 12), thetas)
def test_number_is_ad_a(d, theta):
    a = fock.annihilation(d, theta)
    N = a.conj().T @ a
    assert np.allclose(N, np.diag(np.arange(d)), atol=1e-13)
    assert np.array_equal(fock.number(d), np.diag(np.arange(d, dtype=float)))


def test_number_d4():
    assert np.array_equal(fock.number(4), np.diag([0.0, 1.0, 2.0, 3.0]))


def test_commutator_defect_at_edge():
    a = fock.annihilation(5)
    comm = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(comm, np.diag([1, 1, 1, 1, -4]), atol=1e-14)


def test_dimension_too_small():
    with pytest.raises(ShapeError):
        fock.annihilation(1)


def test_squeeze_zero_is_identity():
    assert np.allclose(fock.squeeze_operator(10, 0.0), np.eye(10), atol=0)


def test_squeeze_unitary():
    S = fock.squeeze_operator(24, 0.3 * cmath.exp(0.7j))
    assert numkit.frobenius(S.conj().T @ S - np.eye(24)) < 1e-10


@given(st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False), thetas)
def test_squeeze_inverse(eps, theta):
    S = fock.squeeze_operator(16, eps, theta)
    S_m = fock.squeeze_operator(16, -eps, theta)
    assert numkit.frobenius(S @ S_m - np.eye(16)) < 1e-10


def _adjoint_action_error(d, eps, m, theta=0.0):
    S = fock.squeeze_operator(d, eps, theta)
    a = fock.annihilation(d, theta)
    r, ph = abs(eps), cmath.phase(eps)
    target = math.cosh(r) * a - cmath.exp(1j * ph) * math.sinh(r) * a.conj().T
    return np.abs(fock.interior(S @ a @ S.conj().T - target, m)).max()


@pytest.mark.parametrize("eps", [0.3 * cmath.exp(0.7j), 0.3, 0.25j, 0.1])
@pytest.mark.parametrize("theta", [0.0, 1.3])
def test_squeeze_adjoint_action_interior(eps, theta):
    # levels below d/4; the leakage from the truncation edge is far below 1e-6 there
    assert _adjoint_action_error(32, eps, 8, theta) < 1e-6


@pytest.mark.xfail(strict=True, reason="at |eps| = 0.3 the truncation edge reaches levels near d/2")
def test_squeeze_adjoint_action_half_dimension():
    assert _adjoint_action_error(32, 0.3 * cmath.exp(0.7j), 16) < 1e-6


def test_squeeze_adjoint_action_half_dimension_small_eps():
    assert _adjoint_action_error(32, 0.1, 16) < 1e-6


def test_fock_state():
    rho = fock.state("fock", 6, 0)
    assert np.array_equal(rho, np.diag([1.0, 0, 0, 0, 0, 0]))


def test_thermal_zero_is_vacuum():
    assert np.array_equal(fock.state("thermal", 8, 0.0), fock.state("fock", 8, 0))


def test_coherent_mean_photon_number():
    rho = fock.state("coherent", 16, 1.0)
    # Poisson weights e^{-1}/n! summed directly
    w = np.array([math.exp(-1.0) / math.factorial(n) for n in range(16)])
    w /= w.sum()
    oracle = float(np.sum(np.arange(16) * w))
    n_mean = evolve.observables(rho, [fock.number(16)])[0].real
    assert abs(n_mean - 1.0) < 1e-8
    assert abs(n_mean - oracle) < 1e-14


def test_thermal_mean_photon_number():
    rho = fock.state("thermal", 32, 1.0)
    n_mean = evolve.observables(rho, [fock.number(32)])[0].real
    assert abs(n_mean - 1.0) < 1e-6


@pytest.mark.parametrize(
    "kind,d,param",
    [("fock", 8, 4), ("fock", 8, -1), ("fock", 8, 1.5), ("coherent", 8, 1.5),
     ("thermal", 8, 2.0), ("thermal", 8, -0.1)],
)
def test_state_range_errors(kind, d, param):
    with pytest.raises(TruncationRangeError):
        fock.state(kind, d, param)


def test_state_unknown_kind():
    with pytest.raises(ValueError):
        fock.state("squeezed", 8, 0.1)


@given(
    st.integers(4, 20),
    st.sampled_from(["fock", "coherent", "thermal"]),
    st.floats(0.0, 0.99),
    st.floats(0.0, 2 * math.pi),
)
def test_states_are_densities(d, kind, frac, angle):
    if kind == "fock":
        param = int(frac * d / 2)
    elif kind == "coherent":
        param = math.sqrt(frac * d / 4) * cmath.exp(1j * angle)
    else:
        param = frac * d / 4
    rho = fock.state(kind, d, param)
    fock.check_density(rho)


def test_check_density_rejects():
    with pytest.raises(ContractError):
        fock.check_density(np.diag([0.5, 0.6]))
    with pytest.raises(ContractError):
        fock.check_density(np.diag([1.5, -0.5]))
    with pytest.raises(ContractError):
        fock.check_density(np.array([[0.5, 0.1], [0.0, 0.5]]))
