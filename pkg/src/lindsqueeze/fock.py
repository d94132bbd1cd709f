"""
Truncated single-mode Fock space: ladder operators, squeezing, initial states.

Levels |0>, ..., |d-1> are retained. The annihilation operator carries an
arbitrary global phase e^{i theta} (theta = 0 is the usual convention).
"""
import math

import numpy as np

from . import numkit
from .errors import ContractError, ShapeError, TruncationRangeError

DENSITY_ATOL = 1e-10
POSITIVITY_SLACK = 1e-8


def _check_dim(d):
    if int(d) != d or d < 2:
        raise ShapeError(f"Fock truncation must be an integer >= 2, got {d!r}")
    return int(d)


def annihilation(d, theta=0.0):
    """a with entries (n, n+1) = e^{i theta} sqrt(n+1)."""
    d = _check_dim(d)
    return np.diag(np.exp(1j * theta) * np.sqrt(np.arange(1, d)), 1).astype(complex)


def creation(d, theta=0.0):
    return annihilation(d, theta).conj().T


def number(d):
    """N = a^dagger a = diag(0, 1, ..., d-1), independent of theta."""
    d = _check_dim(d)
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def squeeze_generator(d, eps, theta=0.0):
    """(eps a^dagger^2 - conj(eps) a^2) / 2, anti-Hermitian even after truncation."""
    a = annihilation(d, theta)
    ad = a.conj().T
    eps = complex(eps)
    return 0.5 * (eps * (ad @ ad) - eps.conjugate() * (a @ a))


def squeeze_operator(d, eps, theta=0.0):
    """S(eps) = exp((eps a^dagger^2 - conj(eps) a^2) / 2) on the truncated space."""
    return numkit.expm(squeeze_generator(d, eps, theta))


def interior(M, m):
    """Restrict an operator to the levels below ``m``."""
    return np.asarray(M)[:m, :m]


def state(kind, d, param=None):
    """
    Build an initial density matrix.

    kind is ``"fock"`` (param = n), ``"coherent"`` (param = alpha, complex) or
    ``"thermal"`` (param = mean photon number). The result is renormalized to
    unit trace after truncation. Parameters must stay well inside the
    truncation: n < d/2, |alpha|^2 < d/4, nbar < d/4.
    """
    d = _check_dim(d)
    if kind == "fock":
        n = 0 if param is None else param
        if int(n) != n or n < 0:
            raise TruncationRangeError(f"Fock level must be a non-negative integer, got {n!r}")
        if not n < d / 2:
            raise TruncationRangeError(f"Fock level {n} needs n < d/2 = {d / 2}")
        rho = np.zeros((d, d), dtype=complex)
        rho[int(n), int(n)] = 1.0
        return rho

    if kind == "coherent":
        alpha = complex(0.0 if param is None else param)
        if not abs(alpha) ** 2 < d / 4:
            raise TruncationRangeError(f"|alpha|^2 = {abs(alpha) ** 2:g} needs to be < d/4 = {d / 4}")
        # Fock-basis amplitudes for theta = 0; a nonzero theta rotates alpha.
        amps = np.array(
            [alpha**n / math.sqrt(math.factorial(n)) for n in range(d)], dtype=complex
        )
        amps /= np.linalg.norm(amps)
        return np.outer(amps, amps.conj())

    if kind == "thermal":
        nbar = 0.0 if param is None else float(param)
        if nbar < 0 or not nbar < d / 4:
            raise TruncationRangeError(f"thermal nbar = {nbar:g} must lie in [0, d/4 = {d / 4})")
        if nbar == 0.0:
            return state("fock", d, 0)
        ratio = nbar / (nbar + 1.0)
        pops = ratio ** np.arange(d)
        return np.diag(pops / pops.sum()).astype(complex)

    raise ValueError(f"unknown state kind {kind!r}; expected fock, coherent or thermal")


def check_density(rho, atol=DENSITY_ATOL, slack=POSITIVITY_SLACK):
    """Raise ContractError unless rho is Hermitian, unit-trace and positive."""
    rho = numkit.as_cmatrix(rho, "rho")
    norms = numkit.norms_and_trace(rho)
    if norms.trace is None:
        raise ShapeError(f"density matrix must be square, got {rho.shape}")
    if norms.herm_defect > atol:
        raise ContractError(f"density matrix not Hermitian (defect {norms.herm_defect:.3e})")
    if abs(norms.trace - 1.0) > atol:
        raise ContractError(f"density matrix trace {norms.trace:.12g} != 1")
    lam = numkit.hermitian_min_eig(rho, rtol=max(atol, numkit.HERMITIAN_RTOL))
    if lam < -slack:
        raise ContractError(f"density matrix not positive (min eigenvalue {lam:.3e})")
    return rho
