"""
Time evolution engines and state diagnostics.

All engines work on row-major vectorized density matrices. ``exact`` and
``rk4`` integrate a given Liouvillian; ``split`` and ``factorized`` build the
first-order approximation exp((mu-nu)t/2) exp(tA) exp(tA~) in the squeezed
frame, the latter through the (G, F, E) disentangled factors.
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import disentangle, numkit, superop
from .errors import ShapeError, StepSizeError
from .numkit import expm

METHODS = ("exact", "split", "factorized", "rk4")


@dataclass
class EvolutionResult:
    times: np.ndarray
    states: List[np.ndarray]
    method: str
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CompareReport:
    frobenius_error: float
    trace_distance: float
    trace_defect: float
    herm_defect: float
    min_eig: float


def _times(times):
    times = np.asarray(times, dtype=float).ravel()
    if times.size == 0:
        raise ShapeError("time grid is empty")
    if np.any(np.diff(times) < 0):
        raise ShapeError("time grid must be sorted")
    if times[0] < 0:
        raise ShapeError("times must be non-negative")
    return times


def _dim(rho0, L=None):
    rho0 = numkit.as_cmatrix(rho0, "rho0")
    d = rho0.shape[0]
    if rho0.shape != (d, d):
        raise ShapeError(f"initial state must be square, got {rho0.shape}")
    if L is not None and L.shape != (d * d, d * d):
        raise ShapeError(f"Liouvillian shape {L.shape} does not match state dimension {d}")
    return rho0, d


class _Propagator:
    """exp(tM) on a sorted grid, reusing exp(hM) when consecutive steps repeat."""

    def __init__(self, M):
        self.M = M
        self.t = 0.0
        self.P = np.eye(M.shape[0], dtype=complex)
        self._h = None
        self._step = None

    def advance(self, t):
        h = t - self.t
        if h == 0:
            return self.P
        if self._h is None or abs(h - self._h) > 1e-12 * max(1.0, abs(t)):
            self._h, self._step = h, expm(self.M, h)
        self.P = self._step @ self.P
        self.t = t
        return self.P


def evolve_exact(L, rho0, times):
    """rho(t) = unvec(exp(tL) vec(rho0)) at each requested time.

    On a uniform grid one step propagator exp(hL) is computed and reused.
    """
    rho0, d = _dim(rho0, L)
    times = _times(times)
    v = superop.vec(rho0)
    t_cur, h_cached, step = 0.0, None, None
    states = []
    for t in times:
        h = t - t_cur
        if h > 0:
            if h_cached is None or abs(h - h_cached) > 1e-12 * max(1.0, t):
                h_cached, step = h, expm(L, h)
            v = step @ v
            t_cur = t
        states.append(superop.unvec(v, d))
    return EvolutionResult(times, states, "exact")


def evolve_rk4(L, rho0, times, dt, growth_rate=0.0):
    """
    Classic fixed-step fourth-order Runge-Kutta for v' = L v.

    Each interval between requested times is split into equal steps no longer
    than ``dt``. Raises StepSizeError if ||v|| grows beyond 10 exp(growth_rate t) ||v0||.
    """
    rho0, d = _dim(rho0, L)
    times = _times(times)
    if not dt > 0:
        raise StepSizeError(f"step size must be positive, got {dt!r}")
    norm1 = np.abs(L).sum(axis=0).max()
    if dt * norm1 >= 1.0:
        warnings.warn(
            f"dt * ||L||_1 = {dt * norm1:.3g} >= 1; RK4 may be inaccurate", RuntimeWarning
        )
    v = superop.vec(rho0)
    n0 = np.linalg.norm(v)
    t_cur = 0.0
    states = []
    for t in times:
        span = t - t_cur
        if span > 0:
            n_steps = max(1, math.ceil(span / dt - 1e-9))
            h = span / n_steps
            for i in range(n_steps):
                k1 = L @ v
                k2 = L @ (v + 0.5 * h * k1)
                k3 = L @ (v + 0.5 * h * k2)
                k4 = L @ (v + h * k3)
                v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                tt = t_cur + (i + 1) * h
                if not np.all(np.isfinite(v)) or np.linalg.norm(v) > 10.0 * math.exp(growth_rate * tt) * n0:
                    raise StepSizeError(f"RK4 unstable at t = {tt:.6g} with step {h:.3g}")
            t_cur = t
        states.append(superop.unvec(v, d))
    return EvolutionResult(times, states, "rk4")


def evolve_split(p, sol, tc, rho0, times, theta=0.0):
    """exp((mu-nu)t/2) exp(tA) exp(tA~) vec(rho0) with dense matrix exponentials."""
    rho0, d = _dim(rho0)
    times = _times(times)
    tl = superop.liouvillian_transformed(p, sol, tc, d, theta)
    v0 = superop.vec(rho0)
    prop_a = _Propagator(tl.A)
    prop_at = _Propagator(tl.At)
    states = []
    for t in times:
        # exp(tA) and exp(tA~) are each semigroups in t, the product is not
        u = prop_at.advance(t) @ v0
        v = math.exp(tl.scalar * t) * (prop_a.advance(t) @ u)
        states.append(superop.unvec(v, d))
    comm = numkit.frobenius(tl.A @ tl.At - tl.At @ tl.A)
    return EvolutionResult(
        times, states, "split",
        diagnostics={"commutator_norm": comm,
                     "first_order_defect": [0.5 * comm * t * t for t in times]},
    )


def evolve_factorized(p, sol, tc, rho0, times, theta=0.0, route="superop"):
    """
    The split propagator rebuilt from disentangled factors.

    route="superop" multiplies exp(G K+) exp(-2 log F K3) exp(E K-) for both
    generator triples; route="operator" applies the nested operator-level
    conjugations directly to rho0.
    """
    rho0, d = _dim(rho0)
    times = _times(times)
    fHs = disentangle.track_log(lambda t: disentangle.gfe_hamiltonian(p, sol, t), times)
    fDs = disentangle.track_log(lambda t: disentangle.gfe_dissipative(tc, t), times)
    scalar = 0.5 * (p.mu - p.nu)
    states = []
    if route == "superop":
        gk = superop.k_generators(d, theta)
        gt = superop.ktilde_generators(d, theta)
        v0 = superop.vec(rho0)
        for t, fH, fD in zip(times, fHs, fDs):
            v = disentangle.factorized_apply(fD, gt, v0)
            v = disentangle.factorized_apply(fH, gk, v)
            states.append(superop.unvec(math.exp(scalar * t) * v, d))
    elif route == "operator":
        for fH, fD in zip(fHs, fDs):
            states.append(disentangle.operator_level_apply(fH, fD, rho0, p.mu - p.nu, theta))
    else:
        raise ValueError(f"unknown route {route!r}; expected 'superop' or 'operator'")
    return EvolutionResult(times, states, "factorized", diagnostics={"route": route})


def steady_state(L, d):
    """Normalized null vector of L (smallest singular value), as a density matrix."""
    _, _, vh = np.linalg.svd(L)
    rho = superop.unvec(vh[-1].conj(), d)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def observables(rho, ops):
    """Tr(O rho) for each operator O."""
    rho = numkit.as_cmatrix(rho, "rho")
    out = []
    for O in ops:
        O = numkit.as_cmatrix(O, "operator")
        if O.shape != rho.shape:
            raise ShapeError(f"operator shape {O.shape} does not match state shape {rho.shape}")
        out.append(complex(np.sum(O * rho.T)))
    return out


def compare(rho_a, rho_b):
    """
    Distance between two states plus defect diagnostics of ``rho_a``.

    The trace distance and minimum eigenvalue use the Hermitian part, since
    approximate propagators may leave roundoff-level anti-Hermitian residue.
    """
    rho_a = numkit.as_cmatrix(rho_a, "rho_a")
    rho_b = numkit.as_cmatrix(rho_b, "rho_b")
    if rho_a.shape != rho_b.shape:
        raise ShapeError(f"state shapes differ: {rho_a.shape} vs {rho_b.shape}")
    diff = rho_a - rho_b
    fro = numkit.frobenius(diff)
    td = 0.0
    if fro > 0:
        td = 0.5 * float(np.sum(np.abs(numkit.hermitian_eigvals(diff, check=False))))
    norms = numkit.norms_and_trace(rho_a)
    return CompareReport(
        frobenius_error=fro,
        trace_distance=td,
        trace_defect=abs(norms.trace - 1.0),
        herm_defect=norms.herm_defect,
        min_eig=float(numkit.hermitian_eigvals(rho_a, check=False)[0]),
    )
