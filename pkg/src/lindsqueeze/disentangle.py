"""
su(1,1) disentangling: coefficients (G, F, E) with

    exp(t (2a L3 + b L+ + c L-)) = exp(G L+) exp(-2 log(F) L3) exp(E L-),

their closed forms for the Hamiltonian (K) and dissipative (K~) parts of the
squeezed-frame generator, and the propagators assembled from them.
"""
import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from . import fock
from .errors import NumericError, SingularFactorizationError
from .numkit import expm

DEGENERATE_TOL = 1e-14
SINGULAR_TOL = 1e-12
# largest phase step of F allowed between neighbouring points when unwrapping log F
_MAX_PHASE_STEP = math.pi / 4
_MAX_BISECTIONS = 40


@dataclass(frozen=True)
class DisentangledFactors:
    G: complex
    F: complex
    E: complex
    t: float
    log_f: complex

    @property
    def log_f_principal(self):
        return cmath.log(self.F)


def _canonical_sqrt(z):
    # G, F, E are even in w; pick Re w > 0 (or Im w > 0 on the imaginary axis)
    w = cmath.sqrt(z)
    if w.real < 0 or (w.real == 0 and w.imag < 0):
        w = -w
    return w


def discriminant_root(a, b, c):
    """sqrt(a^2 - bc) on the half-plane Re > 0 (Im >= 0 when purely imaginary)."""
    return _canonical_sqrt(complex(a) ** 2 - complex(b) * complex(c))


def _check_f(F, t):
    if abs(F) < SINGULAR_TOL:
        raise SingularFactorizationError(
            f"F(t) = {F!r} vanishes at t = {t!r}; disentangled form is singular", t=t
        )


def gfe(a, b, c, t):
    """Disentangling coefficients for the triple (a, b, c) at time t."""
    a, b, c = complex(a), complex(b), complex(c)
    t = float(t)
    if not math.isfinite(t):
        raise NumericError(f"time must be finite, got {t!r}")
    z = a * a - b * c
    if abs(z) < DEGENERATE_TOL:
        F = 1.0 - a * t
        _check_f(F, t)
        return DisentangledFactors(G=b * t / F, F=F, E=c * t / F, t=t, log_f=cmath.log(F))
    w = _canonical_sqrt(z)
    ch = cmath.cosh(t * w)
    sh_w = cmath.sinh(t * w) / w
    F = ch - a * sh_w
    _check_f(F, t)
    return DisentangledFactors(G=b * sh_w / F, F=F, E=c * sh_w / F, t=t, log_f=cmath.log(F))


def hamiltonian_triple(p, sol):
    """(a, b, c) of the K-part: a = -i omega (c^2+s^2), b = 2i omega e^{i phi} cs, c = conj-phase."""
    e = cmath.exp(1j * sol.phi)
    w = p.omega
    return (-1j * w * sol.c2s2, 2j * w * e * sol.cs, 2j * w * e.conjugate() * sol.cs)


def dissipative_triple(tc):
    """(a, b, c) of the K~-part: a = -(mu_p + nu_p)/2, b = nu_p, c = mu_p."""
    return (-(tc.mu_p + tc.nu_p) / 2.0, tc.nu_p, tc.mu_p)


def gfe_hamiltonian(p, sol, t):
    """
    Closed form for the Hamiltonian part, where sqrt(a^2 - bc) = i omega:

        F = cos(omega t) + i (c^2+s^2) sin(omega t)
        G = 2i e^{i phi} cs sin(omega t) / F,   E = 2i e^{-i phi} cs sin(omega t) / F
    """
    t = float(t)
    sn, cn = math.sin(p.omega * t), math.cos(p.omega * t)
    e = cmath.exp(1j * sol.phi)
    F = complex(cn, sol.c2s2 * sn)
    G = 2j * e * sol.cs * sn / F
    E = 2j * e.conjugate() * sol.cs * sn / F
    return DisentangledFactors(G=G, F=F, E=E, t=t, log_f=cmath.log(F))


def gfe_dissipative(tc, t, rtol=1e-10):
    """Generic factors for the K~ triple; sqrt(a^2 - bc) must equal (mu - nu)/2."""
    a, b, c = dissipative_triple(tc)
    w = discriminant_root(a, b, c)
    half_gap = tc.mu_minus_nu / 2.0
    if abs(w - half_gap) > rtol * max(1.0, abs(a)):
        raise NumericError(f"dissipative root {w!r} differs from (mu - nu)/2 = {half_gap!r}")
    return gfe(a, b, c, t)


def _phase_step(f_from, f_to):
    return cmath.phase(f_to / f_from)


def track_log(factor_fn, times):
    """
    Evaluate ``factor_fn`` on ``times`` with log F continued along the path from t = 0.

    Between neighbouring points the interval is bisected until the phase of F
    moves by less than pi/4 per step, so the accumulated argument is unambiguous
    even where F winds around the origin.
    """
    times = [float(t) for t in times]
    prev_t = 0.0
    prev = factor_fn(0.0)
    prev_log = cmath.log(prev.F)
    out = []
    for t in times:
        log_f, last = _continue_log(factor_fn, prev_t, prev, prev_log, t)
        out.append(replace(last, log_f=log_f))
        prev_t, prev, prev_log = t, last, log_f
    return out


def _continue_log(factor_fn, t0, f0, log0, t1):
    cur_t, cur_f, cur_log = t0, f0, log0
    target = factor_fn(t1) if t1 != t0 else f0
    steps = 0
    while cur_t != t1:
        hi_t, hi_f = t1, target
        halvings = 0
        while abs(_phase_step(cur_f.F, hi_f.F)) > _MAX_PHASE_STEP:
            halvings += 1
            if halvings > _MAX_BISECTIONS:
                raise SingularFactorizationError(
                    f"F passes too close to zero near t = {hi_t!r}", t=hi_t
                )
            hi_t = 0.5 * (cur_t + hi_t)
            hi_f = factor_fn(hi_t)
        cur_log = complex(math.log(abs(hi_f.F)), cur_log.imag + _phase_step(cur_f.F, hi_f.F))
        cur_t, cur_f = hi_t, hi_f
        steps += 1
        if steps > 100_000:
            raise SingularFactorizationError(
                f"could not continue log F between t = {t0!r} and {t1!r}", t=cur_t
            )
    return cur_log, cur_f


def factorized_superop(f, gen):
    """exp(G K+) exp(-2 log F K3) exp(E K-) with the continued log F of ``f``."""
    _check_f(f.F, f.t)
    return expm(gen.kp, f.G) @ expm(gen.k3, -2.0 * f.log_f) @ expm(gen.km, f.E)


def _diag_of(X):
    X = np.asarray(X)
    diag = np.diag(X).copy()
    if np.any(X - np.diag(diag)):
        raise NumericError("generator expected to be diagonal")
    return diag


def _nilpotent_apply(X, scale, v):
    # exp(scale X) v as a terminating Taylor series of matrix-vector products
    out = v.copy()
    term = v
    for k in range(1, X.shape[0] + 2):
        term = (complex(scale) / k) * (X @ term)
        if not np.any(term):
            return out
        out = out + term
    raise NumericError("power series did not terminate; matrix is not nilpotent")


def factorized_apply(f, gen, v):
    """Same product as ``factorized_superop`` applied to a vector, without forming it.

    K3 is diagonal and K+/K- are nilpotent on the truncated space, so every
    factor is exact: an elementwise exponential and two terminating series.
    """
    _check_f(f.F, f.t)
    v = _nilpotent_apply(gen.km, f.E, np.asarray(v, dtype=complex))
    v = np.exp(-2.0 * f.log_f * _diag_of(gen.k3)) * v
    return _nilpotent_apply(gen.kp, f.G, v)


def nilpotent_exp(X, scale=1.0, max_terms=None):
    """exp(scale X) for nilpotent X as the terminating power series."""
    X = np.asarray(X, dtype=complex) * complex(scale)
    n = X.shape[0]
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, (max_terms or n + 1) + 1):
        term = term @ X / k
        if not np.any(term):
            return out
        out = out + term
    raise NumericError("power series did not terminate; matrix is not nilpotent")


def _number_power(d, log_z, sign):
    # diag(z^{sign * n}) using the continued logarithm of z
    return np.diag(np.exp(sign * log_z * np.arange(d)))


def operator_level_apply(fH, fD, rho0, mu_minus_nu, theta=0.0):
    """
    Approximate propagated state assembled at the operator level.

    With phi(t) = (1/F~) sum_n G~^n/n! a+^n { F~^-N [ sum_m E~^m/m! a^m rho0 a+^m ] F~^-N } a^n,

        rho(t) = e^{(mu-nu) t/2} e^{G a+^2/2} F^-N [ e^{E a^2/2} phi e^{-E a^2/2} ] F^N e^{-G a+^2/2}.

    Both sums terminate at the truncation since a^d = 0. The result is not
    renormalized.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    _check_f(fD.F, fD.t)
    _check_f(fH.F, fH.t)

    inner = np.zeros_like(rho0)
    am = np.eye(d, dtype=complex)
    for m in range(d):
        inner += (fD.E**m / math.factorial(m)) * (am @ rho0 @ am.conj().T)
        am = am @ a
    damp = _number_power(d, fD.log_f, -1.0)
    inner = damp @ inner @ damp

    phi = np.zeros_like(rho0)
    an = np.eye(d, dtype=complex)
    for n in range(d):
        phi += (fD.G**n / math.factorial(n)) * (an.conj().T @ inner @ an)
        an = an @ a
    phi *= cmath.exp(-fD.log_f)

    a2 = a @ a
    ad2 = ad @ ad
    core = nilpotent_exp(a2, fH.E / 2) @ phi @ nilpotent_exp(a2, -fH.E / 2)
    core = _number_power(d, fH.log_f, -1.0) @ core @ _number_power(d, fH.log_f, 1.0)
    out = nilpotent_exp(ad2, fH.G / 2) @ core @ nilpotent_exp(ad2, -fH.G / 2)
    t = fH.t
    return math.exp(0.5 * mu_minus_nu * t) * out
