"""
Parameters of the damped oscillator with anomalous (a^2, a^dagger^2) damping,
and the squeezing that removes the anomalous terms.

Master equation in the lab frame::

    d rho/dt = -i[omega N, rho]
               - mu/2     (a^+a rho + rho a^+a - 2 a rho a^+)
               - nu/2     (a a^+ rho + rho a a^+ - 2 a^+ rho a)
               - kappa/2  (a^2 rho + rho a^2 - 2 a rho a)
               - kappa*/2 (a^+^2 rho + rho a^+^2 - 2 a^+ rho a^+)

Conjugating with S(eps), eps = |eps| e^{i phi}, mixes the four dissipator
brackets. Writing kappa = k e^{-i phi}, the anomalous brackets drop out when
t = tanh|eps| solves k t^2 - (mu + nu) t + k = 0.
"""
import cmath
import math
from dataclasses import dataclass

from .errors import InconsistentSolutionError, NumericError, ValidationError

RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    omega: float
    mu: float
    nu: float
    kappa: complex = 0j

    @property
    def k(self):
        return abs(self.kappa)


def validate(p):
    """Return ``p`` unchanged if it satisfies mu > nu >= 0 and mu*nu >= |kappa|^2."""
    for name in ("omega", "mu", "nu"):
        value = getattr(p, name)
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value!r}")
    kappa = complex(p.kappa)
    if not (math.isfinite(kappa.real) and math.isfinite(kappa.imag)):
        raise ValidationError(f"kappa must be finite, got {p.kappa!r}")
    if not p.nu >= 0:
        raise ValidationError(f"rate condition nu >= 0 violated (nu = {p.nu!r})")
    if not p.mu > p.nu:
        raise ValidationError(f"rate condition mu > nu violated (mu = {p.mu!r}, nu = {p.nu!r})")
    k2 = abs(kappa) ** 2
    if p.mu * p.nu - k2 < -1e-14 * max(1.0, k2):
        raise ValidationError(
            f"positivity violated: mu*nu = {p.mu * p.nu!r} < |kappa|^2 = {k2!r}"
        )
    return p


@dataclass(frozen=True)
class SqueezeSolution:
    phi: float
    t_h: float
    abs_eps: float
    c: float
    s: float

    @property
    def eps(self):
        return cmath.rect(self.abs_eps, self.phi)

    @property
    def cs(self):
        return self.c * self.s

    @property
    def c2s2(self):
        """c^2 + s^2 = cosh(2|eps|)."""
        return self.c**2 + self.s**2


def squeeze_from_tanh(phi, t_h):
    """Build the cached cosh/sinh values for a given tanh|eps|."""
    if not 0.0 <= t_h < 1.0:
        raise NumericError(f"tanh|eps| = {t_h!r} is outside [0, 1)")
    c = 1.0 / math.sqrt((1.0 - t_h) * (1.0 + t_h))
    return SqueezeSolution(phi=phi, t_h=t_h, abs_eps=math.atanh(t_h), c=c, s=t_h * c)


def discriminant(p):
    """(mu + nu)^2 - 4 k^2, evaluated as (mu - nu)^2 + 4 (mu nu - k^2)."""
    return (p.mu - p.nu) ** 2 + 4.0 * (p.mu * p.nu - p.k**2)


def quadratic_roots(p):
    """Both roots of k t^2 - (mu+nu) t + k = 0 as (small, large); k must be > 0."""
    k = p.k
    big = (p.mu + p.nu + math.sqrt(max(discriminant(p), 0.0))) / (2.0 * k)
    return 1.0 / big, big


def solve_squeeze(p):
    """
    Squeezing phase and magnitude that cancel the anomalous dissipator terms.

    phi = -arg(kappa) and tanh|eps| is the root of k t^2 - (mu+nu) t + k = 0 in
    [0, 1). The roots multiply to one; the small one is computed as
    2k / ((mu+nu) + sqrt(D)) to avoid cancellation when k << mu + nu.
    """
    k = p.k
    d_expanded = (p.mu + p.nu) ** 2 - 4.0 * k**2
    d_stable = discriminant(p)
    scale = (p.mu + p.nu) ** 2
    if d_stable < -1e-12 * max(1.0, scale):
        raise NumericError(f"negative discriminant {d_stable!r} for validated parameters")
    if abs(d_expanded - d_stable) > 1e-12 * max(1.0, scale):
        raise NumericError(
            f"discriminant forms disagree: {d_expanded!r} vs {d_stable!r}"
        )
    if k == 0.0:
        return squeeze_from_tanh(0.0, 0.0)
    t_h = 2.0 * k / (p.mu + p.nu + math.sqrt(max(d_stable, 0.0)))
    return squeeze_from_tanh(0.0 - cmath.phase(p.kappa), t_h)


@dataclass(frozen=True)
class BracketCoeffs:
    """Weights of the four lab-frame brackets after conjugation by S."""
    A: complex
    B: complex
    C: complex
    D: complex


def bracket_coeffs(p, sol):
    """Coefficients of the a^+a, aa^+, a^2 and a^+^2 brackets in the squeezed frame."""
    c, s, phi = sol.c, sol.s, sol.phi
    mu, nu, kap = p.mu, p.nu, complex(p.kappa)
    kbar = kap.conjugate()
    e = cmath.exp(1j * phi)
    ec = e.conjugate()
    cs = c * s
    A = mu * c * c + nu * s * s - kap * e * cs - kbar * ec * cs
    B = mu * s * s + nu * c * c - kap * e * cs - kbar * ec * cs
    C = -mu * ec * cs - nu * ec * cs + kap * c * c + ec * ec * kbar * s * s
    D = -mu * e * cs - nu * e * cs + kbar * c * c + e * e * kap * s * s
    return BracketCoeffs(A, B, C, D)


def anomalous_residual(p, sol):
    """|-(mu+nu) c s + k (c^2 + s^2)|, the quantity the squeeze must cancel."""
    return abs(-(p.mu + p.nu) * sol.cs + p.k * sol.c2s2)


@dataclass(frozen=True)
class TransformedCoeffs:
    mu_p: float
    nu_p: float

    @property
    def mu_minus_nu(self):
        return self.mu_p - self.nu_p


def transformed_coeffs(p, sol, rtol=RESIDUAL_RTOL):
    """
    Decay rates of the squeezed-frame Lindblad form.

    mu_p = mu c^2 + nu s^2 - 2kcs and nu_p = mu s^2 + nu c^2 - 2kcs. Their
    product equals mu nu - k^2 (the Kossakowski determinant is invariant under
    the Bogoliubov map) and their difference equals mu - nu, which gives the
    cancellation-free values returned here. Both forms are cross-checked, as is
    the vanishing of the a^2 / a^+^2 bracket weights.
    """
    scale = max(1.0, p.mu + p.nu) * sol.c2s2
    raw = bracket_coeffs(p, sol)
    if abs(raw.C) > rtol * scale or abs(raw.D) > rtol * scale:
        raise InconsistentSolutionError(
            f"anomalous bracket weights do not vanish: |C| = {abs(raw.C):.3e}, "
            f"|D| = {abs(raw.D):.3e}"
        )
    if p.k == 0.0:
        # identity squeeze: keep the rates bit-for-bit
        mu_p, nu_p = float(p.mu), float(p.nu)
    else:
        det = p.mu * p.nu - p.k**2
        diff = p.mu - p.nu
        nu_p = 2.0 * max(det, 0.0) / (diff + math.sqrt(max(discriminant(p), 0.0)))
        mu_p = nu_p + diff
    if abs(raw.A - mu_p) > rtol * scale or abs(raw.B - nu_p) > rtol * scale:
        raise InconsistentSolutionError(
            f"direct rates ({raw.A:.12g}, {raw.B:.12g}) disagree with "
            f"closed form ({mu_p:.12g}, {nu_p:.12g})"
        )
    return TransformedCoeffs(mu_p=mu_p, nu_p=nu_p)
