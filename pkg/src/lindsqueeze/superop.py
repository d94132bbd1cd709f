"""
Row-major vectorization, the two su(1,1) generator triples on Liouville space,
and the lab-frame / squeezed-frame Liouvillians.

vec stacks rows: vec(X) = (x00, x01, ..., x10, x11, ...), so that
vec(A X B) = kron(A, B^T) vec(X).
"""
import cmath
from typing import NamedTuple

import numpy as np

from . import fock
from .numkit import as_cmatrix, kron
from .errors import ShapeError


def vec(X):
    X = as_cmatrix(X, "X")
    if X.shape[0] != X.shape[1]:
        raise ShapeError(f"vec expects a square matrix, got {X.shape}")
    return X.reshape(-1).copy()


def unvec(v, d):
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.shape[0] != d * d:
        raise ShapeError(f"unvec expects a vector of length {d * d}, got shape {v.shape}")
    return v.reshape(d, d).copy()


def sandwich(A, B):
    """Superoperator of X -> A X B."""
    return kron(A, np.asarray(B).T)


def left(A):
    return sandwich(A, np.eye(A.shape[0]))


def right(B):
    return sandwich(np.eye(B.shape[0]), B)


def commutator_superop(H):
    """Superoperator of X -> -i [H, X]."""
    return -1j * (left(H) - right(H))


def bracket(L, R):
    """Superoperator of X -> R L X + X R L - 2 L X R (a Lindblad-type bracket)."""
    RL = R @ L
    return left(RL) + right(RL) - 2.0 * sandwich(L, R)


class GeneratorSet(NamedTuple):
    k3: np.ndarray
    kp: np.ndarray
    km: np.ndarray


def _check_gen_dim(d):
    if int(d) != d or d < 4:
        raise ShapeError(f"generator sets need d >= 4, got {d!r}")
    return int(d)


def k_generators(d, theta=0.0):
    """K3 = (N x 1 - 1 x N)/2, K+ = (a+^2 x 1 - 1 x (a+^2)^T)/2, K- likewise with a^2."""
    d = _check_gen_dim(d)
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    N = fock.number(d)
    k3 = 0.5 * (left(N) - right(N))
    kp = 0.5 * (left(ad @ ad) - right(ad @ ad))
    km = 0.5 * (left(a @ a) - right(a @ a))
    return GeneratorSet(k3, kp, km)


def ktilde_generators(d, theta=0.0):
    """K~3 = (N x 1 + 1 x N + 1 x 1)/2, K~+ = a+ x a^T, K~- = a x (a+)^T."""
    d = _check_gen_dim(d)
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    N = fock.number(d)
    k3 = 0.5 * (left(N) + right(N) + np.eye(d * d))
    return GeneratorSet(k3, sandwich(ad, a), sandwich(a, ad))


def interior_indices(d, m):
    """Liouville-space indices i*d + j with both i, j < m."""
    idx = np.arange(m)
    return (idx[:, None] * d + idx[None, :]).ravel()


def project_interior(M, d, m):
    idx = interior_indices(d, m)
    return np.asarray(M)[np.ix_(idx, idx)]


def liouvillian_original(p, d, theta=0.0):
    """Lab-frame generator with all four dissipator brackets, truncated literally."""
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    kappa = complex(p.kappa)
    L = commutator_superop(p.omega * fock.number(d))
    L -= 0.5 * p.mu * bracket(a, ad)
    L -= 0.5 * p.nu * bracket(ad, a)
    L -= 0.5 * kappa * bracket(a, a)
    L -= 0.5 * kappa.conjugate() * bracket(ad, ad)
    return L


def squeezed_hamiltonian(p, sol, d, theta=0.0):
    """omega [(c^2 + s^2) N - e^{i phi} cs a+^2 - e^{-i phi} cs a^2]."""
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    e = cmath.exp(1j * sol.phi)
    return p.omega * (
        sol.c2s2 * fock.number(d) - e * sol.cs * (ad @ ad) - e.conjugate() * sol.cs * (a @ a)
    )


class TransformedLiouvillian(NamedTuple):
    L_S: np.ndarray
    A: np.ndarray
    At: np.ndarray
    scalar: float

    @property
    def generator_sum(self):
        """scalar * 1 + A + At, the form the split propagator factorizes."""
        return self.scalar * np.eye(self.A.shape[0]) + self.A + self.At


def hamiltonian_part(p, sol, gens):
    """A = -2i omega (c^2+s^2) K3 + 2i omega e^{i phi} cs K+ + 2i omega e^{-i phi} cs K-."""
    e = cmath.exp(1j * sol.phi)
    w = p.omega
    return (-2j * w * sol.c2s2 * gens.k3
            + 2j * w * e * sol.cs * gens.kp
            + 2j * w * e.conjugate() * sol.cs * gens.km)


def dissipative_part(tc, gens_tilde):
    """At = -(mu_p + nu_p) K~3 + nu_p K~+ + mu_p K~-."""
    return (-(tc.mu_p + tc.nu_p) * gens_tilde.k3
            + tc.nu_p * gens_tilde.kp
            + tc.mu_p * gens_tilde.km)


def liouvillian_transformed(p, sol, tc, d, theta=0.0):
    """
    Squeezed-frame generator and its su(1,1) decomposition.

    ``L_S`` is the squeezed-frame master equation built from truncated
    operators (so it is exactly trace preserving and reduces to the lab-frame
    generator when kappa = 0). ``A`` and ``At`` are the K and K~ expansions;
    ``scalar + A + At`` equals ``L_S`` except on the diagonal entries touching
    level d-1, where truncated a a^+ differs from N + 1.
    """
    a = fock.annihilation(d, theta)
    ad = a.conj().T
    L_S = commutator_superop(squeezed_hamiltonian(p, sol, d, theta))
    L_S -= 0.5 * tc.mu_p * bracket(a, ad)
    L_S -= 0.5 * tc.nu_p * bracket(ad, a)
    A = hamiltonian_part(p, sol, k_generators(d, theta))
    At = dissipative_part(tc, ktilde_generators(d, theta))
    return TransformedLiouvillian(L_S=L_S, A=A, At=At, scalar=0.5 * (p.mu - p.nu))


def frame_conjugate(L, S, S_inv=None):
    """kron(S, conj S) L kron(S, conj S)^-1: the generator seen after rho -> S rho S^+."""
    S = as_cmatrix(S, "S")
    if S_inv is None:
        S_inv = np.linalg.inv(S)
    W = kron(S, S.conj())
    W_inv = kron(S_inv, np.asarray(S_inv).conj())
    return W @ L @ W_inv
