"""
Dense complex linear algebra used throughout the package.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``; numpy supplies
storage and BLAS products, everything else (Kronecker layout, the Pade
scaling-and-squaring exponential, the cyclic Jacobi eigensolver) lives here.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractError, NumericError, ShapeError, SizeError

# 2**27 complex128 entries is 2 GiB, far above any desk-scale superoperator.
MAX_ENTRIES = 2**27

HERMITIAN_RTOL = 1e-10


def as_cmatrix(A, name="matrix"):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {A.shape}")
    return A


def _require_square(A, name="matrix"):
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {A.shape}")


def kron(A, B):
    """Kronecker product with entry ((i*rB + k), (j*cB + l)) = A[i, j] * B[k, l]."""
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    (ra, ca), (rb, cb) = A.shape, B.shape
    if ra * rb * ca * cb > MAX_ENTRIES:
        raise SizeError(
            f"kron of {A.shape} and {B.shape} needs {ra * rb * ca * cb} entries "
            f"(limit {MAX_ENTRIES})"
        )
    out = A[:, None, :, None] * B[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


# Pade coefficients and 1-norm thresholds theta_m for double precision
# (Higham 2005, "The scaling and squaring method for the matrix exponential
# revisited"); the thresholds keep the backward error below 2**-53.
_PADE_B = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}


def _pade_low(A, m, ident):
    b = _PADE_B[m]
    A2 = A @ A
    powers = [ident, A2]
    for _ in range(2, (m + 1) // 2):
        powers.append(powers[-1] @ A2)
    U = sum(b[2 * j + 1] * powers[j] for j in range(len(powers)))
    V = sum(b[2 * j] * powers[j] for j in range(len(powers)))
    return A @ U, V


def _pade13(A, ident):
    b = _PADE_B[13]
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
             + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
         + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
    return U, V


def expm(A, scale=1.0):
    """
    Return exp(scale * A) by scaling and squaring with a diagonal Pade kernel.

    The Pade degree and the number of squarings are picked from the 1-norm of
    ``scale * A`` so that the backward error stays at unit roundoff.
    """
    A = as_cmatrix(A, "A")
    _require_square(A, "A")
    n = A.shape[0]
    X = complex(scale) * A
    if not np.all(np.isfinite(X)):
        raise NumericError("expm input contains NaN or Inf")
    ident = np.eye(n, dtype=complex)
    if n == 0:
        return ident
    norm1 = np.abs(X).sum(axis=0).max()
    if norm1 == 0.0:
        return ident

    for m in (3, 5, 7, 9):
        if norm1 <= _THETA[m]:
            U, V = _pade_low(X, m, ident)
            return _finish(U, V, 0)

    s = max(0, int(np.ceil(np.log2(norm1 / _THETA[13]))))
    U, V = _pade13(X / 2.0**s, ident)
    return _finish(U, V, s)


def _finish(U, V, squarings):
    R = np.linalg.solve(V - U, V + U)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            R = R @ R
    if not np.all(np.isfinite(R)):
        raise NumericError("matrix exponential overflowed")
    return R


def frobenius(A):
    return float(np.sqrt(np.sum(np.abs(np.asarray(A)) ** 2)))


@dataclass(frozen=True)
class MatrixNorms:
    frobenius: float
    trace: Optional[complex]
    herm_defect: Optional[float]


def norms_and_trace(A):
    """Frobenius norm, trace and Hermiticity defect ||A - A^dagger||_F.

    Trace and defect are ``None`` for a non-square input.
    """
    A = as_cmatrix(A, "A")
    fro = frobenius(A)
    if A.shape[0] != A.shape[1]:
        return MatrixNorms(fro, None, None)
    return MatrixNorms(fro, complex(np.trace(A)), frobenius(A - A.conj().T))


def _check_hermitian(H, rtol):
    scale = frobenius(H)
    defect = frobenius(H - H.conj().T)
    if defect > rtol * max(scale, np.finfo(float).tiny):
        raise ContractError(
            f"matrix is not Hermitian: ||H - H^dagger||_F = {defect:.3e} "
            f"against ||H||_F = {scale:.3e}"
        )


def _round_robin(n):
    """Pairings of 0..n-1 (n even) such that every pair meets once per sweep."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        rounds.append((np.array(players[:half]), np.array(players[::-1][:half])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off_norm(A):
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return frobenius(off)


def hermitian_eigvals(H, rtol=HERMITIAN_RTOL, check=True, max_sweeps=60):
    """
    Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi sweeps.

    Each rotation zeroes one off-diagonal pair using a unitary that first
    removes the phase of the pivot and then applies a real Givens rotation.
    Sweeps use round-robin ordering: the n/2 rotations of a round act on
    disjoint index pairs, commute, and are applied together. With
    ``check=False`` the Hermitian part (H + H^dagger)/2 is diagonalized
    without the defect test.
    """
    H = as_cmatrix(H, "H")
    _require_square(H, "H")
    if check:
        _check_hermitian(H, rtol)
    n = H.shape[0]
    if n == 0:
        return np.zeros(0)
    m = n + (n % 2)
    A = np.zeros((m, m), dtype=complex)
    A[:n, :n] = 0.5 * (H + H.conj().T)
    total = frobenius(A)
    if total == 0.0:
        return np.zeros(n)
    target = 1e-15 * total
    rounds = _round_robin(m)

    for _ in range(max_sweeps):
        if _off_norm(A) <= target:
            # the padding index (if any) stays an exact zero eigenvalue; drop it
            return np.sort(np.real(np.diag(A))[:n])
        for P, Q in rounds:
            apq = A[P, Q]
            g = np.abs(apq)
            active = g > 1e-300
            if not np.any(active):
                continue
            P, Q, apq, g = P[active], Q[active], apq[active], g[active]
            app = A[P, P].real
            aqq = A[Q, Q].real
            tau = (aqq - app) / (2.0 * g)
            t = np.sign(tau) / (np.abs(tau) + np.hypot(1.0, tau))
            t[tau == 0] = 1.0
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            ph = np.conj(apq) / g
            # per pair: R_pp = c, R_pq = s, R_qp = -s*ph, R_qq = c*ph; A <- R^+ A R
            col_p = A[:, P].copy()
            col_q = A[:, Q].copy()
            A[:, P] = c * col_p - (s * ph) * col_q
            A[:, Q] = s * col_p + (c * ph) * col_q
            row_p = A[P, :].copy()
            row_q = A[Q, :].copy()
            A[P, :] = c[:, None] * row_p - (s * np.conj(ph))[:, None] * row_q
            A[Q, :] = s[:, None] * row_p + (c * np.conj(ph))[:, None] * row_q
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            A[P, P] = A[P, P].real
            A[Q, Q] = A[Q, Q].real
    raise NumericError(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")


def hermitian_min_eig(H, rtol=HERMITIAN_RTOL):
    """Smallest eigenvalue of a Hermitian matrix (see ``hermitian_eigvals``)."""
    return float(hermitian_eigvals(H, rtol=rtol)[0])
