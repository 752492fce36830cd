"""Dense complex linear algebra for the small (n <= 64) operators used here.

Matrices are plain ``complex128`` numpy arrays. Elimination-based routines
(determinant, inverse, rank, column bases) are written out so that pivot
magnitudes are available to callers; eigenvalues default to LAPACK, with a
characteristic-polynomial route (Faddeev-LeVerrier + Durand-Kerner) kept as an
independent check.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ContractViolation, DimensionError, NumericalFailure, SingularMatrix

# pivots below RANK_TOL * max|entry| are treated as exact zeros
RANK_TOL = 1e-8
SINGULAR_TOL = 1e-12


def as_matrix(A) -> np.ndarray:
    M = np.array(A, dtype=complex)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    if M.ndim != 2 or M.size == 0:
        raise DimensionError(f"expected a non-empty 2-d array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def _square(A) -> np.ndarray:
    M = as_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"square matrix required, got {M.shape}")
    return M


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def scale_of(*ops) -> float:
    """Largest absolute entry over the operands, floored at 1."""
    return max([1.0] + [float(np.max(np.abs(op))) for op in ops if np.size(op)])


def norm(A) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(A)))


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def anticommutator(A, B) -> np.ndarray:
    return A @ B + B @ A


def kron(A, B) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is ``A[i, j] * B``."""
    A, B = as_matrix(A), as_matrix(B)
    p, q = A.shape
    r, s = B.shape
    out = np.zeros((p * r, q * s), dtype=complex)
    for i in range(p):
        for j in range(q):
            if A[i, j] != 0:
                out[i * r:(i + 1) * r, j * s:(j + 1) * s] = A[i, j] * B
    return out


def lu(A):
    """Partial-pivoting LU factorisation.

    Returns ``(LU, perm, sign, pivots)`` where ``LU`` packs the unit-lower and
    upper factors, ``perm`` is the row permutation, ``sign`` its parity and
    ``pivots`` the absolute pivot values in elimination order.
    """
    U = _square(A).copy()
    n = U.shape[0]
    perm = np.arange(n)
    sign = 1.0
    pivots = []
    for k in range(n):
        i = k + int(np.argmax(np.abs(U[k:, k])))
        if i != k:
            U[[k, i]] = U[[i, k]]
            perm[[k, i]] = perm[[i, k]]
            sign = -sign
        piv = U[k, k]
        pivots.append(abs(piv))
        if piv == 0:
            continue
        U[k + 1:, k] = _divide(U[k + 1:, k], piv)
        U[k + 1:, k + 1:] -= np.outer(U[k + 1:, k], U[k, k + 1:])
    return U, perm, sign, np.array(pivots)


def det(A) -> complex:
    M = _square(A)
    scale = float(np.max(np.abs(M)))
    if scale == 0:
        return 0j
    # exact power-of-two normalisation so subnormal entries survive the pivot division
    e = int(np.frexp(scale)[1])
    LU, _, sign, _ = lu(_ldexp(M, -e))
    n = M.shape[0]
    with np.errstate(over="ignore"):
        return complex(_ldexp(np.asarray(sign * np.prod(np.diag(LU))), n * e))


def _ldexp(M, e: int) -> np.ndarray:
    return np.ldexp(M.real, e) + 1j * np.ldexp(M.imag, e)


def _divide(x, piv) -> np.ndarray:
    # numpy's complex division overflows for subnormal divisors; rescale both sides first
    e = int(np.frexp(abs(piv))[1])
    return _ldexp(np.asarray(x), -e) / complex(_ldexp(np.asarray(piv), -e))


def inverse(A, tol: float = SINGULAR_TOL) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting.

    Raises SingularMatrix when a pivot falls below ``tol * max|A|``.
    """
    M = _square(A)
    n = M.shape[0]
    W = np.hstack([M, identity(n)])
    thresh = tol * float(np.max(np.abs(M)))
    for k in range(n):
        i = k + int(np.argmax(np.abs(W[k:, k])))
        piv = abs(W[i, k])
        if piv <= thresh or piv == 0:
            raise SingularMatrix(f"pivot {piv:.3e} at step {k} below threshold {thresh:.3e}", piv)
        if i != k:
            W[[k, i]] = W[[i, k]]
        W[k] /= W[k, k]
        col = W[:, k].copy()
        col[k] = 0
        W -= np.outer(col, W[k])
    return W[:, n:]


def solve(A, b, tol: float = SINGULAR_TOL) -> np.ndarray:
    return inverse(A, tol) @ np.asarray(b, dtype=complex)


def rank(A, tol: float = RANK_TOL) -> int:
    """Rank by full-pivoting elimination; pivots <= tol * max|A| count as zero."""
    M = as_matrix(A).copy()
    scale = float(np.max(np.abs(M)))
    if scale == 0:
        return 0
    m, n = M.shape
    r = 0
    for k in range(min(m, n)):
        sub = np.abs(M[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= tol * scale:
            break
        M[[k, k + i]] = M[[k + i, k]]
        M[:, [k, k + j]] = M[:, [k + j, k]]
        M[k + 1:, k:] -= np.outer(M[k + 1:, k] / M[k, k], M[k, k:])
        r += 1
    return r


def nullity(A, tol: float = RANK_TOL) -> int:
    return as_matrix(A).shape[1] - rank(A, tol)


def column_basis(A, tol: float = RANK_TOL) -> list[int]:
    """Indices of pivot columns found by row-echelon elimination, left to right."""
    M = as_matrix(A).copy()
    scale = float(np.max(np.abs(M)))
    if scale == 0:
        return []
    m, n = M.shape
    cols = []
    row = 0
    for j in range(n):
        if row == m:
            break
        i = row + int(np.argmax(np.abs(M[row:, j])))
        if abs(M[i, j]) <= tol * scale:
            continue
        M[[row, i]] = M[[i, row]]
        M[row + 1:, j:] -= np.outer(M[row + 1:, j] / M[row, j], M[row, j:])
        cols.append(j)
        row += 1
    return cols


def matrix_exp(A) -> np.ndarray:
    """exp(A) by scaling and squaring a Taylor polynomial.

    The argument is scaled to 1-norm <= 1/2 and the series is truncated once
    the Lagrange remainder bound drops below 1e-16, well under 1e-13 of the
    result norm (which is at least e^{-1/2} after scaling).
    """
    M = _square(A)
    n = M.shape[0]
    nrm = float(np.linalg.norm(M, 1))
    s = max(0, math.ceil(math.log2(nrm / 0.5))) if nrm > 0.5 else 0
    X = M / 2.0**s
    theta = nrm / 2.0**s
    K = 1
    while theta ** (K + 1) / math.factorial(K + 1) / (1 - theta / (K + 2)) > 1e-16:
        K += 1
    E = identity(n)
    for k in range(K, 0, -1):
        E = identity(n) + (X @ E) / k
    for _ in range(s):
        E = E @ E
    return E


def _coeffs(p) -> np.ndarray:
    if isinstance(p, Polynomial):
        return np.asarray(p.coef, dtype=complex)
    return np.asarray(p, dtype=complex)


def poly_eval(p, A) -> np.ndarray:
    """Evaluate sum_k c_k A^k (ascending coefficients) by Horner's rule."""
    M = _square(A)
    c = _coeffs(p)
    n = M.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for ck in c[::-1]:
        out = M @ out + ck * identity(n)
    return out


def charpoly(A) -> Polynomial:
    """det(xI - A) by the Faddeev-LeVerrier recurrence, ascending coefficients."""
    M = _square(A)
    n = M.shape[0]
    s = max(float(np.max(np.abs(M))), 1e-300)
    B = M / s
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    Mk = np.zeros((n, n), dtype=complex)
    for k in range(1, n + 1):
        Mk = B @ Mk + c[n - k + 1] * identity(n)
        c[n - k] = -np.trace(B @ Mk) / k
    # undo the scaling: coefficient of x^j picks up s^(n-j)
    c = c * s ** (n - np.arange(n + 1))
    return Polynomial(c)


def polyroots(p, tol: float = 1e-11, maxiter: int = 20000) -> np.ndarray:
    """All roots of ``p`` by simultaneous Durand-Kerner iteration.

    Convergence is declared when every root has relative residual
    |p(z)| / sum|c_k||z|^k below ``tol``; otherwise NumericalFailure.
    """
    c = np.trim_zeros(_coeffs(p), "b")
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    c = c / c[-1]
    radius = 2 * max(abs(c[k]) ** (1.0 / (n - k)) for k in range(n))
    radius = radius if radius > 0 else 1.0
    z = radius * (0.4 + 0.9j) ** np.arange(n)
    absc = np.abs(c)

    def rel_residual(z):
        num = np.abs(np.polynomial.polynomial.polyval(z, c))
        den = np.polynomial.polynomial.polyval(np.abs(z), absc)
        return num / den

    for _ in range(maxiter):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = np.polynomial.polynomial.polyval(z, c) / np.prod(diff, axis=1)
        z = z - step
        if np.max(np.abs(step)) <= 1e-15 * max(1.0, float(np.max(np.abs(z)))):
            break
    res = float(np.max(rel_residual(z)))
    if res > tol:
        raise NumericalFailure(f"Durand-Kerner residual {res:.3e} exceeds {tol:.1e}", res)
    return z


def eigenvalues(A, method: str = "lapack") -> np.ndarray:
    """Eigenvalues with multiplicity.

    ``method="lapack"`` uses the QR algorithm (accurate for repeated but
    semisimple eigenvalues); ``method="charpoly"`` roots the
    Faddeev-LeVerrier characteristic polynomial by Durand-Kerner.
    """
    M = _square(A)
    if method == "lapack":
        return np.linalg.eigvals(M)
    if method == "charpoly":
        return polyroots(charpoly(M))
    raise ValueError(f"unknown method {method!r}")


def minimal_polynomial(A, tol: float = 1e-10) -> Polynomial:
    """Lowest-degree monic p with p(A) = 0, via rank tests on vec(A^k).

    Powers of the normalised matrix are orthogonalised one by one (modified
    Gram-Schmidt, two passes); the first power whose residual falls below
    ``tol`` relative to its norm closes the Krylov sequence.
    """
    M = _square(A)
    n = M.shape[0]
    s = float(np.linalg.norm(M, 2))
    s = s if s > 0 else 1.0
    B = M / s
    powers = [identity(n).ravel()]
    Q = [powers[0] / np.linalg.norm(powers[0])]
    P = identity(n)
    for k in range(1, n + 1):
        P = B @ P
        v = P.ravel()
        r = v.copy()
        for _ in range(2):
            for q in Q:
                r -= np.vdot(q, r) * q
        vn = np.linalg.norm(v)
        if vn == 0 or np.linalg.norm(r) <= tol * vn:
            K = np.column_stack(powers)
            coef, *_ = np.linalg.lstsq(K, v, rcond=None)
            c = np.concatenate([-coef, [1.0]])
            c = c * s ** (k - np.arange(k + 1))
            return Polynomial(c)
        powers.append(v)
        Q.append(r / np.linalg.norm(r))
    raise NumericalFailure("minimal polynomial search exhausted degree n", float("nan"))


def restrict(A, P, tol: float = 1e-10) -> np.ndarray:
    """Matrix of A on range(P) in the basis of pivot columns of P.

    Requires P idempotent and [A, P] = 0 to ``tol`` (scaled by the entries).
    """
    A, P = _square(A), _square(P)
    if A.shape != P.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {P.shape}")
    sc = scale_of(A, P)
    if np.max(np.abs(P @ P - P)) > tol * sc:
        raise ContractViolation("projector is not idempotent")
    if np.max(np.abs(A @ P - P @ A)) > tol * sc * sc:
        raise ContractViolation("operator does not commute with the projector")
    cols = column_basis(P)
    V = P[:, cols]
    VH = V.conj().T
    return solve(VH @ V, VH @ A @ V)


def polynomial_remainder(num: Polynomial, den: Polynomial) -> Polynomial:
    _, rem = divmod(Polynomial(_coeffs(num)), Polynomial(_coeffs(den)))
    return rem


def collect(values: Sequence[complex], tol: float = 1e-6) -> list[tuple[complex, int]]:
    """Group nearly equal values into (mean, multiplicity) pairs, sorted by real part."""
    groups: list[list[complex]] = []
    for v in sorted(values, key=lambda z: (round(z.real, 6), round(z.imag, 6))):
        for g in groups:
            if abs(g[0] - v) <= tol:
                g.append(v)
                break
        else:
            groups.append([v])
    return [(complex(np.mean(g)), len(g)) for g in groups]
