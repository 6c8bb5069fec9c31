"""Branch-aware scalar functions and the truncated Jacobi determinant.

Everything here reduces to one convention: the principal argument lies in
(-pi, pi], branch 0 of the square root is |w|^(1/2) exp(i arg(w)/2) and
branch 1 is its negative.  The truncated operator is I + eps*J with unit
diagonal and off-diagonal couplings eps*b_n, where b_n couples rows n-1
and n.  Determinants and their lambda-derivatives follow the standard
tridiagonal minor recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MultiRoot, NearSingular, NoRoot, ThresholdCollision
from .sheets import SheetId, branch

# Rescale guard for the minor recurrence; only the zeros of the determinant
# are meaningful, so a common positive factor on (D, D') is harmless.
_RESCALE_LIMIT = 1e150
_PIVOT_FLOOR = 1e-14


def threshold(n: int) -> float:
    """The n-th threshold nu_n = n + 1/2."""
    return n + 0.5


def default_truncation(n_star: int) -> int:
    """Truncation size used when none is given: 4*(n_star + 2) + 60.

    n_star is the largest threshold index of interest.  Root positions are
    insensitive to N far beyond this (the resolvent tail decays
    geometrically), which the solvers re-verify by doubling N.
    """
    return 4 * (n_star + 2) + 60


def branch_sqrt(w, j: int = 0):
    """Square root on branch j of the two-sheeted cover.

    branch 0 is |w|^(1/2) exp(i arg(w)/2) with arg in (-pi, pi], branch 1
    its negative.  Accepts scalars or arrays.  A negative imaginary zero
    is folded onto +0.0 first so that negative reals land on arg = pi
    exactly.  Returns 0 for w = 0 (callers reject thresholds themselves).
    """
    arr = np.asarray(w, dtype=complex)
    arr = np.where(arr.imag == 0.0, arr.real + 0.0j, arr)
    s = np.sqrt(arr)
    if j:
        s = -s
    if np.ndim(w) == 0:
        return complex(s)
    return s


@dataclass(frozen=True)
class BranchedValue:
    """A square-root value together with the branch it was taken on."""

    value: complex
    branch: int

    @classmethod
    def of(cls, w: complex, j: int) -> "BranchedValue":
        if j not in (0, 1):
            raise ValueError("branch must be 0 or 1")
        return cls(branch_sqrt(w, j), j)

    def flipped(self) -> "BranchedValue":
        return BranchedValue(-self.value, 1 - self.branch)


def r_n(lam: complex, n: int, l: int) -> complex:
    """Branch-l square root of (nu_n - lambda)."""
    nu = threshold(n)
    if lam == nu:
        raise ThresholdCollision("lambda coincides with threshold nu_%d = %s" % (n, nu))
    return branch_sqrt(nu - lam, l)


def b_n_E(lam: complex, n: int, E: SheetId) -> complex:
    """Off-diagonal Jacobi coupling b_n on sheet E, n >= 1.

    b_n = (1/2) * sqrt( n / (r_n * r_{n-1}) ) with the sheet's branches
    inside and the principal branch outside.  On the physical sheet for
    real lambda below the first threshold this is the positive real value
    n^(1/2) / (2 (nu_n-lambda)^(1/4) (nu_{n-1}-lambda)^(1/4)).
    """
    if n < 1:
        raise ValueError("couplings start at n = 1")
    rn = r_n(lam, n, branch(E, n))
    rm = r_n(lam, n - 1, branch(E, n - 1))
    return 0.5 * branch_sqrt(n / (rn * rm), 0)


def db_n_E(lam: complex, n: int, E: SheetId) -> complex:
    """lambda-derivative of b_n on sheet E.

    Since r^2 = nu - lambda on either branch, r' = -1/(2r) and the branch
    choices cancel:  b' = b * (1/4) * (1/(nu_n - lambda) + 1/(nu_{n-1} - lambda)).
    """
    b = b_n_E(lam, n, E)
    return b * 0.25 * (1.0 / (threshold(n) - lam) + 1.0 / (threshold(n - 1) - lam))


@dataclass(frozen=True, eq=False)
class TruncatedJacobi:
    """Size-N representation of I + eps*J on a fixed sheet.

    Unit diagonal, symmetric (not conjugate symmetric), tridiagonal;
    offdiag[k-1] holds eps*b_k, the coupling of rows k-1 and k.
    """

    size: int
    offdiag: np.ndarray
    eps: float
    sheet: SheetId
    lam: complex


def build(lam: complex, eps: float, E: SheetId, N: int) -> TruncatedJacobi:
    """Assemble the truncated matrix I + eps*J_E(lambda) of size N."""
    if N < 2:
        raise ValueError("truncation size must be at least 2")
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    lam = complex(lam)
    for k in range(N + 1):
        if lam == threshold(k):
            raise ThresholdCollision("lambda hits threshold nu_%d" % k)
    off = np.empty(N - 1, dtype=complex)
    for k in range(1, N):
        off[k - 1] = eps * b_n_E(lam, k, E)
    return TruncatedJacobi(size=N, offdiag=off, eps=eps, sheet=E, lam=lam)


def _det_recurrence(offdiag: np.ndarray) -> tuple[complex, int]:
    """Leading principal minors of the unit-diagonal tridiagonal matrix.

    Returns (mantissa, exp2) with determinant = mantissa * 2**exp2.
    """
    d_prev = 1.0 + 0.0j
    d = 1.0 + 0.0j
    exp2 = 0
    for c in offdiag:
        d_prev, d = d, d - c * c * d_prev
        if max(abs(d.real), abs(d.imag)) > _RESCALE_LIMIT:
            d *= 2.0**-512
            d_prev *= 2.0**-512
            exp2 += 512
    return d, exp2


def det(M: TruncatedJacobi) -> complex:
    """Determinant of the truncated matrix via the minor recurrence."""
    mant, exp2 = _det_recurrence(M.offdiag)
    if exp2 == 0:
        return mant
    return complex(math.ldexp(mant.real, exp2), math.ldexp(mant.imag, exp2))


def det_and_derivative(lam: complex, eps: float, E: SheetId, N: int) -> tuple[complex, complex]:
    """Determinant and its lambda-derivative, by a joint recurrence.

    D'_k = D'_{k-1} - eps^2 (2 b_{k-1} b'_{k-1} D_{k-2} + b_{k-1}^2 D'_{k-2}).
    Both values carry the same internal rescaling, so their ratio is exact.
    """
    lam = complex(lam)
    for k in range(N + 1):
        if lam == threshold(k):
            raise ThresholdCollision("lambda hits threshold nu_%d" % k)
    d_prev, d = 1.0 + 0.0j, 1.0 + 0.0j
    g_prev, g = 0.0j, 0.0j
    exp2 = 0
    e2 = eps * eps
    for k in range(1, N):
        b = b_n_E(lam, k, E)
        db = b * 0.25 * (1.0 / (threshold(k) - lam) + 1.0 / (threshold(k - 1) - lam))
        c2 = e2 * b * b
        dc2 = 2.0 * e2 * b * db
        d_prev, d, g_prev, g = d, d - c2 * d_prev, g, g - dc2 * d_prev - c2 * g_prev
        if max(abs(d.real), abs(d.imag)) > _RESCALE_LIMIT:
            d *= 2.0**-512
            d_prev *= 2.0**-512
            g *= 2.0**-512
            g_prev *= 2.0**-512
            exp2 += 512
    if exp2:
        d = complex(math.ldexp(d.real, exp2), math.ldexp(d.imag, exp2))
        g = complex(math.ldexp(g.real, exp2), math.ldexp(g.imag, exp2))
    return d, g


def tridiag_solve_unit(offdiag: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (I + C) x = rhs for a symmetric tridiagonal C given by offdiag.

    Plain LDL-style elimination; pivots below 1e-14 in magnitude raise
    NearSingular, which downstream code treats as a resonance signal.
    """
    n = len(rhs)
    piv = np.empty(n, dtype=complex)
    y = np.empty(n, dtype=complex)
    piv[0] = 1.0
    y[0] = rhs[0]
    for k in range(1, n):
        w = offdiag[k - 1] / piv[k - 1]
        piv[k] = 1.0 - w * offdiag[k - 1]
        if abs(piv[k]) < _PIVOT_FLOOR:
            raise NearSingular("elimination pivot %g below %g at row %d" % (abs(piv[k]), _PIVOT_FLOOR, k))
        y[k] = rhs[k] - w * y[k - 1]
    x = np.empty(n, dtype=complex)
    x[n - 1] = y[n - 1] / piv[n - 1]
    for k in range(n - 2, -1, -1):
        x[k] = (y[k] - offdiag[k] * x[k + 1]) / piv[k]
    return x


def solve_unit_vector(M: TruncatedJacobi, n: int) -> np.ndarray:
    """Solve M x = e_n; component x[n] is the Birman-Schwinger scalar."""
    if not 0 <= n < M.size:
        raise ValueError("unit-vector index out of range")
    rhs = np.zeros(M.size, dtype=complex)
    rhs[n] = 1.0
    return tridiag_solve_unit(M.offdiag, rhs)


def count_above(lam: float, eps: float, N: int) -> int:
    """Eigenvalues of the real truncated J(lambda) strictly above 1/eps.

    lambda must be real in (0, nu_0); the matrix is then real symmetric
    with zero diagonal.  One Sturm (LDL inertia) sweep at shift 1/eps
    counts the eigenvalues above it; by the Birman-Schwinger relation this
    approximates the number of Hamiltonian eigenvalues below lambda.
    """
    lam = float(lam)
    if not 0.0 < lam < threshold(0):
        raise ValueError("count_above requires real lambda in (0, nu_0)")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    shift = 1.0 / eps
    count = 0
    d = -shift
    if d > 0.0:
        count += 1
    for k in range(1, N):
        b = (b_n_E(lam, k, SheetId(0))).real
        d = -shift - b * b / d
        if d == 0.0:
            d = -1e-300
        if d > 0.0:
            count += 1
    return count


def determinant_grid(lam_grid: np.ndarray, eps: float, E: SheetId, N: int) -> np.ndarray:
    """Vectorized determinant of I + eps*J_E over an array of lambda values.

    The caller guarantees no grid point equals a threshold.  Memory stays
    O(grid): couplings are generated one index at a time.
    """
    lam = np.asarray(lam_grid, dtype=complex)
    flat = lam.ravel()
    d_prev = np.ones_like(flat)
    d = np.ones_like(flat)
    r_prev = branch_sqrt(threshold(0) - flat, branch(E, 0))
    for k in range(1, N):
        r_cur = branch_sqrt(threshold(k) - flat, branch(E, k))
        b = 0.5 * branch_sqrt(k / (r_cur * r_prev), 0)
        c = eps * b
        d_prev, d = d, d - c * c * d_prev
        r_prev = r_cur
    return d.reshape(lam.shape)


def bound_state_bracket(eps: float, N: int, tol: float) -> tuple[float, float]:
    """Sign-change bracket for the lowest eigenvalue on (0, nu_0).

    Checks via the Sturm count that exactly one eigenvalue sits below
    nu_0; raises NoRoot or MultiRoot otherwise.  The returned interval
    has positive determinant on the left and negative on the right.
    """
    probe = threshold(0) - max(tol, 1e-12)
    k = count_above(probe, eps, N)
    if k == 0:
        raise NoRoot("no eigenvalue below the first threshold at eps = %g" % eps)
    if k > 1:
        raise MultiRoot("%d eigenvalues below the first threshold; eps = %g too large" % (k, eps))
    lo = (1.0 - math.sqrt(0.25 + eps**4)) * (1.0 - 1e-12)
    lo = max(lo, 1e-12)
    hi = probe
    return lo, hi
