"""Near-threshold reduction of the Birman-Schwinger condition to 3x3 form.

Zeroing the two couplings that touch row n splits the Jacobi matrix into
S (everything else) plus a rank-<=3 part T.  The resolvent of I + eps*S
is cheap (tridiagonal with a gap, hence block diagonal) and only three of
its matrix elements enter the reduced condition det(I + eps*A) = 0 on a
3x3 matrix A.  In the uniformizing variable kappa, lambda = nu_n - kappa^4,
the four sheets glued around nu_n become one analytic function of kappa;
``sector_sheet`` encodes which sheet each kappa sector belongs to.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ThresholdCollision
from .sheets import SheetId, branch, sector_chain
from .spectral import b_n_E, threshold, tridiag_solve_unit

_QUARTER = math.pi / 4.0


def _gapped_offdiag(lam: complex, eps: float, E: SheetId, n: int, N: int) -> np.ndarray:
    """Couplings eps*b_k with the two couplings touching row n removed."""
    if not 0 <= n < N - 1:
        raise ValueError("need 0 <= n and n + 1 < N")
    lam = complex(lam)
    for k in range(N + 1):
        if lam == threshold(k):
            raise ThresholdCollision("lambda hits threshold nu_%d" % k)
    off = np.empty(N - 1, dtype=complex)
    for k in range(1, N):
        off[k - 1] = 0.0 if k in (n, n + 1) else eps * b_n_E(lam, k, E)
    return off


def split(lam: complex, eps: float, E: SheetId, n: int, N: int):
    """Decompose the truncated J_E(lambda) as S + T around threshold index n.

    T carries exactly the couplings (n-1, n) and (n, n+1); S is J with
    those two couplings zeroed.  Returned as dense N x N arrays (S, T);
    S + T equals the off-diagonal part of the built matrix divided by eps.
    For n = 0 the (n-1, n) coupling does not exist and T holds b_1 only.
    """
    if not 0 <= n < N - 1:
        raise ValueError("need 0 <= n and n + 1 < N")
    lam = complex(lam)
    for k in range(N + 1):
        if lam == threshold(k):
            raise ThresholdCollision("lambda hits threshold nu_%d" % k)
    S = np.zeros((N, N), dtype=complex)
    T = np.zeros((N, N), dtype=complex)
    for k in range(1, N):
        b = b_n_E(lam, k, E)
        target = T if k in (n, n + 1) else S
        target[k - 1, k] = b
        target[k, k - 1] = b
    return S, T


def f_scalars(lam: complex, eps: float, E: SheetId, n: int, N: int) -> np.ndarray:
    """The 3x3 matrix of resolvent elements f_kl of (I + eps*S)^{-1}.

    Rows and columns run over the unit vectors e_{n-1}, e_n, e_{n+1};
    index -1 maps to the zero vector, so the first row and column vanish
    for n = 0.  Because S decouples row n from its neighbours, the result
    is diagonal with middle entry 1.
    """
    off = _gapped_offdiag(lam, eps, E, n, N)
    F = np.zeros((3, 3), dtype=complex)
    for k, m in enumerate((n - 1, n, n + 1)):
        if m < 0:
            continue
        rhs = np.zeros(N, dtype=complex)
        rhs[m] = 1.0
        x = tridiag_solve_unit(off, rhs)
        for l, mm in enumerate((n - 1, n, n + 1)):
            if mm >= 0:
                F[k, l] = x[mm]
    return F


@dataclass(frozen=True, eq=False)
class LocalReduction:
    """The 3x3 reduction of I + eps*J near one threshold.

    ``matrix`` is A with rank <= 2: its first and third columns are
    b_n and b_{n+1} times one common vector.  For n = 0 the first row
    and column vanish.
    """

    n: int
    sheet: SheetId
    eps: float
    truncation: int
    matrix: np.ndarray


def local_matrix(lam: complex, eps: float, E: SheetId, n: int, N: int) -> LocalReduction:
    """Assemble A with entries b_n (f_1k d_2l + f_2k d_1l) + b_{n+1} (f_2k d_3l + f_3k d_2l)."""
    F = f_scalars(lam, eps, E, n, N)
    bn = b_n_E(lam, n, E) if n >= 1 else 0.0
    bn1 = b_n_E(lam, n + 1, E)
    A = np.zeros((3, 3), dtype=complex)
    for k in range(3):
        for l in range(3):
            A[k, l] = bn * (F[0, k] * (l == 1) + F[1, k] * (l == 0)) + bn1 * (
                F[1, k] * (l == 2) + F[2, k] * (l == 1)
            )
    return LocalReduction(n=n, sheet=E, eps=eps, truncation=N, matrix=A)


def det3(lam: complex, eps: float, E: SheetId, n: int, N: int) -> complex:
    """Determinant of I + eps*A, cross-checked against its reduced form.

    Expanding in eps gives 1 + eps*X + eps^2*Y + eps^3*Z with X, Y, Z the
    trace, second and third elementary symmetric functions of A.  Rank
    A <= 2 forces Z = 0, so the full determinant must match 1 + eps*X +
    eps^2*Y; a gross disagreement means a broken assembly and raises.
    """
    red = local_matrix(lam, eps, E, n, N)
    A = red.matrix
    X = A[0, 0] + A[1, 1] + A[2, 2]
    Y = (
        A[0, 0] * A[1, 1]
        + A[1, 1] * A[2, 2]
        + A[0, 0] * A[2, 2]
        - A[0, 2] * A[2, 0]
        - A[0, 1] * A[1, 0]
        - A[1, 2] * A[2, 1]
    )
    full = complex(np.linalg.det(np.eye(3) + eps * A))
    reduced = 1.0 + eps * X + eps * eps * Y
    scale = 1.0 + abs(eps * X) + abs(eps * eps * Y)
    if abs(full - reduced) > 1e-9 * scale:
        raise ArithmeticError(
            "3x3 determinant inconsistent with its rank-2 reduction: |diff| = %g"
            % abs(full - reduced)
        )
    return full


def z_coefficient(E: SheetId, n: int) -> complex:
    """Leading coefficient of the kappa-expansion at threshold n on sheet E.

    With (p, q, r) the branch triple at n-1, n, n+1:
    z = (-1)^(q+r) (n+1) + (-1)^(p+q+1) n i.  The two kappa roots are
    +- eps * sqrt(z)/2 to first order, and lambda = nu_n - kappa^4 then
    reproduces the eps^4/16 resonance displacement.
    """
    if n < 0:
        raise ValueError("threshold index must be >= 0")
    p, q, r = branch(E, n - 1), branch(E, n), branch(E, n + 1)
    re = (n + 1) * (-1) ** (q + r)
    im = n * (-1) ** (p + q + 1)
    return complex(re, im)


def sector_sheet(kappa: complex, E: SheetId, n: int) -> SheetId:
    """Sheet on which the glued near-threshold function lives at this kappa.

    Going counterclockwise from the positive real kappa axis, each pi/4
    sector alternates between the lower and upper lambda half plane, and
    crossing a sector boundary means crossing a real interval next to
    nu_n.  Matching the adjacency relations of the gluing (checked by the
    continuity tests and by the bound-state identity at real kappa) gives

        (0, pi/4]  U (-pi, -3pi/4]   -> E
        (pi/4, pi/2] U (-3pi/4, -pi/2] -> H  (flip 0..n)
        (pi/2, 3pi/4] U (-pi/2, -pi/4] -> G  (flip bit n)
        (3pi/4, pi] U (-pi/4, 0]       -> F  (flip 0..n-1)

    with (E, F, G, H) the chain from ``sector_chain``.
    """
    kappa = complex(kappa)
    if kappa == 0:
        raise ValueError("kappa must be nonzero")
    if kappa.imag == 0.0:
        kappa = complex(kappa.real, 0.0)
    th = cmath.phase(kappa)
    chain = sector_chain(E, n)
    if 0.0 < th <= _QUARTER or th <= -3.0 * _QUARTER:
        return chain[0]
    if _QUARTER < th <= 2.0 * _QUARTER or -3.0 * _QUARTER < th <= -2.0 * _QUARTER:
        return chain[3]
    if 2.0 * _QUARTER < th <= 3.0 * _QUARTER or -2.0 * _QUARTER < th <= -_QUARTER:
        return chain[2]
    return chain[1]


def kappa_determinant(kappa: complex, eps: float, E: SheetId, n: int, N: int) -> complex:
    """det(I + eps*A) at lambda = nu_n - kappa^4 on the sector's sheet.

    This is the single analytic function of kappa whose zeros near the
    origin encode the resonance (or bound state) at threshold n.
    """
    sheet = sector_sheet(kappa, E, n)
    lam = threshold(n) - complex(kappa) ** 4
    return det3(lam, eps, sheet, n, N)
