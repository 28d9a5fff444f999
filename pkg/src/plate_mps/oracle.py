"""Analytic eigenvalues of circular plates.

On a disc of radius a, modes are ``(a_J J_n(kr) + a_I I_n(kr)) e^{in theta}``.
Each boundary condition gives two linear conditions on ``(a_J, a_I)``; the
eigen-wavenumbers are the zeros of the 2x2 determinant.  The bending moment
and edge reaction are evaluated with :mod:`plate_mps.boundary` applied to
frozen-frame derivative tensors of the radial families, so the oracle also
exercises those operators.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bessel import bessel_i_scaled_table, bessel_j_table
from .boundary import BoundaryCondition, kelvin_kirchhoff, torsion_moment

_N = np.array([1.0, 0.0])
_T = np.array([0.0, 1.0])


def radial_derivatives(n, z, modified):
    """Z_n(z) and its first three z-derivatives, Z = J or I (z > 0).

    For I the values are scaled by ``exp(-z)``; the common factor drops out
    of every determinant and null vector ratio used here.
    """
    n = abs(int(n))
    L = n + 3
    if modified:
        tab = bessel_i_scaled_table(L, z)
        s = 1.0
    else:
        tab = bessel_j_table(L, z)
        s = -1.0

    def B(m):
        v = tab[abs(m)]
        if not modified and m < 0 and abs(m) % 2:
            v = -v
        return v

    f0 = B(n)
    f1 = (B(n - 1) + s * B(n + 1)) / 2
    f2 = (B(n - 2) + 2 * s * B(n) + B(n + 2)) / 4
    f3 = (B(n - 3) + 3 * s * B(n - 1) + 3 * B(n + 1) + s * B(n + 3)) / 8
    return f0, f1, f2, f3


def edge_quantities(n, k, radius, modified, nu):
    """w, w_n, M_n / k^2, K_n / k^3 of ``Z_n(kr) e^{in theta}`` at r = radius, theta = 0.

    Frame: normal (1, 0), tangent (0, 1).  Only derivative components that
    enter the edge operators are filled in; with unit D.
    """
    r = radius
    z0, z1, z2, z3 = radial_derivatives(n, k * r, modified)
    f, f1, f2, f3 = z0, k * z1, k**2 * z2, k**3 * z3
    w_nn = f2
    w_tt = f1 / r - n * n * f / r**2
    w_nnn = f3
    w_ntt = f2 / r - f1 / r**2 - n * n * f1 / r**2 + 2 * n * n * f / r**3
    zero = np.zeros_like(w_nn)
    hess = np.array([[w_nn, zero], [zero, w_tt]])
    third = np.zeros((2, 2, 2) + np.shape(w_nn))
    third[0, 0, 0] = w_nnn
    third[0, 1, 1] = third[1, 0, 1] = third[1, 1, 0] = w_ntt
    M = torsion_moment(hess, _N, _T, nu)
    K = kelvin_kirchhoff(hess, third, _N, _T, r, nu)
    return f, f1, M / k**2, K / k**3


def boundary_matrix(bc, nu, radius, k, n):
    """Rows = the two boundary conditions, columns = (J-part, I-part).

    ``k`` may be an array; the matrices then stack on the trailing axis.
    """
    bc = BoundaryCondition.parse(bc)
    cols = []
    for modified in (False, True):
        w, w_n, M, K = edge_quantities(n, k, radius, modified, nu)
        if bc is BoundaryCondition.CLAMPED:
            cols.append((w, w_n / k))
        elif bc is BoundaryCondition.SIMPLY_SUPPORTED:
            cols.append((w, M))
        else:
            cols.append((M, K))
    return np.array(cols).swapaxes(0, 1)


def characteristic(bc, nu, radius, k, n):
    """Determinant of :func:`boundary_matrix`; its zeros are eigen-wavenumbers."""
    A = boundary_matrix(bc, nu, radius, np.asarray(k, dtype=float), n)
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    return det if np.ndim(det) else float(det)


@dataclass(frozen=True)
class DiskEigenvalue:
    k: float
    n: int
    multiplicity: int


def disk_eigenvalues(bc, nu=0.33, radius=1.0, n_max=10, k_max=8.0, k_min=0.1, step=1e-3):
    """All characteristic roots in (k_min, k_max] for orders 0..n_max, sorted by k."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    bc = BoundaryCondition.parse(bc)
    out = []
    if k_max <= k_min:
        return out
    grid = np.arange(k_min, k_max + step / 2, step)
    for n in range(n_max + 1):
        vals = characteristic(bc, nu, radius, grid, n)
        s = np.sign(vals)
        for i in np.flatnonzero(s[:-1] * s[1:] < 0):
            root = brentq(lambda k: characteristic(bc, nu, radius, k, n), grid[i], grid[i + 1], xtol=1e-12)
            out.append(DiskEigenvalue(float(root), n, 1 if n == 0 else 2))
        for i in np.flatnonzero(s == 0):
            out.append(DiskEigenvalue(float(grid[i]), n, 1 if n == 0 else 2))
    return sorted(out, key=lambda e: e.k)


def disk_mode_coefficients(bc, nu, k_root, n, radius=1.0, tol=1e-6):
    """Null vector ``(a_J, a_I)`` with unit norm for a characteristic root.

    ``a_I`` multiplies the true ``I_n(kr)``, not the scaled one.
    """
    A = boundary_matrix(bc, nu, radius, k_root, n)
    _, s, vt = np.linalg.svd(A)
    if s[-1] > tol * s[0]:
        raise ValueError(f"k={k_root} is not a characteristic root for n={n} (sigma ratio {s[-1] / s[0]:.2e})")
    aj, ai = vt[-1]
    # undo the exp(-kR) scaling of the I column
    ai = ai * np.exp(-k_root * radius)
    v = np.array([aj, ai])
    return v / np.linalg.norm(v)


def disk_mode(bc, nu, k_root, n, radius=1.0):
    """Callable ``w(x, y)`` for the analytic disc mode (complex, e^{in theta})."""
    aj, ai = disk_mode_coefficients(bc, nu, k_root, n, radius)

    def w(points):
        p = np.atleast_2d(points)
        r = np.hypot(p[:, 0], p[:, 1])
        th = np.arctan2(p[:, 1], p[:, 0])
        J = radial_derivatives(n, k_root * r, False)[0]
        I = radial_derivatives(n, k_root * r, True)[0] * np.exp(k_root * r)
        return (aj * J + ai * I) * np.exp(1j * n * th)

    return w
