"""Trefftz families of particular solutions of the plate equation.

At angular frequency omega a solution of

    D lap^2 w + T lap w - rho h omega^2 w = 0

splits into a part with ``lap w1 = lambda1 w1`` (lambda1 < 0, oscillatory)
and a part with ``lap w2 = lambda2 w2`` (lambda2 > 0, evanescent).  Each
part is approximated by plane waves / real exponentials (``PW``) or by
Fourier-Bessel functions ``J_n(k r) e^{in theta}`` / ``I_n(k r) e^{in theta}``
(``FB``).
"""

from dataclasses import dataclass, field, replace
from math import ceil

import numpy as np

from .bessel import bessel_i_scaled_table, bessel_j_table

PW = "PW"
FB = "FB"


@dataclass(frozen=True)
class PlateMaterial:
    """Rigidity D, density rho, thickness h, edge tension T, Poisson ratio nu."""

    D: float = 1.0
    rho: float = 1.0
    h: float = 1.0
    T: float = 0.0
    nu: float = 0.33

    def __post_init__(self):
        if not (self.D > 0 and self.rho > 0 and self.h > 0):
            raise ValueError("D, rho and h must be positive")
        if not 0 <= self.nu < 0.5:
            raise ValueError(f"Poisson ratio must lie in [0, 0.5), got {self.nu}")

    @property
    def mass(self):
        return self.rho * self.h

    def omega_from_k(self, k):
        """Angular frequency for the zero-tension wavenumber k."""
        return np.asarray(k) ** 2 * np.sqrt(self.D / self.mass)

    def k_from_omega(self, omega):
        return (self.mass / self.D) ** 0.25 * np.sqrt(omega)


@dataclass(frozen=True)
class SplitWavenumbers:
    lambda1: float
    lambda2: float
    omega: float

    @property
    def k1(self):
        return float(np.sqrt(abs(self.lambda1)))

    @property
    def k2(self):
        return float(np.sqrt(abs(self.lambda2)))

    @property
    def delta_lambda(self):
        return self.lambda2 - self.lambda1

    @property
    def k_plus(self):
        return max(self.k1, self.k2)

    @property
    def k_minus(self):
        return min(self.k1, self.k2)


def split_wavenumbers(material, omega):
    """Roots of ``D l^2 + T l - rho h omega^2`` (stable quadratic formula)."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    D, T = material.D, material.T
    c = material.mass * omega**2
    disc = np.sqrt(T * T + 4.0 * D * c)
    q = -0.5 * (T + (disc if T >= 0 else -disc))
    r_big, r_small = q / D, -c / q
    lam1, lam2 = sorted((r_big, r_small))
    return SplitWavenumbers(float(lam1), float(lam2), float(omega))


def derivative_orders(max_order):
    """Multi-indices (a, b) with a + b <= max_order, grouped by total order."""
    return tuple((p - b, b) for p in range(max_order + 1) for b in range(p + 1))


@dataclass(frozen=True)
class BasisSet:
    """One frequency's family of particular solutions.

    For ``PW`` the ``osc`` / ``eva`` arrays hold direction angles, for ``FB``
    the integer angular orders.  ``log_norms`` holds the log of each
    function's normaliser (oscillatory first, then evanescent).
    ``transform`` is an optional unitary change of coefficients applied
    after evaluation, see :func:`dft_precondition`.
    """

    kind: str
    k1: float
    k2: float
    osc: np.ndarray
    eva: np.ndarray
    log_norms: np.ndarray
    transform: np.ndarray = field(default=None, repr=False)

    @property
    def count_osc(self):
        return len(self.osc)

    @property
    def count_eva(self):
        return len(self.eva)

    @property
    def size(self):
        return self.count_osc + self.count_eva

    @property
    def normalizers(self):
        with np.errstate(over="ignore"):
            return np.exp(self.log_norms)


def basis_size(k, diameter, factor=8.0):
    """Total family size ``ceil(factor * k * diameter / 2)`` rounded up to even."""
    n = max(int(ceil(factor * k * diameter / 2.0)), 2)
    return n + (n % 2)


def _polar(points):
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.hypot(p[:, 0], p[:, 1]), np.arctan2(p[:, 1], p[:, 0])


def build_basis(kind, omega, material, count_osc, count_eva, domain=None, boundary_points=None):
    """Build the family at ``omega``; normalisers use ``boundary_points``.

    When no boundary points are passed the domain's boundary polyline is used.
    For ``FB`` the counts are rounded up to odd ``2L + 1``.
    """
    if count_osc < 1 or count_eva < 1:
        raise ValueError("basis counts must be at least 1")
    if boundary_points is None:
        if domain is None:
            raise ValueError("need a domain or explicit boundary points")
        boundary_points = domain.polyline
    bp = np.asarray(boundary_points, dtype=float)
    split = split_wavenumbers(material, omega)
    k1, k2 = split.k1, split.k2

    if kind == PW:
        osc = 2 * np.pi * np.arange(count_osc) / count_osc
        eva = 2 * np.pi * np.arange(count_eva) / count_eva
        dirs = np.stack([np.cos(eva), np.sin(eva)], axis=-1)
        # max over the boundary of exp(k2 d.x) is exp(k2 * max d.x)
        log_eva = k2 * (bp @ dirs.T).max(axis=0)
        log_norms = np.concatenate([np.zeros(count_osc), log_eva])
    elif kind == FB:
        L1 = count_osc // 2
        L2 = count_eva // 2
        osc = np.arange(-L1, L1 + 1)
        eva = np.arange(-L2, L2 + 1)
        r, _ = _polar(bp)
        rmax = r.max()
        # |J_n(kr)| over 0 <= r <= rmax: J_n vanishes at the boundary of a disc
        # exactly at eigen-wavenumbers, so the boundary max alone can be zero
        jt = np.abs(bessel_j_table(L1, np.linspace(0.0, k1 * rmax, 512)))
        log_osc = np.log(jt.max(axis=1))[np.abs(osc)]
        it = bessel_i_scaled_table(L2, k2 * rmax)
        log_eva = (np.log(it) + k2 * rmax)[np.abs(eva)]
        log_norms = np.concatenate([log_osc, log_eva])
    else:
        raise ValueError(f"unknown basis kind {kind!r}")

    if not np.all(np.isfinite(log_norms)):
        bad = int(np.flatnonzero(~np.isfinite(log_norms))[0])
        raise OverflowError(f"normaliser of basis function {bad} is not representable (k2={k2:g})")
    return BasisSet(kind, k1, k2, osc, eva, log_norms)


@dataclass(frozen=True)
class EvalTable:
    """Values and Cartesian partials of every basis function at every point.

    ``values[i, p, f]`` is the derivative ``orders[i]`` of function f at
    point p; use :meth:`d` to look up by multi-index.
    """

    values: np.ndarray
    orders: tuple

    def d(self, a, b):
        return self.values[self.orders.index((a, b))]

    @property
    def max_order(self):
        return max(a + b for a, b in self.orders)

    def hessian(self):
        """Stack of shape (2, 2, P, N)."""
        xx, xy, yy = self.d(2, 0), self.d(1, 1), self.d(0, 2)
        return np.array([[xx, xy], [xy, yy]])

    def third(self):
        """Fully symmetric third-derivative tensor, shape (2, 2, 2, P, N)."""
        t = np.empty((2, 2, 2) + self.values.shape[1:], dtype=self.values.dtype)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    ny = i + j + k
                    t[i, j, k] = self.d(3 - ny, ny)
        return t

    def laplacian(self):
        return self.d(2, 0) + self.d(0, 2)

    def columns(self, idx):
        return EvalTable(self.values[..., idx], self.orders)


def _eval_pw(basis, pts, orders):
    P = len(pts)
    out = np.empty((len(orders), P, basis.size), dtype=complex)
    no = basis.count_osc
    for sl, ang, k, osc in (
        (slice(0, no), basis.osc, basis.k1, True),
        (slice(no, basis.size), basis.eva, basis.k2, False),
    ):
        dx, dy = np.cos(ang), np.sin(ang)
        proj = pts @ np.stack([dx, dy])
        if osc:
            base = np.exp(1j * k * proj)
            fx, fy = 1j * k * dx, 1j * k * dy
        else:
            base = np.exp(k * proj - basis.log_norms[sl]).astype(complex)
            fx, fy = k * dx, k * dy
        for i, (a, b) in enumerate(orders):
            out[i, :, sl] = base * (fx**a * fy**b)
    return out


def _ladder_coefficients(a, b):
    """Coefficients c_q with d^a/dx^a d^b/dy^b = sum_q c_q U^(p-q) V^q.

    U = d/dx - i d/dy and V = d/dx + i d/dy, so d/dx = (U + V)/2 and
    d/dy = i (U - V)/2.
    """
    poly = np.array([1.0 + 0j])
    for _ in range(a):
        poly = np.convolve(poly, [1.0, 1.0])
    for _ in range(b):
        poly = np.convolve(poly, [1.0, -1.0])
    return poly * (1j**b) / 2.0 ** (a + b)


def _eval_fb_family(orders_n, k, log_norms, r, theta, deriv_orders, modified):
    """Fourier-Bessel family via ladder operators.

    For J-type: U b_n = k b_{n-1}, V b_n = -k b_{n+1};
    for I-type: U b_n = k b_{n-1}, V b_n = +k b_{n+1}.
    """
    pmax = max(a + b for a, b in deriv_orders)
    L = int(np.abs(orders_n).max()) + pmax
    z = k * r
    if modified:
        tab = bessel_i_scaled_table(L, z)
        # I_m(kr) / norm_n = Ie_m(kr) * exp(kr - log norm_n)
        logs = k * r[:, None] - log_norms[None, :]
        scale = np.exp(logs)
        vshift = 1.0
    else:
        tab = bessel_j_table(L, z)
        scale = np.exp(-log_norms)[None, :]
        vshift = -1.0
    m = np.arange(-L, L + 1)
    radial = tab[np.abs(m)]
    if not modified:
        radial = radial * np.where((m < 0) & (m % 2 == 1), -1.0, 1.0)[:, None]
    # radial[m + L] e^{i m theta}, shape (2L+1, P)
    full = radial * np.exp(1j * np.outer(m, theta))

    out = np.empty((len(deriv_orders), len(r), len(orders_n)), dtype=complex)
    for i, (a, b) in enumerate(deriv_orders):
        p = a + b
        coef = _ladder_coefficients(a, b)
        acc = np.zeros((len(r), len(orders_n)), dtype=complex)
        for q, c in enumerate(coef):
            if c == 0:
                continue
            shift = 2 * q - p
            acc += (c * k**p * vshift**q) * full[orders_n + shift + L].T
        out[i] = acc * scale
    return out


def _eval_fb(basis, pts, orders):
    r, theta = _polar(pts)
    no = basis.count_osc
    osc = _eval_fb_family(basis.osc, basis.k1, basis.log_norms[:no], r, theta, orders, False)
    eva = _eval_fb_family(basis.eva, basis.k2, basis.log_norms[no:], r, theta, orders, True)
    return np.concatenate([osc, eva], axis=-1)


def eval_basis(basis, points, max_order=3):
    """Evaluate every function and its partials up to ``max_order``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(pts)):
        raise ValueError("evaluation points must be finite")
    orders = derivative_orders(max_order)
    if basis.kind == PW:
        vals = _eval_pw(basis, pts, orders)
    else:
        vals = _eval_fb(basis, pts, orders)
    if basis.transform is not None:
        vals = vals @ basis.transform
    return EvalTable(vals, orders)


def dft_matrix(n):
    """Unitary DFT: column m maps direction-indexed waves to angular order m."""
    j = np.arange(n)
    m = np.fft.fftfreq(n, 1.0 / n).astype(int)
    return np.exp(1j * np.outer(j, m) * 2 * np.pi / n) / np.sqrt(n)


def dft_precondition(basis):
    """Rotate a plane-wave family onto approximate Fourier-Bessel functions.

    Column m of the DFT combines the waves into ``sqrt(N) i^m J_m(kr) e^{im theta}``
    up to aliasing terms of order ``m +- N``.  The map is unitary, so the
    spanned space and every tension value are unchanged.
    """
    if basis.kind != PW:
        raise ValueError("DFT preconditioning applies to plane-wave families only")
    no, ne = basis.count_osc, basis.count_eva
    P = np.zeros((basis.size, basis.size), dtype=complex)
    P[:no, :no] = dft_matrix(no)
    P[no:, no:] = dft_matrix(ne)
    if basis.transform is not None:
        P = basis.transform @ P
    return replace(basis, transform=P)
