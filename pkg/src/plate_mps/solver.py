"""Wavenumber scan, minimum detection and refinement, mode rasters.

The scan variable is the zero-tension wavenumber ``k = (rho h / D)^(1/4) sqrt(omega)``;
with in-plane tension the basis wavenumbers come from :func:`split_wavenumbers`.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.optimize import minimize_scalar

from .assembly import assemble
from .basis import PW, basis_size, build_basis, dft_precondition, eval_basis
from .eig import DEFAULT_REG_EPS, smallest_tensions

log = logging.getLogger(__name__)

DEFAULT_DIP_RATIO = 0.1


@dataclass(frozen=True)
class BasisSettings:
    """Basis family and sizing rule.

    The total size is ``ceil(factor * k * diameter / 2)`` rounded up to even
    unless ``count`` fixes it; it is split between oscillatory and evanescent
    functions in the ratio ``1 : eva_ratio``.
    """

    kind: str = PW
    factor: float = 8.0
    count: int = None
    eva_ratio: float = 1.0
    precondition: bool = False

    def counts(self, k, diameter):
        total = self.count if self.count else basis_size(k, diameter, self.factor)
        osc = max(int(round(total / (1.0 + self.eva_ratio))), 1)
        return osc, max(total - osc, 1)


@dataclass
class PlateProblem:
    """Everything that stays fixed along a scan: geometry, samples, material."""

    domain: object
    material: object
    boundary: object
    interior: object
    basis: BasisSettings = field(default_factory=BasisSettings)
    branches: int = 4
    reg_eps: float = DEFAULT_REG_EPS

    def build(self, k):
        omega = float(self.material.omega_from_k(k))
        osc, eva = self.basis.counts(k, self.domain.diameter)
        b = build_basis(self.basis.kind, omega, self.material, osc, eva, boundary_points=self.boundary.points)
        if self.basis.precondition:
            b = dft_precondition(b)
        return b, omega

    def solve_at(self, k, branches=None):
        """Basis and tension solution at scan wavenumber ``k``."""
        b, omega = self.build(k)
        pair = assemble(b, self.boundary, self.interior, self.material, omega)
        m = min(branches or self.branches, b.size)
        return b, smallest_tensions(pair, m, self.reg_eps)


@dataclass
class TensionCurve:
    ks: np.ndarray
    taus: np.ndarray
    g_conditions: np.ndarray
    failures: dict = field(default_factory=dict)

    @property
    def branches(self):
        return self.taus.shape[1]


def scan_grid(k_min, k_max, step):
    if not k_min < k_max or not step > 0:
        raise ValueError("need k_min < k_max and step > 0")
    n = int(np.floor((k_max - k_min) / step + 1e-9)) + 1
    return k_min + step * np.arange(n)


def scan(problem, ks, threads=1):
    """Tension branches at every grid wavenumber; failures become NaN rows."""
    ks = np.asarray(ks, dtype=float)
    if np.any(np.diff(ks) <= 0):
        raise ValueError("scan grid must be strictly increasing")
    m = problem.branches

    def one(k):
        try:
            _, sol = problem.solve_at(k)
        except (np.linalg.LinAlgError, ValueError, FloatingPointError, OverflowError) as exc:
            return None, f"{type(exc).__name__}: {exc}"
        taus = np.full(m, np.nan)
        taus[: len(sol.taus)] = sol.taus
        return (taus, sol.g_condition), None

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(one, ks))
    else:
        results = [one(k) for k in ks]

    taus = np.full((len(ks), m), np.nan)
    cond = np.full(len(ks), np.nan)
    failures = {}
    for j, (res, err) in enumerate(results):
        if err:
            failures[j] = err
            log.warning("k=%.6g failed: %s", ks[j], err)
        else:
            taus[j], cond[j] = res
    return TensionCurve(ks, taus, cond, failures)


def find_minima(curve, dip_ratio=DEFAULT_DIP_RATIO):
    """Grid indices of significant local minima of the first branch.

    A minimum counts when it is below ``dip_ratio`` times the median of the
    branch over the window.  Its multiplicity is the number of leading
    branches that are simultaneously below their own ``dip_ratio * median``
    and have a local minimum within one grid step; the second condition
    keeps a nearby eigenvalue from being counted as part of this one.
    """
    taus = curve.taus
    if len(taus) == 0 or np.isnan(taus[:, 0]).all():
        return []
    med = np.nanmedian(taus, axis=0)
    t1 = taus[:, 0]
    found = []
    for j in range(1, len(t1) - 1):
        a, b, c = t1[j - 1], t1[j], t1[j + 1]
        if not np.all(np.isfinite([a, b, c])):
            continue
        if b < a and b < c and b < dip_ratio * med[0]:
            mult = 1
            for i in range(1, taus.shape[1]):
                if not (taus[j, i] < dip_ratio * med[i] and _has_local_min(taus[:, i], j)):
                    break
                mult += 1
            found.append((j, mult))
    return found


def _has_local_min(branch, j):
    for i in (j - 1, j, j + 1):
        if 0 < i < len(branch) - 1 and branch[i] <= branch[i - 1] and branch[i] <= branch[i + 1]:
            return True
    return False


def parabola_vertex(x, y):
    """Abscissa of the vertex of the parabola through three points, or None."""
    x0, x1, x2 = x
    y0, y1, y2 = y
    den = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / den
    if not np.isfinite(a) or a <= 0:
        return None
    return -b / (2 * a)


@dataclass
class ModeResult:
    k_star: float
    omega_star: float
    multiplicity: int
    coefficients: np.ndarray
    tension_at_min: float
    basis: object = field(repr=False)
    taus: np.ndarray = field(repr=False, default=None)

    @property
    def branches(self):
        return [self.coefficients[:, i] for i in range(self.multiplicity)]


def refine_minimum(problem, ks, taus, multiplicity=1, log_scale=False):
    """Parabolic refinement from three grid points around a minimum.

    The vertex of the parabola through ``(k, tau_1)`` is evaluated once and
    kept if its tension beats the grid minimum.  ``log_scale`` fits
    ``log tau_1`` instead.
    """
    ks = np.asarray(ks, dtype=float)
    ys = np.log(taus) if log_scale else np.asarray(taus, dtype=float)
    grid_k = float(ks[1])
    best_k, (basis, sol) = grid_k, problem.solve_at(grid_k)
    vertex = parabola_vertex(ks, ys)
    if vertex is not None and ks[0] < vertex < ks[2] and vertex != grid_k:
        vb, vsol = problem.solve_at(vertex)
        if vsol.taus[0] < sol.taus[0]:
            best_k, basis, sol = float(vertex), vb, vsol
    mult = min(multiplicity, len(sol.taus))
    return ModeResult(
        k_star=best_k,
        omega_star=float(problem.material.omega_from_k(best_k)),
        multiplicity=mult,
        coefficients=sol.vectors[:, :mult],
        tension_at_min=float(sol.taus[0]),
        basis=basis,
        taus=sol.taus,
    )


def minimize_tension(problem, k_lo, k_hi, step=0.01, xtol=1e-7):
    """Wavenumber of the smallest first-branch tension in ``[k_lo, k_hi]``.

    A grid pass locates the lowest point, then bounded Brent iteration
    polishes it within one grid step.  Unlike :func:`solve` this applies no
    dip threshold, so it suits convergence studies of under-resolved bases.
    """
    ks = scan_grid(k_lo, k_hi, step)
    taus = [problem.solve_at(k, 1)[1].taus[0] for k in ks]
    j = int(np.argmin(taus))
    lo, hi = ks[max(j - 1, 0)], ks[min(j + 1, len(ks) - 1)]
    res = minimize_scalar(lambda k: problem.solve_at(k, 1)[1].taus[0], bounds=(lo, hi), method="bounded",
                          options={"xatol": xtol})
    return float(res.x), float(res.fun)


def solve(problem, ks, dip_ratio=DEFAULT_DIP_RATIO, threads=1, log_scale=False):
    """Scan, detect and refine; returns the curve and the accepted modes."""
    curve = scan(problem, ks, threads)
    modes = []
    for j, mult in find_minima(curve, dip_ratio):
        sl = slice(j - 1, j + 2)
        modes.append(refine_minimum(problem, curve.ks[sl], curve.taus[sl, 0], mult, log_scale))
    return curve, modes


def real_fields(values, coefficients):
    """Real orthonormal combinations spanning the fields ``Re(values @ c)``.

    The eigenspace of the real plate operator is closed under conjugation, so
    real and imaginary parts of all branch fields span it; the leading
    singular vectors pick ``p`` real fields that are orthonormal on the
    given sample points.  Returns complex coefficient vectors ``C`` such that
    the fields are ``Re(values @ C)``.
    """
    p = coefficients.shape[1]
    cand = np.concatenate([coefficients, -1j * coefficients], axis=1)
    R = (values @ cand).real
    _, s, vt = np.linalg.svd(R, full_matrices=False)
    return cand @ vt[:p].T / s[:p]


@dataclass
class ModeRaster:
    x: np.ndarray
    y: np.ndarray
    fields: np.ndarray


def evaluate_mode(mode, problem, resolution=64):
    """Real mode shapes on an axis-aligned raster, NaN outside the domain.

    Branch fields are first made real and orthonormal in the discrete L2
    product of the interior samples, then each is scaled to max |value| = 1.
    """
    x0, y0, x1, y1 = problem.domain.bounding_box
    nx = resolution
    ny = max(int(round(resolution * (y1 - y0) / (x1 - x0))), 2)
    x = np.linspace(x0, x1, nx)
    y = np.linspace(y0, y1, ny)
    X, Y = np.meshgrid(x, y)
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    inside = problem.domain.contains(pts)

    interior = eval_basis(mode.basis, problem.interior.points, max_order=0).d(0, 0)
    coef = real_fields(interior, mode.coefficients)
    vals = eval_basis(mode.basis, pts[inside], max_order=0).d(0, 0)
    fields = np.full((coef.shape[1], ny * nx), np.nan)
    for i in range(coef.shape[1]):
        f = (vals @ coef[:, i]).real
        fields[i, inside] = f / np.abs(f).max()
    return ModeRaster(x, y, fields.reshape(-1, ny, nx))
