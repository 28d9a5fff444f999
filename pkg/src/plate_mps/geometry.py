"""Smooth star-shaped plate domains described by a closed parametric curve.

Curves are trigonometric polynomials

    x(t) = sum_j  ax[j] cos(j t) + bx[j] sin(j t)
    y(t) = sum_j  ay[j] cos(j t) + by[j] sin(j t)

which covers the circle, the second test plate and any user supplied
Fourier-coefficient shape, and gives exact derivatives of every order.
The curve must be traversed counter-clockwise so that ``(y', -x')`` is the
outward normal.
"""

from dataclasses import dataclass, field
import logging
import warnings

import numpy as np

log = logging.getLogger(__name__)

POLYLINE_SEGMENTS = 4096


@dataclass(frozen=True)
class StarDomain:
    """Domain bounded by a trigonometric parametric curve, t in [0, 2 pi).

    Attributes
    ----------
    ax, bx, ay, by : ndarray
        Fourier coefficients of x(t) and y(t); index j multiplies cos(jt)
        or sin(jt).  ``bx[0]`` and ``by[0]`` are ignored.
    name : str
        Label used in manifests and logs.
    """

    ax: np.ndarray
    bx: np.ndarray
    ay: np.ndarray
    by: np.ndarray
    name: str = "custom"
    polyline: np.ndarray = field(init=False, repr=False, compare=False)
    area: float = field(init=False, compare=False)
    perimeter: float = field(init=False, compare=False)
    diameter: float = field(init=False, compare=False)
    bounding_box: tuple = field(init=False, compare=False)

    def __post_init__(self):
        size = max(len(self.ax), len(self.bx), len(self.ay), len(self.by))
        for name in ("ax", "bx", "ay", "by"):
            c = np.zeros(size)
            v = np.asarray(getattr(self, name), dtype=float)
            c[: v.size] = v
            object.__setattr__(self, name, c)

        t = np.linspace(0.0, 2 * np.pi, POLYLINE_SEGMENTS, endpoint=False)
        pts = np.stack(self.curve(t), axis=-1)
        dx, dy = self.curve(t, 1)
        speed = np.hypot(dx, dy)
        if np.any(speed <= 0):
            raise ValueError("curve is not regular (zero-length tangent)")
        h = 2 * np.pi / t.size
        area = 0.5 * h * np.sum(pts[:, 0] * dy - pts[:, 1] * dx)
        if area <= 0:
            raise ValueError("curve must be counter-clockwise and enclose positive area")
        # diameter from a subsample is exact to O(h^2); good enough for sizing
        sub = pts[::4]
        d = np.sqrt(((sub[:, None, :] - sub[None, :, :]) ** 2).sum(-1)).max()
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        pad = 1e-6 * d
        object.__setattr__(self, "polyline", pts)
        object.__setattr__(self, "area", float(area))
        object.__setattr__(self, "perimeter", float(h * speed.sum()))
        object.__setattr__(self, "diameter", float(d))
        object.__setattr__(self, "bounding_box", (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad))
        self._check_star()

    def curve(self, t, order=0):
        """Return the ``order``-th parameter derivative (x, y) at ``t``."""
        t = np.asarray(t, dtype=float)
        j = np.arange(self.ax.size)
        arg = np.multiply.outer(t, j)
        # d^m/dt^m of cos(jt), sin(jt) cycles through a phase shift of m*pi/2
        scale = j.astype(float) ** order
        c = np.cos(arg + order * np.pi / 2) * scale
        s = np.sin(arg + order * np.pi / 2) * scale
        x = c @ self.ax + s @ self.bx
        y = c @ self.ay + s @ self.by
        return x, y

    def contains(self, points):
        """Winding-number membership test against the boundary polyline."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(len(p), dtype=bool)
        a = self.polyline
        b = np.roll(a, -1, axis=0)
        # chunk to bound memory at ~4096 x 2048 floats
        for s in range(0, len(p), 2048):
            q = p[s : s + 2048]
            px, py = q[:, 0:1], q[:, 1:2]
            ay, by = a[:, 1], b[:, 1]
            cross = (b[:, 0] - a[:, 0]) * (py - ay) - (px - a[:, 0]) * (by - ay)
            up = (ay <= py) & (by > py) & (cross > 0)
            down = (ay > py) & (by <= py) & (cross < 0)
            out[s : s + 2048] = (up.sum(1) - down.sum(1)) != 0
        return out

    def _check_star(self):
        if not self.contains([[0.0, 0.0]])[0]:
            warnings.warn(f"domain {self.name!r} does not contain the origin", stacklevel=3)
            return
        # star-shaped w.r.t. the origin iff the polar angle is monotone along the curve
        ang = np.unwrap(np.arctan2(self.polyline[:, 1], self.polyline[:, 0]))
        if np.any(np.diff(ang) <= 0):
            warnings.warn(f"domain {self.name!r} is not star-shaped about the origin", stacklevel=3)


def make_circle(radius=1.0):
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return StarDomain([0.0, radius], [0.0, 0.0], [0.0, 0.0], [0.0, radius], name="circle")


def make_paper_shape2():
    """The plate x = cos t, y = sin t + sin(2t)/3."""
    return StarDomain([0.0, 1.0], [0.0], [0.0], [0.0, 1.0, 1.0 / 3.0], name="paper-shape2")


@dataclass(frozen=True)
class BoundarySamples:
    """Quadrature nodes on the boundary, stored column-wise.

    ``curvature`` is 1/R with R the signed radius of curvature, positive where
    the domain is locally convex; straight pieces give 0 rather than inf.
    """

    t: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    tangents: np.ndarray
    curvature: np.ndarray
    weights: np.ndarray
    bc: np.ndarray

    def __len__(self):
        return len(self.t)

    @property
    def curvature_radius(self):
        with np.errstate(divide="ignore"):
            return 1.0 / self.curvature

    def subset(self, mask):
        return BoundarySamples(*(getattr(self, f)[mask] for f in self.__dataclass_fields__))


def sample_boundary(domain, n, bc_map=None, default_bc="clamped"):
    """Equispaced trapezoid nodes t_j = 2 pi j / n with |gamma'| weights.

    ``bc_map`` is a list of ``(t_start, t_end, tag)`` intervals; parameters not
    covered by any interval receive ``default_bc``.
    """
    if n < 16:
        raise ValueError(f"need at least 16 boundary samples, got {n}")
    t = 2 * np.pi * np.arange(n) / n
    x, y = domain.curve(t)
    dx, dy = domain.curve(t, 1)
    ddx, ddy = domain.curve(t, 2)
    speed = np.hypot(dx, dy)
    if np.any(speed == 0):
        raise ValueError("zero-length tangent at a boundary sample")
    tangents = np.stack([dx, dy], axis=-1) / speed[:, None]
    normals = np.stack([tangents[:, 1], -tangents[:, 0]], axis=-1)
    curvature = (dx * ddy - dy * ddx) / speed**3

    tags = np.full(n, default_bc, dtype=object)
    for lo, hi, tag in bc_map or ():
        tags[(t >= lo) & (t < hi)] = tag
    return BoundarySamples(
        t=t,
        points=np.stack([x, y], axis=-1),
        normals=normals,
        tangents=tangents,
        curvature=curvature,
        weights=speed * (2 * np.pi / n),
        bc=tags,
    )


@dataclass(frozen=True)
class InteriorSampleSet:
    points: np.ndarray
    cell_weight: float
    seed: int
    acceptance_rate: float


def sample_interior(domain, n, seed):
    """Uniform interior points by rejection from the bounding box."""
    if n < 1:
        raise ValueError(f"need at least one interior sample, got {n}")
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = domain.bounding_box
    kept = []
    have = drawn = 0
    while have < n:
        batch = max(2 * (n - have), 256)
        cand = rng.uniform((x0, y0), (x1, y1), size=(batch, 2))
        drawn += batch
        inside = cand[domain.contains(cand)]
        kept.append(inside)
        have += len(inside)
        if drawn >= 10_000 and have / drawn < 0.01:
            raise RuntimeError(f"rejection acceptance rate {have / drawn:.2e} below 1%")
    pts = np.concatenate(kept)[:n]
    return InteriorSampleSet(pts, domain.area / n, seed, have / drawn)
