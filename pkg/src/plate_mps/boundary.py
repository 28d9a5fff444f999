"""Boundary-condition residuals of a basis at boundary quadrature nodes.

Directional derivatives along the normal n and tangent t are taken in the
frozen frame: Cartesian derivative tensors contracted with the fixed vectors
of each sample.  The turning of the edge enters only through the explicit
curvature term of the Kelvin-Kirchhoff reaction.
"""

from dataclasses import dataclass
import enum

import numpy as np

from .basis import eval_basis, split_wavenumbers


class BoundaryCondition(str, enum.Enum):
    CLAMPED = "clamped"
    SIMPLY_SUPPORTED = "simply_supported"
    FREE = "free"

    @classmethod
    def parse(cls, tag):
        if isinstance(tag, cls):
            return tag
        key = str(tag).strip().lower().replace("-", "_").replace(" ", "_")
        aliases = {"ss": "simply_supported", "simply": "simply_supported", "supported": "simply_supported"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown boundary condition {tag!r}") from None


def contract(tensor, *vectors):
    """Contract the leading axes of ``tensor`` with the given 2-vectors.

    Vectors may carry trailing sample axes matching the tensor's axes after
    the contracted ones; extra trailing tensor axes broadcast.
    """
    out = np.asarray(tensor)
    rank = len(vectors)
    for v in vectors:
        v = np.asarray(v, dtype=float)
        extra = out.ndim - rank - (v.ndim - 1)
        v = v.reshape(v.shape + (1,) * extra)
        out = v[0] * out[0] + v[1] * out[1]
        rank -= 1
    return out


def torsion_moment(hessian, n, t, nu, D=1.0):
    """M_n = -D (w_nn + nu w_tt)."""
    return -D * (contract(hessian, n, n) + nu * contract(hessian, t, t))


def kelvin_kirchhoff(hessian, third, n, t, R, nu, D=1.0, length_scale=1.0):
    """Kelvin-Kirchhoff edge reaction

        K_n = -D (w_nnn + (2 - nu) w_ntt + (1 - nu)/R (w_tt - w_nn))

    with R > 0 on convex arcs.  ``R = inf`` means a straight edge.
    """
    R = np.asarray(R, dtype=float)
    if np.any(np.abs(R) < 1e-9 * length_scale):
        raise ValueError("degenerate curvature radius at a boundary sample")
    return _kelvin_kirchhoff(hessian, third, n, t, 1.0 / R, nu, D)


def _kelvin_kirchhoff(hessian, third, n, t, curvature, nu, D):
    w_nn = contract(hessian, n, n)
    w_tt = contract(hessian, t, t)
    curv = np.asarray(curvature, dtype=float)
    curv = curv.reshape(curv.shape + (1,) * (w_nn.ndim - curv.ndim))
    return -D * (
        contract(third, n, n, n)
        + (2.0 - nu) * contract(third, n, t, t)
        + (1.0 - nu) * curv * (w_tt - w_nn)
    )


@dataclass(frozen=True)
class ResidualRowSet:
    """Rows ``B`` with ``|B u|^2`` equal to the discretised tension of ``u``.

    Rows ``[0, S)`` hold each sample's first quantity and ``[S, 2S)`` its
    second, both pre-scaled by ``sqrt(weight)`` and the k-power constant.
    """

    B: np.ndarray
    tags: np.ndarray
    k: float

    @property
    def rows_per_tag(self):
        both = np.concatenate([self.tags, self.tags])
        return {tag: np.flatnonzero(both == tag) for tag in np.unique(self.tags)}


def residual_rows(basis, samples, material, omega=None, table=None):
    """Assemble the scaled residual rows for every boundary sample.

    k is the larger of the two split wavenumbers.  Clamped edges contribute
    ``w`` and ``w_n / k``; simply supported ``w`` and ``M_n / (D k^2)``; free
    ``M_n / (D k^2)`` and ``K_n / (D k^3)``.
    """
    if table is None:
        table = eval_basis(basis, samples.points, max_order=3)
    k = max(basis.k1, basis.k2) if omega is None else split_wavenumbers(material, omega).k_plus
    tags = np.array([BoundaryCondition.parse(b).value for b in samples.bc])
    needed = 3 if np.any(tags == BoundaryCondition.FREE.value) else 2
    if table.max_order < needed:
        raise ValueError(f"boundary rows need derivatives up to order {needed}")

    S, N = len(samples), table.values.shape[-1]
    n = samples.normals.T
    t = samples.tangents.T
    D, nu = material.D, material.nu
    w = table.d(0, 0)
    w_n = n[0][:, None] * table.d(1, 0) + n[1][:, None] * table.d(0, 1)
    hess = table.hessian()
    M = torsion_moment(hess, n, t, nu, D)

    first = np.empty((S, N), dtype=complex)
    second = np.empty((S, N), dtype=complex)
    clamped = tags == BoundaryCondition.CLAMPED.value
    simple = tags == BoundaryCondition.SIMPLY_SUPPORTED.value
    free = tags == BoundaryCondition.FREE.value
    first[clamped] = w[clamped]
    second[clamped] = w_n[clamped] / k
    first[simple] = w[simple]
    second[simple] = M[simple] / (D * k**2)
    if np.any(free):
        kk = _kelvin_kirchhoff(
            hess[..., free, :], table.third()[..., free, :], n[:, free], t[:, free],
            samples.curvature[free], nu, D,
        )
        first[free] = M[free] / (D * k**2)
        second[free] = kk / (D * k**3)

    sw = np.sqrt(samples.weights)[:, None]
    B = np.concatenate([first * sw, second * sw])
    if not np.all(np.isfinite(B)):
        raise FloatingPointError("non-finite boundary residual rows")
    return ResidualRowSet(B, tags, float(k))
