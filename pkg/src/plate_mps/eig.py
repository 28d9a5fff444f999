"""Smallest eigenvalues of the Hermitian pencil (F, G) with G regularised.

G is scaled to unit diagonal and truncated to its numerically non-singular
eigenspace before the pencil is reduced to a standard Hermitian problem,
which is how the ill-conditioning of large plane-wave families is kept
under control.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_REG_EPS = 1e-12


@dataclass(frozen=True)
class TensionSolution:
    taus: np.ndarray
    vectors: np.ndarray
    retained_dim: int
    g_condition: float


def smallest_tensions(pair, m=1, reg_eps=DEFAULT_REG_EPS):
    """The ``m`` smallest tau with ``F u = tau G u`` and ``u^H G u = 1``.

    Parameters
    ----------
    pair : GramPair
    m : int
        Number of tension branches to return.
    reg_eps : float
        Eigenvalues of the diagonally equilibrated G below
        ``reg_eps * max(eig)`` are discarded.

    Returns
    -------
    TensionSolution
        ``vectors[:, i]`` is the coefficient vector of branch i.
    """
    F, G = pair.F, pair.G
    if F.shape != G.shape:
        raise ValueError("F and G must have the same shape")
    # Jacobi equilibration makes the result independent of column scaling
    diag = np.real(np.diag(G)).copy()
    if not np.all(diag >= 0):
        raise np.linalg.LinAlgError("G has a negative diagonal entry")
    scale = np.where(diag > 0, 1.0 / np.sqrt(np.where(diag > 0, diag, 1.0)), 1.0)
    F = F * np.outer(scale, scale)
    G = G * np.outer(scale, scale)
    lam, V = np.linalg.eigh(G)
    top = lam[-1] if lam.size else 0.0
    if not top > 0:
        raise np.linalg.LinAlgError("G is numerically zero")
    keep = lam >= reg_eps * top
    r = int(keep.sum())
    if m < 1 or m > r:
        raise ValueError(f"requested {m} tensions but only {r} directions retained")
    W = V[:, keep] / np.sqrt(lam[keep])
    reduced = W.conj().T @ F @ W
    tau, Y = np.linalg.eigh(0.5 * (reduced + reduced.conj().T))
    vectors = scale[:, None] * (W @ Y[:, :m])
    return TensionSolution(tau[:m].copy(), vectors, r, float(top / lam[keep][0]))
