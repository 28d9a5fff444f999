"""Gram matrices of the boundary tension and of the interior L2 norm."""

from dataclasses import dataclass

import numpy as np

from .basis import eval_basis
from .boundary import residual_rows


def hermitize(M):
    return 0.5 * (M + M.conj().T)


@dataclass(frozen=True)
class GramPair:
    """``u^H F u`` is the discretised tension, ``u^H G u`` the squared L2 norm."""

    F: np.ndarray
    G: np.ndarray
    k: float


def gram_from_rows(B, A, cell_weight, k):
    F = hermitize(B.conj().T @ B)
    G = hermitize(cell_weight * (A.conj().T @ A))
    return GramPair(F, G, k)


def assemble(basis, samples, interior, material, omega=None, boundary_table=None, interior_values=None):
    """Build F = B^H B and G = (area / n) A^H A with A the interior values."""
    if boundary_table is None:
        boundary_table = eval_basis(basis, samples.points, max_order=3)
    if interior_values is None:
        interior_values = eval_basis(basis, interior.points, max_order=0).d(0, 0)
    rows = residual_rows(basis, samples, material, omega, table=boundary_table)
    if rows.B.shape[1] != interior_values.shape[1]:
        raise ValueError(
            f"dimension mismatch: {rows.B.shape[1]} boundary columns vs {interior_values.shape[1]} interior"
        )
    return gram_from_rows(rows.B, interior_values, interior.cell_weight, rows.k)
