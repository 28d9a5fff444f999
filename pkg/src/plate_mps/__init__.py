"""Eigenfrequencies and modes of thin plates by the method of particular solutions."""

__version__ = "0.1.0"

from .basis import FB, PW, BasisSet, PlateMaterial, build_basis, eval_basis, split_wavenumbers
from .boundary import BoundaryCondition, kelvin_kirchhoff, residual_rows, torsion_moment
from .assembly import GramPair, assemble
from .eig import TensionSolution, smallest_tensions
from .geometry import StarDomain, make_circle, make_paper_shape2, sample_boundary, sample_interior
from .oracle import disk_eigenvalues, disk_mode_coefficients
from .solver import (
    BasisSettings,
    ModeResult,
    PlateProblem,
    TensionCurve,
    evaluate_mode,
    find_minima,
    scan,
    scan_grid,
    solve,
)

__all__ = [
    "FB", "PW", "BasisSet", "PlateMaterial", "build_basis", "eval_basis", "split_wavenumbers",
    "BoundaryCondition", "kelvin_kirchhoff", "residual_rows", "torsion_moment",
    "GramPair", "assemble", "TensionSolution", "smallest_tensions",
    "StarDomain", "make_circle", "make_paper_shape2", "sample_boundary", "sample_interior",
    "disk_eigenvalues", "disk_mode_coefficients",
    "BasisSettings", "ModeResult", "PlateProblem", "TensionCurve", "evaluate_mode",
    "find_minima", "scan", "scan_grid", "solve",
]
