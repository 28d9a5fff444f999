import functools

ACCEPTANCE_LINES = []

import numpy as np
import pytest

from plate_mps import PlateMaterial, make_circle, make_paper_shape2, sample_boundary, sample_interior
from plate_mps.solver import BasisSettings, PlateProblem


def make_problem(domain, bc="clamped", nu=0.33, boundary=2048, interior=1024, seed=1, arcs=None, **basis):
    return PlateProblem(
        domain=domain,
        material=PlateMaterial(nu=nu),
        boundary=sample_boundary(domain, boundary, arcs, bc),
        interior=sample_interior(domain, interior, seed),
        basis=BasisSettings(**basis),
    )


@functools.lru_cache(maxsize=None)
def disk_problem(bc="clamped", nu=0.33, boundary=2048, interior=1024):
    return make_problem(make_circle(1.0), bc, nu, boundary, interior)


@pytest.fixture(scope="session")
def unit_disk():
    return make_circle(1.0)


@pytest.fixture(scope="session")
def shape2():
    return make_paper_shape2()


@pytest.fixture(scope="session")
def clamped_disk():
    return disk_problem("clamped")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@functools.lru_cache(maxsize=None)
def disk_solution(bc="clamped", k_min=2.0, k_max=8.0, step=0.01, nu=0.33):
    from plate_mps import scan_grid, solve

    return solve(disk_problem(bc, nu), scan_grid(k_min, k_max, step))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
