import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plate_mps import FB, PW, PlateMaterial, assemble, build_basis, eval_basis, make_circle, make_paper_shape2
from plate_mps.assembly import GramPair
from plate_mps.boundary import residual_rows
from plate_mps.eig import smallest_tensions
from plate_mps.geometry import sample_boundary, sample_interior


@pytest.fixture(scope="module")
def shape2_pair():
    d = make_paper_shape2()
    mat = PlateMaterial()
    omega = 20.0
    b = build_basis(PW, omega, mat, 14, 14, domain=d)
    s = sample_boundary(d, 512, [(0.0, 2.0, "clamped"), (2.0, 4.0, "simply_supported")], "free")
    inner = sample_interior(d, 1024, seed=3)
    return b, s, inner, mat, omega, assemble(b, s, inner, mat, omega)


def test_gram_pair_hermitian_psd(shape2_pair):
    *_, pair = shape2_pair
    for M in (pair.F, pair.G):
        assert np.abs(M - M.conj().T).max() <= 1e-14 * np.abs(M).max()
        assert np.linalg.eigvalsh(M).min() >= -1e-10 * np.abs(M).max()


def test_quadratic_form_is_sum_of_residuals(shape2_pair, rng):
    b, s, inner, mat, omega, pair = shape2_pair
    u = rng.standard_normal(b.size) + 1j * rng.standard_normal(b.size)
    B = residual_rows(b, s, mat, omega).B
    direct = sum(abs(row @ u) ** 2 for row in B)
    assert (u.conj() @ pair.F @ u).real == pytest.approx(direct, rel=1e-12)


def test_scaling_covariance(shape2_pair, rng):
    b, s, inner, mat, omega, pair = shape2_pair
    c = rng.standard_normal(b.size) + 1j * rng.standard_normal(b.size)
    S = np.diag(c)
    tab = eval_basis(b, s.points, 3)
    scaled = type(tab)(tab.values * c, tab.orders)
    vals = eval_basis(b, inner.points, 0).d(0, 0) * c
    p2 = assemble(b, s, inner, mat, omega, boundary_table=scaled, interior_values=vals)
    for A, A2 in ((pair.F, p2.F), (pair.G, p2.G)):
        assert np.allclose(A2, S.conj() @ A @ S, rtol=1e-12, atol=1e-13 * np.abs(A2).max())


def test_constant_modulus_wave_gives_area():
    d = make_circle(1.0)
    mat = PlateMaterial()
    b = build_basis(PW, 9.0, mat, 1, 1, domain=d)
    inner = sample_interior(d, 300, seed=0)
    p = assemble(b, sample_boundary(d, 64), inner, mat, 9.0)
    assert p.G[0, 0].real == pytest.approx(d.area, rel=1e-12)


def test_fourier_bessel_gram_nearly_diagonal():
    d = make_circle(1.0)
    mat = PlateMaterial()
    b = build_basis(FB, 9.0, mat, 7, 7, domain=d)
    inner = sample_interior(d, 10_000, seed=8)
    G = assemble(b, sample_boundary(d, 64), inner, mat, 9.0).G
    orders = np.concatenate([b.osc, b.eva])
    dg = np.sqrt(np.abs(np.diag(G)))
    for i in range(b.size):
        for j in range(b.size):
            if orders[i] != orders[j]:
                assert abs(G[i, j]) < 0.05 * dg[i] * dg[j]


def test_dimension_mismatch_is_reported():
    d = make_circle(1.0)
    mat = PlateMaterial()
    b = build_basis(PW, 9.0, mat, 4, 4, domain=d)
    inner = sample_interior(d, 100, seed=0)
    with pytest.raises(ValueError):
        assemble(b, sample_boundary(d, 64), inner, mat, 9.0, interior_values=np.ones((100, 3)))


def test_diagonal_pencil():
    pair = GramPair(np.diag([3.0, 1.0, 2.0]).astype(complex), np.eye(3, dtype=complex), 1.0)
    sol = smallest_tensions(pair, 2)
    assert np.allclose(sol.taus, [1.0, 2.0])
    assert np.allclose(np.abs(sol.vectors), [[0, 0], [1, 0], [0, 1]])


def test_zero_boundary_form(rng):
    X = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    G = X.conj().T @ X
    sol = smallest_tensions(GramPair(np.zeros((5, 5), complex), G, 1.0))
    assert abs(sol.taus[0]) < 1e-12
    v = sol.vectors[:, 0]
    assert (v.conj() @ G @ v).real == pytest.approx(1.0)


def random_pair(rng, n=8, cond=1e3):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    F = X.conj().T @ X
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    G = Q @ np.diag(np.logspace(0, np.log10(cond), n)) @ Q.conj().T
    return GramPair(F, 0.5 * (G + G.conj().T), 1.0)


def test_against_explicit_inverse(rng):
    pair = random_pair(rng)
    ref = np.sort(np.linalg.eigvals(np.linalg.inv(pair.G) @ pair.F).real)
    sol = smallest_tensions(pair, 8)
    assert np.allclose(sol.taus, ref, rtol=1e-9)
    assert sol.retained_dim == 8
    # each vector solves F v = tau G v
    for i in range(8):
        v = sol.vectors[:, i]
        r = pair.F @ v - sol.taus[i] * pair.G @ v
        assert np.linalg.norm(r) < 1e-10 * np.linalg.norm(pair.F) * np.linalg.norm(v)


def test_eigensolver_residual_contract(rng):
    X = rng.standard_normal((100, 100)) + 1j * rng.standard_normal((100, 100))
    A = X + X.conj().T
    sol = smallest_tensions(GramPair(A, np.eye(100, dtype=complex), 1.0), 100)
    norm = np.linalg.norm(A, 2)
    for i in range(100):
        v = sol.vectors[:, i]
        assert np.linalg.norm(A @ v - sol.taus[i] * v) <= 1e-12 * norm


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), logs=st.lists(st.floats(-3, 3), min_size=8, max_size=8))
def test_congruence_invariance(seed, logs):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, cond=1e2)
    s = 10.0 ** np.array(logs) * np.exp(1j * rng.uniform(0, 2 * np.pi, 8))
    S = np.diag(s)
    scaled = GramPair(S.conj().T @ pair.F @ S, S.conj().T @ pair.G @ S, 1.0)
    a = smallest_tensions(pair, 3)
    b = smallest_tensions(scaled, 3, reg_eps=0.0)
    assert b.retained_dim == 8
    assert np.allclose(a.taus, b.taus, rtol=1e-8)


def test_truncation_drops_null_directions(rng):
    X = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
    G = X.conj().T @ X
    F = np.eye(6, dtype=complex)
    sol = smallest_tensions(GramPair(F, G, 1.0), 2)
    assert sol.retained_dim == 3
    with pytest.raises(ValueError):
        smallest_tensions(GramPair(F, G, 1.0), 4)
