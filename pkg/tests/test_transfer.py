"""Transfer-matrix layer: determinants, products, solutions, norm bounds."""

import numpy as np
import pytest

from cmvsubshift.errors import ValidationError
from cmvsubshift.transfer import (
    TransferMatrix2,
    VerblunskyMap,
    gordon_inequality_check,
    gz_product,
    gz_step,
    propagate,
    szego_step,
    theta_matrix,
    transfer_product,
    transfer_product_grid,
    unit_point,
)
from cmvsubshift.words import Window

RNG_SEED = 20260815


def random_disk(rng, n, radius=0.95):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    ph = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * ph)


def test_single_step_determinant_is_minus_one():
    rng = np.random.default_rng(RNG_SEED)
    alphas = random_disk(rng, 50)
    angles = rng.uniform(0, 2 * np.pi, 50)
    for alpha, om in zip(alphas, angles):
        z = unit_point(om)
        for parity in ("odd", "even"):
            assert abs(gz_step(alpha, z, parity).det + 1.0) < 1e-14
    # integer index spelling agrees with the string spelling
    assert np.allclose(gz_step(0.3, 1j, 7).mat, gz_step(0.3, 1j, "odd").mat)
    assert np.allclose(gz_step(0.3, 1j, 4).mat, gz_step(0.3, 1j, "even").mat)


def test_free_product_closed_form():
    z = unit_point(0.9)
    free = lambda n: 0.0
    m2 = gz_product(free, z, 2)
    assert np.allclose(m2.mat, np.diag([1 / z, z]), atol=1e-14)
    assert m2.n_factors == 2 and m2.first_parity == 1
    m_minus2 = gz_product(free, z, -2)
    assert np.allclose(m_minus2.mat, np.diag([z, 1 / z]), atol=1e-14)
    assert np.allclose((m2 @ m_minus2).mat, np.eye(2), atol=1e-14)


def test_negative_products_invert_site_range():
    rng = np.random.default_rng(RNG_SEED + 1)
    vals = random_disk(rng, 8)
    alphas = Window(list(vals), -5)
    z = unit_point(2.2)
    back = gz_product(alphas, z, -3)
    fwd = transfer_product(alphas, z, -2, 0)
    assert np.allclose(back.mat @ fwd.mat, np.eye(2), atol=1e-12)


def test_free_case_preserves_norms():
    z = unit_point(1.234)
    sol = propagate(lambda n: 0.0, z, (1.0, 0.0), -8, 8)
    for n in range(-8, 9):
        assert abs(sol.norm_at(n) - 1.0) < 1e-12


def test_theta_coupling_links_solution_components():
    # independent route: the unitary building block must intertwine the two
    # solution components site by site
    rng = np.random.default_rng(RNG_SEED + 2)
    vals = random_disk(rng, 21)
    alphas = Window(list(vals), -10)
    z = unit_point(rng.uniform(0, 2 * np.pi))
    sol = propagate(alphas, z, (0.6, 0.8j), -9, 10)
    for j in range(-8, 11):
        th = theta_matrix(alphas[j])
        if j % 2:  # odd site
            got = th @ np.array([sol.u_at(j - 1), sol.u_at(j)])
            want = z * np.array([sol.v_at(j - 1), sol.v_at(j)])
        else:
            got = th @ np.array([sol.v_at(j - 1), sol.v_at(j)])
            want = np.array([sol.u_at(j - 1), sol.u_at(j)])
        assert np.allclose(got, want, atol=1e-11)


def test_theta_matrix_is_unitary_with_det_minus_one():
    rng = np.random.default_rng(RNG_SEED + 3)
    for alpha in random_disk(rng, 20):
        th = theta_matrix(alpha)
        assert np.allclose(th @ th.conj().T, np.eye(2), atol=1e-14)
        assert abs(np.linalg.det(th) + 1.0) < 1e-14


def test_szego_step_determinant_is_z():
    rng = np.random.default_rng(RNG_SEED + 4)
    for alpha in random_disk(rng, 10):
        z = unit_point(rng.uniform(0, 2 * np.pi))
        assert abs(szego_step(alpha, z).det - z) < 1e-14
        assert not np.allclose(szego_step(alpha, z).mat, gz_step(alpha, z, 1).mat)


def test_verblunsky_map():
    f = VerblunskyMap(0.5, -0.25j)
    assert f.alpha("a") == 0.5 and f.alpha("b") == -0.25j
    assert abs(f.rho("a") - np.sqrt(0.75)) < 1e-15
    assert not f.is_constant and VerblunskyMap(0.1, 0.1).is_constant
    win = f.coefficients("aba")
    assert win.lo == 1 and win[2] == -0.25j
    with pytest.raises(ValidationError):
        VerblunskyMap(1.0, 0.0)


def test_grid_product_matches_scalar_route():
    rng = np.random.default_rng(RNG_SEED + 5)
    vals = list(random_disk(rng, 6))
    alphas = Window(vals, 1)
    omegas = rng.uniform(0, 2 * np.pi, 7)
    zs = np.exp(1j * omegas)
    grid = transfer_product_grid(alphas, zs, 1, 6)
    for k, z in enumerate(zs):
        single = transfer_product(alphas, z, 1, 6).mat
        assert np.allclose(grid[:, :, k], single, atol=1e-12)


def test_matrix_bookkeeping_and_validation():
    z = unit_point(0.4)
    t1 = gz_step(0.2, z, 1)
    t2 = gz_step(0.3, z, 2)
    prod = t2 @ t1
    assert prod.n_factors == 2 and prod.first_parity == 1
    assert np.allclose(prod.inverse().mat @ prod.mat, np.eye(2), atol=1e-14)
    with pytest.raises(ValidationError):
        gz_step(0.2, 1.5 + 0j, 1)
    with pytest.raises(ValidationError):
        gz_step(1.2, z, 1)
    with pytest.raises(ValidationError):
        TransferMatrix2(np.eye(3))


def test_gordon_check_free_case():
    rep = gordon_inequality_check(lambda n: 0.0, 1.0 + 0j, 2, variant="two")
    assert abs(rep.trace - 2.0) < 1e-14
    assert rep.bound == 0.25 and rep.holds
    rep3 = gordon_inequality_check(lambda n: 0.0, unit_point(2.5), 4, variant="three")
    assert rep3.bound == 0.5 and rep3.holds
    assert set(rep3.norms) == {"n", "2n", "-n"}


def test_gordon_check_periodic_coefficients():
    vals = (0.4 + 0.1j, -0.35j)
    alphas = lambda n: vals[n % 2]
    rng = np.random.default_rng(RNG_SEED + 6)
    for om in rng.uniform(0, 2 * np.pi, 25):
        rep = gordon_inequality_check(alphas, unit_point(om), 6, variant="three")
        assert rep.holds
        rep2 = gordon_inequality_check(alphas, unit_point(om), 6, variant="two")
        assert rep2.holds


def test_gordon_check_rejects_broken_blocks():
    vals = {j: 0.1 * j for j in range(-8, 9)}
    with pytest.raises(ValidationError):
        gordon_inequality_check(lambda n: vals[n], 1.0, 2, variant="two")
    with pytest.raises(ValidationError):
        gordon_inequality_check(lambda n: 0.0, 1.0, 3, variant="two")  # odd length
    with pytest.raises(ValidationError):
        gordon_inequality_check(lambda n: 0.0, 1.0, 2, seed=(0, 0))


def test_propagate_window_must_contain_origin():
    with pytest.raises(ValidationError):
        propagate(lambda n: 0.0, 1.0, (1, 0), 2, 5)
