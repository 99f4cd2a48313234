"""Finite-difference and symmetry checks for the wave function models.

Gradients are validated with central differences at h = 1e-6 (relative error
~1e-9 away from nodes).  Laplacians use h = 1e-4: the second-difference
roundoff floor is eps / h^2, so h = 1e-6 would drown the signal at ~2e-4
relative error while h = 1e-4 keeps it near 1e-7.
"""

import numpy as np
import pytest

import nda.wavefunctions as wf
from nda.catalog import catalog_list, get_state


def _fd_gradient(model, x, h=1e-6):
    g = np.empty_like(x)
    for j in range(x.shape[1]):
        xp = x.copy(); xp[:, j] += h
        xm = x.copy(); xm[:, j] -= h
        g[:, j] = (model.values(xp) - model.values(xm)) / (2 * h)
    return g


def _fd_laplacian(model, x, h=1e-4):
    v0 = model.values(x)
    lap = np.zeros(x.shape[0])
    for j in range(x.shape[1]):
        xp = x.copy(); xp[:, j] += h
        xm = x.copy(); xm[:, j] -= h
        lap += (model.values(xp) - 2 * v0 + model.values(xm)) / h**2
    return lap


def _test_points(n_particles, n=40, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(scale=1.5, size=(n, 3 * n_particles))
    # keep points away from coordinate-origin cusps of the orbitals
    r = np.linalg.norm(x.reshape(n, n_particles, 3), axis=2)
    return x[np.min(r, axis=1) > 0.3]


@pytest.mark.parametrize("name", [s.name for s in catalog_list() if s.model])
def test_gradients_match_finite_differences(name):
    model = get_state(name).model
    x = _test_points(model.n_particles, seed=hash(name) % 1000)
    v = model.values(x)
    keep = np.abs(v) > 1e-6
    x = x[keep]
    g = model.gradients(x)
    g_fd = _fd_gradient(model, x)
    scale = np.maximum(np.max(np.abs(g), axis=1, keepdims=True), 1e-12)
    assert np.max(np.abs(g - g_fd) / scale) < 5e-7


@pytest.mark.parametrize("name", [s.name for s in catalog_list() if s.model])
def test_laplacians_match_finite_differences(name):
    model = get_state(name).model
    x = _test_points(model.n_particles, seed=hash(name) % 1000 + 7)
    v = model.values(x)
    keep = np.abs(v) > 1e-6
    x = x[keep]
    lap = model.laplacians(x)
    lap_fd = _fd_laplacian(model, x)
    scale = np.maximum(np.abs(lap), 1.0)
    assert np.max(np.abs(lap - lap_fd) / scale) < 1e-5


def test_antisymmetry_of_determinantal_states():
    # swapping two identical-spin electrons must flip the sign bitwise
    for name, (i, j) in [("3S_1s2s", (0, 1)), ("3P_2p2", (0, 1)),
                         ("1S_1s2_2s2", (0, 1)), ("1S_1s2_2s2", (2, 3)),
                         ("1S_1s2_2p2", (0, 1)), ("1S_1s2_2p2", (2, 3))]:
        model = get_state(name).model
        rng = np.random.default_rng(3)
        x = rng.normal(scale=2.0, size=(10_000, 3 * model.n_particles))
        xs = x.copy()
        xs[:, 3 * i:3 * i + 3] = x[:, 3 * j:3 * j + 3]
        xs[:, 3 * j:3 * j + 3] = x[:, 3 * i:3 * i + 3]
        v, vs = model.values(x), model.values(xs)
        assert np.array_equal(v, -vs), name


def test_values_vectorized_consistent_with_rowwise():
    model = get_state("3P_1s2p").model
    x = _test_points(2, n=8, seed=5)
    batch = model.values(x)
    single = np.array([model.values(row[None, :])[0] for row in x])
    assert np.array_equal(batch, single)


def test_scaled_wrapper():
    base = get_state("2P_2p").model
    x = _test_points(1, seed=2)
    doubled = wf.Scaled(2.0, base)
    assert np.array_equal(doubled.values(x), 2.0 * base.values(x))
    assert np.array_equal(doubled.gradients(x), 2.0 * base.gradients(x))
    assert np.array_equal(doubled.laplacians(x), 2.0 * base.laplacians(x))
    flipped = wf.Scaled(-1.0, base)
    assert np.array_equal(flipped.values(x), -base.values(x))
    with pytest.raises(ValueError):
        wf.Scaled(0.0, base)


def test_origin_is_finite():
    # orbital cusps must not produce nan/inf when an electron sits at r = 0
    for name in ["2P_2p", "3S_1s2s", "1S_1s2_2p2"]:
        model = get_state(name).model
        x = np.zeros((1, 3 * model.n_particles))
        x[0, 3:] = 1.0  # park the other electrons off-origin
        assert np.isfinite(model.values(x)).all()
        assert np.isfinite(model.gradients(x)).all()
        assert np.isfinite(model.laplacians(x)).all()


def test_harmonic_pair_jastrow_factor():
    corr = wf.HarmonicPair(omega=0.25, correlated=True, beta=0.25)
    plain = wf.HarmonicPair(omega=0.25, correlated=False)
    rng = np.random.default_rng(11)
    x = rng.normal(scale=1.0, size=(200, 6))
    u = np.linalg.norm(x[:, :3] - x[:, 3:], axis=1) / np.sqrt(2.0)
    ratio = corr.values(x) / plain.values(x)
    assert np.allclose(ratio, 1.0 + 0.25 * np.sqrt(2.0) * u, rtol=1e-12)
