"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import seedkit as sk


@pytest.fixture
def blobs():
    rng = np.random.default_rng(0)
    a = rng.normal(loc=(-5.0, 0.0), scale=1.0, size=(100, 2))
    b = rng.normal(loc=(5.0, 0.0), scale=1.0, size=(100, 2))
    return np.vstack([a, b])


def test_seed_and_lloyd(blobs):
    rng = sk.RngStream(1)
    seeds = sk.kmeans_seed(blobs, 2, "EGD-EGC", rng)
    assert len(set(seeds)) == 2
    centers, labels, sse, iters = sk.lloyd(blobs, blobs[seeds])
    assert sse >= 0
    assert iters >= 1
    assert sorted(np.round(np.sort(centers[:, 0]) / 5.0)) == [-1, 1]
    assert sk.sse(blobs, centers) == pytest.approx(sse)


def test_seeding_is_deterministic(blobs):
    s1 = sk.kmeans_seed(blobs, 4, "EGD", sk.RngStream(7, 3))
    s2 = sk.kmeans_seed(blobs, 4, "EGD", sk.RngStream(7, 3))
    assert s1 == s2


def test_refinements_do_not_hurt(blobs):
    rng = sk.RngStream(2)
    seeds = sk.kmeans_seed(blobs, 3, "EON", rng)
    phi = sk.sse(blobs, blobs[seeds])
    better = sk.local_search_pp(blobs, seeds, 3, rng)
    assert sk.sse(blobs, blobs[better]) <= phi + 1e-12
    swapped = sk.multiswap_greedy(blobs, seeds, 2, 2, rng)
    assert sk.sse(blobs, blobs[swapped]) <= phi + 1e-12


def test_gmm_roundtrip(blobs):
    rng = sk.RngStream(3)
    seeds, init = sk.gmm_seed(blobs, 2, "EGD-EGC", rng)
    assert len(seeds) == 2
    ll0 = sk.mixture_loglik(init, blobs)
    mix, ll, iters = sk.em(blobs, init)
    assert ll >= ll0 - 1e-9
    assert mix.k == 2
    again = sk.Mixture.from_json(mix.to_json())
    assert sk.mixture_loglik(again, blobs) == pytest.approx(ll)


def test_numerics():
    assert sk.logsumexp([0.0, 0.0]) == pytest.approx(np.log(2.0))
    assert sk.logsumexp([-1000.0, -1000.0]) == pytest.approx(-1000.0 + np.log(2.0))
    lp = sk.log_pdf(np.zeros(1), np.eye(1), np.zeros(1))
    assert lp == pytest.approx(-0.5 * np.log(2 * np.pi))
    d = sk.gauss_distance(np.zeros(2), np.eye(2), np.array([3.0, 4.0]), np.eye(2))
    assert d == pytest.approx(5.0)


def test_datagen_and_stats():
    rng = sk.RngStream(4)
    model = sk.generate_model(3, 2, separation=2.0, eccentricity=1.0, rng=rng)
    pts, labels = sk.sample_dataset(model, 500, rng)
    assert pts.shape == (500, 2)
    assert set(labels) <= {0, 1, 2}
    grid = sk.grid_model()
    assert grid.k == 27

    assert sk.minmax_mean([2.0, 4.0, 6.0]) == [0.0, 0.5, 1.0]
    p, s = sk.correlations([1.0, 2.0, 3.0, 4.0], [2.0, 4.0, 6.0, 8.0])
    assert p == pytest.approx(1.0)
    assert s == pytest.approx(1.0)


def test_normalize_and_knn():
    pts = np.array([[2.0, 5.0], [4.0, 5.0], [6.0, 5.0]])
    normed = sk.minmax_normalize(pts)
    assert normed[:, 0].tolist() == [0.0, 0.5, 1.0]
    assert normed[:, 1].tolist() == [0.0, 0.0, 0.0]
    assert sk.knn(np.array([[0.0], [1.0], [3.0]]), 0, 1) == [1]
