"""Ridge readout against iterative oracles; kernel spectrum properties."""

import numpy as np
import pytest
from scipy.optimize import minimize

from relqrc.errors import ConfigurationError, DataError
from relqrc.learning import (DesignMatrix, TrainedModel, accuracy, classify,
                             kernel_spectrum, predict, ridge_gradient,
                             ridge_loss, train_ridge)

RNG = np.random.default_rng(42)


def random_instance(d=7, n=15, seed=0):
    rng = np.random.default_rng(seed)
    phi = rng.normal(size=(d, n))
    y = rng.choice([-1.0, 1.0], size=n)
    return DesignMatrix(phi, y)


def test_design_matrix_validation():
    with pytest.raises(DataError):
        DesignMatrix(np.zeros((3, 4)), np.zeros(5))
    with pytest.raises(DataError):
        DesignMatrix(np.full((2, 2), np.nan), np.zeros(2))
    dm = DesignMatrix.from_rows(np.arange(12.0).reshape(4, 3), np.ones(4))
    assert dm.phi.shape == (3, 4)
    assert dm.n_samples == 4


def test_closed_form_matches_iterative_minimizer():
    design = random_instance(seed=1)
    l = 1e-3
    model = train_ridge(design, l)
    res = minimize(ridge_loss, np.zeros(design.phi.shape[0]),
                   args=(design.phi, design.labels, l),
                   jac=ridge_gradient, method="L-BFGS-B",
                   options={"gtol": 1e-12, "ftol": 1e-15,
                            "maxiter": 10_000})
    np.testing.assert_allclose(model.weights, res.x, atol=1e-4)
    assert ridge_loss(model.weights, design.phi, design.labels, l) <= \
        res.fun + 1e-12


def test_gradient_matches_finite_differences():
    design = random_instance(seed=2)
    l = 1e-2
    w = RNG.normal(size=design.phi.shape[0])
    grad = ridge_gradient(w, design.phi, design.labels, l)
    h = 1e-6
    for i in range(len(w)):
        e = np.zeros_like(w)
        e[i] = h
        fd = (ridge_loss(w + e, design.phi, design.labels, l)
              - ridge_loss(w - e, design.phi, design.labels, l)) / (2 * h)
        assert grad[i] == pytest.approx(fd, abs=1e-7)


def test_gradient_vanishes_at_optimum():
    design = random_instance(d=12, n=8, seed=3)  # wide and tall both work
    model = train_ridge(design, 1e-5)
    g = ridge_gradient(model.weights, design.phi, design.labels, 1e-5)
    assert np.max(np.abs(g)) < 1e-10 * (1.0 + np.linalg.norm(model.weights))


def test_nonpositive_regularization_rejected():
    with pytest.raises(ConfigurationError):
        train_ridge(random_instance(), 0.0)


def test_predict_classify_accuracy():
    model = TrainedModel(weights=np.array([1.0, -1.0]), regularization=1e-6)
    X = np.array([[2.0, 1.0], [1.0, 2.0], [1.0, 1.0]])
    np.testing.assert_allclose(predict(model, X), [1.0, -1.0, 0.0])
    np.testing.assert_array_equal(classify(model, X), [1.0, -1.0, 1.0])
    assert accuracy(model, X, [1.0, -1.0, -1.0]) == pytest.approx(2 / 3)
    with pytest.raises(DataError):
        predict(model, np.zeros((2, 3)))
    with pytest.raises(DataError):
        accuracy(model, np.zeros((0, 2)), [])


def test_model_json_round_trip():
    model = TrainedModel(np.array([0.5, -1.5]), 1e-4, {"note": "x"})
    back = TrainedModel.from_json(model.to_json())
    np.testing.assert_array_equal(back.weights, model.weights)
    assert back.regularization == model.regularization
    assert back.metadata == {"note": "x"}


def test_gram_and_covariance_spectra_agree():
    design = random_instance(d=6, n=20, seed=4)
    phi = design.phi
    vals_feat = kernel_spectrum(design).eigenvalues
    vals_samp = np.linalg.eigvalsh(phi.T @ phi / design.n_samples)[::-1]
    k = min(len(vals_feat), len(vals_samp))
    nz = vals_feat[:k] > 1e-12 * vals_feat[0]
    np.testing.assert_allclose(vals_feat[:k][nz], vals_samp[:k][nz],
                               atol=1e-9)


def test_kernel_spectrum_properties():
    design = random_instance(d=5, n=30, seed=5)
    spec = kernel_spectrum(design, threshold=1e-6)
    assert np.all(np.diff(spec.eigenvalues) <= 0)
    assert np.all(spec.eigenvalues >= 0)
    assert spec.effective_rank == int(np.sum(spec.eigenvalues > 1e-6))
    norm = spec.normalized()
    assert norm[0] == pytest.approx(1.0)
    # rank-deficient design: rank bounded by feature count
    phi = np.vstack([np.ones((1, 30)), np.zeros((2, 30))])
    low = kernel_spectrum(DesignMatrix(phi, design.labels), threshold=1e-6)
    assert low.effective_rank == 1
    assert low.nonzero().size == 1


def test_regularization_shrinks_weights():
    design = random_instance(seed=6)
    w_small = train_ridge(design, 1e-8).weights
    w_large = train_ridge(design, 1e2).weights
    assert np.linalg.norm(w_large) < 0.1 * np.linalg.norm(w_small)


def test_random_labels_generalize_at_chance():
    rng = np.random.default_rng(7)
    phi_train = rng.normal(size=(10, 400))
    phi_test = rng.normal(size=(10, 4000))
    y_train = rng.choice([-1.0, 1.0], size=400)
    y_test = rng.choice([-1.0, 1.0], size=4000)
    model = train_ridge(DesignMatrix(phi_train, y_train), 1e-6)
    acc = accuracy(model, phi_test.T, y_test)
    assert abs(acc - 0.5) < 0.05  # about three binomial standard errors
