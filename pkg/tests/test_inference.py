import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.datasets import make_moons

from fcmclf import (encode, forward, make_model, outputs, predict, predict_labels, predict_proba,
                    step, transform)
from fcmclf.inference import (d1_equivalence_check, logistic_parameters, predict_binary,
                              predict_multiclass)


def output_model(variant, out_bias):
    # zero weights: every output concept settles at activate(bias)
    r = 1 + len(out_bias)
    b = np.concatenate([[0.0], out_bias])
    k = 2 if variant == "FCMB" else len(out_bias)
    return make_model(np.zeros((r, r)), b, n=1, depth=1, lam=1.0, variant=variant, k=k)


def bias_for(p, lam=1.0):
    return 0.5 + np.log(p / (1 - p)) / lam


@pytest.mark.parametrize("p,label", [(0.49, 0), (0.5, 1), (0.51, 1)])
def test_binary_threshold(p, label):
    model = output_model("FCMB", [bias_for(p)])
    assert predict_binary(model, np.array([[0.3]]))[0] == label


def test_multiclass_argmax_and_ties():
    model = output_model("FCMMC", bias_for(np.array([0.1, 0.9, 0.3])))
    assert predict_multiclass(model, np.array([[0.3]]))[0] == 1
    tie = output_model("FCMMC", [0.5, 0.5])
    assert predict(tie, np.array([[0.1], [0.9]])).tolist() == [0, 0]
    np.testing.assert_allclose(predict_proba(tie, np.array([[0.2]])), [[0.5, 0.5]])


def test_variant_mismatch_rejected(fcmb_example, fcmmc_example):
    with pytest.raises(ValueError):
        predict_binary(fcmmc_example, np.array([[0.1, 0.2]]))
    with pytest.raises(ValueError):
        predict_multiclass(fcmb_example, np.array([[0.1, 0.2]]))


def test_predict_labels_uses_class_names():
    model = make_model(np.zeros((3, 3)), np.array([0.0, 0.0, 5.0]), n=2, depth=1, lam=1.0,
                       variant="FCMB", class_labels=("neg", "pos"))
    assert predict_labels(model, np.array([[0.2, 0.4]])) == ["pos"]


def test_example_binary_map_is_confident_deep_in_region(fcmb_example):
    # the example maps act on raw two-moons coordinates: lower moon is class 1
    assert predict_proba(fcmb_example, np.array([[1.0, -0.5]]))[0, 0] > 0.95
    assert predict_proba(fcmb_example, np.array([[0.0, 1.0]]))[0, 0] < 0.01


def test_example_maps_separate_raw_moons(fcmb_example, fcmmc_example):
    X, y = make_moons(200, noise=0.05, random_state=0)
    assert np.mean(predict(fcmb_example, X) == y) == 1.0
    assert np.mean(predict(fcmmc_example, X) == y) >= 0.95


def test_proba_rows_sum_to_one(fcmmc_example):
    P = predict_proba(fcmmc_example, np.random.default_rng(0).random((10, 2)))
    np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)


def test_transform_shapes_and_depth_one(fcmmc_example):
    X = np.random.default_rng(1).random((6, 2))
    T = transform(fcmmc_example, X)
    assert T.shape == (6, 4)
    d1 = make_model(fcmmc_example.W, fcmmc_example.b, n=2, depth=1, lam=2.0)
    np.testing.assert_array_equal(transform(d1, X), encode(X.T, d1).T)


def test_one_more_step_after_transform_gives_outputs(fcmmc_example):
    X = np.random.default_rng(2).random((5, 2))
    T = transform(fcmmc_example, X)
    np.testing.assert_allclose(step(T.T, fcmmc_example)[2:].T, outputs(fcmmc_example, X), atol=1e-15)


def test_example_multiclass_map_collapses_first_input_concept(fcmmc_example):
    X, _ = make_moons(200, noise=0.05, random_state=0)
    T = transform(fcmmc_example, X)
    assert np.all((T[:, 0] >= 0) & (T[:, 0] <= 0.001))
    assert T[:, 1].min() < 0.01 and T[:, 1].max() > 0.99


def test_logistic_parameters_special_case():
    W = np.zeros((3, 3))
    W[2] = [1.0, -2.0, 0.0]
    model = make_model(W, np.array([0.0, 0.0, 0.5]), n=2, depth=1, lam=1.0, variant="FCMB")
    w, b = logistic_parameters(model)
    np.testing.assert_array_equal(w, [1.0, -2.0])
    assert b == 0.0


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 6), scale=st.floats(0.1, 5.0), lam=st.floats(0.2, 5.0),
       seed=st.integers(0, 2**32 - 1))
def test_depth_one_binary_map_is_logistic_regression(n, scale, lam, seed):
    rng = np.random.default_rng(seed)
    model = make_model(rng.normal(0, scale, (n + 1, n + 1)), rng.normal(0, scale, n + 1), n=n,
                       depth=1, lam=lam, variant="FCMB")
    assert d1_equivalence_check(model, rng.random((5, n))) < 1e-12


def test_d1_check_requires_binary_depth_one(fcmb_example):
    with pytest.raises(ValueError):
        d1_equivalence_check(fcmb_example, np.zeros((1, 2)))
