import warnings

import numpy as np
import pytest
from sklearn.datasets import load_iris, load_wine
from sklearn.linear_model import LogisticRegression

from fcmclf import knn_predict, logreg_fit
from fcmclf.baselines import make_downstream
from fcmclf.data import scale_all

from conftest import sklearn_table


def test_logreg_separable_blobs():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(0, 0.1, (20, 2)), rng.normal(1, 0.1, (20, 2))])
    y = np.repeat([0, 1], 20)
    assert np.mean(logreg_fit(X, y, 2).predict(X) == y) == 1.0
    assert np.mean(logreg_fit(X, y, 2, C=None).predict(X) == y) == 1.0


def test_logreg_symmetric_data_has_balanced_bias():
    X = np.array([[-1.0], [-0.5], [0.5], [1.0]])
    w = logreg_fit(X, np.array([0, 0, 1, 1]), 2)
    scores = w.decision_function(np.array([[0.0]]))[0]
    assert scores[1] - scores[0] == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("loader", [load_iris, load_wine])
def test_logreg_matches_liblinear_reference(loader):
    ds = scale_all(sklearn_table(loader))
    ours = logreg_fit(ds.X, ds.y, ds.k)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FutureWarning)
        ref = LogisticRegression(solver="liblinear", C=1.0, tol=1e-10, max_iter=10000).fit(ds.X, ds.y)
    np.testing.assert_array_equal(ours.predict(ds.X), ref.predict(ds.X))
    np.testing.assert_allclose(ours.decision_function(ds.X), ref.decision_function(ds.X), atol=1e-3)


def test_knn_rules():
    train = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 1.0]])
    labels = np.array([2, 1, 0])
    assert knn_predict(train, labels, np.array([[0.0, 0.0]]), k=1)[0] == 2
    # two coincident neighbours with different labels: lowest label wins
    assert knn_predict(train, labels, np.array([[1.0, 1.0]]), k=2)[0] == 0
    with pytest.raises(ValueError):
        knn_predict(np.zeros((0, 2)), np.zeros(0), train)


def test_make_downstream():
    assert make_downstream("knn5").k == 5
    assert make_downstream("logreg").name == "logreg"
    with pytest.raises(ValueError):
        make_downstream("svm")
