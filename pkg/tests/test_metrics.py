import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn import metrics as skm

from fcmclf import (ShapeError, accuracy, calinski_harabasz, davies_bouldin, f1_macro,
                    majority_vote_improvement, silhouette)
from fcmclf.metrics import ClusterScores


def test_accuracy():
    assert accuracy([0, 1, 1, 0], [0, 1, 0, 0]) == 0.75
    assert accuracy([1, 2], [1, 2]) == 1.0
    assert accuracy([0, 0], [1, 1]) == 0.0
    with pytest.raises(ShapeError):
        accuracy([0], [0, 1])


def test_f1_macro():
    assert f1_macro([1, 1, 0, 0], [1, 0, 1, 0], 2) == pytest.approx(0.5)
    assert f1_macro([0, 1, 2], [0, 1, 2], 3) == 1.0
    assert f1_macro([1, 0], [0, 1], 2) == 0.0
    with pytest.raises(ShapeError):
        f1_macro([0], [0, 1], 2)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(2, 4))
def test_f1_matches_sklearn(seed, k):
    rng = np.random.default_rng(seed)
    truth = rng.integers(0, k, 30)
    pred = rng.integers(0, k, 30)
    ref = skm.f1_score(truth, pred, average="macro", labels=range(k), zero_division=0)
    assert f1_macro(pred, truth, k) == pytest.approx(ref, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(2, 5), dim=st.integers(1, 6))
def test_cluster_indices_match_sklearn(seed, k, dim):
    rng = np.random.default_rng(seed)
    Z = np.concatenate([np.arange(k), rng.integers(0, k, 40)])
    X = rng.normal(0, 1, (Z.size, dim)) + Z[:, None]
    assert davies_bouldin(X, Z) == pytest.approx(skm.davies_bouldin_score(X, Z), rel=1e-9)
    assert silhouette(X, Z) == pytest.approx(skm.silhouette_score(X, Z), rel=1e-9, abs=1e-12)
    assert calinski_harabasz(X, Z) == pytest.approx(skm.calinski_harabasz_score(X, Z), rel=1e-9)


def test_coincident_clusters():
    X = np.array([[0.0, 0.0]] * 3 + [[1.0, 1.0]] * 3)
    Z = [0, 0, 0, 1, 1, 1]
    assert davies_bouldin(X, Z) == 0.0
    assert calinski_harabasz(X, Z) == float("inf")
    assert silhouette(X, Z) == pytest.approx(1.0)


def test_tight_separated_clusters_silhouette_near_one():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(0, 0.01, (20, 2)), rng.normal(10, 0.01, (20, 2))])
    assert silhouette(X, [0] * 20 + [1] * 20) > 0.99


def test_random_labels_on_one_blob_silhouette_near_zero():
    rng = np.random.default_rng(0)
    X = rng.normal(0, 1, (400, 2))
    assert abs(silhouette(X, rng.integers(0, 2, 400))) < 0.1


def test_single_cluster_rejected():
    X = np.random.default_rng(0).random((5, 2))
    for fn in (davies_bouldin, silhouette, calinski_harabasz):
        with pytest.raises(ValueError):
            fn(X, np.zeros(5))


def test_majority_vote_examples():
    iris = majority_vote_improvement(ClusterScores(0.87, 0.46, 252.51), ClusterScores(0.36, 0.77, 669.07))
    assert iris.verdict == "improved" and iris.wins == 3
    glass = majority_vote_improvement(ClusterScores(2.16, 0.00, 11.38), ClusterScores(2.46, -0.00, 7.91))
    assert glass.verdict == "not_improved"
    same = ClusterScores(1.0, 0.5, 10.0)
    assert majority_vote_improvement(same, same).verdict == "not_improved"
    assert majority_vote_improvement(same, ClusterScores(0.9, 0.6, 9.0)).verdict == "improved"
