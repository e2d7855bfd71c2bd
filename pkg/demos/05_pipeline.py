"""The map as a feature transformer in front of another classifier.

On identical folds, a regularized logistic regression is trained once on the
scaled features and once on the transformed features.
"""
from sklearn.datasets import load_iris

from fcmclf import TrainConfig, pipeline_fit_eval
from fcmclf.data import RawTable

d = load_iris()
table = RawTable(d.data, d.target, tuple(d.target_names))
cfg = TrainConfig(variant="FCMMC", depth=4, lam=3.0, epochs=3000, batch_size=-1,
                  optimizer="rmsprop", learning_rate=0.0005)
report = pipeline_fit_eval(table, cfg, "logreg", folds=5, seed=0, name="iris")
s = report.summary()
print(f"map alone          {s['fcm_test_accuracy']:.3f}")
print(f"logreg             {s['logreg_original_accuracy']:.3f}")
print(f"map + logreg       {s['logreg_transformed_accuracy']:.3f}")
