"""Two hand-set maps on the two-moons data.

A binary map (one output concept) and a two-class map (one output concept
per class) are applied to raw two-moons coordinates. The state one step
before the output is a new feature space; for the two-class map the first
input concept collapses to almost zero, so the points end up on a line.
"""
import numpy as np
from sklearn.datasets import make_moons

from fcmclf import accuracy, make_model, predict, silhouette, transform

binary = make_model(
    [[0.28, -0.31, -0.09], [1.17, 0.45, -0.66], [-2.43, 3.65, -1.92]],
    [0.28, 0.57, -1.62], n=2, depth=3, lam=5.0, variant="FCMB")
two_class = make_model(
    [[2.89, -1.50, -0.29, -1.01], [5.77, -1.43, 5.61, -4.42],
     [3.31, -6.80, 0.96, 0.75], [5.03, 6.75, -1.02, -0.46]],
    [-3.14, -1.38, 3.01, -2.18], n=2, depth=3, lam=2.0, variant="FCMMC")

X, y = make_moons(200, noise=0.05, random_state=0)
print(f"binary map accuracy    {accuracy(predict(binary, X), y):.3f}")
print(f"two-class map accuracy {accuracy(predict(two_class, X), y):.3f}")

T = transform(two_class, X)
print(f"transformed x1 range   [{T[:, 0].min():.2e}, {T[:, 0].max():.2e}]")
print(f"transformed x2 range   [{T[:, 1].min():.3f}, {T[:, 1].max():.3f}]")
print(f"silhouette original {silhouette(X, y):.3f} -> transformed {silhouette(T, y):.3f}")
