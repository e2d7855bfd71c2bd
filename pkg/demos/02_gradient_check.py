"""Backpropagation through the unrolled map against finite differences.

Each trial draws a random map and a small batch, then compares the analytic
gradient of every weight and bias with a central difference (h = 1e-5).
For a single-step binary map the gradient also has a closed form: the
gradient of a logistic regression on the encoded input.

Deep binary maps can saturate their output concept close to 1, where
``1 - y`` keeps only a few significant digits. The finite difference then
carries that rounding, so an occasional trial lands near 1e-4 even though
the analytic gradient is exact; a larger step (h = 1e-4) brings it back down.
"""
import numpy as np

from fcmclf import backprop, forward, gradient_check
from fcmclf.gradients import logistic_gradient, random_instance, relative_error

for variant in ("FCMB", "FCMMC"):
    for depth in (1, 2, 3, 4):
        err = gradient_check(n=4, k=3, depth=depth, variant=variant, trials=10, seed=depth)
        print(f"{variant:5s} depth {depth}: max relative error {err:.2e}")

model, X, y = random_instance(np.random.default_rng(0), 3, 2, 1, "FCMB")
g = backprop(forward(X, model), y, "logloss", model)
closed = logistic_gradient(model, X, y)
print("depth-1 binary map vs logistic gradient:", f"{relative_error(g.dW, closed.dW).max():.1e}")
print("rows other than the output row are zero:", bool(np.all(g.dW[:-1] == 0)))
