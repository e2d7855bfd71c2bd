"""Fuzzy cognitive map classifiers trained by backpropagation through time.

A map with ``n`` input concepts and one (FCMB) or ``k`` (FCMMC) output
concepts is iterated ``depth`` times with shared weights. The final output
concepts give the class; the state one step earlier is a learned feature
space that can feed other classifiers.
"""
from .exceptions import ConfigError, DataError, FcmError, NumericalError, ShapeError
from .model import (FcmModel, Variant, activate, activation_derivative, encode, extract, forward,
                    make_model, normalize_weights, step, step_normalized)
from .gradients import (Gradients, LossKind, backprop, cost, finite_diff_gradient, gradient_check,
                        logloss, loss, relative_error, softmax, softmax_cross_entropy)
from .training import TrainConfig, fit, init_weights, make_batches, make_optimizer
from .inference import (d1_equivalence_check, logistic_parameters, outputs, predict, predict_labels,
                        predict_proba, transform)
from .metrics import (ClusterScores, accuracy, calinski_harabasz, cluster_scores, davies_bouldin,
                      f1_macro, majority_vote_improvement, silhouette)
from .baselines import knn_predict, logreg_fit
from .data import (LabeledDataset, RawTable, kfold_split, load_config, load_csv, load_model,
                   parse_config, save_model, scale_all, scale_split)
from .experiment import CvReport, cross_validate, pipeline_fit_eval

__version__ = "0.1.0"
