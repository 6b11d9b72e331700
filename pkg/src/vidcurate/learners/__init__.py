"""Base classifiers for the two views, plus evaluation metrics.

The metadata-view classifier is an L2-regularized logistic regression fit by
damped Newton steps; the content-view classifier is a random forest of CART
trees with Gini splits. Both are implemented in-repo with deterministic,
seedable behavior and bit-exact model serialization.
"""

from .logreg import LogRegModel, fit_logreg, predict_proba_logreg, save_logreg, load_logreg
from .forest import (ForestModel, ForestParams, fit_forest, predict_proba_forest,
                     save_forest, load_forest)
from .metrics import EvalReport, evaluate

__all__ = [
    "LogRegModel", "fit_logreg", "predict_proba_logreg", "save_logreg", "load_logreg",
    "ForestModel", "ForestParams", "fit_forest", "predict_proba_forest",
    "save_forest", "load_forest",
    "EvalReport", "evaluate",
]
