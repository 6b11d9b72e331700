"""L2-regularized logistic regression fit by damped Newton iterations.

Objective (what the fit minimizes):

    J(w, b) = mean_i log(1 + exp(-s_i (w.x_i + b))) + (lambda/2) ||w||^2

with s_i = +-1 and the bias left unpenalized. Averaging the loss keeps the
optimum invariant under dataset duplication. Newton steps fall back to plain
gradient steps whenever the Hessian is not positive definite, and every step
is halved until the objective decreases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ..features import FeatureVector

__all__ = ["LogRegModel", "fit_logreg", "predict_proba_logreg",
           "save_logreg", "load_logreg"]

FORMAT_HEADER = "vidcurate-logreg v1"


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: float
    l2_lambda: float
    converged: bool = True
    n_iter: int = 0
    objective_history: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if not np.isfinite(self.weights).all() or not np.isfinite(self.bias):
            raise ValueError("model parameters must be finite")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be >= 0")


def _as_matrix(X: Sequence[Union[FeatureVector, Sequence[float]]]) -> np.ndarray:
    rows = [x.to_dense() if isinstance(x, FeatureVector) else np.asarray(x, dtype=float)
            for x in X]
    return np.vstack(rows)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _objective(theta: np.ndarray, X: np.ndarray, y: np.ndarray, lam: float) -> float:
    z = X @ theta[:-1] + theta[-1]
    signed = np.where(y == 1, z, -z)
    return float(np.mean(np.logaddexp(0.0, -signed)) + 0.5 * lam * theta[:-1] @ theta[:-1])


def _gradient(theta: np.ndarray, X: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    n = len(y)
    p = _sigmoid(X @ theta[:-1] + theta[-1])
    resid = p - y
    g = np.empty(len(theta))
    g[:-1] = X.T @ resid / n + lam * theta[:-1]
    g[-1] = resid.mean()
    return g


def _hessian(theta: np.ndarray, X: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    n, d = X.shape
    p = _sigmoid(X @ theta[:-1] + theta[-1])
    w = p * (1.0 - p)
    Xw = X * w[:, None]
    H = np.empty((d + 1, d + 1))
    H[:d, :d] = X.T @ Xw / n + lam * np.eye(d)
    H[:d, d] = Xw.sum(axis=0) / n
    H[d, :d] = H[:d, d]
    H[d, d] = w.sum() / n
    return H


def fit_logreg(X: Sequence, y: Sequence[int], l2_lambda: float = 1e-3,
               tol: float = 1e-8, max_iter: int = 100) -> LogRegModel:
    """Fit until the objective gradient's sup-norm drops to ``tol``.

    Hitting ``max_iter`` first returns the best parameters found with
    ``converged`` flagged False.
    """
    if l2_lambda < 0:
        raise ValueError("l2_lambda must be >= 0")
    Xm = _as_matrix(X)
    yv = np.asarray(y, dtype=float)
    if len(Xm) != len(yv):
        raise ValueError(f"length mismatch: {len(Xm)} rows vs {len(yv)} labels")
    if len(yv) < 2 or len(set(yv.tolist())) < 2:
        raise ValueError("degenerate labels: need both classes present")

    theta = np.zeros(Xm.shape[1] + 1)
    history = [_objective(theta, Xm, yv, l2_lambda)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = _gradient(theta, Xm, yv, l2_lambda)
        if np.abs(g).max() <= tol:
            converged = True
            break
        H = _hessian(theta, Xm, yv, l2_lambda)
        try:
            L = np.linalg.cholesky(H)
            step = -np.linalg.solve(L.T, np.linalg.solve(L, g))
        except np.linalg.LinAlgError:
            step = -g
        # damping: halve until the objective actually decreases
        t = 1.0
        base = history[-1]
        while t > 1e-12:
            cand = theta + t * step
            val = _objective(cand, Xm, yv, l2_lambda)
            if val < base:
                theta = cand
                history.append(val)
                break
            t /= 2.0
        else:
            # no decrease possible along this direction; numerically done
            converged = bool(np.abs(g).max() <= max(tol, 1e-10))
            break
    else:
        converged = bool(np.abs(_gradient(theta, Xm, yv, l2_lambda)).max() <= tol)

    return LogRegModel(weights=theta[:-1], bias=float(theta[-1]),
                       l2_lambda=l2_lambda, converged=converged,
                       n_iter=it, objective_history=history)


def predict_proba_logreg(model: LogRegModel,
                         x: Union[FeatureVector, Sequence[float]]) -> float:
    """Positive-class probability sigmoid(w.x + b)."""
    xv = x.to_dense() if isinstance(x, FeatureVector) else np.asarray(x, dtype=float)
    if xv.shape != model.weights.shape:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {model.weights.shape[0]}")
    return float(_sigmoid(np.array([model.weights @ xv + model.bias]))[0])


def save_logreg(model: LogRegModel, path) -> None:
    """Write a versioned flat file; floats are hex so round-trips are bit-exact."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(FORMAT_HEADER + "\n")
        fh.write(f"dim {len(model.weights)}\n")
        fh.write(f"l2_lambda {model.l2_lambda.hex()}\n")
        fh.write(f"converged {int(model.converged)}\n")
        fh.write(f"n_iter {model.n_iter}\n")
        fh.write(f"bias {model.bias.hex()}\n")
        for w in model.weights:
            fh.write(float(w).hex() + "\n")


def load_logreg(path) -> LogRegModel:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != FORMAT_HEADER:
        raise ValueError(f"{path}: not a {FORMAT_HEADER} file")
    dim = int(lines[1].split()[1])
    lam = float.fromhex(lines[2].split()[1])
    converged = bool(int(lines[3].split()[1]))
    n_iter = int(lines[4].split()[1])
    bias = float.fromhex(lines[5].split()[1])
    weights = np.array([float.fromhex(s) for s in lines[6:6 + dim]])
    if len(weights) != dim:
        raise ValueError(f"{path}: expected {dim} weights, found {len(weights)}")
    return LogRegModel(weights=weights, bias=bias, l2_lambda=lam,
                       converged=converged, n_iter=n_iter)
