"""Balanced, L2-regularised logistic regression fitted by Newton's method."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LrModel:
    """Hold a fitted logistic regression.

    Attributes
    ----------
    weights : numpy.ndarray
        the feature weights
    bias : float
        the intercept, not regularised
    l2 : float
        the regularisation strength
    class_weights : tuple of float
        the sample weights of class 0 and class 1
    converged : bool
        whether the gradient reached the tolerance
    iterations : int
        the number of Newton steps
    grad_norm : float
        the infinity norm of the final gradient

    """

    weights: np.ndarray
    bias: float
    l2: float
    class_weights: tuple
    converged: bool = True
    iterations: int = 0
    grad_norm: float = 0.0

    def to_dict(self):
        """Return the model as a plain mapping."""
        return {
            "weights": np.asarray(self.weights).tolist(),
            "bias": float(self.bias),
            "l2": float(self.l2),
            "class_weights": list(self.class_weights),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "grad_norm": float(self.grad_norm),
        }

    @classmethod
    def from_dict(cls, content):
        """Create the model from to_dict output."""
        return cls(
            weights=np.asarray(content["weights"], dtype=np.float64),
            bias=float(content["bias"]),
            l2=float(content["l2"]),
            class_weights=tuple(content["class_weights"]),
            converged=bool(content.get("converged", True)),
            iterations=int(content.get("iterations", 0)),
            grad_norm=float(content.get("grad_norm", 0.0)),
        )


def balanced_class_weights(labels):
    """Return n_total/(2·n_c) for class 0 and class 1."""
    labels = np.asarray(labels)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = int(np.count_nonzero(labels == 0))
    if n_pos == 0 or n_neg == 0:
        msg = (
            "Both classes must be present in the training set "
            f"({n_neg} negatives, {n_pos} positives)."
        )
        raise ValueError(msg)

    n_total = n_pos + n_neg
    return n_total / (2 * n_neg), n_total / (2 * n_pos)


def _augment(x):
    return np.hstack([x, np.ones((x.shape[0], 1))])


def regularized_loss(params, x, labels, l2, class_weights):
    """Evaluate the class-weighted cross-entropy plus the L2 penalty.

    Parameters
    ----------
    params : array-like
        the weights followed by the bias
    x : array-like, shape (n, d)
        the scaled features
    labels : array-like
        the 0/1 labels
    l2 : float
        the regularisation strength
    class_weights : tuple of float
        the weights of class 0 and class 1

    Returns
    -------
    float
        the loss

    """
    params = np.asarray(params, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    z = _augment(np.asarray(x, dtype=np.float64)) @ params
    c = np.where(labels == 1, class_weights[1], class_weights[0])
    cross_entropy = np.sum(c * (np.logaddexp(0, z) - labels * z))
    return float(cross_entropy + 0.5 * l2 * params[:-1] @ params[:-1])


def _gradient_hessian(params, xa, labels, c, l2):
    p = expit(xa @ params)
    penalty = np.full(params.size, l2)
    penalty[-1] = 0.0

    grad = xa.T @ (c * (p - labels)) + penalty * params
    curvature = c * p * (1 - p)
    hess = (xa * curvature[:, None]).T @ xa + np.diag(penalty)
    return grad, hess


def fit_logistic_regression(
    x, labels, l2=1.0, tolerance=1e-8, max_iter=100
):
    """Fit a balanced, L2-regularised logistic regression.

    Each sample of class c has the weight n_total/(2·n_c), and the bias
    is not penalised. Newton steps with a backtracking line search run
    until the infinity norm of the gradient is at most the tolerance.

    Parameters
    ----------
    x : array-like, shape (n, d)
        the scaled training features
    labels : array-like
        the 0/1 labels, both classes present
    l2 : float, optional
        the regularisation strength. Default to 1.0.
    tolerance : float, optional
        the gradient tolerance. Default to 1e-8.
    max_iter : int, optional
        the maximum number of Newton steps. Default to 100.

    Returns
    -------
    LrModel
        the fitted model

    """
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != labels.size:
        msg = (
            f"The features have shape {x.shape} but there are "
            f"{labels.size} labels."
        )
        raise ValueError(msg)

    if l2 < 0:
        msg = f"The regularisation strength cannot be negative ({l2})."
        raise ValueError(msg)

    class_weights = balanced_class_weights(labels)
    c = np.where(labels == 1, class_weights[1], class_weights[0])
    xa = _augment(x)

    params = np.zeros(x.shape[1] + 1)
    loss = regularized_loss(params, x, labels, l2, class_weights)
    grad_norm = np.inf
    iteration = 0

    for iteration in range(1, max_iter + 1):
        grad, hess = _gradient_hessian(params, xa, labels, c, l2)
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm <= tolerance:
            iteration -= 1
            break

        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hess, grad, rcond=None)[0]

        # backtracking on the Armijo condition, a full step is taken
        # once the predicted decrease is below the loss resolution
        t = 1.0
        decrease = float(grad @ step)
        negligible = decrease <= 1e-12 * max(1.0, abs(loss))
        for _ in range(60):
            trial = params - t * step
            trial_loss = regularized_loss(trial, x, labels, l2, class_weights)
            if negligible or trial_loss <= loss - 1e-4 * t * decrease:
                break
            t /= 2
        else:
            logger.warning("The line search could not decrease the loss.")
            break

        params, loss = trial, trial_loss
    else:
        grad, _ = _gradient_hessian(params, xa, labels, c, l2)
        grad_norm = float(np.max(np.abs(grad)))

    converged = grad_norm <= tolerance
    if not converged:
        logger.warning(
            f"The logistic regression stopped with a gradient norm of "
            f"{grad_norm:.3e} above the tolerance {tolerance:.1e}."
        )

    return LrModel(
        weights=params[:-1].copy(),
        bias=float(params[-1]),
        l2=float(l2),
        class_weights=class_weights,
        converged=converged,
        iterations=iteration,
        grad_norm=grad_norm,
    )


def lr_score(model, x):
    """Return the probability of a block error.

    Parameters
    ----------
    model : LrModel
        the model
    x : array-like, shape (n, d) or (d,)
        the scaled features

    Returns
    -------
    numpy.ndarray or float
        sigmoid(w·x + b)

    """
    x = np.asarray(x, dtype=np.float64)
    d = model.weights.size
    if x.shape[-1] != d or x.ndim not in (1, 2):
        msg = f"The features have shape {x.shape}, expected (..., {d})."
        raise ValueError(msg)

    score = expit(x @ model.weights + model.bias)
    if x.ndim == 1:
        return float(score)
    return score
