"""
Multinomial logistic regression trained on frozen embeddings.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from utils.errors import EmptyInputError, InvalidParameterError


@dataclass(frozen=True)
class SoftmaxClassifier:
    """C x dim weights and C biases."""

    weights: np.ndarray
    biases: np.ndarray

    def decision_function(self, features):
        return np.asarray(features, dtype=np.float64) @ self.weights.T + self.biases

    def predict(self, features):
        return np.argmax(self.decision_function(features), axis=1)


def classifier_objective(theta, features, one_hot, l2):
    """
    Mean cross-entropy plus l2 / (2N) * ||weights||^2, and its gradient.

    Biases are not regularized.

    Args:
        theta (numpy.ndarray): Flattened weights (C*dim) followed by biases (C).
        features (numpy.ndarray): N x dim inputs.
        one_hot (numpy.ndarray): N x C targets.
        l2 (float): Regularization strength.

    Returns:
        tuple[float, numpy.ndarray]: Loss and flat gradient.
    """
    n, dim = features.shape
    num_classes = one_hot.shape[1]
    weights = theta[:num_classes * dim].reshape(num_classes, dim)
    biases = theta[num_classes * dim:]

    logits = features @ weights.T + biases
    log_probs = logits - logsumexp(logits, axis=1, keepdims=True)
    loss = -np.sum(one_hot * log_probs) / n + l2 / (2.0 * n) * np.sum(weights * weights)

    diff = (np.exp(log_probs) - one_hot) / n
    grad_weights = diff.T @ features + (l2 / n) * weights
    grad_biases = diff.sum(axis=0)
    return float(loss), np.concatenate([grad_weights.ravel(), grad_biases])


def train_softmax_classifier(features, labels, l2=1.0, num_classes=None, max_iter=1000, tol=1e-4):
    """
    Fit multinomial logistic regression with full-batch L-BFGS.

    Stops when the largest projected gradient component falls to tol or
    after max_iter iterations. The relative-decrease test is disabled.

    Args:
        features (numpy.ndarray): N x dim inputs.
        labels (numpy.ndarray): N class indices.
        l2 (float): Nonnegative regularization strength.
        num_classes (int): C; defaults to max label + 1.

    Returns:
        SoftmaxClassifier: The fitted classifier.

    Raises:
        InvalidParameterError: On non-finite features or a negative l2.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2 or features.shape[0] != labels.shape[0]:
        raise InvalidParameterError('features must be N x dim with one label per row')
    if features.shape[0] == 0:
        raise EmptyInputError('cannot train a classifier without examples')
    if not np.all(np.isfinite(features)):
        raise InvalidParameterError('features contain non-finite values')
    if l2 < 0:
        raise InvalidParameterError(f'l2 must be nonnegative, got {l2}')

    num_classes = int(labels.max()) + 1 if num_classes is None else num_classes
    n, dim = features.shape
    one_hot = np.zeros((n, num_classes))
    one_hot[np.arange(n), labels] = 1.0

    result = minimize(
        classifier_objective,
        np.zeros(num_classes * (dim + 1)),
        args=(features, one_hot, l2),
        jac=True,
        method='L-BFGS-B',
        options={'maxiter': max_iter, 'gtol': tol, 'ftol': 0.0},
    )
    theta = result.x
    return SoftmaxClassifier(
        weights=theta[:num_classes * dim].reshape(num_classes, dim),
        biases=theta[num_classes * dim:],
    )
