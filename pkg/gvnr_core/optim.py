"""
Per-parameter update rules for the factorization trainers.
"""

import numpy as np

from utils.errors import InvalidParameterError


class AdaGrad:
    """
    AdaGrad with squared-gradient accumulators started at 1.0.

    Args:
        params (dict[str, numpy.ndarray]): Parameters updated in place.
        learning_rate (float): Initial step size.
    """

    def __init__(self, params, learning_rate, initial_accumulator=1.0):
        self.learning_rate = learning_rate
        self.accumulators = {
            name: np.full_like(value, initial_accumulator, dtype=np.float64)
            for name, value in params.items()
        }

    def step(self, params, grads):
        for name, grad in grads.items():
            accumulator = self.accumulators[name]
            accumulator += grad * grad
            params[name] -= self.learning_rate * grad / np.sqrt(accumulator)


class SGD:
    """Plain stochastic gradient descent."""

    def __init__(self, params, learning_rate):
        self.learning_rate = learning_rate

    def step(self, params, grads):
        for name, grad in grads.items():
            params[name] -= self.learning_rate * grad


OPTIMIZERS = {'adagrad': AdaGrad, 'sgd': SGD}


def make_optimizer(name, params, learning_rate):
    """Build the optimizer registered under name."""
    try:
        optimizer_class = OPTIMIZERS[name]
    except KeyError:
        raise InvalidParameterError(
            f'unknown optimizer {name!r}; expected one of {sorted(OPTIMIZERS)}') from None
    return optimizer_class(params, learning_rate)
