"""
Epoch loop shared by the GVNR and GVNR-t trainers.

Each epoch resamples the zero coefficients, shuffles the selected
coefficients and applies one optimizer step per mini-batch. The gradient of
a batch is the objective gradient restricted to that batch's coefficients.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from gvnr_core.optim import make_optimizer
from gvnr_core.sampling import sample_zero_coefficients, selected_coefficients
from utils.errors import EmptyInputError, TrainingDivergedError
from utils.helpers import STREAM_EPOCH, make_rng


logger = logging.getLogger(__name__)


@dataclass
class TrainingHistory:
    """Per-epoch training record."""

    epoch_losses: list = field(default_factory=list)
    positive_counts: list = field(default_factory=list)
    zero_counts: list = field(default_factory=list)

    def record(self, mean_loss, positives, zeros):
        self.epoch_losses.append(float(mean_loss))
        self.positive_counts.append(int(positives))
        self.zero_counts.append(int(zeros))

    @property
    def improved(self):
        return len(self.epoch_losses) < 2 or self.epoch_losses[-1] < self.epoch_losses[0]

    def to_dict(self):
        return {
            'epoch_losses': list(self.epoch_losses),
            'positive_coefficients': list(self.positive_counts),
            'zero_coefficients': list(self.zero_counts),
        }


def _batch_gradients(gradient_fn, params, rows, cols, targets, threads, executor):
    if executor is None or rows.size < 2 * threads:
        return gradient_fn(params, rows, cols, targets)

    shards = np.array_split(np.arange(rows.size), threads)
    parts = list(executor.map(
        lambda shard: gradient_fn(params, rows[shard], cols[shard], targets[shard]), shards))
    loss = 0.0
    grads = None
    for shard_loss, shard_grads in parts:
        loss += shard_loss
        if grads is None:
            grads = shard_grads
        else:
            for name, grad in shard_grads.items():
                grads[name] += grad
    return loss, grads


def run_training(x, cfg, params, gradient_fn):
    """
    Fit params in place on the co-occurrence matrix x.

    Args:
        x (CoocMatrix): Filtered counts.
        cfg (GvnrConfig): Training settings.
        params (dict[str, numpy.ndarray]): Initial parameters, updated in place.
        gradient_fn (callable): (params, rows, cols, targets) -> (loss, grads dict).

    Returns:
        TrainingHistory: Mean loss per epoch over that epoch's selected coefficients.

    Raises:
        EmptyInputError: If x has no positive entry.
        TrainingDivergedError: On a non-finite batch loss.
    """
    if x.nnz == 0:
        raise EmptyInputError('co-occurrence matrix is empty after x_min filtering')

    optimizer = make_optimizer(cfg.optimizer, params, cfg.learning_rate)
    history = TrainingHistory()
    executor = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    last_finite = math.nan

    try:
        for epoch in range(cfg.epochs):
            rng = make_rng(cfg.seed, STREAM_EPOCH, epoch)
            mask = sample_zero_coefficients(x, cfg.k, rng)
            rows, cols, targets = selected_coefficients(x, mask, cfg.zero_target)
            order = rng.permutation(rows.size)

            total = 0.0
            for batch, start in enumerate(range(0, order.size, cfg.batch_size)):
                chosen = order[start:start + cfg.batch_size]
                loss, grads = _batch_gradients(
                    gradient_fn, params, rows[chosen], cols[chosen], targets[chosen],
                    cfg.threads, executor)
                if not np.isfinite(loss):
                    raise TrainingDivergedError(epoch, batch, last_finite, cfg.learning_rate)
                optimizer.step(params, grads)
                total += loss

            mean_loss = total / rows.size
            last_finite = mean_loss
            history.record(mean_loss, x.nnz, mask.nnz)
            logger.info(
                'epoch %d/%d: mean loss %.6f over %d positive + %d zero coefficients',
                epoch + 1, cfg.epochs, mean_loss, x.nnz, mask.nnz)
    finally:
        if executor is not None:
            executor.shutdown()

    if not history.improved:
        logger.warning(
            'final epoch loss %.6f is not below the first epoch loss %.6f',
            history.epoch_losses[-1], history.epoch_losses[0])
    return history
