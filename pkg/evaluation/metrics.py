"""
Evaluation metrics.
"""

import numpy as np
from scipy.stats import rankdata

from utils.errors import EmptyInputError


def roc_auc(scores_pos, scores_neg):
    """
    Area under the ROC curve from positive and negative scores.

    Equals the probability that a random positive outscores a random
    negative, ties counting one half, computed from average ranks.

    Args:
        scores_pos (array-like): Scores of true links.
        scores_neg (array-like): Scores of non-links.

    Returns:
        float: AUC in [0, 1].

    Raises:
        EmptyInputError: If either side is empty.
    """
    scores_pos = np.asarray(scores_pos, dtype=np.float64).ravel()
    scores_neg = np.asarray(scores_neg, dtype=np.float64).ravel()
    if scores_pos.size == 0 or scores_neg.size == 0:
        raise EmptyInputError('roc_auc needs at least one positive and one negative score')
    ranks = rankdata(np.concatenate([scores_pos, scores_neg]), method='average')
    n_pos, n_neg = scores_pos.size, scores_neg.size
    wins = ranks[:n_pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(wins / (n_pos * n_neg))


def accuracy(predicted, labels):
    """Fraction of matching predictions."""
    predicted = np.asarray(predicted)
    labels = np.asarray(labels)
    if labels.size == 0:
        raise EmptyInputError('accuracy of an empty prediction set')
    return float(np.mean(predicted == labels))
