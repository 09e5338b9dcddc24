"""
Selection of the coefficients entering the reconstruction loss.

Every positive x_ij is selected. A zero entry (i, j), j != i, is selected
with probability min(1, k * n_i / (n - n_i)), where n_i counts the distinct
nodes co-occurring with i.
"""

import numpy as np
import scipy.sparse as sp


def zero_probabilities(x, k):
    """
    Per-row inclusion probability of zero entries.

    Args:
        x (CoocMatrix): Counts.
        k (int): Zero-oversampling factor.

    Returns:
        numpy.ndarray: min(1, k * n_i / (n - n_i)); 0 for rows with n_i = 0.
    """
    n = x.n
    distinct = x.row_distinct.astype(np.float64)
    probabilities = np.minimum(1.0, k * distinct / (n - distinct))
    probabilities[distinct == 0] = 0.0
    return probabilities


def sample_zero_coefficients(x, k, rng):
    """
    Draw the Bernoulli selection of zero entries for one epoch.

    Args:
        x (CoocMatrix): Counts.
        k (int): Zero-oversampling factor.
        rng (numpy.random.Generator): Random stream.

    Returns:
        scipy.sparse.csr_matrix: n x n boolean mask, disjoint from the
        positive entries and the diagonal.
    """
    n = x.n
    probabilities = zero_probabilities(x, k)
    indptr, indices = x.matrix.indptr, x.matrix.indices
    rows, cols = [], []
    occupied = np.zeros(n, dtype=bool)

    for i in np.flatnonzero(probabilities > 0):
        neighbors = indices[indptr[i]:indptr[i + 1]]
        occupied[neighbors] = True
        occupied[i] = True
        eligible = np.flatnonzero(~occupied)
        occupied[neighbors] = False
        occupied[i] = False
        if eligible.size == 0:
            continue
        chosen = eligible[rng.random(eligible.size) < probabilities[i]]
        rows.append(np.full(chosen.size, i, dtype=np.int64))
        cols.append(chosen)

    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    return sp.csr_matrix((np.ones(rows.size, dtype=bool), (rows, cols)), shape=(n, n))


def selected_coefficients(x, mask, zero_target=0.0):
    """
    Flatten the selected coefficients into (rows, cols, targets).

    Positive entries target log x_ij; masked zeros target zero_target.
    Positives come first in row-major order, then masked zeros.
    """
    rows, cols, values = x.coordinates()
    if np.any(values <= 0):
        raise ValueError('co-occurrence counts must be positive')
    mask = mask.tocoo()
    return (
        np.concatenate([rows, mask.row.astype(np.int64)]),
        np.concatenate([cols, mask.col.astype(np.int64)]),
        np.concatenate([np.log(values), np.full(mask.nnz, float(zero_target))]),
    )
