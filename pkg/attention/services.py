"""
Scaled dot-product attention weights between pairs of documents.

Only the forward computation exists: keys and values are raw word
embedding rows, and the query of one document is built from the words of
the other one.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import softmax

from gvnr_text.services import as_bow, doc_context_vector
from utils.errors import EmptyInputError, InvalidParameterError


QUERY_STRATEGIES = ('mean', 'max')


@dataclass(frozen=True)
class AttentionInput:
    """A query vector against L key rows and L value rows."""

    query: np.ndarray
    keys: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        query = np.asarray(self.query, dtype=np.float64)
        keys = np.atleast_2d(np.asarray(self.keys, dtype=np.float64))
        values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        if keys.shape[0] == 0 or keys.size == 0:
            raise EmptyInputError('attention needs at least one key')
        if query.ndim != 1 or query.shape[0] != keys.shape[1]:
            raise InvalidParameterError(
                f'query dimension {query.shape} does not match key dimension {keys.shape[1]}')
        if values.shape[0] != keys.shape[0]:
            raise InvalidParameterError(f'{keys.shape[0]} keys but {values.shape[0]} values')
        if not (np.all(np.isfinite(query)) and np.all(np.isfinite(keys)) and np.all(np.isfinite(values))):
            raise InvalidParameterError('attention inputs must be finite')
        object.__setattr__(self, 'query', query)
        object.__setattr__(self, 'keys', keys)
        object.__setattr__(self, 'values', values)


@dataclass(frozen=True)
class AttentionResult:
    weights: np.ndarray
    output: np.ndarray


def scaled_dot_product_attention(attention_input, d_k=None):
    """
    softmax(q K^T / sqrt(d_k)) V.

    Args:
        attention_input (AttentionInput): Query, keys and values.
        d_k (int): Scaling dimension; the key dimension by default.

    Returns:
        AttentionResult: L weights on the simplex and the weighted value sum.
    """
    if d_k is None:
        d_k = attention_input.keys.shape[1]
    logits = attention_input.keys @ attention_input.query / math.sqrt(d_k)
    weights = softmax(logits)
    return AttentionResult(weights=weights, output=weights @ attention_input.values)


@dataclass(frozen=True)
class MutualAttention:
    """Attention weights over the distinct words of two documents."""

    words_a: np.ndarray
    weights_a: np.ndarray
    words_b: np.ndarray
    weights_b: np.ndarray

    def to_record(self, doc_a, doc_b, vocab=None):
        """JSON-ready record; tokens are vocabulary strings when vocab is given."""
        def entries(words, weights):
            return [
                {'token': vocab[w] if vocab is not None else str(int(w)), 'weight': float(weight)}
                for w, weight in zip(words, weights)
            ]
        return {
            'doc_a': doc_a,
            'doc_b': doc_b,
            'words_a': entries(self.words_a, self.weights_a),
            'words_b': entries(self.words_b, self.weights_b),
        }


def build_query(bow, W, strategy='mean'):
    """
    Query vector summarizing a document.

    'mean' is the count-weighted mean of its word rows; 'max' the
    element-wise maximum over them.
    """
    words, counts = as_bow(bow, W.shape[0])
    if words.size == 0:
        raise EmptyInputError('cannot build a query from an empty document')
    if strategy == 'mean':
        return doc_context_vector((words, counts), W)
    if strategy == 'max':
        return W[words].max(axis=0)
    raise InvalidParameterError(
        f'unknown query strategy {strategy!r}; expected one of {QUERY_STRATEGIES}')


def _attend(bow, query, W):
    """
    Attend over one key row per word occurrence, then merge repeats.

    A word seen c times holds c keys; its weight is the sum of theirs.
    """
    words, counts = as_bow(bow, W.shape[0])
    if words.size == 0:
        raise EmptyInputError('cannot attend over an empty document')
    repeats = np.rint(counts).astype(np.int64)
    if not np.array_equal(repeats, counts):
        raise InvalidParameterError('attention needs whole word counts')
    occurrences = np.repeat(words, repeats)
    result = scaled_dot_product_attention(
        AttentionInput(query=query, keys=W[occurrences], values=W[occurrences]))
    owner = np.repeat(np.arange(words.size), repeats)
    return words, np.bincount(owner, weights=result.weights, minlength=words.size)


def mutual_attention_weights(bow_a, bow_b, W, strategy='mean'):
    """
    Weights over each document's words, queried by the other document.

    Args:
        bow_a, bow_b: Word counts (see gvnr_text.doc_context_vector).
        W (numpy.ndarray): m x d word embeddings.
        strategy (str): Query construction, 'mean' or 'max'.

    Returns:
        MutualAttention: Distinct word indices and their weights for both documents.

    Raises:
        EmptyInputError: If either document has no words.
    """
    query_for_a = build_query(bow_b, W, strategy)
    query_for_b = build_query(bow_a, W, strategy)
    words_a, weights_a = _attend(bow_a, query_for_a, W)
    words_b, weights_b = _attend(bow_b, query_for_b, W)
    return MutualAttention(words_a=words_a, weights_a=weights_a, words_b=words_b, weights_b=weights_b)
