"""
GVNR-t: GVNR whose context vectors come from the documents' words.

The context vector of node j is v_j = doc_j W / |doc_j|_1, the count-weighted
mean of its word embeddings, so any document can be embedded from its text
alone. Documents without words share one learned fallback vector during
training.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from gvnr_core.sampling import selected_coefficients
from gvnr_core.training import TrainingHistory, run_training
from utils.errors import EmptyInputError, InferenceError, InvalidParameterError
from utils.helpers import STREAM_INIT, make_rng


logger = logging.getLogger(__name__)

TEXT_MODES = ('text_only', 'full')


@dataclass(frozen=True, eq=False)
class GvnrTextModel:
    """
    Fitted GVNR-t parameters.

    Attributes:
        U (numpy.ndarray): n x d center vectors.
        W (numpy.ndarray): m x d word embeddings.
        b_u (numpy.ndarray): n center biases.
        b_v (numpy.ndarray): n context biases.
        fallback (numpy.ndarray): d-vector standing in for empty documents.
        docs (scipy.sparse.csr_matrix): n x m training word counts.
        history (TrainingHistory): Epoch losses, when trained here.
    """

    U: np.ndarray
    W: np.ndarray
    b_u: np.ndarray
    b_v: np.ndarray
    fallback: np.ndarray
    docs: sp.csr_matrix
    history: TrainingHistory = None

    def __post_init__(self):
        n, d = self.U.shape
        if self.W.shape[1] != d or self.fallback.shape != (d,):
            raise InvalidParameterError('inconsistent embedding dimensions')
        if self.b_u.shape != (n,) or self.b_v.shape != (n,) or self.docs.shape != (n, self.W.shape[0]):
            raise InvalidParameterError('inconsistent parameter shapes')
        for array in (self.U, self.W, self.b_u, self.b_v, self.fallback):
            array.setflags(write=False)

    @property
    def num_nodes(self):
        return self.U.shape[0]

    @property
    def vocab_size(self):
        return self.W.shape[0]

    @property
    def dim(self):
        return self.U.shape[1]

    def params(self):
        """Writable copies of the trainable parameters, keyed by name."""
        return {
            'U': self.U.copy(), 'W': self.W.copy(), 'b_u': self.b_u.copy(),
            'b_v': self.b_v.copy(), 'fallback': self.fallback.copy(),
        }


def bow_matrix(bows, vocab_size):
    """Stack per-document bags of words into an n x m csr count matrix."""
    rows, cols, counts = [], [], []
    for i, bow in enumerate(bows):
        words, values = as_bow(bow, vocab_size)
        rows.append(np.full(words.size, i))
        cols.append(words)
        counts.append(values)
    if not rows:
        return sp.csr_matrix((0, vocab_size))
    return sp.csr_matrix(
        (np.concatenate(counts), (np.concatenate(rows), np.concatenate(cols))),
        shape=(len(rows), vocab_size))


def normalized_docs(docs):
    """
    Divide every row of a count matrix by its L1 norm.

    Returns:
        tuple[scipy.sparse.csr_matrix, numpy.ndarray]: Row-normalized float
        matrix (empty rows stay zero) and the boolean empty-row mask.
    """
    docs = sp.csr_matrix(docs, dtype=np.float64, copy=True)
    docs.sum_duplicates()
    docs.eliminate_zeros()
    docs.sort_indices()
    lengths = np.diff(docs.indptr)
    totals = np.add.reduceat(docs.data, docs.indptr[:-1][lengths > 0]) if docs.nnz else np.zeros(0)
    row_totals = np.zeros(docs.shape[0])
    row_totals[lengths > 0] = totals
    docs.data /= np.repeat(row_totals, lengths)
    return docs, row_totals == 0


def as_bow(bow, vocab_size):
    """
    Canonical (sorted distinct word indices, positive counts) of a document.

    Raises:
        InferenceError: For an index outside [0, vocab_size).
    """
    if sp.issparse(bow):
        row = sp.csr_matrix(bow)
        if row.shape[0] != 1:
            raise InvalidParameterError('expected a single bag-of-words row')
        indices, counts = row.indices, row.data
    elif isinstance(bow, dict):
        indices, counts = list(bow.keys()), list(bow.values())
    else:
        indices, counts = bow
    indices = np.asarray(indices, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.float64)
    if indices.size and (indices.min() < 0 or indices.max() >= vocab_size):
        raise InferenceError(f'word index out of vocabulary range [0, {vocab_size})')
    if np.any(counts < 0):
        raise InvalidParameterError('word counts must be nonnegative')
    words, inverse = np.unique(indices, return_inverse=True)
    summed = np.zeros(words.size)
    np.add.at(summed, inverse, counts)
    keep = summed > 0
    return words[keep], summed[keep]


def doc_context_vector(bow, W):
    """
    Count-weighted mean of the word rows of W.

    Args:
        bow: Word counts as (indices, counts), a {word: count} dict or a
            1 x m sparse row.
        W (numpy.ndarray): m x d word embeddings.

    Returns:
        numpy.ndarray: The d-dimensional context vector.

    Raises:
        EmptyInputError: If the document has no positive count.
    """
    normalized, empty = normalized_docs(bow_matrix([bow], W.shape[0]))
    if empty[0]:
        raise EmptyInputError('document has no words')
    return np.asarray(normalized @ W)[0]


def context_vectors(model, nodes=None):
    """v_j for training nodes (all by default), fallback for empty documents."""
    docs = model.docs if nodes is None else model.docs[nodes]
    normalized, empty = normalized_docs(docs)
    vectors = np.asarray(normalized @ model.W)
    vectors[empty] = model.fallback
    return vectors


def initial_params(n, vocab_size, cfg):
    """Uniform [-0.5/d, 0.5/d] for U, W and the fallback vector; zero biases."""
    rng = make_rng(cfg.seed, STREAM_INIT)
    bound = 0.5 / cfg.dim
    return {
        'U': rng.uniform(-bound, bound, size=(n, cfg.dim)),
        'W': rng.uniform(-bound, bound, size=(vocab_size, cfg.dim)),
        'b_u': np.zeros(n),
        'b_v': np.zeros(n),
        'fallback': rng.uniform(-bound, bound, size=cfg.dim),
    }


def make_gradient_fn(docs):
    """
    Build the loss/gradient function of the text objective for fixed documents.

    The gradient of a context vector v_j is spread over j's words with
    weights doc_jw / |doc_j|_1; for empty documents it goes to the fallback.
    """
    normalized, empty = normalized_docs(docs)

    def loss_and_gradients(params, rows, cols, targets):
        U, W = params['U'], params['W']
        unique_cols, inverse = np.unique(cols, return_inverse=True)
        doc_rows = normalized[unique_cols]
        unique_empty = empty[unique_cols]
        context = np.asarray(doc_rows @ W)
        context[unique_empty] = params['fallback']

        u, v = U[rows], context[inverse]
        residuals = np.einsum('ij,ij->i', u, v) + params['b_u'][rows] + params['b_v'][cols] - targets
        scaled = 2.0 * residuals

        grad_U = np.zeros_like(U)
        np.add.at(grad_U, rows, scaled[:, None] * v)
        grad_context = np.zeros_like(context)
        np.add.at(grad_context, inverse, scaled[:, None] * u)
        grads = {
            'U': grad_U,
            'W': np.asarray(doc_rows.T @ grad_context),
            'b_u': np.bincount(rows, weights=scaled, minlength=U.shape[0]),
            'b_v': np.bincount(cols, weights=scaled, minlength=U.shape[0]),
            'fallback': grad_context[unique_empty].sum(axis=0),
        }
        return float(residuals @ residuals), grads

    return loss_and_gradients


def _model_params(model):
    return {'U': model.U, 'W': model.W, 'b_u': model.b_u, 'b_v': model.b_v, 'fallback': model.fallback}


def objective_value(model, x, mask, zero_target=0.0):
    """Text-variant reconstruction loss over positives of x plus masked zeros."""
    rows, cols, targets = selected_coefficients(x, mask, zero_target)
    loss, _ = make_gradient_fn(model.docs)(_model_params(model), rows, cols, targets)
    return loss


def objective_gradients(model, x, mask, zero_target=0.0):
    """Exact gradients of the text objective for U, W, b_u, b_v and fallback."""
    rows, cols, targets = selected_coefficients(x, mask, zero_target)
    _, grads = make_gradient_fn(model.docs)(_model_params(model), rows, cols, targets)
    return grads


def train_gvnr_t(x, docs, cfg, initial=None):
    """
    Fit GVNR-t: word and node parameters learned from scratch.

    Args:
        x (CoocMatrix): Filtered counts over the n documents.
        docs (scipy.sparse.csr_matrix): n x m word counts.
        cfg (GvnrConfig): Settings.
        initial (GvnrTextModel): Start from these parameters instead.

    Returns:
        GvnrTextModel: The fitted model.
    """
    docs = sp.csr_matrix(docs)
    if docs.shape[0] != x.n:
        raise InvalidParameterError(f'{docs.shape[0]} documents for {x.n} nodes')
    _, empty = normalized_docs(docs)
    if empty.any():
        logger.warning('%d documents have no words and use the shared fallback vector', int(empty.sum()))

    if initial is not None:
        if initial.num_nodes != x.n or initial.dim != cfg.dim or initial.vocab_size != docs.shape[1]:
            raise InvalidParameterError('cannot resume from a model of another shape')
        params = initial.params()
    else:
        params = initial_params(x.n, docs.shape[1], cfg)

    logger.info(
        'Training GVNR-t: n=%d, m=%d, d=%d, %d positive entries', x.n, docs.shape[1], cfg.dim, x.nnz)
    history = run_training(x, cfg, params, make_gradient_fn(docs))
    return GvnrTextModel(docs=docs, history=history, **params)


def infer_document(model, bow):
    """
    Embed a document from its words alone.

    Args:
        model (GvnrTextModel): Fitted model.
        bow: Word counts (see doc_context_vector).

    Returns:
        numpy.ndarray: A d-vector in the space of the trained context vectors.

    Raises:
        InferenceError: For an empty document or an out-of-vocabulary index.
    """
    try:
        return doc_context_vector(bow, model.W)
    except EmptyInputError as e:
        raise InferenceError('cannot infer an embedding for an empty document') from e


def text_representation(model, i, mode='text_only'):
    """
    Feature vector of training node i.

    Args:
        model (GvnrTextModel): Fitted model.
        i (int): Node index.
        mode (str): 'text_only' (v_i) or 'full' ([u_i; v_i]).

    Returns:
        numpy.ndarray: d or 2d values.
    """
    if not 0 <= i < model.num_nodes:
        raise InferenceError(
            f'node {i} has no trained parameters; embed unseen documents with infer_document')
    return text_representations(model, mode, np.array([i]))[0]


def text_representations(model, mode='text_only', nodes=None):
    """Stack text_representation for several nodes (all by default)."""
    if mode not in TEXT_MODES:
        raise InvalidParameterError(f'unknown text mode {mode!r}; expected one of {TEXT_MODES}')
    context = context_vectors(model, nodes)
    if mode == 'text_only':
        return context
    centers = model.U if nodes is None else model.U[nodes]
    return np.hstack([centers, context])


def score_pairs(model, pairs):
    """u_i . v_j + b_u[i] + b_v[j] for training-node pairs."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    i, j = pairs[:, 0], pairs[:, 1]
    context = context_vectors(model, j)
    return np.einsum('ij,ij->i', model.U[i], context) + model.b_u[i] + model.b_v[j]
