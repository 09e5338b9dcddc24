"""
GVNR: weighted least-squares factorization of log co-occurrence counts.

The loss sums (u_i . v_j + b_u[i] + b_v[j] - log x_ij)^2 over every positive
entry and over a Bernoulli sample of zero entries (target zero_target).
"""

import logging
from dataclasses import dataclass

import numpy as np

from gvnr_core.sampling import selected_coefficients
from gvnr_core.training import TrainingHistory, run_training
from utils.errors import InvalidParameterError
from utils.helpers import STREAM_INIT, make_rng


logger = logging.getLogger(__name__)

REPRESENTATION_MODES = ('u_only', 'sum', 'concat')


@dataclass(frozen=True)
class GvnrConfig:
    """Factorization and optimizer settings."""

    dim: int = 100
    k: int = 1
    epochs: int = 10
    learning_rate: float = 0.05
    x_min: float = 1.0
    seed: int = 42
    representation_mode: str = 'concat'
    optimizer: str = 'adagrad'
    batch_size: int = 1024
    zero_target: float = 0.0
    threads: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParameterError(f'dim must be at least 1, got {self.dim}')
        if self.k < 1:
            raise InvalidParameterError(f'k must be at least 1, got {self.k}')
        if self.epochs < 1 or self.batch_size < 1 or self.threads < 1:
            raise InvalidParameterError('epochs, batch_size and threads must be positive')
        if not self.learning_rate > 0:
            raise InvalidParameterError(f'learning rate must be positive, got {self.learning_rate}')
        if self.x_min < 0:
            raise InvalidParameterError(f'x_min must be nonnegative, got {self.x_min}')
        if self.representation_mode not in REPRESENTATION_MODES:
            raise InvalidParameterError(
                f'unknown representation mode {self.representation_mode!r}; expected one of {REPRESENTATION_MODES}')


@dataclass(frozen=True, eq=False)
class GvnrModel:
    """
    Fitted node embeddings.

    Attributes:
        U (numpy.ndarray): n x d center vectors.
        V (numpy.ndarray): n x d context vectors.
        b_u (numpy.ndarray): n center biases.
        b_v (numpy.ndarray): n context biases.
        history (TrainingHistory): Epoch losses, when trained here.
    """

    U: np.ndarray
    V: np.ndarray
    b_u: np.ndarray
    b_v: np.ndarray
    history: TrainingHistory = None

    def __post_init__(self):
        n, d = self.U.shape
        if self.V.shape != (n, d) or self.b_u.shape != (n,) or self.b_v.shape != (n,):
            raise InvalidParameterError('inconsistent parameter shapes')
        for array in (self.U, self.V, self.b_u, self.b_v):
            array.setflags(write=False)

    @property
    def num_nodes(self):
        return self.U.shape[0]

    @property
    def dim(self):
        return self.U.shape[1]

    def params(self):
        """Writable copies of the parameters, keyed by name."""
        return {'U': self.U.copy(), 'V': self.V.copy(), 'b_u': self.b_u.copy(), 'b_v': self.b_v.copy()}


def initial_params(n, cfg):
    """Uniform [-0.5/d, 0.5/d] vectors and zero biases, seeded."""
    rng = make_rng(cfg.seed, STREAM_INIT)
    bound = 0.5 / cfg.dim
    return {
        'U': rng.uniform(-bound, bound, size=(n, cfg.dim)),
        'V': rng.uniform(-bound, bound, size=(n, cfg.dim)),
        'b_u': np.zeros(n),
        'b_v': np.zeros(n),
    }


def coefficient_loss_and_gradients(params, rows, cols, targets):
    """
    Squared reconstruction error over the given coefficients and its gradients.

    Args:
        params (dict): U, V, b_u, b_v.
        rows, cols (numpy.ndarray): Coefficient coordinates.
        targets (numpy.ndarray): log x_ij, or the zero target.

    Returns:
        tuple[float, dict]: Loss and gradients with the shapes of params.
    """
    U, V = params['U'], params['V']
    u, v = U[rows], V[cols]
    residuals = np.einsum('ij,ij->i', u, v) + params['b_u'][rows] + params['b_v'][cols] - targets
    scaled = 2.0 * residuals

    grad_U = np.zeros_like(U)
    grad_V = np.zeros_like(V)
    np.add.at(grad_U, rows, scaled[:, None] * v)
    np.add.at(grad_V, cols, scaled[:, None] * u)
    grads = {
        'U': grad_U,
        'V': grad_V,
        'b_u': np.bincount(rows, weights=scaled, minlength=U.shape[0]),
        'b_v': np.bincount(cols, weights=scaled, minlength=V.shape[0]),
    }
    return float(residuals @ residuals), grads


def objective_value(model, x, mask, zero_target=0.0):
    """
    Reconstruction loss of a model on the positives of x plus the masked zeros.

    Returns:
        float: The nonnegative sum of squared residuals.
    """
    rows, cols, targets = selected_coefficients(x, mask, zero_target)
    loss, _ = coefficient_loss_and_gradients(
        {'U': model.U, 'V': model.V, 'b_u': model.b_u, 'b_v': model.b_v}, rows, cols, targets)
    return loss


def objective_gradients(model, x, mask, zero_target=0.0):
    """
    Exact gradients of objective_value.

    Returns:
        dict[str, numpy.ndarray]: Gradients for U, V, b_u and b_v.
    """
    rows, cols, targets = selected_coefficients(x, mask, zero_target)
    _, grads = coefficient_loss_and_gradients(
        {'U': model.U, 'V': model.V, 'b_u': model.b_u, 'b_v': model.b_v}, rows, cols, targets)
    return grads


def train_gvnr(x, cfg, initial=None):
    """
    Fit GVNR on co-occurrence counts.

    Entries below cfg.x_min must already be filtered out (see
    walk_cooc.filter_min_count).

    Args:
        x (CoocMatrix): Counts.
        cfg (GvnrConfig): Settings.
        initial (GvnrModel): Start from these parameters instead of the
            seeded initialization.

    Returns:
        GvnrModel: The fitted model with its TrainingHistory.
    """
    if initial is not None:
        if initial.num_nodes != x.n or initial.dim != cfg.dim:
            raise InvalidParameterError(
                f'cannot resume: model is {initial.num_nodes}x{initial.dim}, expected {x.n}x{cfg.dim}')
        params = initial.params()
    else:
        params = initial_params(x.n, cfg)

    logger.info('Training GVNR: n=%d, d=%d, %d positive entries', x.n, cfg.dim, x.nnz)
    history = run_training(x, cfg, params, coefficient_loss_and_gradients)
    return GvnrModel(history=history, **params)


def node_representation(model, i, mode='concat'):
    """
    Feature vector of node i.

    Args:
        model (GvnrModel): Fitted model.
        i (int): Node index.
        mode (str): 'u_only' (u_i), 'sum' (u_i + v_i) or 'concat' ([u_i; v_i]).

    Returns:
        numpy.ndarray: d or 2d values.
    """
    if not 0 <= i < model.num_nodes:
        raise InvalidParameterError(f'node index {i} out of range [0, {model.num_nodes})')
    return node_representations(model, mode, np.array([i]))[0]


def node_representations(model, mode='concat', nodes=None):
    """Stack node_representation for several nodes (all by default)."""
    nodes = slice(None) if nodes is None else nodes
    if mode == 'u_only':
        return model.U[nodes].copy()
    if mode == 'sum':
        return model.U[nodes] + model.V[nodes]
    if mode == 'concat':
        return np.hstack([model.U[nodes], model.V[nodes]])
    raise InvalidParameterError(
        f'unknown representation mode {mode!r}; expected one of {REPRESENTATION_MODES}')


def score_pairs(model, pairs):
    """
    Reconstructed log-count u_i . v_j + b_u[i] + b_v[j] for each pair.

    Args:
        model (GvnrModel): Fitted model.
        pairs (numpy.ndarray): (P, 2) node indices.

    Returns:
        numpy.ndarray: P raw scores.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    i, j = pairs[:, 0], pairs[:, 1]
    return np.einsum('ij,ij->i', model.U[i], model.V[j]) + model.b_u[i] + model.b_v[j]
