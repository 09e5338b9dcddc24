"""
Truncated random walks and windowed co-occurrence counting.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from utils.errors import EmptyInputError, InvalidParameterError
from utils.helpers import STREAM_WALK, STREAM_WALK_ORDER, make_rng


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkConfig:
    """Random-walk and window settings (seeded)."""

    walks_per_node: int = 80
    walk_length: int = 40
    window: int = 5
    seed: int = 42
    window_decay: bool = False
    threads: int = 1

    def __post_init__(self):
        for name in ('walks_per_node', 'walk_length', 'window', 'threads'):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f'{name} must be positive, got {getattr(self, name)}')
        if self.window >= self.walk_length:
            raise InvalidParameterError(
                f'window ({self.window}) must be smaller than walk_length ({self.walk_length})')
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidParameterError('seed must be an unsigned 64-bit integer')

    def cache_key(self):
        """Fields that determine the co-occurrence matrix."""
        return {
            'walks_per_node': self.walks_per_node,
            'walk_length': self.walk_length,
            'window': self.window,
            'seed': self.seed,
            'window_decay': self.window_decay,
        }


@dataclass(frozen=True, eq=False)
class CoocMatrix:
    """
    Symmetric sparse co-occurrence counts x_ij.

    The diagonal is never stored. Values are reals so weighted windows need
    no other type.
    """

    matrix: sp.csr_matrix

    def __post_init__(self):
        self.matrix.data.setflags(write=False)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def nnz(self):
        return self.matrix.nnz

    @property
    def row_distinct(self):
        """n_i: number of distinct j with x_ij > 0, per row."""
        return np.diff(self.matrix.indptr)

    def total(self):
        return float(self.matrix.data.sum())

    def get(self, i, j):
        return float(self.matrix[i, j])

    def coordinates(self):
        """Return (rows, cols, values) of every stored entry, row-major."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.row_distinct)
        return rows, self.matrix.indices.astype(np.int64), np.asarray(self.matrix.data, dtype=np.float64)

    def equals(self, other):
        """Exact equality of shape, sparsity pattern and values."""
        a, b = self.matrix, other.matrix
        return (
            a.shape == b.shape
            and np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices)
            and np.array_equal(a.data, b.data)
        )


def from_entries(n, rows, cols, values):
    """
    Build a CoocMatrix from one triangle of entries (i != j).

    Both (i, j) and (j, i) are stored; repeated coordinates are summed.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    keep = rows != cols
    rows, cols, values = rows[keep], cols[keep], values[keep]
    matrix = sp.coo_matrix(
        (np.concatenate([values, values]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(n, n),
    ).tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()
    matrix.eliminate_zeros()
    return CoocMatrix(matrix)


def _walk(adjacency, start, length, rng):
    walk = [start]
    current = start
    for u in rng.random(length - 1):
        neighbors = adjacency[current]
        if not neighbors:
            break
        current = neighbors[int(u * len(neighbors))]
        walk.append(current)
    return walk


def _walk_chunk(adjacency, starts, walk_index, cfg):
    return [
        np.array(_walk(adjacency, start, cfg.walk_length,
                       make_rng(cfg.seed, STREAM_WALK, start, walk_index)), dtype=np.int64)
        for start in starts
    ]


def generate_walks(dataset, cfg):
    """
    Generate walks_per_node truncated random walks from every node.

    Each pass visits the nodes in a freshly shuffled order. Every walk draws
    from its own stream (seed, node, pass), so the result does not depend on
    the thread count. A walk stops early at a node without neighbors.

    Args:
        dataset (Dataset): The graph.
        cfg (WalkConfig): Walk settings.

    Returns:
        list[numpy.ndarray]: Walks of node indices, pass-major.
    """
    adjacency = dataset.adjacency
    n = dataset.num_nodes
    walks = []
    executor = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        for walk_index in range(cfg.walks_per_node):
            order = make_rng(cfg.seed, STREAM_WALK_ORDER, walk_index).permutation(n).tolist()
            if executor is None:
                walks.extend(_walk_chunk(adjacency, order, walk_index, cfg))
                continue
            chunks = [order[i::cfg.threads] for i in range(cfg.threads)]
            results = list(executor.map(lambda starts: _walk_chunk(adjacency, starts, walk_index, cfg), chunks))
            # Interleave back into the shuffled order.
            merged = [None] * n
            for offset, chunk_walks in enumerate(results):
                merged[offset::cfg.threads] = chunk_walks
            walks.extend(merged)
    finally:
        if executor is not None:
            executor.shutdown()

    logger.info('Generated %d walks over %d nodes', len(walks), n)
    return walks


def _count_pairs(walks, window, decay):
    lengths = np.fromiter((len(walk) for walk in walks), dtype=np.int64, count=len(walks))
    nodes = np.concatenate(walks).astype(np.int64)
    walk_id = np.repeat(np.arange(len(walks), dtype=np.int64), lengths)
    rows, cols, values = [], [], []
    for offset in range(1, window + 1):
        if offset >= nodes.size:
            break
        a, b = nodes[:-offset], nodes[offset:]
        same = (walk_id[:-offset] == walk_id[offset:]) & (a != b)
        rows.append(a[same])
        cols.append(b[same])
        values.append(np.full(int(same.sum()), 1.0 / offset if decay else 1.0))
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(values)


def count_cooccurrences(walks, window, num_nodes=None, decay=False, threads=1):
    """
    Count windowed co-occurrences of nodes along walks.

    For every position p and offset 1..window inside the same walk, both
    (walk[p], walk[p+offset]) and the reverse pair gain 1 (or 1/offset
    with decay). Pairs of a node with itself are skipped.

    Args:
        walks (list[sequence[int]]): Node-index walks.
        window (int): Maximum offset.
        num_nodes (int): Matrix size; defaults to the largest index + 1.
        decay (bool): Weight pairs by 1/offset.
        threads (int): Walk shards counted concurrently, merged in shard order.

    Returns:
        CoocMatrix: The symmetric counts.

    Raises:
        EmptyInputError: If there is no walk.
    """
    walks = [np.asarray(walk, dtype=np.int64) for walk in walks if len(walk)]
    if not walks:
        raise EmptyInputError('cannot count co-occurrences over an empty walk set')
    if window < 1:
        raise InvalidParameterError(f'window must be positive, got {window}')
    if num_nodes is None:
        num_nodes = int(max(walk.max() for walk in walks)) + 1

    if threads > 1 and len(walks) > threads:
        shards = np.array_split(np.arange(len(walks)), threads)
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(
                lambda shard: _count_pairs([walks[i] for i in shard], window, decay), shards))
        rows = np.concatenate([part[0] for part in parts])
        cols = np.concatenate([part[1] for part in parts])
        values = np.concatenate([part[2] for part in parts])
    else:
        rows, cols, values = _count_pairs(walks, window, decay)

    cooc = from_entries(num_nodes, rows, cols, values)
    logger.info('Counted %d co-occurring pairs (%d stored entries)', rows.size, cooc.nnz)
    return cooc


def filter_min_count(x, x_min):
    """
    Drop entries below a count threshold.

    Args:
        x (CoocMatrix): Counts.
        x_min (float): Entries with x_ij < x_min are removed.

    Returns:
        CoocMatrix: Filtered counts (x itself when nothing can be dropped).
    """
    if x_min < 0:
        raise InvalidParameterError(f'x_min must be nonnegative, got {x_min}')
    if x.nnz == 0 or x.matrix.data.min() >= x_min:
        return x
    matrix = x.matrix.copy()
    matrix.data[matrix.data < x_min] = 0.0
    matrix.eliminate_zeros()
    return CoocMatrix(matrix)


def visit_frequencies(walks, num_nodes):
    """Number of times each node appears across all walks."""
    return np.bincount(np.concatenate(walks).astype(np.int64), minlength=num_nodes)


def power_law_diagnostic(frequencies):
    """
    Summarize how heavy-tailed node visit frequencies are.

    Fits log(frequency) against log(rank) on visited nodes. Informational
    only; nothing asserts on it.

    Returns:
        dict: slope of the rank/frequency fit, max, median, visited nodes.
    """
    visited = np.sort(np.asarray(frequencies)[np.asarray(frequencies) > 0])[::-1]
    if visited.size < 2:
        return {'slope': None, 'max_visits': int(visited.max(initial=0)),
                'median_visits': float(np.median(visited)) if visited.size else 0.0,
                'visited_nodes': int(visited.size)}
    ranks = np.arange(1, visited.size + 1)
    slope = np.polyfit(np.log(ranks), np.log(visited), 1)[0]
    return {
        'slope': float(slope),
        'max_visits': int(visited[0]),
        'median_visits': float(np.median(visited)),
        'visited_nodes': int(visited.size),
    }
