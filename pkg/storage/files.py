"""
Plain-text file formats: co-occurrence triples, word2vec text embeddings,
parameter sidecars and JSON manifests, plus the co-occurrence cache layout.
"""

import hashlib
import json
import os

import numpy as np
import scipy.sparse as sp
from gensim.models import KeyedVectors

from utils.errors import DatasetFormatError
from walk_cooc.services import CoocMatrix, from_entries


FLOAT_FORMAT = '%.17g'
PARAMS_HEADER = '# gvnr-params v1'


def _fmt(values):
    return ' '.join(FLOAT_FORMAT % v for v in values)


# ===== CO-OCCURRENCE TRIPLES =====

def write_cooc_triples(x, path):
    """
    Write counts as ``n`` followed by ``i j x_ij`` lines for i < j.
    """
    upper = sp.triu(x.matrix, k=1).tocoo()
    order = np.lexsort((upper.col, upper.row))
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f'{x.n}\n')
        for i, j, value in zip(upper.row[order], upper.col[order], upper.data[order]):
            f.write(f'{i} {j} {FLOAT_FORMAT % value}\n')


def read_cooc_triples(path):
    """Read a triple file back into a symmetric CoocMatrix."""
    with open(path, encoding='utf-8') as f:
        header = f.readline().split()
        if len(header) != 1:
            raise DatasetFormatError('expected the node count n', 1, path)
        n = int(header[0])
        rows, cols, values = [], [], []
        for line_number, line in enumerate(f, start=2):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 3:
                raise DatasetFormatError('expected "i j x_ij"', line_number, path)
            i, j = int(fields[0]), int(fields[1])
            value = float(fields[2])
            if not (0 <= i < j < n) or value <= 0:
                raise DatasetFormatError(f'invalid entry {line.strip()!r}', line_number, path)
            rows.append(i)
            cols.append(j)
            values.append(value)
    return from_entries(n, rows, cols, values)


def cooc_cache_path(cache_dir, dataset_hash, walk_key):
    """Cache file for a (dataset hash, walk settings) pair."""
    key = json.dumps({'dataset': dataset_hash, **walk_key}, sort_keys=True)
    digest = hashlib.sha256(key.encode('utf-8')).hexdigest()[:24]
    return os.path.join(cache_dir, f'cooc-{digest}.txt')


# ===== WORD2VEC TEXT =====

def write_word2vec(path, ids, vectors):
    """Write ``rows dim`` then ``<id> f1 ... fd`` per row, in the given order."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    keyed = KeyedVectors(vector_size=vectors.shape[1], count=0, dtype=np.float64)
    keyed.add_vectors([str(key) for key in ids], vectors)
    keyed.save_word2vec_format(str(path), binary=False)


def write_vector_lines(stream, ids, vectors):
    """Stream ``<id> f1 ... fd`` lines without a header."""
    for key, vector in zip(ids, vectors):
        stream.write(f'{key} {_fmt(vector)}\n')


def read_word2vec(path):
    """
    Read a word2vec text file.

    Returns:
        tuple[list[str], numpy.ndarray]: Row ids and the vectors.
    """
    try:
        keyed = KeyedVectors.load_word2vec_format(str(path), binary=False, datatype=np.float64)
    except (ValueError, EOFError, UnicodeDecodeError) as e:
        raise DatasetFormatError(f'not a word2vec text file: {e}', None, path) from e
    return list(keyed.index_to_key), np.asarray(keyed.vectors, dtype=np.float64)


# ===== PARAMETER SIDECAR =====

def write_params(path, arrays, meta=None, sparse=None):
    """
    Write named dense arrays (and sparse matrices) to a text sidecar.

    Layout: a header line, a ``# meta`` JSON line, then for each dense array
    ``## name rows cols`` followed by its rows, and for each sparse matrix
    ``## sparse name rows cols nnz`` followed by ``i j value`` lines.
    """
    with open(path, 'w', encoding='utf-8') as f:
        f.write(PARAMS_HEADER + '\n')
        f.write('# meta ' + json.dumps(meta or {}, sort_keys=True) + '\n')
        for name, array in arrays.items():
            matrix = np.asarray(array, dtype=np.float64)
            matrix = matrix.reshape(-1, 1) if matrix.ndim == 1 else matrix
            f.write(f'## {name} {matrix.shape[0]} {matrix.shape[1]} {np.asarray(array).ndim}\n')
            for row in matrix:
                f.write(_fmt(row) + '\n')
        for name, matrix in (sparse or {}).items():
            coo = sp.coo_matrix(matrix)
            order = np.lexsort((coo.col, coo.row))
            f.write(f'## sparse {name} {coo.shape[0]} {coo.shape[1]} {coo.nnz}\n')
            for i, j, value in zip(coo.row[order], coo.col[order], coo.data[order]):
                f.write(f'{i} {j} {FLOAT_FORMAT % value}\n')


def read_params(path):
    """
    Read a sidecar written by write_params.

    Returns:
        tuple[dict, dict, dict]: (dense arrays, sparse csr matrices, meta).
    """
    with open(path, encoding='utf-8') as f:
        lines = f.read().splitlines()
    if not lines or lines[0] != PARAMS_HEADER:
        raise DatasetFormatError('not a parameter sidecar', 1, path)
    if not lines[1].startswith('# meta '):
        raise DatasetFormatError('missing meta line', 2, path)
    meta = json.loads(lines[1][len('# meta '):])

    arrays, sparse = {}, {}
    position = 2
    while position < len(lines):
        header = lines[position].split()
        if not header:
            position += 1
            continue
        if header[0] != '##':
            raise DatasetFormatError('expected a section header', position + 1, path)
        if header[1] == 'sparse':
            name, rows, cols, nnz = header[2], int(header[3]), int(header[4]), int(header[5])
            block = lines[position + 1:position + 1 + nnz]
            triples = np.array([line.split() for line in block], dtype=np.float64).reshape(nnz, 3)
            sparse[name] = sp.csr_matrix(
                (triples[:, 2], (triples[:, 0].astype(np.int64), triples[:, 1].astype(np.int64))),
                shape=(rows, cols))
            position += 1 + nnz
        else:
            name, rows, cols, ndim = header[1], int(header[2]), int(header[3]), int(header[4])
            block = lines[position + 1:position + 1 + rows]
            matrix = np.array([line.split() for line in block], dtype=np.float64).reshape(rows, cols)
            arrays[name] = matrix.ravel() if ndim == 1 else matrix
            position += 1 + rows
    return arrays, sparse, meta


# ===== JSON =====

def write_json(path, payload):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=_json_default)
        f.write('\n')


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f'cannot serialize {type(value).__name__}')


def read_vocab(path):
    """One token per line; the line number is the word index."""
    with open(path, encoding='utf-8') as f:
        return [line.rstrip('\n') for line in f]
