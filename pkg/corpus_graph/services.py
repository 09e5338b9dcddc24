"""
Citation-network datasets with bag-of-words node attributes.

Loads the Cora/CiteSeer ``.content`` / ``.cites`` plain-text layout into an
immutable Dataset, re-emits it, and extracts induced subgraphs for the
unseen-document protocol.
"""

import io
import logging
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from utils.errors import DatasetFormatError, EmptyInputError, InvalidParameterError
from utils.helpers import sha256_files


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadReport:
    """Counts gathered while loading (or subsetting) a dataset."""

    nodes: int
    vocab_size: int
    num_classes: int
    edges: int
    citation_lines: int = 0
    dropped_unknown: int = 0
    ignored_self: int = 0
    ignored_duplicate: int = 0
    zero_degree_nodes: int = 0
    empty_documents: int = 0

    def to_dict(self):
        return {
            'nodes': self.nodes,
            'vocab_size': self.vocab_size,
            'num_classes': self.num_classes,
            'edges_kept': self.edges,
            'citation_lines': self.citation_lines,
            'edges_dropped_unknown_id': self.dropped_unknown,
            'self_citations_ignored': self.ignored_self,
            'duplicate_citations_ignored': self.ignored_duplicate,
            'zero_degree_nodes': self.zero_degree_nodes,
            'empty_documents': self.empty_documents,
        }


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Document graph with text attributes and class labels.

    Attributes:
        node_ids (tuple[str]): External identifiers, index order.
        adjacency (tuple[tuple[int]]): Sorted undirected neighbor lists.
        bows (scipy.sparse.csr_matrix): n x m word counts (read-only).
        labels (numpy.ndarray): Class index per node, in [0, num_classes).
        vocab_size (int): m.
        num_classes (int): C.
        class_names (tuple[str]): Class label strings by index.
        report (LoadReport): Load statistics.
        source_hash (str or None): sha256 of the source files, when loaded from disk.
    """

    node_ids: tuple
    adjacency: tuple
    bows: sp.csr_matrix
    labels: np.ndarray
    vocab_size: int
    num_classes: int
    class_names: tuple = ()
    report: LoadReport = None
    source_hash: str = None
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.labels.setflags(write=False)
        self.bows.data.setflags(write=False)
        if self._index is None:
            object.__setattr__(self, '_index', {node_id: i for i, node_id in enumerate(self.node_ids)})

    @property
    def num_nodes(self):
        return len(self.node_ids)

    @property
    def num_edges(self):
        return sum(len(neighbors) for neighbors in self.adjacency) // 2

    def index_of(self, node_id):
        """Return the dense index of an external node id (KeyError if unknown)."""
        return self._index[node_id]

    def degree(self, i):
        return len(self.adjacency[i])

    def edges(self):
        """
        Return every undirected edge once.

        Returns:
            numpy.ndarray: (E, 2) int array with i < j, sorted.
        """
        pairs = [(i, j) for i, neighbors in enumerate(self.adjacency) for j in neighbors if i < j]
        return np.array(pairs, dtype=np.int64).reshape(-1, 2)

    def bow(self, i):
        """Return (word indices, counts) for node i."""
        start, stop = self.bows.indptr[i], self.bows.indptr[i + 1]
        return self.bows.indices[start:stop], self.bows.data[start:stop]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.node_ids == other.node_ids
            and self.adjacency == other.adjacency
            and self.vocab_size == other.vocab_size
            and self.num_classes == other.num_classes
            and np.array_equal(self.labels, other.labels)
            and self.bows.shape == other.bows.shape
            and (self.bows != other.bows).nnz == 0
        )

    __hash__ = None


def _lines(text):
    if isinstance(text, str):
        return io.StringIO(text)
    return text


def _structure_report(node_ids, adjacency, bows, vocab_size, num_classes, **counts):
    doc_lengths = np.asarray(bows.sum(axis=1)).ravel()
    return LoadReport(
        nodes=len(node_ids),
        vocab_size=vocab_size,
        num_classes=num_classes,
        edges=sum(len(neighbors) for neighbors in adjacency) // 2,
        zero_degree_nodes=sum(1 for neighbors in adjacency if not neighbors),
        empty_documents=int(np.count_nonzero(doc_lengths == 0)),
        **counts
    )


def load_cora_format(content_text, cites_text, binary=True, source=None):
    """
    Parse a dataset in the Cora/CiteSeer plain-text layout.

    Content lines are ``<id> <m word flags> <class>``, cites lines are
    ``<cited_id> <citing_id>``; tabs and spaces are both accepted. Node
    indices follow first appearance in the content file and citations are
    symmetrized. Citations naming an unknown id are skipped and counted.

    Args:
        content_text (str or text stream): The ``.content`` data.
        cites_text (str or text stream): The ``.cites`` data.
        binary (bool): Reject word flags other than 0/1 (Cora layout). When
            False, any nonnegative integer count is accepted.
        source (str): Optional name used in error messages.

    Returns:
        Dataset: The loaded dataset, with its LoadReport.

    Raises:
        DatasetFormatError: On a malformed line (wrong field count, bad flag).
        EmptyInputError: If the content file holds no node.
    """
    node_ids = []
    index = {}
    class_index = {}
    labels = []
    rows, cols, counts = [], [], []
    vocab_size = None

    for line_number, line in enumerate(_lines(content_text), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) < 3:
            raise DatasetFormatError(
                f'expected id, word flags and class, got {len(fields)} fields',
                line_number, source)
        if vocab_size is None:
            vocab_size = len(fields) - 2
        elif len(fields) - 2 != vocab_size:
            raise DatasetFormatError(
                f'expected {vocab_size} word flags, got {len(fields) - 2}',
                line_number, source)

        node_id = fields[0]
        if node_id in index:
            raise DatasetFormatError(f'duplicate node id {node_id!r}', line_number, source)

        try:
            flags = np.array(fields[1:-1], dtype=np.int64)
        except ValueError:
            raise DatasetFormatError('word flags must be integers', line_number, source) from None
        if np.any(flags < 0) or (binary and np.any(flags > 1)):
            bad = flags[(flags < 0) | (flags > 1)] if binary else flags[flags < 0]
            raise DatasetFormatError(f'invalid word flag {int(bad[0])}', line_number, source)

        index[node_id] = len(node_ids)
        node_ids.append(node_id)
        class_name = fields[-1]
        labels.append(class_index.setdefault(class_name, len(class_index)))
        words = np.flatnonzero(flags)
        rows.extend([index[node_id]] * len(words))
        cols.extend(words.tolist())
        counts.extend(flags[words].tolist())

    if not node_ids:
        raise EmptyInputError('content file contains no node')

    n = len(node_ids)
    bows = sp.csr_matrix(
        (np.array(counts, dtype=np.int64), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(n, vocab_size))
    bows.sort_indices()

    neighbors = [set() for _ in range(n)]
    citation_lines = dropped = self_loops = duplicates = 0
    for line_number, line in enumerate(_lines(cites_text), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise DatasetFormatError(
                f'expected "<cited_id> <citing_id>", got {len(fields)} fields',
                line_number, source)
        citation_lines += 1
        cited, citing = fields
        if cited not in index or citing not in index:
            dropped += 1
            continue
        i, j = index[cited], index[citing]
        if i == j:
            self_loops += 1
            continue
        if j in neighbors[i]:
            duplicates += 1
            continue
        neighbors[i].add(j)
        neighbors[j].add(i)

    adjacency = tuple(tuple(sorted(s)) for s in neighbors)
    num_classes = len(class_index)
    report = _structure_report(
        node_ids, adjacency, bows, vocab_size, num_classes,
        citation_lines=citation_lines,
        dropped_unknown=dropped,
        ignored_self=self_loops,
        ignored_duplicate=duplicates,
    )
    if dropped:
        logger.warning('%d citation lines reference unknown ids and were dropped', dropped)
    logger.info(
        'Loaded %d nodes, %d edges, vocabulary %d, %d classes',
        report.nodes, report.edges, vocab_size, num_classes)

    return Dataset(
        node_ids=tuple(node_ids),
        adjacency=adjacency,
        bows=bows,
        labels=np.array(labels, dtype=np.int64),
        vocab_size=vocab_size,
        num_classes=num_classes,
        class_names=tuple(class_index),
        report=report,
        _index=index,
    )


def load_dataset(content_path, cites_path, binary=True):
    """
    Load a dataset from ``.content`` and ``.cites`` files.

    Args:
        content_path (str): Path of the content file.
        cites_path (str): Path of the cites file.
        binary (bool): See load_cora_format.

    Returns:
        Dataset: The dataset, with source_hash set from both files.
    """
    with open(content_path, encoding='utf-8') as content, open(cites_path, encoding='utf-8') as cites:
        dataset = load_cora_format(content, cites, binary=binary, source=str(content_path))
    return replace(dataset, source_hash=sha256_files(content_path, cites_path))


def load_report(dataset):
    """Return the load report of a dataset as a JSON-ready dict."""
    return dataset.report.to_dict()


def dump_cora_format(dataset):
    """
    Re-emit a dataset in the content/cites layout.

    Returns:
        tuple[str, str]: (content text, cites text). Each undirected edge is
        written once, lower index first.
    """
    dense = dataset.bows.toarray()
    content = io.StringIO()
    for i, node_id in enumerate(dataset.node_ids):
        flags = '\t'.join(str(int(v)) for v in dense[i])
        content.write(f'{node_id}\t{flags}\t{dataset.class_names[dataset.labels[i]]}\n')

    cites = io.StringIO()
    for i, j in dataset.edges():
        cites.write(f'{dataset.node_ids[i]}\t{dataset.node_ids[j]}\n')
    return content.getvalue(), cites.getvalue()


def induced_subgraph(dataset, keep):
    """
    Restrict a dataset to a node subset.

    Kept nodes are renumbered in ascending order of their old index; an edge
    survives only when both endpoints are kept. Vocabulary and class
    indexing are unchanged.

    Args:
        dataset (Dataset): The full dataset.
        keep (iterable[int]): Node indices to keep.

    Returns:
        tuple[Dataset, dict]: The subgraph and the old -> new index map.

    Raises:
        EmptyInputError: If keep is empty.
        InvalidParameterError: If an index is out of range.
    """
    kept = np.unique(np.asarray(list(keep), dtype=np.int64))
    if kept.size == 0:
        raise EmptyInputError('cannot build a subgraph from an empty node set')
    if kept[0] < 0 or kept[-1] >= dataset.num_nodes:
        raise InvalidParameterError(f'node index out of range [0, {dataset.num_nodes})')

    mapping = {int(old): new for new, old in enumerate(kept)}
    adjacency = tuple(
        tuple(mapping[j] for j in dataset.adjacency[old] if j in mapping)
        for old in kept
    )
    node_ids = tuple(dataset.node_ids[old] for old in kept)
    bows = dataset.bows[kept].tocsr()
    labels = dataset.labels[kept].copy()
    report = _structure_report(node_ids, adjacency, bows, dataset.vocab_size, dataset.num_classes)

    subgraph = Dataset(
        node_ids=node_ids,
        adjacency=adjacency,
        bows=bows,
        labels=labels,
        vocab_size=dataset.vocab_size,
        num_classes=dataset.num_classes,
        class_names=dataset.class_names,
        report=report,
        source_hash=None,
    )
    return subgraph, mapping


def with_adjacency(dataset, adjacency):
    """Return a copy of the dataset over the same nodes with other edges."""
    adjacency = tuple(tuple(sorted(neighbors)) for neighbors in adjacency)
    report = _structure_report(
        dataset.node_ids, adjacency, dataset.bows, dataset.vocab_size, dataset.num_classes)
    return replace(
        dataset, adjacency=adjacency, report=report, source_hash=None,
        bows=dataset.bows.copy(), labels=dataset.labels.copy())
