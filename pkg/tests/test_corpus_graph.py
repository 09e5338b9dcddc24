import numpy as np
import pytest

from corpus_graph.services import (
    dump_cora_format,
    induced_subgraph,
    load_cora_format,
    load_dataset,
    load_report,
    with_adjacency,
)
from utils.errors import DatasetFormatError, EmptyInputError, InvalidParameterError


PATH_CONTENT = 'a\t1\t0\tX\nb\t0\t1\tX\nc\t1\t1\tY\n'
PATH_CITES = 'a\tb\nb\tc\n'


def assert_symmetric_without_loops(dataset):
    for i, neighbors in enumerate(dataset.adjacency):
        assert i not in neighbors
        assert list(neighbors) == sorted(set(neighbors))
        for j in neighbors:
            assert i in dataset.adjacency[j]


def test_load_tiny(tiny_dataset):
    assert tiny_dataset.num_nodes == 6
    assert tiny_dataset.vocab_size == 6
    assert tiny_dataset.num_classes == 2
    assert tiny_dataset.num_edges == 7
    assert tiny_dataset.class_names == ('ML', 'DB')
    assert list(tiny_dataset.labels) == [0, 0, 0, 1, 1, 1]
    assert_symmetric_without_loops(tiny_dataset)


def test_single_node_without_citations():
    dataset = load_cora_format('only\t1\t0\tX\n', '')
    assert dataset.adjacency == ((),)
    assert dataset.num_classes == 1
    assert dataset.report.zero_degree_nodes == 1


def test_citations_are_symmetrized():
    dataset = load_cora_format(PATH_CONTENT, PATH_CITES)
    assert dataset.adjacency == ((1,), (0, 2), (1,))


def test_unknown_self_and_duplicate_citations_are_counted():
    cites = 'a\tb\nb\ta\na\ta\na\tghost\n'
    dataset = load_cora_format(PATH_CONTENT, cites)
    report = load_report(dataset)
    assert report['edges_kept'] == 1
    assert report['citation_lines'] == 4
    assert report['duplicate_citations_ignored'] == 1
    assert report['self_citations_ignored'] == 1
    assert report['edges_dropped_unknown_id'] == 1
    assert report['zero_degree_nodes'] == 1


def test_malformed_line_reports_its_number():
    content = PATH_CONTENT + 'd\t1\tX\t0\n'
    with pytest.raises(DatasetFormatError) as excinfo:
        load_cora_format(content, '')
    assert excinfo.value.line_number == 4


def test_wrong_column_count_is_rejected():
    with pytest.raises(DatasetFormatError) as excinfo:
        load_cora_format('a\t1\t0\tX\nb\t1\tX\n', '')
    assert excinfo.value.line_number == 2


def test_binary_flags_and_counts():
    content = 'a\t2\t0\tX\n'
    with pytest.raises(DatasetFormatError):
        load_cora_format(content, '', binary=True)
    dataset = load_cora_format(content, '', binary=False)
    words, counts = dataset.bow(0)
    assert list(words) == [0]
    assert list(counts) == [2]


def test_empty_content_file():
    with pytest.raises(EmptyInputError):
        load_cora_format('\n', '')


def test_induced_subgraph_of_all_nodes_is_identity():
    dataset = load_cora_format(PATH_CONTENT, PATH_CITES)
    subgraph, mapping = induced_subgraph(dataset, range(dataset.num_nodes))
    assert mapping == {0: 0, 1: 1, 2: 2}
    assert subgraph == dataset


def test_induced_subgraph_is_idempotent(tiny_dataset):
    once, _ = induced_subgraph(tiny_dataset, [0, 2, 3, 5])
    twice, mapping = induced_subgraph(once, range(once.num_nodes))
    assert mapping == {0: 0, 1: 1, 2: 2, 3: 3}
    assert once.adjacency == ((1,), (0, 2), (1, 3), (2,))
    assert twice.adjacency == once.adjacency
    assert twice.node_ids == once.node_ids == ('p1', 'p3', 'p4', 'p6')
    assert (twice.bows != once.bows).nnz == 0
    np.testing.assert_array_equal(twice.labels, once.labels)


def test_induced_subgraph_drops_edges_leaving_the_subset():
    dataset = load_cora_format(PATH_CONTENT, PATH_CITES)
    subgraph, mapping = induced_subgraph(dataset, {0, 2})
    assert mapping == {0: 0, 2: 1}
    assert subgraph.adjacency == ((), ())
    assert subgraph.node_ids == ('a', 'c')
    assert list(subgraph.labels) == [0, 1]
    assert subgraph.vocab_size == dataset.vocab_size
    assert subgraph.source_hash is None


def test_induced_subgraph_keeps_only_inner_edges(planted_dataset):
    rng = np.random.default_rng(3)
    keep = rng.permutation(planted_dataset.num_nodes)[:100]
    subgraph, mapping = induced_subgraph(planted_dataset, keep)
    assert subgraph.num_nodes == 100
    assert_symmetric_without_loops(subgraph)
    kept = set(int(i) for i in keep)
    expected = sum(1 for i, j in planted_dataset.edges() if i in kept and j in kept)
    assert subgraph.num_edges == expected
    for old, new in mapping.items():
        assert subgraph.node_ids[new] == planted_dataset.node_ids[old]


def test_induced_subgraph_rejects_bad_sets(tiny_dataset):
    with pytest.raises(EmptyInputError):
        induced_subgraph(tiny_dataset, [])
    with pytest.raises(InvalidParameterError):
        induced_subgraph(tiny_dataset, [0, 99])


def test_dump_and_reload(tiny_dataset):
    content, cites = dump_cora_format(tiny_dataset)
    assert load_cora_format(content, cites) == tiny_dataset


def test_with_adjacency_keeps_nodes(tiny_dataset):
    other = with_adjacency(tiny_dataset, [[] for _ in range(tiny_dataset.num_nodes)])
    assert other.num_edges == 0
    assert other.node_ids == tiny_dataset.node_ids
    assert other.report.zero_degree_nodes == tiny_dataset.num_nodes


def test_load_dataset_hashes_both_files(tiny_files, tmp_path):
    content, cites = tiny_files
    first = load_dataset(content, cites)
    assert len(first.source_hash) == 64
    assert load_dataset(content, cites).source_hash == first.source_hash

    other = tmp_path / 'other.cites'
    other.write_text('p1\tp2\n')
    assert load_dataset(content, str(other)).source_hash != first.source_hash


def test_index_of(tiny_dataset):
    assert tiny_dataset.index_of('p4') == 3
    with pytest.raises(KeyError):
        tiny_dataset.index_of('nope')
