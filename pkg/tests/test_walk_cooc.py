import numpy as np
import pytest

from corpus_graph.services import load_cora_format
from walk_cooc.services import (
    WalkConfig,
    count_cooccurrences,
    filter_min_count,
    from_entries,
    generate_walks,
    power_law_diagnostic,
    visit_frequencies,
)
from utils.errors import EmptyInputError, InvalidParameterError


def test_isolated_node_walks_stay_put():
    dataset = load_cora_format('a\t1\tX\n', '')
    walks = generate_walks(dataset, WalkConfig(walks_per_node=2, walk_length=5, window=1))
    assert [w.tolist() for w in walks] == [[0], [0]]


def test_two_node_walks_alternate():
    dataset = load_cora_format('a\t1\tX\nb\t1\tX\n', 'a\tb\n')
    walks = generate_walks(dataset, WalkConfig(walks_per_node=3, walk_length=4, window=1))
    assert len(walks) == 6
    for walk in walks:
        assert len(walk) == 4
        assert all(walk[p] != walk[p + 1] for p in range(3))


def test_walks_are_deterministic_and_thread_independent(tiny_dataset):
    cfg = WalkConfig(walks_per_node=4, walk_length=6, window=2, seed=7)
    first = generate_walks(tiny_dataset, cfg)
    again = generate_walks(tiny_dataset, cfg)
    threaded = generate_walks(tiny_dataset, WalkConfig(walks_per_node=4, walk_length=6, window=2, seed=7, threads=3))
    assert [w.tolist() for w in first] == [w.tolist() for w in again]
    assert [w.tolist() for w in first] == [w.tolist() for w in threaded]


def test_walks_follow_edges(tiny_dataset):
    for walk in generate_walks(tiny_dataset, WalkConfig(walks_per_node=2, walk_length=8, window=2)):
        for a, b in zip(walk[:-1], walk[1:]):
            assert b in tiny_dataset.adjacency[a]


def test_walk_config_validation():
    with pytest.raises(InvalidParameterError):
        WalkConfig(walks_per_node=0)
    with pytest.raises(InvalidParameterError):
        WalkConfig(walk_length=5, window=5)


def test_count_path_walk():
    x = count_cooccurrences([[0, 1, 2]], window=1)
    assert x.get(0, 1) == x.get(1, 0) == 1
    assert x.get(1, 2) == x.get(2, 1) == 1
    assert x.get(0, 2) == 0


def test_count_skips_self_pairs():
    x = count_cooccurrences([[0, 1, 0]], window=2)
    assert x.get(0, 1) == x.get(1, 0) == 2
    assert x.get(0, 0) == 0


def test_total_count_with_full_window():
    walks = [[0, 1, 2, 3], [4, 5, 6]]
    x = count_cooccurrences(walks, window=3)
    expected = 2 * sum(len(w) * (len(w) - 1) // 2 for w in walks)
    assert x.total() == expected


def test_window_decay():
    x = count_cooccurrences([[0, 1, 2]], window=2, decay=True)
    assert x.get(0, 1) == 1.0
    assert x.get(0, 2) == 0.5


def test_threaded_counting_matches(tiny_dataset):
    walks = generate_walks(tiny_dataset, WalkConfig(walks_per_node=5, walk_length=6, window=2))
    single = count_cooccurrences(walks, 2, num_nodes=6)
    threaded = count_cooccurrences(walks, 2, num_nodes=6, threads=4)
    assert single.equals(threaded)
    assert (single.matrix != single.matrix.T).nnz == 0


def test_empty_walk_set():
    with pytest.raises(EmptyInputError):
        count_cooccurrences([], window=2)


def test_filter_min_count():
    x = from_entries(4, [0, 0, 0], [1, 2, 3], [1.0, 1.0, 3.0])
    assert list(x.row_distinct) == [3, 1, 1, 1]
    filtered = filter_min_count(x, 2)
    assert filtered.row_distinct[0] == 1
    assert filtered.get(0, 3) == 3.0
    assert filtered.get(0, 1) == 0
    assert filter_min_count(x, 0).equals(x)
    assert filter_min_count(x, 1).equals(x)


def test_visit_frequencies_and_diagnostic():
    walks = [np.array([0, 1, 0]), np.array([2])]
    frequencies = visit_frequencies(walks, 4)
    assert list(frequencies) == [2, 1, 1, 0]
    diagnostic = power_law_diagnostic(frequencies)
    assert diagnostic['visited_nodes'] == 3
    assert diagnostic['max_visits'] == 2
    assert diagnostic['slope'] < 0
