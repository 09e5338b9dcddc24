import numpy as np
import pytest
import scipy.sparse as sp

from gvnr_core.sampling import sample_zero_coefficients, selected_coefficients
from gvnr_core.services import GvnrConfig
from gvnr_text.services import (
    GvnrTextModel,
    bow_matrix,
    context_vectors,
    doc_context_vector,
    infer_document,
    make_gradient_fn,
    normalized_docs,
    objective_gradients,
    text_representation,
    text_representations,
    train_gvnr_t,
)
from utils.errors import EmptyInputError, InferenceError, InvalidParameterError
from walk_cooc.services import WalkConfig, count_cooccurrences, from_entries, generate_walks

from tests.test_gvnr_core import numeric_gradients


def small_model(tiny_dataset, **overrides):
    walks = generate_walks(tiny_dataset, WalkConfig(walks_per_node=5, walk_length=8, window=2))
    x = count_cooccurrences(walks, 2, num_nodes=tiny_dataset.num_nodes)
    cfg = GvnrConfig(**{'dim': 4, 'epochs': 5, 'batch_size': 16, **overrides})
    return train_gvnr_t(x, tiny_dataset.bows, cfg)


class TestContextVector:

    def setup_method(self):
        self.W = np.random.default_rng(0).normal(size=(5, 3))

    def test_one_hot_is_the_word_row(self):
        assert np.array_equal(doc_context_vector(([2], [1]), self.W), self.W[2])

    def test_scale_invariance(self):
        bow = ([0, 3], [1, 2])
        doubled = ([0, 3], [2, 4])
        np.testing.assert_allclose(doc_context_vector(bow, self.W), doc_context_vector(doubled, self.W))

    def test_weighted_mean(self):
        W = np.array([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(doc_context_vector({0: 1, 1: 3}, W), [0.25, 0.75])

    def test_vocabulary_permutation(self):
        permutation = np.array([3, 0, 4, 1, 2])
        W_permuted = np.empty_like(self.W)
        W_permuted[permutation] = self.W
        bow = ([0, 2, 4], [1, 2, 1])
        permuted_bow = (permutation[[0, 2, 4]], [1, 2, 1])
        np.testing.assert_allclose(
            doc_context_vector(bow, self.W), doc_context_vector(permuted_bow, W_permuted))

    def test_repeated_indices_are_summed(self):
        np.testing.assert_allclose(
            doc_context_vector(([1, 1, 2], [1, 1, 2]), self.W),
            doc_context_vector(([1, 2], [2, 2]), self.W))

    def test_sparse_row(self):
        row = sp.csr_matrix(([1.0, 1.0], ([0, 0], [1, 4])), shape=(1, 5))
        np.testing.assert_allclose(doc_context_vector(row, self.W), (self.W[1] + self.W[4]) / 2)

    def test_empty_document(self):
        with pytest.raises(EmptyInputError):
            doc_context_vector(([], []), self.W)
        with pytest.raises(EmptyInputError):
            doc_context_vector(([1], [0]), self.W)

    def test_out_of_vocabulary(self):
        with pytest.raises(InferenceError):
            doc_context_vector(([7], [1]), self.W)


def test_normalized_docs_rows_sum_to_one():
    docs = sp.csr_matrix(np.array([[1, 3, 0], [0, 0, 0], [2, 0, 2]]))
    normalized, empty = normalized_docs(docs)
    np.testing.assert_allclose(np.asarray(normalized.sum(axis=1)).ravel(), [1.0, 0.0, 1.0])
    assert empty.tolist() == [False, True, False]


def test_bow_matrix():
    matrix = bow_matrix([([0, 2], [1, 1]), {1: 3}], 3)
    assert matrix.shape == (2, 3)
    assert matrix.toarray().tolist() == [[1.0, 0.0, 1.0], [0.0, 3.0, 0.0]]


@pytest.mark.parametrize('seed', range(20))
def test_gradients_match_finite_differences(seed):
    rng = np.random.default_rng(100 + seed)
    n, m, d = 3, 4, int(rng.integers(1, 4))
    counts = rng.integers(0, 3, size=(n, m))
    counts[int(rng.integers(0, n))] = 0 if seed % 2 else counts[0]
    docs = sp.csr_matrix(counts)
    x = from_entries(n, [0, 1, 0], [1, 2, 2], rng.integers(1, 10, size=3).astype(float))
    mask = sample_zero_coefficients(x, 1, rng)
    params = {
        'U': rng.normal(size=(n, d)),
        'W': rng.normal(size=(m, d)),
        'b_u': rng.normal(size=n),
        'b_v': rng.normal(size=n),
        'fallback': rng.normal(size=d),
    }
    model = GvnrTextModel(docs=docs, **{name: value.copy() for name, value in params.items()})
    analytic = objective_gradients(model, x, mask)

    rows, cols, targets = selected_coefficients(x, mask)
    loss_fn = make_gradient_fn(docs)
    numeric = numeric_gradients(lambda p: loss_fn(p, rows, cols, targets)[0], params)
    for name in params:
        np.testing.assert_allclose(analytic[name], numeric[name], rtol=1e-4, atol=1e-6)


def test_inference_matches_training_vectors(tiny_dataset):
    model = small_model(tiny_dataset)
    for i in range(tiny_dataset.num_nodes):
        inferred = infer_document(model, tiny_dataset.bow(i))
        assert np.array_equal(inferred, text_representation(model, i, 'text_only'))
        assert np.array_equal(inferred, context_vectors(model)[i])


def test_one_hot_inference_is_word_row(tiny_dataset):
    model = small_model(tiny_dataset)
    assert np.array_equal(infer_document(model, ([3], [1])), model.W[3])


def test_empty_document_cannot_be_inferred(tiny_dataset):
    model = small_model(tiny_dataset)
    with pytest.raises(InferenceError):
        infer_document(model, ([], []))


def test_text_representation_modes(tiny_dataset):
    model = small_model(tiny_dataset)
    assert text_representation(model, 0, 'full').shape == (8,)
    assert text_representations(model, 'full').shape == (6, 8)
    np.testing.assert_allclose(text_representation(model, 2, 'text_only'),
                               doc_context_vector(tiny_dataset.bow(2), model.W))
    with pytest.raises(InferenceError):
        text_representation(model, 6)
    with pytest.raises(InvalidParameterError):
        text_representations(model, 'concat')


def test_single_word_corpus(tiny_dataset):
    docs = sp.csr_matrix(np.tile([[1, 0, 0, 0, 0, 0]], (6, 1)))
    walks = generate_walks(tiny_dataset, WalkConfig(walks_per_node=5, walk_length=8, window=2))
    x = count_cooccurrences(walks, 2, num_nodes=6)
    model = train_gvnr_t(x, docs, GvnrConfig(dim=3, epochs=20, batch_size=32))
    vectors = context_vectors(model)
    assert np.array_equal(vectors, np.tile(vectors[0], (6, 1)))
    assert model.history.epoch_losses[-1] < model.history.epoch_losses[0]


def test_empty_documents_use_the_fallback(tiny_dataset):
    docs = tiny_dataset.bows.toarray()
    docs[5] = 0
    walks = generate_walks(tiny_dataset, WalkConfig(walks_per_node=3, walk_length=6, window=2))
    x = count_cooccurrences(walks, 2, num_nodes=6)
    model = train_gvnr_t(x, sp.csr_matrix(docs), GvnrConfig(dim=3, epochs=2))
    assert np.array_equal(context_vectors(model)[5], model.fallback)


def test_same_seed_same_model(tiny_dataset):
    first, second = small_model(tiny_dataset), small_model(tiny_dataset)
    for name in ('U', 'W', 'b_u', 'b_v', 'fallback'):
        assert np.array_equal(getattr(first, name), getattr(second, name))
