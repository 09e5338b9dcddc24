"""
Evaluation protocols: transductive node classification, classification of
unseen documents, and link prediction (random edge hold-out, or hidden
nodes embedded from their text).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from corpus_graph.services import induced_subgraph, with_adjacency
from evaluation.classifier import train_softmax_classifier
from evaluation.metrics import accuracy, roc_auc
from evaluation.reports import EvalReport, SettingResult
from gvnr_core.services import node_representations
from gvnr_core.services import score_pairs as gvnr_score_pairs
from gvnr_text.services import (
    GvnrTextModel,
    context_vectors,
    infer_document,
    text_representations,
)
from gvnr_text.services import score_pairs as text_score_pairs
from pipeline.services import METHOD_NAMES, fit_embeddings, resolve_mode
from utils.errors import EmptyInputError, InferenceError, InvalidParameterError
from utils.helpers import STREAM_NEGATIVES, STREAM_REPEAT, STREAM_SPLIT, derive_seed, make_rng


logger = logging.getLogger(__name__)

CLASSIFY_FRACTIONS = (0.1, 0.2, 0.3, 0.4, 0.5)
UNSEEN_FRACTIONS = (0.3, 0.4, 0.5, 0.6, 0.7)
SCORERS = ('dot_bias', 'cosine')
SPLIT_MODES = ('random', 'temporal')


def _run_repeats(task, count, threads):
    """Run task(r) for r in range(count); results ordered by repeat index."""
    if threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(task, range(count)))
    return [task(r) for r in range(count)]


# ===== SPLITS =====

def stratified_split(labels, train_frac, seed):
    """
    Class-proportional train/test split.

    round(train_frac * N) training items are apportioned to classes by
    largest remainder, so each class is within one item of its exact share.
    Every class gets at least one training item and, when it has two or more
    members, at least one test item.

    Args:
        labels (numpy.ndarray): Class index per item.
        train_frac (float): Fraction in (0, 1).
        seed (int): Split seed.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]: Sorted train and test indices.
    """
    if not 0.0 < train_frac < 1.0:
        raise InvalidParameterError(f'train fraction must lie in (0, 1), got {train_frac}')
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise EmptyInputError('cannot split an empty label set')

    classes, sizes = np.unique(labels, return_counts=True)
    total = int(np.floor(train_frac * labels.size + 0.5))
    quotas = train_frac * sizes
    counts = np.floor(quotas).astype(np.int64)
    remainder = total - int(counts.sum())
    if remainder > 0:
        order = np.argsort(-(quotas - counts), kind='stable')
        counts[order[:remainder]] += 1

    for position, size in enumerate(sizes):
        if counts[position] == 0:
            logger.warning(
                'class %d (%d member%s) gets no training item at fraction %.2f; forcing one into train',
                classes[position], size, '' if size == 1 else 's', train_frac)
            counts[position] = 1
        if size > 1 and counts[position] >= size:
            counts[position] = size - 1

    rng = make_rng(seed, STREAM_SPLIT)
    train, test = [], []
    for position, label in enumerate(classes):
        members = rng.permutation(np.flatnonzero(labels == label))
        train.append(members[:counts[position]])
        test.append(members[counts[position]:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


@dataclass(frozen=True, eq=False)
class LinkSplit:
    """Training graph with held-out positive edges and sampled non-edges."""

    train: object
    positives: np.ndarray
    negatives: np.ndarray


def _sample_non_edges(n, count, forbidden, rng, candidates=None):
    """
    Sample distinct pairs (i < j) outside forbidden.

    candidates optionally restricts the first endpoint to a node subset.
    """
    chosen = set()
    for _ in range(100):
        if len(chosen) >= count:
            break
        size = 2 * (count - len(chosen)) + 8
        first = rng.choice(candidates, size=size) if candidates is not None else rng.integers(0, n, size=size)
        second = rng.integers(0, n, size=size)
        for a, b in zip(first.tolist(), second.tolist()):
            if a == b:
                continue
            pair = (min(a, b), max(a, b))
            if pair in forbidden or pair in chosen:
                continue
            chosen.add(pair)
            if len(chosen) >= count:
                break

    if len(chosen) < count:
        # Few non-edges left: enumerate them.
        pool = [
            (i, j) for i in range(n) for j in range(i + 1, n)
            if (i, j) not in forbidden and (i, j) not in chosen
            and (candidates is None or i in candidates or j in candidates)
        ]
        missing = min(count - len(chosen), len(pool))
        for position in rng.permutation(len(pool))[:missing]:
            chosen.add(pool[position])
        if len(chosen) < count:
            logger.warning('only %d non-edges available, %d requested', len(chosen), count)

    return np.array(sorted(chosen), dtype=np.int64).reshape(-1, 2)


def link_prediction_split(dataset, test_frac, seed, mode='random'):
    """
    Hold out a fraction of the edges and sample as many non-edges.

    Edges are drawn uniformly; an edge whose removal would leave an endpoint
    without neighbors is skipped while other candidates remain.

    Args:
        dataset (Dataset): The full graph.
        test_frac (float): Fraction of edges held out, in (0, 1).
        seed (int): Split seed.
        mode (str): 'random'. 'temporal' is reserved for timestamped data.

    Returns:
        LinkSplit: Training dataset (all nodes kept), positive and negative pairs.
    """
    if mode == 'temporal':
        raise InvalidParameterError('temporal split needs edge timestamps, which this dataset does not have')
    if mode not in SPLIT_MODES:
        raise InvalidParameterError(f'unknown split mode {mode!r}; expected one of {SPLIT_MODES}')
    if not 0.0 < test_frac < 1.0:
        raise InvalidParameterError(f'test fraction must lie in (0, 1), got {test_frac}')

    edges = dataset.edges()
    if len(edges) == 0:
        raise EmptyInputError('graph has no edge to hold out')
    wanted = max(1, int(np.floor(test_frac * len(edges) + 0.5)))
    rng = make_rng(seed, STREAM_SPLIT)
    degree = np.array([len(neighbors) for neighbors in dataset.adjacency])

    removed, skipped = [], []
    for e in rng.permutation(len(edges)):
        if len(removed) == wanted:
            break
        i, j = edges[e]
        if degree[i] > 1 and degree[j] > 1:
            removed.append(e)
            degree[i] -= 1
            degree[j] -= 1
        else:
            skipped.append(e)
    if len(removed) < wanted:
        logger.warning(
            'graph too sparse to hold out %d edges without isolating nodes; isolating some', wanted)
        for e in skipped[:wanted - len(removed)]:
            removed.append(e)

    held_out = {tuple(edges[e]) for e in removed}
    adjacency = [
        [j for j in neighbors if (min(i, j), max(i, j)) not in held_out]
        for i, neighbors in enumerate(dataset.adjacency)
    ]
    forbidden = {tuple(edge) for edge in edges.tolist()}
    negatives = _sample_non_edges(
        dataset.num_nodes, len(removed), forbidden, make_rng(seed, STREAM_NEGATIVES))
    positives = np.array(sorted(held_out), dtype=np.int64).reshape(-1, 2)
    return LinkSplit(train=with_adjacency(dataset, adjacency), positives=positives, negatives=negatives)


# ===== CLASSIFICATION =====

def _classify_once(features, labels, frac, split_seed, l2, num_classes):
    train, test = stratified_split(labels, frac, split_seed)
    classifier = train_softmax_classifier(features[train], labels[train], l2=l2, num_classes=num_classes)
    return accuracy(classifier.predict(features[test]), labels[test])


def classification_protocol(representations, labels, fracs=CLASSIFY_FRACTIONS, repeats=10, seed=42,
                            l2=1.0, threads=1, method='embeddings', protocol='classification', config=None):
    """
    Linear classifier accuracy for increasing training fractions.

    Args:
        representations (numpy.ndarray): N x dim features, one row per labeled node.
        labels (numpy.ndarray): N class indices.
        fracs (sequence[float]): Training fractions.
        repeats (int): Seeded splits per fraction.
        seed (int): Base seed; repeat r of fraction f uses (seed, f, r).
        l2 (float): Classifier regularization.
        threads (int): Repeats run concurrently.

    Returns:
        EvalReport: Mean/stddev test accuracy per fraction.
    """
    features = np.asarray(representations, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] != labels.shape[0]:
        raise InvalidParameterError(f'{features.shape[0]} representations for {labels.shape[0]} labels')
    if repeats < 1:
        raise InvalidParameterError('repeats must be positive')
    num_classes = int(labels.max()) + 1

    settings = []
    for f, frac in enumerate(fracs):
        values = _run_repeats(
            lambda r: _classify_once(
                features, labels, frac, derive_seed(seed, STREAM_REPEAT, f, r), l2, num_classes),
            repeats, threads)
        settings.append(SettingResult(setting=float(frac), values=tuple(values)))
        logger.info('%s at %.0f%%: accuracy %.4f', method, frac * 100, np.mean(values))

    echo = {'seed': seed, 'repeats': repeats, 'l2': l2, 'dim': int(features.shape[1]),
            'split': 'stratified'}
    echo.update(config or {})
    return EvalReport(protocol=protocol, metric='accuracy', method=method,
                      settings=tuple(settings), config=echo)


def bow_baseline(dataset, fracs=CLASSIFY_FRACTIONS, repeats=10, seed=42, l2=1.0, threads=1):
    """Classification protocol fed the raw term-count vectors."""
    return classification_protocol(
        dataset.bows.toarray().astype(np.float64), dataset.labels, fracs, repeats, seed, l2, threads,
        method='bag-of-words', protocol='bow_baseline',
        config={'zero_degree_nodes': dataset.report.zero_degree_nodes if dataset.report else None})


def infer_many(model, dataset, nodes):
    """
    Embed nodes of a dataset from their text.

    Empty documents cannot be inferred and receive the model's fallback
    vector instead.

    Returns:
        tuple[numpy.ndarray, int]: len(nodes) x d vectors and the number of
        fallbacks used.
    """
    vectors = np.empty((len(nodes), model.dim))
    fallbacks = 0
    for row, node in enumerate(nodes):
        try:
            vectors[row] = infer_document(model, dataset.bow(node))
        except InferenceError:
            vectors[row] = model.fallback
            fallbacks += 1
    return vectors, fallbacks


def _unseen_once(dataset, run_cfg, frac, split_seed, repeat_keys, l2):
    observed, hidden = stratified_split(dataset.labels, frac, split_seed)
    subgraph, _ = induced_subgraph(dataset, observed)
    model, _ = fit_embeddings(subgraph, run_cfg.reseeded(*repeat_keys))

    train_features = text_representations(model, 'text_only')
    test_features, fallbacks = infer_many(model, dataset, hidden)
    classifier = train_softmax_classifier(
        train_features, subgraph.labels, l2=l2, num_classes=dataset.num_classes)
    return accuracy(classifier.predict(test_features), dataset.labels[hidden]), fallbacks


def unseen_document_protocol(dataset, run_cfg, fracs=UNSEEN_FRACTIONS, repeats=10, seed=42,
                             l2=1.0, threads=1):
    """
    Classify documents hidden while learning, embedded from text only.

    For each fraction, a stratified set of nodes is observed; GVNR-t is
    trained on the observed induced subgraph (the hidden nodes' links are
    never seen), hidden documents are embedded with infer_document, and a
    classifier trained on the observed nodes' text vectors predicts them.

    Returns:
        EvalReport: Accuracy on hidden nodes per observed fraction.
    """
    for frac in fracs:
        if not 0.0 < frac < 1.0:
            raise InvalidParameterError(f'observed fraction must lie in (0, 1), got {frac}; nothing would be hidden')
    if run_cfg.variant != 'gvnr_t':
        raise InvalidParameterError('the unseen-document protocol needs the gvnr_t variant')

    settings = []
    fallbacks_total = 0
    for f, frac in enumerate(fracs):
        outcomes = _run_repeats(
            lambda r: _unseen_once(
                dataset, run_cfg, frac, derive_seed(seed, STREAM_REPEAT, f, r),
                (STREAM_REPEAT, f, r), l2),
            repeats, threads)
        values = tuple(value for value, _ in outcomes)
        fallbacks_total += sum(count for _, count in outcomes)
        settings.append(SettingResult(setting=float(frac), values=values))
        logger.info('unseen documents at %.0f%% observed: accuracy %.4f', frac * 100, np.mean(values))

    if fallbacks_total:
        logger.warning('%d hidden documents were empty and used the fallback vector', fallbacks_total)
    config = {
        'seed': seed, 'repeats': repeats, 'l2': l2, 'split': 'stratified',
        'pipeline': run_cfg.to_dict(),
        'empty_hidden_documents': fallbacks_total,
        'zero_degree_nodes': dataset.report.zero_degree_nodes if dataset.report else None,
    }
    return EvalReport(protocol='unseen_documents', metric='accuracy', method=METHOD_NAMES['gvnr_t'],
                      settings=tuple(settings), config=config)


# ===== LINK PREDICTION =====

def _cosine(a, b):
    norms = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    return np.einsum('ij,ij->i', a, b) / np.where(norms > 0, norms, 1.0)


def pair_scores(model, pairs, scorer='dot_bias', mode=None):
    """
    Score node pairs with a fitted model.

    'dot_bias' is sigmoid(u_i . v_j + b_u[i] + b_v[j]); 'cosine' is the
    cosine of the two node representations in the given mode.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if scorer == 'dot_bias':
        raw = text_score_pairs(model, pairs) if isinstance(model, GvnrTextModel) else gvnr_score_pairs(model, pairs)
        return expit(raw)
    if scorer == 'cosine':
        if isinstance(model, GvnrTextModel):
            features = text_representations(model, resolve_mode('gvnr_t', mode))
        else:
            features = node_representations(model, resolve_mode('gvnr', mode))
        return _cosine(features[pairs[:, 0]], features[pairs[:, 1]])
    raise InvalidParameterError(f'unknown scorer {scorer!r}; expected one of {SCORERS}')


def link_prediction_protocol(model, split, scorer='dot_bias', mode=None, config=None):
    """
    ROC AUC of held-out edges against sampled non-edges.

    Returns:
        EvalReport: A single setting (the held-out fraction) with one value.
    """
    auc = roc_auc(pair_scores(model, split.positives, scorer, mode),
                  pair_scores(model, split.negatives, scorer, mode))
    method = METHOD_NAMES['gvnr_t' if isinstance(model, GvnrTextModel) else 'gvnr']
    total = split.train.num_edges + len(split.positives)
    echo = {'scorer': scorer, 'mode': mode, 'positives': len(split.positives),
            'negatives': len(split.negatives)}
    echo.update(config or {})
    return EvalReport(protocol='link_prediction', metric='auc', method=method,
                      settings=(SettingResult(setting=len(split.positives) / total, values=(auc,)),),
                      config=echo)


def link_prediction_experiment(dataset, run_cfg, test_frac=0.2, repeats=10, seed=42,
                               scorer='dot_bias', mode=None, threads=1):
    """Repeat split -> train -> link_prediction_protocol with derived seeds."""
    def once(r):
        split = link_prediction_split(dataset, test_frac, derive_seed(seed, STREAM_REPEAT, r))
        model, _ = fit_embeddings(split.train, run_cfg.reseeded(STREAM_REPEAT, r))
        report = link_prediction_protocol(model, split, scorer, mode)
        return report.settings[0].values[0]

    values = _run_repeats(once, repeats, threads)
    config = {'seed': seed, 'repeats': repeats, 'scorer': scorer, 'mode': mode, 'split': 'random',
              'pipeline': run_cfg.to_dict()}
    return EvalReport(protocol='link_prediction', metric='auc', method=METHOD_NAMES[run_cfg.variant],
                      settings=(SettingResult(setting=float(test_frac), values=tuple(values)),),
                      config=config)


def _unseen_pair_scores(model, pairs, vectors, observed_index, scorer):
    """
    Score pairs where some endpoints were hidden during training.

    vectors holds the text vector of every node of the full graph. With
    'dot_bias', an observed endpoint contributes its trained u and b_u, a
    hidden endpoint its inferred context vector with a zero bias; two hidden
    endpoints are scored sigmoid(v_i . v_j).
    """
    if scorer == 'cosine':
        return _cosine(vectors[pairs[:, 0]], vectors[pairs[:, 1]])
    if scorer != 'dot_bias':
        raise InvalidParameterError(f'unknown scorer {scorer!r}; expected one of {SCORERS}')

    scores = np.empty(len(pairs))
    for row, (a, b) in enumerate(pairs):
        if a not in observed_index:
            a, b = b, a
        if a in observed_index:
            i = observed_index[a]
            bias = model.b_v[observed_index[b]] if b in observed_index else 0.0
            scores[row] = model.U[i] @ vectors[b] + model.b_u[i] + bias
        else:
            scores[row] = vectors[a] @ vectors[b]
    return expit(scores)


def unseen_link_prediction_experiment(dataset, run_cfg, hidden_frac=0.2, repeats=10, seed=42,
                                      scorer='cosine', threads=1):
    """
    Link prediction for documents hidden during training.

    A random fraction of the nodes (not of the links) is hidden; GVNR-t is
    trained on the remaining induced subgraph. Links incident to hidden
    nodes are scored against as many non-links incident to hidden nodes,
    hidden endpoints being embedded from their text.
    """
    if run_cfg.variant != 'gvnr_t':
        raise InvalidParameterError('link prediction for unseen documents needs the gvnr_t variant')
    if not 0.0 < hidden_frac < 1.0:
        raise InvalidParameterError(f'hidden fraction must lie in (0, 1), got {hidden_frac}')
    edges = dataset.edges()
    forbidden = {tuple(edge) for edge in edges.tolist()}

    def once(r):
        rng = make_rng(seed, STREAM_REPEAT, r)
        hidden_count = max(1, int(np.floor(hidden_frac * dataset.num_nodes + 0.5)))
        hidden = np.sort(rng.permutation(dataset.num_nodes)[:hidden_count])
        hidden_set = set(hidden.tolist())
        observed = np.array([i for i in range(dataset.num_nodes) if i not in hidden_set], dtype=np.int64)

        positives = np.array(
            [edge for edge in edges.tolist() if edge[0] in hidden_set or edge[1] in hidden_set],
            dtype=np.int64).reshape(-1, 2)
        if len(positives) == 0:
            raise EmptyInputError('hidden nodes have no links to predict')
        negatives = _sample_non_edges(
            dataset.num_nodes, len(positives), forbidden, make_rng(seed, STREAM_NEGATIVES, r), candidates=hidden)

        subgraph, mapping = induced_subgraph(dataset, observed)
        model, _ = fit_embeddings(subgraph, run_cfg.reseeded(STREAM_REPEAT, r))
        vectors = np.empty((dataset.num_nodes, model.dim))
        vectors[observed] = context_vectors(model)
        vectors[hidden], _ = infer_many(model, dataset, hidden)
        return roc_auc(_unseen_pair_scores(model, positives, vectors, mapping, scorer),
                       _unseen_pair_scores(model, negatives, vectors, mapping, scorer))

    values = _run_repeats(once, repeats, threads)
    config = {'seed': seed, 'repeats': repeats, 'scorer': scorer, 'pipeline': run_cfg.to_dict()}
    return EvalReport(protocol='unseen_link_prediction', metric='auc', method=METHOD_NAMES['gvnr_t'],
                      settings=(SettingResult(setting=float(hidden_frac), values=tuple(values)),),
                      config=config)


__all__ = [
    'CLASSIFY_FRACTIONS', 'UNSEEN_FRACTIONS', 'SCORERS', 'LinkSplit',
    'bow_baseline', 'classification_protocol', 'infer_many', 'link_prediction_experiment',
    'link_prediction_protocol', 'link_prediction_split', 'pair_scores', 'stratified_split',
    'unseen_document_protocol', 'unseen_link_prediction_experiment',
]
