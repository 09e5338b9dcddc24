"""
End-to-end pipeline: walks -> co-occurrences (cached) -> GVNR or GVNR-t,
plus model files and run manifests.
"""

import logging
import os
from dataclasses import asdict, dataclass, field, replace

from gvnr_core.services import GvnrConfig, GvnrModel, REPRESENTATION_MODES, node_representations, train_gvnr
from gvnr_text.services import GvnrTextModel, TEXT_MODES, text_representations, train_gvnr_t
from storage.files import (
    cooc_cache_path,
    read_cooc_triples,
    read_params,
    write_cooc_triples,
    write_json,
    write_params,
    write_word2vec,
)
from utils.errors import InvalidParameterError
from utils.helpers import derive_seed
from walk_cooc.services import (
    WalkConfig,
    count_cooccurrences,
    filter_min_count,
    generate_walks,
    power_law_diagnostic,
    visit_frequencies,
)


logger = logging.getLogger(__name__)

VARIANTS = ('gvnr', 'gvnr_t')
MODES_BY_VARIANT = {'gvnr': REPRESENTATION_MODES, 'gvnr_t': TEXT_MODES}
DEFAULT_MODE = {'gvnr': 'concat', 'gvnr_t': 'full'}
METHOD_NAMES = {'gvnr': 'GVNR', 'gvnr_t': 'GVNR-t'}


@dataclass(frozen=True)
class RunConfig:
    """Walk and factorization settings for one model variant."""

    walk: WalkConfig = field(default_factory=WalkConfig)
    gvnr: GvnrConfig = field(default_factory=GvnrConfig)
    variant: str = 'gvnr_t'
    mode: str = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidParameterError(f'unknown variant {self.variant!r}; expected one of {VARIANTS}')
        object.__setattr__(self, 'mode', resolve_mode(self.variant, self.mode))

    def reseeded(self, *keys):
        """Copy whose walk and training seeds derive from (seed, *keys)."""
        return replace(
            self,
            walk=replace(self.walk, seed=derive_seed(self.walk.seed, *keys)),
            gvnr=replace(self.gvnr, seed=derive_seed(self.gvnr.seed, *keys)),
        )

    def to_dict(self):
        return {'variant': self.variant, 'mode': self.mode, 'walk': asdict(self.walk), 'gvnr': asdict(self.gvnr)}


def resolve_mode(variant, mode):
    """Validate a representation mode for a variant, defaulting per variant."""
    if mode is None:
        return DEFAULT_MODE[variant]
    if mode not in MODES_BY_VARIANT[variant]:
        raise InvalidParameterError(
            f'mode {mode!r} is not available for {variant}; expected one of {MODES_BY_VARIANT[variant]}')
    return mode


def build_cooccurrences(dataset, walk_cfg, cache_dir=None):
    """
    Walks and windowed counts for a dataset, reusing a cached matrix.

    The cache key is the dataset hash plus the walk settings; datasets
    without a source hash (subgraphs, synthetic graphs) are never cached.

    Returns:
        tuple[CoocMatrix, dict]: Counts before x_min filtering and a
        description (cache hit, walk count, visit diagnostic).
    """
    path = None
    if cache_dir and dataset.source_hash:
        path = cooc_cache_path(cache_dir, dataset.source_hash, walk_cfg.cache_key())
        if os.path.exists(path):
            logger.info('Reusing cached co-occurrences %s', path)
            return read_cooc_triples(path), {'cache': 'hit', 'cache_path': path}

    walks = generate_walks(dataset, walk_cfg)
    cooc = count_cooccurrences(
        walks, walk_cfg.window, num_nodes=dataset.num_nodes,
        decay=walk_cfg.window_decay, threads=walk_cfg.threads)
    info = {
        'cache': 'miss' if path else 'disabled',
        'walks': len(walks),
        'visits': power_law_diagnostic(visit_frequencies(walks, dataset.num_nodes)),
    }
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        write_cooc_triples(cooc, path)
        info['cache_path'] = path
        logger.info('Cached co-occurrences at %s', path)
    return cooc, info


def fit_embeddings(dataset, run_cfg, cache_dir=None, initial=None):
    """
    Run walks, counting, x_min filtering and training on a dataset.

    Returns:
        tuple[GvnrModel or GvnrTextModel, dict]: Model and pipeline description.
    """
    cooc, info = build_cooccurrences(dataset, run_cfg.walk, cache_dir)
    filtered = filter_min_count(cooc, run_cfg.gvnr.x_min)
    info.update({'entries': cooc.nnz, 'entries_after_x_min': filtered.nnz})

    if run_cfg.variant == 'gvnr':
        model = train_gvnr(filtered, run_cfg.gvnr, initial=initial)
    else:
        model = train_gvnr_t(filtered, dataset.bows, run_cfg.gvnr, initial=initial)
    return model, info


def representations(model, mode):
    """Feature matrix of every training node for a model and mode."""
    if isinstance(model, GvnrTextModel):
        return text_representations(model, mode)
    return node_representations(model, mode)


# ===== MODEL FILES =====

EMBEDDINGS_FILE = 'embeddings.txt'
PARAMS_FILE = 'params.txt'
WORDS_FILE = 'words.txt'
MANIFEST_FILE = 'manifest.json'


def save_model(out_dir, model, dataset, mode, vocab=None):
    """
    Write embeddings, the parameter sidecar and (GVNR-t) word vectors.

    Returns:
        list[str]: Written paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []

    path = os.path.join(out_dir, EMBEDDINGS_FILE)
    write_word2vec(path, dataset.node_ids, representations(model, mode))
    written.append(path)

    meta = {'node_ids': list(dataset.node_ids), 'mode': mode}
    path = os.path.join(out_dir, PARAMS_FILE)
    if isinstance(model, GvnrTextModel):
        meta['variant'] = 'gvnr_t'
        write_params(path, model.params(), meta=meta, sparse={'docs': model.docs})
        written.append(path)

        words_path = os.path.join(out_dir, WORDS_FILE)
        keys = vocab if vocab is not None else [str(w) for w in range(model.vocab_size)]
        write_word2vec(words_path, keys, model.W)
        written.append(words_path)
    else:
        meta['variant'] = 'gvnr'
        write_params(path, model.params(), meta=meta)
        written.append(path)
    return written


def load_model(model_dir):
    """
    Rebuild a model from its parameter sidecar.

    Returns:
        tuple[GvnrModel or GvnrTextModel, dict]: Model and sidecar meta
        (node ids, mode, variant).
    """
    arrays, sparse, meta = read_params(os.path.join(model_dir, PARAMS_FILE))
    if meta.get('variant') == 'gvnr_t':
        model = GvnrTextModel(docs=sparse['docs'], **arrays)
    else:
        model = GvnrModel(**arrays)
    return model, meta


def write_manifest(out_dir, payload):
    path = os.path.join(out_dir, MANIFEST_FILE)
    write_json(path, payload)
    return path
