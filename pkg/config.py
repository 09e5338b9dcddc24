"""
Application configuration settings.
"""

import os


def _env(name, default, cast=str):
    value = os.environ.get(f'GVNR_{name}')
    if value is None:
        return default
    if cast is bool:
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    return cast(value)


class Config:
    """Base configuration class."""

    BASE_DIR = os.path.abspath(os.path.dirname(__file__))

    # Logging
    LOG_LEVEL = _env('LOG_LEVEL', 'INFO')

    # Datasets: --dataset NAME resolves to DATASETS_DIR/NAME/NAME.{content,cites}
    DATASETS_DIR = _env('DATASETS_DIR', os.path.join(BASE_DIR, 'data'))
    BINARY_BOW = _env('BINARY_BOW', True, bool)

    # Co-occurrence cache
    CACHE_DIR = _env('CACHE_DIR', '.gvnr_cache')

    # Random walks
    WALKS_PER_NODE = _env('WALKS_PER_NODE', 80, int)
    WALK_LENGTH = _env('WALK_LENGTH', 40, int)
    WINDOW = _env('WINDOW', 5, int)
    WINDOW_DECAY = _env('WINDOW_DECAY', False, bool)

    # Factorization
    VARIANT = _env('VARIANT', 'gvnr_t')
    MODE = _env('MODE', None)
    DIM = _env('DIM', 100, int)
    K = _env('K', 1, int)
    X_MIN = _env('X_MIN', 1.0, float)
    EPOCHS = _env('EPOCHS', 10, int)
    LEARNING_RATE = _env('LEARNING_RATE', 0.05, float)
    OPTIMIZER = _env('OPTIMIZER', 'adagrad')
    BATCH_SIZE = _env('BATCH_SIZE', 1024, int)
    ZERO_TARGET = _env('ZERO_TARGET', 0.0, float)

    # Reproducibility
    SEED = _env('SEED', 42, int)
    THREADS = _env('THREADS', 1, int)

    # Evaluation
    L2 = _env('L2', 1.0, float)
    REPEATS = _env('REPEATS', 10, int)
    CLASSIFY_FRACTIONS = _env('CLASSIFY_FRACTIONS', '0.1..0.5')
    UNSEEN_FRACTIONS = _env('UNSEEN_FRACTIONS', '0.3..0.7')
    TEST_FRAC = _env('TEST_FRAC', 0.2, float)
    SCORER = _env('SCORER', 'dot_bias')

    # Attention export
    QUERY = _env('QUERY', 'mean')


class TestingConfig(Config):
    """Small walks and few epochs for the test suite."""

    TESTING = True
    LOG_LEVEL = 'WARNING'
    CACHE_DIR = None
    WALKS_PER_NODE = 10
    WALK_LENGTH = 10
    WINDOW = 3
    DIM = 8
    EPOCHS = 3
    BATCH_SIZE = 256
    REPEATS = 2
