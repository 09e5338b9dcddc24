"""
Shared fixtures: the app, its CLI runner and small text-attributed graphs.
"""

import os

import numpy as np
import pytest

from app import create_app
from config import TestingConfig
from corpus_graph.services import load_cora_format


TINY_CONTENT = """\
p1\t1\t1\t0\t0\t0\t0\tML
p2\t1\t0\t1\t0\t0\t0\tML
p3\t0\t1\t1\t0\t0\t0\tML
p4\t0\t0\t0\t1\t1\t0\tDB
p5\t0\t0\t0\t1\t0\t1\tDB
p6\t0\t0\t0\t0\t1\t1\tDB
"""

TINY_CITES = """\
p1\tp2
p2\tp3
p3\tp1
p4\tp5
p5\tp6
p6\tp4
p3\tp4
"""


def planted_partition(n=200, blocks=2, p_in=0.8, p_out=0.01, vocab=40, words=6, seed=0):
    """
    Two-block graph in content/cites text form.

    Each block draws its words from its own half of the vocabulary.
    """
    rng = np.random.default_rng(seed)
    block = np.arange(n) * blocks // n
    per_block = vocab // blocks
    content_lines = []
    for i in range(n):
        flags = np.zeros(vocab, dtype=int)
        chosen = rng.choice(per_block, size=words, replace=False) + block[i] * per_block
        flags[chosen] = 1
        content_lines.append('\t'.join([f'n{i}'] + [str(v) for v in flags] + [f'c{block[i]}']))
    cites_lines = []
    for i in range(n):
        for j in range(i + 1, n):
            p = p_in if block[i] == block[j] else p_out
            if rng.random() < p:
                cites_lines.append(f'n{i}\tn{j}')
    return '\n'.join(content_lines) + '\n', '\n'.join(cites_lines) + '\n'


@pytest.fixture
def app():
    app = create_app(TestingConfig)
    app.config.update(DATASETS_DIR=os.path.join(os.path.dirname(__file__), 'missing-datasets'))
    yield app


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def tiny_dataset():
    return load_cora_format(TINY_CONTENT, TINY_CITES)


@pytest.fixture
def tiny_files(tmp_path):
    content = tmp_path / 'tiny.content'
    cites = tmp_path / 'tiny.cites'
    content.write_text(TINY_CONTENT)
    cites.write_text(TINY_CITES)
    return str(content), str(cites)


@pytest.fixture(scope='session')
def planted_texts():
    return planted_partition()


@pytest.fixture
def planted_dataset(planted_texts):
    return load_cora_format(*planted_texts)


@pytest.fixture
def planted_files(tmp_path, planted_texts):
    content = tmp_path / 'planted.content'
    cites = tmp_path / 'planted.cites'
    content.write_text(planted_texts[0])
    cites.write_text(planted_texts[1])
    return str(content), str(cites)


@pytest.fixture
def cora_files():
    directory = os.environ.get('GVNR_CORA_DIR')
    if not directory:
        pytest.skip('GVNR_CORA_DIR is not set')
    content = os.path.join(directory, 'cora.content')
    cites = os.path.join(directory, 'cora.cites')
    if not (os.path.isfile(content) and os.path.isfile(cites)):
        pytest.skip(f'cora.content and cora.cites not found in {directory}')
    return content, cites
