"""
Attention commands blueprint.
"""

import json

import click
from flask import Blueprint, current_app

from attention.services import QUERY_STRATEGIES, mutual_attention_weights
from gvnr_text.services import GvnrTextModel
from pipeline.options import dataset_options, open_dataset
from pipeline.services import load_model
from storage.files import read_vocab
from utils.decorators import handle_pipeline_errors
from utils.errors import EmptyInputError, InvalidParameterError


attention_bp = Blueprint('attention', __name__, cli_group=None)


def linked_pairs(dataset, count):
    """The first count citation pairs, as external ids."""
    return [(dataset.node_ids[i], dataset.node_ids[j]) for i, j in dataset.edges()[:count]]


@attention_bp.cli.command('attend')
@click.option('--model', 'model_dir', type=click.Path(exists=True, file_okay=False), required=True,
              help='Directory written by train (GVNR-t).')
@dataset_options
@click.option('--pair', 'pairs', type=(str, str), multiple=True, help='Two document ids; repeatable.')
@click.option('--linked', type=int, default=None, help='Export the first N citation pairs.')
@click.option('--query', type=click.Choice(QUERY_STRATEGIES), default=None,
              help='How a document is summarized into a query.')
@click.option('--vocab', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Token per line, used to label the words.')
@click.option('--out', type=click.File('w'), default='-', help='JSON lines output (stdout by default).')
@handle_pipeline_errors
def attend(model_dir, dataset_name, dataset_content, dataset_cites, binary, pairs, linked, query, vocab, out):
    """Write attention weights over the words of document pairs."""
    if not pairs and not linked:
        raise click.UsageError('give at least one --pair or --linked N')
    model, _ = load_model(model_dir)
    if not isinstance(model, GvnrTextModel):
        raise InvalidParameterError('attention needs the word embeddings of a gvnr_t model')

    dataset = open_dataset(dataset_name, dataset_content, dataset_cites, binary)
    if dataset.vocab_size != model.vocab_size:
        raise InvalidParameterError(
            f'dataset uses {dataset.vocab_size} words, the model was trained on {model.vocab_size}')
    tokens = read_vocab(vocab) if vocab else None
    strategy = query or current_app.config['QUERY']

    requested = list(pairs) + (linked_pairs(dataset, linked) if linked else [])
    written = 0
    for doc_a, doc_b in requested:
        try:
            a, b = dataset.index_of(doc_a), dataset.index_of(doc_b)
        except KeyError as e:
            raise InvalidParameterError(f'unknown document id {e.args[0]!r}') from None
        try:
            result = mutual_attention_weights(dataset.bow(a), dataset.bow(b), model.W, strategy)
        except EmptyInputError as e:
            current_app.logger.warning('Skipping pair %s %s: %s', doc_a, doc_b, e)
            continue
        out.write(json.dumps(result.to_record(doc_a, doc_b, tokens)) + '\n')
        written += 1
    current_app.logger.info('Wrote attention weights for %d pairs', written)
