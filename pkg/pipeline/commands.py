"""
Pipeline commands blueprint: train and infer.
"""

import os
import time

import click
from flask import Blueprint, current_app

from corpus_graph.services import load_cora_format
from gvnr_text.services import GvnrTextModel, infer_document
from pipeline.options import (
    dataset_options,
    dataset_paths,
    manifest_dataset,
    merged_config,
    open_dataset,
    pop_training_overrides,
    run_config_snapshot,
    training_options,
    validated_run_config,
)
from pipeline.services import fit_embeddings, load_model, save_model, write_manifest
from storage.files import read_vocab, write_vector_lines
from utils.decorators import handle_pipeline_errors
from utils.errors import InferenceError, InvalidParameterError


# Commands are registered at the top level (flask train, flask infer)
pipeline_bp = Blueprint('pipeline', __name__, cli_group=None)


@pipeline_bp.cli.command('train')
@dataset_options
@training_options
@click.option('--out', type=click.Path(file_okay=False), required=True, help='Output directory.')
@click.option('--vocab', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Token per line, used as keys of words.txt.')
@click.option('--resume', type=click.Path(exists=True, file_okay=False), default=None,
              help='Start from the parameters of a previous train output.')
@handle_pipeline_errors
def train(dataset_name, dataset_content, dataset_cites, binary, config_file, out, vocab, resume, **training):
    """Learn node embeddings and write model files and a run manifest."""
    started = time.perf_counter()
    overrides = pop_training_overrides(training)
    config = merged_config(config_file, overrides)
    run_cfg = validated_run_config(config)
    if config_file and not (dataset_name or dataset_content or dataset_cites):
        dataset_content, dataset_cites, recorded_binary = manifest_dataset(config_file)
        binary = recorded_binary if binary is None else binary
    content, cites = dataset_paths(dataset_name, dataset_content, dataset_cites)
    if binary is None:
        binary = current_app.config['BINARY_BOW']
    dataset = open_dataset(None, content, cites, binary)

    initial = None
    if resume:
        initial, meta = load_model(resume)
        if meta.get('variant') != run_cfg.variant:
            raise InvalidParameterError(
                f"cannot resume a {meta.get('variant')} model as {run_cfg.variant}")
        current_app.logger.info('Resuming from %s', resume)

    vocab_tokens = read_vocab(vocab) if vocab else None
    if vocab_tokens is not None and len(vocab_tokens) != dataset.vocab_size:
        raise InvalidParameterError(
            f'vocabulary file has {len(vocab_tokens)} tokens, dataset has {dataset.vocab_size} words')

    model, info = fit_embeddings(dataset, run_cfg, cache_dir=config.get('CACHE_DIR') or None, initial=initial)
    written = save_model(out, model, dataset, run_cfg.mode, vocab=vocab_tokens)

    manifest = {
        'command': 'train',
        'config': run_config_snapshot(config),
        'run_config': run_cfg.to_dict(),
        'dataset': {
            'content': os.path.abspath(content),
            'cites': os.path.abspath(cites),
            'binary': binary,
            'sha256': dataset.source_hash,
            'report': dataset.report.to_dict(),
        },
        'cooccurrences': info,
        'history': model.history.to_dict(),
        'resumed_from': resume,
        'files': written,
        'wall_time_seconds': round(time.perf_counter() - started, 3),
    }
    path = write_manifest(out, manifest)
    current_app.logger.info('Wrote %s', path)
    click.echo(path)


@pipeline_bp.cli.command('infer')
@click.option('--model', 'model_dir', type=click.Path(exists=True, file_okay=False), required=True,
              help='Directory written by train (GVNR-t).')
@click.option('--dataset-content', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Documents to embed, in the content file layout.')
@click.option('--binary/--counts', 'binary', default=None)
@click.option('--out', type=click.File('w'), default='-', help='Output file (stdout by default).')
@handle_pipeline_errors
def infer(model_dir, dataset_content, binary, out):
    """Embed documents from their text with a trained GVNR-t model."""
    model, _ = load_model(model_dir)
    if not isinstance(model, GvnrTextModel):
        raise InvalidParameterError('infer needs a gvnr_t model; GVNR cannot embed unseen documents')
    if binary is None:
        binary = current_app.config['BINARY_BOW']

    with open(dataset_content, encoding='utf-8') as content:
        documents = load_cora_format(content, '', binary=binary, source=dataset_content)
    if documents.vocab_size != model.vocab_size:
        raise InvalidParameterError(
            f'documents use {documents.vocab_size} words, the model was trained on {model.vocab_size}')

    skipped = 0
    for i, node_id in enumerate(documents.node_ids):
        try:
            vector = infer_document(model, documents.bow(i))
        except InferenceError as e:
            current_app.logger.warning('Skipping %s: %s', node_id, e)
            skipped += 1
            continue
        write_vector_lines(out, [node_id], [vector])
    if skipped:
        click.echo(f'{skipped} empty documents skipped', err=True)
    current_app.logger.info('Embedded %d documents', documents.num_nodes - skipped)
