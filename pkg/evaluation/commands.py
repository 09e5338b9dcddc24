"""
Evaluation commands blueprint: flask evaluate classify|unseen|linkpred.
"""

import os
from functools import wraps

import click
import numpy as np
from flask import Blueprint, current_app

from evaluation.forms import EvaluationForm
from evaluation.services import (
    SCORERS,
    bow_baseline,
    classification_protocol,
    link_prediction_experiment,
    unseen_document_protocol,
    unseen_link_prediction_experiment,
)
from pipeline.options import (
    dataset_options,
    form_errors,
    merged_config,
    open_dataset,
    pop_training_overrides,
    run_config_snapshot,
    training_options,
    validated_run_config,
)
from pipeline.services import METHOD_NAMES, fit_embeddings, representations
from storage.files import read_word2vec, write_json
from utils.decorators import handle_pipeline_errors
from utils.errors import InvalidParameterError


evaluation_bp = Blueprint('evaluation', __name__, cli_group='evaluate')

EVALUATION_KEYS = ('REPEATS', 'L2', 'TEST_FRAC', 'SCORER')


def evaluation_options(f):
    """--fracs, --repeats, --l2 and --out."""
    @click.option('--fracs', default=None, help='Fractions as 0.1..0.5 or a comma list.')
    @click.option('--repeats', type=int, default=None, help='Seeded repeats per fraction.')
    @click.option('--l2', type=float, default=None, help='Classifier L2 regularization.')
    @click.option('--out', type=click.Path(file_okay=False), default='reports', show_default=True,
                  help='Directory receiving the JSON and text reports.')
    @wraps(f)
    def decorated_function(*args, **kwargs):
        return f(*args, **kwargs)
    return decorated_function


def prepare(kwargs, fractions_key=None, extra=None):
    """
    Merge config layers and validate run and protocol settings.

    Returns:
        tuple[flask.Config, RunConfig, EvaluationForm]
    """
    overrides = pop_training_overrides(kwargs)
    fracs = kwargs.pop('fracs', None)
    if fractions_key:
        overrides[fractions_key] = fracs
    overrides.update({
        'REPEATS': kwargs.pop('repeats', None),
        'L2': kwargs.pop('l2', None),
    })
    overrides.update(extra or {})
    config = merged_config(kwargs.pop('config_file', None), overrides)
    run_cfg = validated_run_config(config)

    form = EvaluationForm(data={
        'fractions': config.get(fractions_key) if fractions_key else None,
        'repeats': config.get('REPEATS'),
        'l2': config.get('L2'),
        'test_frac': config.get('TEST_FRAC'),
        'scorer': config.get('SCORER'),
    })
    if not form.validate():
        raise click.UsageError(f'invalid evaluation settings: {form_errors(form)}')
    return config, run_cfg, form


def emit_report(report, out, name, config, fractions_key=None):
    """Write <name>.json and <name>.txt under out and echo the table."""
    os.makedirs(out, exist_ok=True)
    keys = run_config_snapshot(config) | run_config_snapshot(config, EVALUATION_KEYS)
    if fractions_key:
        keys[fractions_key] = config.get(fractions_key)
    payload = report.to_dict()
    payload['options'] = keys
    json_path = os.path.join(out, f'{name}.json')
    write_json(json_path, payload)
    table_path = os.path.join(out, f'{name}.txt')
    with open(table_path, 'w', encoding='utf-8') as f:
        f.write(report.to_table())
    current_app.logger.info('Wrote %s and %s', json_path, table_path)
    click.echo(report.to_table(), nl=False)


def aligned_embeddings(path, dataset):
    """Rows of a word2vec file reordered to the dataset's node order."""
    ids, vectors = read_word2vec(path)
    position = {node_id: row for row, node_id in enumerate(ids)}
    missing = [node_id for node_id in dataset.node_ids if node_id not in position]
    if missing:
        raise InvalidParameterError(
            f'{len(missing)} dataset nodes have no embedding in {path} (first: {missing[0]})')
    return vectors[np.array([position[node_id] for node_id in dataset.node_ids])]


@evaluation_bp.cli.command('classify')
@dataset_options
@training_options
@evaluation_options
@click.option('--embeddings', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Evaluate an existing word2vec file instead of training.')
@click.option('--features', type=click.Choice(['embeddings', 'bow']), default='embeddings', show_default=True,
              help='bow runs the bag-of-words baseline.')
@handle_pipeline_errors
def classify(dataset_name, dataset_content, dataset_cites, binary, out, embeddings, features, **kwargs):
    """Node classification accuracy for increasing training fractions."""
    config, run_cfg, form = prepare(kwargs, 'CLASSIFY_FRACTIONS')
    dataset = open_dataset(dataset_name, dataset_content, dataset_cites, binary)
    common = dict(fracs=form.fraction_values(), repeats=form.repeats.data, seed=run_cfg.gvnr.seed,
                  l2=form.l2.data, threads=run_cfg.gvnr.threads)
    zero_degree = {'zero_degree_nodes': dataset.report.zero_degree_nodes}

    if features == 'bow':
        report = bow_baseline(dataset, **common)
    elif embeddings:
        report = classification_protocol(
            aligned_embeddings(embeddings, dataset), dataset.labels,
            method=os.path.basename(embeddings), config={'embeddings': embeddings, **zero_degree}, **common)
    else:
        model, info = fit_embeddings(dataset, run_cfg, cache_dir=config.get('CACHE_DIR') or None)
        report = classification_protocol(
            representations(model, run_cfg.mode), dataset.labels,
            method=f'{METHOD_NAMES[run_cfg.variant]} ({run_cfg.mode})',
            config={'pipeline': run_cfg.to_dict(), 'cooccurrences': info, **zero_degree}, **common)
    emit_report(report, out, report.protocol, config, 'CLASSIFY_FRACTIONS')


@evaluation_bp.cli.command('unseen')
@dataset_options
@training_options
@evaluation_options
@handle_pipeline_errors
def unseen(dataset_name, dataset_content, dataset_cites, binary, out, **kwargs):
    """Accuracy on documents hidden while learning, embedded from text."""
    config, run_cfg, form = prepare(kwargs, 'UNSEEN_FRACTIONS')
    dataset = open_dataset(dataset_name, dataset_content, dataset_cites, binary)
    report = unseen_document_protocol(
        dataset, run_cfg, fracs=form.fraction_values(), repeats=form.repeats.data,
        seed=run_cfg.gvnr.seed, l2=form.l2.data, threads=run_cfg.gvnr.threads)
    emit_report(report, out, report.protocol, config, 'UNSEEN_FRACTIONS')


@evaluation_bp.cli.command('linkpred')
@dataset_options
@training_options
@evaluation_options
@click.option('--test-frac', type=float, default=None, help='Fraction of edges held out.')
@click.option('--hide-frac', type=float, default=None,
              help='Hide this fraction of nodes instead and predict their links from text (gvnr_t).')
@click.option('--scorer', type=click.Choice(SCORERS), default=None)
@handle_pipeline_errors
def linkpred(dataset_name, dataset_content, dataset_cites, binary, out, test_frac, hide_frac, scorer, **kwargs):
    """ROC AUC of held-out links against sampled non-links."""
    config, run_cfg, form = prepare(kwargs, extra={'TEST_FRAC': test_frac, 'SCORER': scorer})
    dataset = open_dataset(dataset_name, dataset_content, dataset_cites, binary)

    if hide_frac is not None:
        report = unseen_link_prediction_experiment(
            dataset, run_cfg, hidden_frac=hide_frac, repeats=form.repeats.data,
            seed=run_cfg.gvnr.seed, scorer=form.scorer.data, threads=run_cfg.gvnr.threads)
    else:
        report = link_prediction_experiment(
            dataset, run_cfg, test_frac=form.test_frac.data, repeats=form.repeats.data,
            seed=run_cfg.gvnr.seed, scorer=form.scorer.data, mode=run_cfg.mode,
            threads=run_cfg.gvnr.threads)
    emit_report(report, out, report.protocol, config)
