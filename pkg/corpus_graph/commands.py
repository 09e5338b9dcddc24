"""
Corpus graph commands blueprint.
"""

import json

import click
from flask import Blueprint

from corpus_graph.services import load_report
from pipeline.options import dataset_options, open_dataset
from utils.decorators import handle_pipeline_errors


corpus_graph_bp = Blueprint('corpus_graph', __name__, cli_group=None)


@corpus_graph_bp.cli.command('dataset-report')
@dataset_options
@handle_pipeline_errors
def dataset_report(dataset_name, dataset_content, dataset_cites, binary):
    """Print what loading a dataset kept, dropped and ignored, as JSON."""
    dataset = open_dataset(dataset_name, dataset_content, dataset_cites, binary)
    report = load_report(dataset)
    report['sha256'] = dataset.source_hash
    click.echo(json.dumps(report, indent=2, sort_keys=True))
