"""
Click options shared by the commands, and the config layering they feed.

Values are merged in this order: app config (Config class, then the
GVNR_SETTINGS file), the --config JSON file, then explicit flags.
"""

import json
import os
from functools import wraps

import click
from flask import Config as FlaskConfig
from flask import current_app

from corpus_graph.services import load_dataset
from pipeline.forms import RUN_CONFIG_KEYS, RunConfigForm, form_data


def _load_config_json(f):
    """Flat uppercase keys, or a run manifest holding them under 'config'."""
    payload = json.load(f)
    if isinstance(payload, dict) and isinstance(payload.get('config'), dict):
        return payload['config']
    return payload


def merged_config(config_file=None, overrides=None):
    """
    Copy of the app config with a JSON file and flag values applied.

    Args:
        config_file (str): Optional JSON file (``--config``).
        overrides (dict): Uppercase keys from flags; None values are ignored.

    Returns:
        flask.Config: The merged settings.
    """
    config = FlaskConfig(current_app.root_path, current_app.config)
    if config_file:
        config.from_file(os.path.abspath(config_file), load=_load_config_json)
    config.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return config


def form_errors(form):
    return '; '.join(f'{name}: {" ".join(messages)}' for name, messages in form.errors.items())


def validated_run_config(config):
    """
    Validate merged settings with RunConfigForm.

    Raises:
        click.UsageError: With every validation message.
    """
    form = RunConfigForm(data=form_data(config, RUN_CONFIG_KEYS))
    if not form.validate():
        raise click.UsageError(f'invalid configuration: {form_errors(form)}')
    return form.to_run_config()


def run_config_snapshot(config, keys=RUN_CONFIG_KEYS):
    """Uppercase settings as written to manifests (replayable with --config)."""
    return {key: config.get(key) for key in keys}


# ===== DATASET =====

def dataset_options(f):
    """--dataset NAME or --dataset-content/--dataset-cites paths."""
    @click.option('--dataset', 'dataset_name', default=None,
                  help='Dataset name under DATASETS_DIR (NAME/NAME.content and NAME/NAME.cites).')
    @click.option('--dataset-content', type=click.Path(exists=True, dir_okay=False), default=None,
                  help='Content file: <id> <w_1> ... <w_m> <label> per line.')
    @click.option('--dataset-cites', type=click.Path(exists=True, dir_okay=False), default=None,
                  help='Cites file: <cited> <citing> per line.')
    @click.option('--binary/--counts', 'binary', default=None,
                  help='Read word columns as 0/1 flags or as counts.')
    @wraps(f)
    def decorated_function(*args, **kwargs):
        return f(*args, **kwargs)
    return decorated_function


def dataset_paths(dataset_name, content, cites):
    """
    Resolve the content and cites paths of a command.

    Raises:
        click.UsageError: If no dataset is given or a named file is missing.
    """
    if dataset_name:
        base = os.path.join(current_app.config['DATASETS_DIR'], dataset_name)
        content = content or os.path.join(base, f'{dataset_name}.content')
        cites = cites or os.path.join(base, f'{dataset_name}.cites')
    if not content or not cites:
        raise click.UsageError('give --dataset NAME or both --dataset-content and --dataset-cites')
    for path in (content, cites):
        if not os.path.isfile(path):
            raise click.UsageError(f"dataset file '{path}' does not exist")
    return content, cites


def manifest_dataset(config_file):
    """Dataset paths and binary flag recorded by a train manifest, if config_file is one."""
    with open(config_file, encoding='utf-8') as f:
        payload = json.load(f)
    dataset = payload.get('dataset') if isinstance(payload, dict) else None
    if not isinstance(dataset, dict):
        return None, None, None
    return dataset.get('content'), dataset.get('cites'), dataset.get('binary')


def open_dataset(dataset_name, dataset_content, dataset_cites, binary):
    """Load the dataset named by the dataset options and log its report."""
    content, cites = dataset_paths(dataset_name, dataset_content, dataset_cites)
    if binary is None:
        binary = current_app.config['BINARY_BOW']
    dataset = load_dataset(content, cites, binary=binary)
    current_app.logger.info('Loaded %s: %s', content, json.dumps(dataset.report.to_dict(), sort_keys=True))
    return dataset


# ===== TRAINING =====

def training_options(f):
    """Flags mirroring the RunConfig fields, plus --config and the cache."""
    options = [
        click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None,
                     help='JSON settings file or a previous run manifest.'),
        click.option('--variant', type=click.Choice(['gvnr', 'gvnr_t']), default=None),
        click.option('--mode', type=click.Choice(['u_only', 'sum', 'concat', 'text_only', 'full']), default=None,
                     help='Node representation written and evaluated.'),
        click.option('--dim', type=int, default=None),
        click.option('--k', 'k', type=int, default=None, help='Zero oversampling factor.'),
        click.option('--x-min', type=float, default=None),
        click.option('--epochs', type=int, default=None),
        click.option('--lr', 'learning_rate', type=float, default=None),
        click.option('--optimizer', type=click.Choice(['adagrad', 'sgd']), default=None),
        click.option('--batch-size', type=int, default=None),
        click.option('--zero-target', type=float, default=None),
        click.option('--walks', 'walks_per_node', type=int, default=None),
        click.option('--walk-length', type=int, default=None),
        click.option('--window', type=int, default=None),
        click.option('--window-decay/--no-window-decay', default=None),
        click.option('--seed', type=int, default=None),
        click.option('--threads', type=int, default=None),
        click.option('--cache-dir', type=click.Path(file_okay=False), default=None),
        click.option('--no-cache', is_flag=True, default=False, help='Recompute co-occurrences.'),
    ]

    @wraps(f)
    def decorated_function(*args, **kwargs):
        return f(*args, **kwargs)

    for option in reversed(options):
        decorated_function = option(decorated_function)
    return decorated_function


def pop_training_overrides(kwargs):
    """Remove training flags from kwargs; return them as uppercase overrides."""
    names = [key.lower() for key in RUN_CONFIG_KEYS]
    overrides = {name.upper(): kwargs.pop(name, None) for name in names}
    if kwargs.pop('no_cache', False):
        overrides['CACHE_DIR'] = ''
    else:
        overrides['CACHE_DIR'] = kwargs.pop('cache_dir', None)
    kwargs.pop('cache_dir', None)
    return overrides
