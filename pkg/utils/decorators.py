"""
Decorators for CLI commands.
"""

from functools import wraps

import click
from flask import current_app

from utils.errors import GvnrError


def handle_pipeline_errors(f):
    """Decorator turning package errors into a clean non-zero exit."""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except GvnrError as e:
            current_app.logger.error('%s failed: %s', f.__name__, e)
            raise click.ClickException(str(e)) from e
    return decorated_function
