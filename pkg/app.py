"""
GVNR - Main Flask Application

Node and document embeddings for text-attributed citation networks,
driven from the command line: python app.py <command> (or flask --app app).
"""

import logging

from flask import Flask
from flask.cli import FlaskGroup
from flask.logging import default_handler

from config import Config


def configure_logging(app):
    """Send library and command logs through Flask's handler."""
    root = logging.getLogger()
    if default_handler not in root.handlers:
        root.addHandler(default_handler)
    root.setLevel(app.config['LOG_LEVEL'])
    app.logger.setLevel(app.config['LOG_LEVEL'])


def create_app(config_class=Config):
    """Application factory function."""
    app = Flask(__name__)
    app.config.from_object(config_class)
    app.config.from_envvar('GVNR_SETTINGS', silent=True)

    configure_logging(app)

    # Register blueprints
    from corpus_graph.commands import corpus_graph_bp
    from pipeline.commands import pipeline_bp
    from evaluation.commands import evaluation_bp
    from attention.commands import attention_bp

    app.register_blueprint(corpus_graph_bp)
    app.register_blueprint(pipeline_bp)
    app.register_blueprint(evaluation_bp)
    app.register_blueprint(attention_bp)

    return app


cli = FlaskGroup(create_app=create_app, add_default_commands=False, help='GVNR embedding pipeline.')


if __name__ == '__main__':
    cli()
