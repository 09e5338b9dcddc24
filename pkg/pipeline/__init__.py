"""
Pipeline module initialization.

This module ties loading, walks, co-occurrence caching and training
together, and provides the train and infer commands.
"""

from pipeline.services import (
    RunConfig,
    build_cooccurrences,
    fit_embeddings,
    load_model,
    resolve_mode,
    save_model,
)

__all__ = ['RunConfig', 'build_cooccurrences', 'fit_embeddings', 'load_model', 'resolve_mode', 'save_model']
