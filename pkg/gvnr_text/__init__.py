"""
GVNR-t module initialization.

This module learns word embeddings whose document averages act as context
vectors, and embeds unseen documents from their text.
"""

from gvnr_text.services import (
    TEXT_MODES,
    GvnrTextModel,
    as_bow,
    bow_matrix,
    context_vectors,
    doc_context_vector,
    infer_document,
    text_representation,
    text_representations,
    train_gvnr_t,
)

__all__ = [
    'TEXT_MODES', 'GvnrTextModel', 'as_bow', 'bow_matrix', 'context_vectors', 'doc_context_vector',
    'infer_document', 'text_representation', 'text_representations', 'train_gvnr_t',
]
