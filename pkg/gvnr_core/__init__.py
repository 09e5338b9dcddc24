"""
GVNR module initialization.

This module fits node embeddings by factorizing log co-occurrence counts.
"""

from gvnr_core.sampling import sample_zero_coefficients, selected_coefficients, zero_probabilities
from gvnr_core.services import (
    REPRESENTATION_MODES,
    GvnrConfig,
    GvnrModel,
    node_representation,
    node_representations,
    objective_gradients,
    objective_value,
    score_pairs,
    train_gvnr,
)
from gvnr_core.training import TrainingHistory

__all__ = [
    'REPRESENTATION_MODES', 'GvnrConfig', 'GvnrModel', 'TrainingHistory',
    'node_representation', 'node_representations', 'objective_gradients',
    'objective_value', 'sample_zero_coefficients', 'score_pairs',
    'selected_coefficients', 'train_gvnr', 'zero_probabilities',
]
