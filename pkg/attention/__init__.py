"""
Attention module initialization.

This module computes scaled dot-product attention weights between the words
of two documents.
"""

from attention.services import (
    QUERY_STRATEGIES,
    AttentionInput,
    AttentionResult,
    MutualAttention,
    build_query,
    mutual_attention_weights,
    scaled_dot_product_attention,
)

__all__ = [
    'QUERY_STRATEGIES', 'AttentionInput', 'AttentionResult', 'MutualAttention',
    'build_query', 'mutual_attention_weights', 'scaled_dot_product_attention',
]
